//! Batch runs over the `PSL2(q)` family and over the bundled catalog.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{canonical_name, Catalog, GroupRecord};
use crate::error::{Error, Result};
use crate::graph::{
    self, bipartition, build, clique_number, complement, components, diam3_partition, diameter, graph_psl2,
    matches_shape, shape_of, CharacterGraph, Diam3Partition, Diameter, ShapeExpr,
};
use crate::numtheory;

/// Default upper bound on `q` for family scans.
pub const DEFAULT_MAX_Q: u64 = 10_000_000;

/// Largest shape [`find_shape_instances`] accepts, and largest graph whose
/// shape expression is stored in a [`ScanRecord`].
pub const MAX_SCAN_SHAPE_VERTICES: usize = 7;

/// Shape of a scanned graph: the canonical expression when it is small
/// enough, otherwise its sorted component sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanShape {
    Expr(String),
    Components(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub q: u64,
    /// `q = u^alpha`.
    pub u: u64,
    pub alpha: u32,
    pub shape: ScanShape,
    pub k4_free: bool,
    pub clique_number: usize,
    pub rho_size: usize,
    pub component_sizes: Vec<usize>,
    pub pi_minus: usize,
    pub pi_plus: usize,
}

impl ScanRecord {
    /// The arithmetic condition `|π(q-1)| ≤ 3` and `|π(q+1)| ≤ 3`.
    pub fn arithmetic_k4_free(&self) -> bool {
        self.pi_minus <= 3 && self.pi_plus <= 3
    }
}

fn scan_one(q: u64, u: u64, alpha: u32) -> Result<ScanRecord> {
    let g = graph_psl2(q)?;
    let mut component_sizes: Vec<usize> = components(&g).iter().map(|c| c.len()).collect();
    component_sizes.sort_unstable();
    let shape = match shape_of(&g) {
        Some(s) if g.vertex_count() <= MAX_SCAN_SHAPE_VERTICES => ScanShape::Expr(s.to_string()),
        _ => ScanShape::Components(component_sizes.clone()),
    };
    let clique = clique_number(&g)?;
    Ok(ScanRecord {
        q,
        u,
        alpha,
        shape,
        k4_free: clique <= 3,
        clique_number: clique,
        rho_size: g.vertex_count(),
        component_sizes,
        pi_minus: numtheory::prime_support(q - 1)?.len(),
        pi_plus: numtheory::prime_support(q + 1)?.len(),
    })
}

fn check_range(q_min: u64, q_max: u64, cap: u64) -> Result<()> {
    if q_min < 4 || q_min > q_max {
        return Err(Error::domain(format!("scan range [{q_min}, {q_max}] needs 4 ≤ q_min ≤ q_max")));
    }
    if q_max > cap {
        return Err(Error::capacity(format!("q_max = {q_max} exceeds the cap {cap}")));
    }
    Ok(())
}

/// One record per prime power `q` in `[q_min, q_max]`, sorted by `q`.
pub fn scan_psl2(q_min: u64, q_max: u64, cap: u64) -> Result<Vec<ScanRecord>> {
    check_range(q_min, q_max, cap)?;
    numtheory::prime_powers_in(q_min, q_max).into_par_iter().map(|(q, u, alpha)| scan_one(q, u, alpha)).collect()
}

/// Outcome of the family-wide checks over a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub q_min: Option<u64>,
    pub q_max: Option<u64>,
    pub records: usize,
    pub k4_free: usize,
    /// `q` where the clique-based flag and the arithmetic condition differ.
    pub k4_disagreements: Vec<u64>,
    /// `q` whose graph is connected.
    pub connected: Vec<u64>,
    pub passed: bool,
}

pub fn scan_summary(records: &[ScanRecord]) -> ScanSummary {
    let k4_disagreements: Vec<u64> =
        records.iter().filter(|r| r.k4_free != r.arithmetic_k4_free()).map(|r| r.q).collect();
    let connected: Vec<u64> = records.iter().filter(|r| r.component_sizes.len() < 2).map(|r| r.q).collect();
    ScanSummary {
        q_min: records.first().map(|r| r.q),
        q_max: records.last().map(|r| r.q),
        records: records.len(),
        k4_free: records.iter().filter(|r| r.k4_free).count(),
        passed: k4_disagreements.is_empty() && connected.is_empty(),
        k4_disagreements,
        connected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    #[default]
    Any,
    Even,
    Odd,
}

impl Parity {
    fn admits(self, q: u64) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => q.is_multiple_of(2),
            Parity::Odd => q % 2 == 1,
        }
    }
}

/// Every prime power `4 ≤ q ≤ q_max` of the given parity whose
/// `Δ(PSL2(q))` is isomorphic to `shape`, sorted.
pub fn find_shape_instances(shape: &ShapeExpr, q_max: u64, parity: Parity, cap: u64) -> Result<Vec<u64>> {
    let n = shape.vertex_count();
    if n > MAX_SCAN_SHAPE_VERTICES {
        return Err(Error::domain(format!("shape has {n} vertices; at most {MAX_SCAN_SHAPE_VERTICES} allowed")));
    }
    if q_max < 4 {
        return Ok(Vec::new());
    }
    check_range(4, q_max, cap)?;
    let target = graph::shape_to_graph(shape)?;
    let found: Result<Vec<Option<u64>>> = numtheory::prime_powers_in(4, q_max)
        .into_par_iter()
        .filter(|&(q, _, _)| parity.admits(q))
        .map(|(q, _, _)| {
            let g = graph_psl2(q)?;
            if g.vertex_count() != n || g.edge_count() != target.edge_count() {
                return Ok(None);
            }
            Ok(matches_shape(&g, shape)?.then_some(q))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// Whether a simple group, by catalog name, appears in the classification
/// of simple groups with `K4`-free character graphs.
pub fn on_k4_free_list(name: &str) -> bool {
    let name = canonical_name(name);
    if matches!(name, "M11" | "J1" | "A5" | "A6" | "A8" | "PSU4(2)" | "Sz(8)" | "Sz(32)") {
        return true;
    }
    let param =
        |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.strip_suffix(')')).and_then(|s| s.parse::<u64>().ok());
    if let Some(q) = param("PSL2(") {
        return q >= 4
            && numtheory::prime_power(q).is_some()
            && [q - 1, q + 1].iter().all(|&n| numtheory::prime_support(n).is_ok_and(|s| s.len() <= 3));
    }
    if let Some(q) = param("PSL3(") {
        return matches!(q, 3 | 4 | 8);
    }
    if let Some(q) = param("PSU3(") {
        return matches!(q, 3 | 4 | 9);
    }
    false
}

/// The simple groups with exactly three prime divisors, by catalog name.
pub const PI_SIZE_THREE: [&str; 8] = ["A5", "A6", "PSL2(7)", "PSL2(8)", "PSL2(17)", "PSL3(3)", "PSU3(3)", "PSU4(2)"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub name: String,
    pub vertices: Vec<u64>,
    pub edge_count: usize,
    pub clique_number: usize,
    pub k4_free: bool,
    pub on_k4_free_list: bool,
    pub diameter: Diameter,
    pub component_count: usize,
    pub path5: bool,
    /// Only computed for diameter three.
    pub complement_bipartite: Option<bool>,
    pub partition: Option<Diam3Partition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    /// Offending groups and the property each one fails.
    pub failures: Vec<String>,
}

impl Assertion {
    fn new(name: &str, failures: Vec<String>) -> Self {
        Assertion { name: name.to_string(), passed: failures.is_empty(), failures }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub rows: Vec<CatalogRow>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

pub fn analyze_record(rec: &GroupRecord) -> Result<CatalogRow> {
    let g = build(&rec.degrees);
    let clique = clique_number(&g)?;
    let d = diameter(&g);
    let (complement_bipartite, partition) = if d == Diameter::Finite(3) {
        (Some(bipartition(&complement(&g)).is_some()), diam3_partition(&g)?)
    } else {
        (None, None)
    };
    Ok(CatalogRow {
        name: rec.name.clone(),
        vertices: g.vertices().to_vec(),
        edge_count: g.edge_count(),
        clique_number: clique,
        k4_free: clique <= 3,
        on_k4_free_list: on_k4_free_list(&rec.name),
        diameter: d,
        component_count: components(&g).len(),
        path5: graph::is_path5(&g),
        complement_bipartite,
        partition,
    })
}

/// Analyzes every catalog entry and checks the classification statements
/// that apply to the bundled groups.
pub fn verify_catalog(catalog: &Catalog) -> Result<CatalogReport> {
    let rows: Vec<CatalogRow> = catalog.records().iter().map(analyze_record).collect::<Result<_>>()?;
    let mut assertions = Vec::new();

    assertions.push(Assertion::new(
        "k4_free_iff_listed",
        rows.iter()
            .filter(|r| r.k4_free != r.on_k4_free_list)
            .map(|r| format!("{}: k4_free = {}, listed = {}", r.name, r.k4_free, r.on_k4_free_list))
            .collect(),
    ));

    let diam3: Vec<&CatalogRow> =
        rows.iter().filter(|r| r.k4_free && r.component_count == 1 && r.diameter == Diameter::Finite(3)).collect();
    let mut unique = Vec::new();
    if !diam3.iter().any(|r| r.name == "J1") {
        unique.push("J1: not a K4-free connected diameter-3 graph".to_string());
    }
    unique.extend(
        diam3.iter().filter(|r| r.name != "J1").map(|r| format!("{}: also K4-free, connected, diameter 3", r.name)),
    );
    assertions.push(Assertion::new("j1_unique_k4_free_diameter_3", unique));

    assertions.push(Assertion::new(
        "connected_diameter_at_most_3",
        rows.iter()
            .filter(|r| matches!(r.diameter, Diameter::Finite(d) if d > 3))
            .map(|r| format!("{}: diameter {}", r.name, r.diameter))
            .collect(),
    ));

    assertions.push(Assertion::new(
        "no_path5",
        rows.iter().filter(|r| r.path5).map(|r| format!("{}: graph is a path on five vertices", r.name)).collect(),
    ));

    let mut diam3_fail = Vec::new();
    for r in rows.iter().filter(|r| r.diameter == Diameter::Finite(3)) {
        if r.complement_bipartite != Some(true) {
            diam3_fail.push(format!("{}: complement not bipartite", r.name));
        }
        if r.partition.is_none() {
            diam3_fail.push(format!("{}: no four-block partition", r.name));
        }
    }
    assertions.push(Assertion::new("diameter_3_structure", diam3_fail));

    assertions.push(Assertion::new(
        "pi_size_3_listed",
        catalog
            .groups_with_pi_size(3)
            .into_iter()
            .filter(|n| !PI_SIZE_THREE.contains(&canonical_name(n)))
            .map(|n| format!("{n}: |π| = 3 but not in the list"))
            .collect(),
    ));

    let passed = assertions.iter().all(|a| a.passed);
    Ok(CatalogReport { rows, assertions, passed })
}

/// Graph of a catalog group, by name (accepts `PSL2(q)` beyond the catalog).
pub fn group_graph(name: &str) -> Result<(GroupRecord, CharacterGraph)> {
    let rec = Catalog::bundled().resolve(name)?;
    let g = build(&rec.degrees);
    Ok((rec, g))
}

/// Serializes records as JSON lines, one per record.
pub fn to_json_lines<T: Serialize>(records: &[T]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}
