//! Character degree sets: the bundled table for named simple groups and the
//! closed formulas for `PSL2(q)`, `Aut(PSL2(2^p))`, and direct products.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{self, PrimeSet};

const BUNDLED: &str = include_str!("../data/groups-v1.json");

/// Finite set of character degrees; always contains 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DegreeSet(BTreeSet<u64>);

impl DegreeSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if set.contains(&0) {
            return Err(Error::domain("character degrees must be positive"));
        }
        if !set.contains(&1) {
            return Err(Error::domain("a degree set must contain 1"));
        }
        Ok(DegreeSet(set))
    }

    /// `{1}`, the degree set of an abelian group.
    pub fn trivial() -> Self {
        DegreeSet(BTreeSet::from([1]))
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, d: u64) -> bool {
        self.0.contains(&d)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("degree sets contain 1")
    }

    /// `ρ`: primes dividing some degree.
    pub fn primes(&self) -> PrimeSet {
        self.iter()
            .filter(|&d| d > 1)
            .flat_map(|d| numtheory::prime_support(d).expect("degrees are positive"))
            .collect()
    }
}

impl<'de> Deserialize<'de> for DegreeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<u64>::deserialize(d)?;
        DegreeSet::new(values).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "ATLAS-data")]
    AtlasData,
    #[serde(rename = "formula")]
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    pub degrees: DegreeSet,
    pub source: Source,
}

impl GroupRecord {
    /// `π(|G|)` when the order is known, else the degree primes.
    pub fn order_primes(&self) -> PrimeSet {
        match self.order {
            Some(n) => numtheory::prime_support(n).expect("orders are positive"),
            None => self.degrees.primes(),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.name.trim().is_empty() {
            return Err("empty group name".into());
        }
        let Some(order) = self.order else {
            return Ok(());
        };
        if order == 0 {
            return Err(format!("{}: order must be positive", self.name));
        }
        if let Some(d) = self.degrees.iter().find(|d| order % d != 0) {
            return Err(format!("{}: degree {d} does not divide order {order}", self.name));
        }
        let order_primes = self.order_primes();
        if let Some(p) = self.degrees.primes().difference(&order_primes).next() {
            return Err(format!("{}: degree prime {p} missing from π(order)", self.name));
        }
        Ok(())
    }
}

/// Line numbers (1-based) where each top-level array element begins.
fn element_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let (mut line, mut depth) = (1, 0usize);
    let (mut in_string, mut escaped) = (false, false);
    for ch in text.chars() {
        if in_string {
            match ch {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                '\n' => line += 1,
                _ => {}
            }
            continue;
        }
        match ch {
            '\n' => line += 1,
            '"' => in_string = true,
            '[' | '{' => {
                if depth == 1 {
                    lines.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}

#[derive(Debug, Clone)]
pub struct Catalog {
    records: Vec<GroupRecord>,
}

impl Catalog {
    /// Parses and validates a catalog file. Every record is checked; errors
    /// name the line where the offending record starts.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(text).map_err(|e| Error::Catalog { line: e.line(), message: e.to_string() })?;
        let lines = element_lines(text);
        let mut seen = HashSet::new();
        let mut records = Vec::with_capacity(raw.len());
        for (i, value) in raw.into_iter().enumerate() {
            let line = lines.get(i).copied().unwrap_or(0);
            let record: GroupRecord =
                serde_json::from_value(value).map_err(|e| Error::Catalog { line, message: e.to_string() })?;
            record.validate().map_err(|message| Error::Catalog { line, message })?;
            if !seen.insert(record.name.clone()) {
                return Err(Error::Catalog { line, message: format!("duplicate name {}", record.name) });
            }
            records.push(record);
        }
        Ok(Catalog { records })
    }

    /// The catalog shipped with the crate, parsed once.
    pub fn bundled() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(BUNDLED).expect("bundled catalog is valid"))
    }

    pub fn records(&self) -> &[GroupRecord] {
        &self.records
    }

    pub fn names(&self) -> Vec<String> {
        self.records.iter().map(|r| r.name.clone()).collect()
    }

    pub fn lookup(&self, name: &str) -> Result<&GroupRecord> {
        self.records
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Lookup { name: name.to_string(), available: self.names() })
    }

    /// Like [`Catalog::lookup`], but also accepts `PSL2(q)` for any prime
    /// power `q ≥ 4`, synthesizing a formula-sourced record.
    pub fn resolve(&self, name: &str) -> Result<GroupRecord> {
        if let Ok(rec) = self.lookup(name) {
            return Ok(rec.clone());
        }
        let q = name.strip_prefix("PSL2(").and_then(|s| s.strip_suffix(')')).and_then(|s| s.parse::<u64>().ok());
        match q {
            Some(q) => Ok(GroupRecord {
                name: name.to_string(),
                order: psl2_order(q),
                degrees: cd_psl2(q)?,
                source: Source::Formula,
            }),
            None => Err(Error::Lookup { name: name.to_string(), available: self.names() }),
        }
    }

    /// Names of entries whose order has exactly `k` prime divisors.
    pub fn groups_with_pi_size(&self, k: usize) -> Vec<String> {
        self.records.iter().filter(|r| r.order_primes().len() == k).map(|r| r.name.clone()).collect()
    }
}

/// Looks `name` up in the bundled catalog.
pub fn lookup(name: &str) -> Result<GroupRecord> {
    Catalog::bundled().lookup(name).cloned()
}

/// Exceptional isomorphisms between bundled names; maps a name to the one
/// used in the standard lists of simple groups.
pub fn canonical_name(name: &str) -> &str {
    match name {
        "PSL3(2)" => "PSL2(7)",
        "PSL2(4)" | "PSL2(5)" => "A5",
        "PSL2(9)" => "A6",
        "PSL4(2)" => "A8",
        other => other,
    }
}

fn psl2_order(q: u64) -> Option<u64> {
    let g = if q.is_multiple_of(2) { 1 } else { 2 };
    q.checked_mul(q.checked_mul(q)?.checked_sub(1)?).map(|n| n / g)
}

fn checked_prime_power(q: u64) -> Result<(u64, u32)> {
    numtheory::prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))
}

/// `cd(PSL2(q))` for a prime power `q ≥ 4`.
///
/// Even `q`: `{1, q-1, q, q+1}`. Odd `q`: adds `(q+ε)/2` where `4 | q-ε`.
/// `PSL2(5) ≅ PSL2(4)` has no degree `q+1`, so `q = 5` gives `{1, 3, 4, 5}`.
pub fn cd_psl2(q: u64) -> Result<DegreeSet> {
    if q < 4 {
        return Err(Error::domain(format!("PSL2({q}) needs q ≥ 4")));
    }
    checked_prime_power(q)?;
    if q > 1 << 62 {
        return Err(Error::domain(format!("q = {q} too large")));
    }
    if q == 5 {
        return DegreeSet::new([1, 3, 4, 5]);
    }
    let mut degrees = vec![1, q - 1, q, q + 1];
    if q % 2 == 1 {
        let eps_plus = (q - 1).is_multiple_of(4);
        degrees.push(if eps_plus { q.div_ceil(2) } else { (q - 1) / 2 });
    }
    DegreeSet::new(degrees)
}

/// `cd(Aut(PSL2(2^p)))` = `{1, q-1, q, (q-1)p, (q+1)p}` with `q = 2^p`.
///
/// Requires an odd prime `p`: for `p = 2`, `Aut(PSL2(4)) ≅ S5` has degrees
/// `{1, 4, 5, 6}` and the formula does not apply.
pub fn cd_aut_psl2_even(p: u64) -> Result<DegreeSet> {
    if !numtheory::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::domain("p = 2: Aut(PSL2(4)) ≅ S5 is not covered by the formula"));
    }
    if p >= 62 {
        return Err(Error::domain(format!("2^{p} exceeds 2^62")));
    }
    let q = 1u64 << p;
    DegreeSet::new([1, q - 1, q, (q - 1) * p, (q + 1) * p])
}

/// `cd(S × T)`: all pairwise products.
pub fn cd_direct_product(a: &DegreeSet, b: &DegreeSet) -> DegreeSet {
    DegreeSet(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
}
