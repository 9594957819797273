//! The character graph `Δ` of a degree set and the graph predicates used on
//! it: components, diameter, cliques, complement bipartiteness, the
//! diameter-three partition, and a shape algebra of unions and joins of
//! complete graphs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::catalog::DegreeSet;
use crate::error::{Error, Result};
use crate::numtheory::PrimeSet;

mod partition;
mod psl2;
mod shape;

pub use partition::{diam3_partition, Diam3Partition};
pub use psl2::{graph_psl2, join_formula_graph, join_product_check};
pub use shape::{is_isomorphic, matches_shape, parse_shape, shape_of, shape_to_graph, ShapeExpr};

/// Largest vertex count accepted by the exhaustive clique search.
pub const MAX_CLIQUE_VERTICES: usize = 16;

/// Largest vertex count accepted by the brute-force isomorphism test.
pub const MAX_ISO_VERTICES: usize = 10;

/// Simple undirected graph on sorted `u64` labels (primes for graphs built
/// from degree sets, `0..n` for realized shapes).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterGraph {
    vertices: Vec<u64>,
    edges: BTreeSet<(u64, u64)>,
    nbrs: Vec<Vec<usize>>,
}

impl CharacterGraph {
    /// Builds a graph from explicit vertices and edges. Edge endpoints must
    /// be listed vertices; self-loops are rejected; orientation is ignored.
    pub fn new(vertices: impl IntoIterator<Item = u64>, edges: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let vertices: Vec<u64> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at {a}")));
            }
            for v in [a, b] {
                if vertices.binary_search(&v).is_err() {
                    return Err(Error::domain(format!("edge endpoint {v} is not a vertex")));
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self::from_parts(vertices, set))
    }

    fn from_parts(vertices: Vec<u64>, edges: BTreeSet<(u64, u64)>) -> Self {
        let mut nbrs = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            let i = vertices.binary_search(&a).expect("endpoint present");
            let j = vertices.binary_search(&b).expect("endpoint present");
            nbrs[i].push(j);
            nbrs[j].push(i);
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        CharacterGraph { vertices, edges, nbrs }
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), BTreeSet::new())
    }

    pub fn complete(vertices: impl IntoIterator<Item = u64>) -> Self {
        let vertices: Vec<u64> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut edges = BTreeSet::new();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                edges.insert((a, b));
            }
        }
        Self::from_parts(vertices, edges)
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> PrimeSet {
        self.vertices.iter().copied().collect()
    }

    /// Edges as `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: u64) -> Option<usize> {
        self.index_of(v).map(|i| self.nbrs[i].len())
    }

    fn index_of(&self, v: u64) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Neighbour indices of the vertex at index `i`.
    fn nbr_idx(&self, i: usize) -> &[usize] {
        &self.nbrs[i]
    }

    fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.nbrs[i].binary_search(&j).is_ok()
    }

    /// Union with a graph on disjoint labels, adding every cross edge.
    pub fn join(&self, other: &CharacterGraph) -> Result<CharacterGraph> {
        if let Some(v) = self.vertices.iter().find(|v| other.index_of(**v).is_some()) {
            return Err(Error::domain(format!("join operands share vertex {v}")));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges());
        for &a in &self.vertices {
            for &b in &other.vertices {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let vertices = self.vertices.iter().chain(&other.vertices).copied().collect::<BTreeSet<_>>();
        Ok(Self::from_parts(vertices.into_iter().collect(), edges))
    }

    /// Degree-preserving image under a vertex relabeling.
    pub fn relabel(&self, map: impl Fn(u64) -> u64) -> Result<CharacterGraph> {
        let vertices: Vec<u64> = self.vertices.iter().map(|&v| map(v)).collect();
        if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return Err(Error::domain("relabeling is not injective"));
        }
        CharacterGraph::new(vertices, self.edges().map(|(a, b)| (map(a), map(b))))
    }
}

/// `Δ(G)` from `cd(G)`: vertices are the primes dividing some degree, and
/// `p ~ q` when `pq` divides a single degree.
pub fn build(degrees: &DegreeSet) -> CharacterGraph {
    let supports: Vec<Vec<u64>> = degrees
        .iter()
        .filter(|&d| d > 1)
        .map(|d| crate::numtheory::prime_support(d).expect("positive degree").into_iter().collect())
        .collect();
    let vertices: BTreeSet<u64> = supports.iter().flatten().copied().collect();
    let mut edges = BTreeSet::new();
    for primes in &supports {
        for (i, &a) in primes.iter().enumerate() {
            for &b in &primes[i + 1..] {
                edges.insert((a, b));
            }
        }
    }
    CharacterGraph::from_parts(vertices.into_iter().collect(), edges)
}

/// `Γ[X]`, the subgraph induced on `x`.
pub fn induced(g: &CharacterGraph, x: &PrimeSet) -> Result<CharacterGraph> {
    if let Some(v) = x.iter().find(|v| g.index_of(**v).is_none()) {
        return Err(Error::domain(format!("{v} is not a vertex of the graph")));
    }
    let edges = g.edges().filter(|(a, b)| x.contains(a) && x.contains(b)).collect();
    Ok(CharacterGraph::from_parts(x.iter().copied().collect(), edges))
}

pub fn complement(g: &CharacterGraph) -> CharacterGraph {
    let mut edges = BTreeSet::new();
    for (i, &a) in g.vertices.iter().enumerate() {
        for (j, &b) in g.vertices.iter().enumerate().skip(i + 1) {
            if !g.adjacent_idx(i, j) {
                edges.insert((a, b));
            }
        }
    }
    CharacterGraph::from_parts(g.vertices.clone(), edges)
}

/// BFS 2-coloring. The least vertex of each component gets the first part.
pub fn bipartition(g: &CharacterGraph) -> Option<(PrimeSet, PrimeSet)> {
    let n = g.vertex_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            for &w in g.nbr_idx(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut parts = (PrimeSet::new(), PrimeSet::new());
    for (i, c) in color.into_iter().enumerate() {
        let part = if c == Some(true) { &mut parts.1 } else { &mut parts.0 };
        part.insert(g.vertices[i]);
    }
    Some(parts)
}

pub fn is_bipartite(g: &CharacterGraph) -> bool {
    bipartition(g).is_some()
}

fn component_indices(g: &CharacterGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.nbr_idx(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components, ordered by least vertex.
pub fn components(g: &CharacterGraph) -> Vec<PrimeSet> {
    component_indices(g).into_iter().map(|c| c.into_iter().map(|i| g.vertices[i]).collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diameter {
    Finite(usize),
    Disconnected,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Disconnected => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Disconnected => write!(f, "disconnected"),
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Diameter::Finite(d) => s.serialize_u64(*d as u64),
            Diameter::Disconnected => s.serialize_str("disconnected"),
        }
    }
}

impl<'de> Deserialize<'de> for Diameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "disconnected" => Ok(Diameter::Disconnected),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|v| Diameter::Finite(v as usize))
                .ok_or_else(|| serde::de::Error::custom("diameter must be a non-negative integer")),
            other => Err(serde::de::Error::custom(format!("invalid diameter {other}"))),
        }
    }
}

fn bfs_distances(g: &CharacterGraph, start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have a distance");
        for &w in g.nbr_idx(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Largest shortest-path distance; the empty graph has diameter 0.
pub fn diameter(g: &CharacterGraph) -> Diameter {
    let mut best = 0;
    for start in 0..g.vertex_count() {
        for d in bfs_distances(g, start) {
            match d {
                Some(d) => best = best.max(d),
                None => return Diameter::Disconnected,
            }
        }
    }
    Diameter::Finite(best)
}

/// Distance between two vertices, `None` when either is missing or they
/// lie in different components.
pub fn distance(g: &CharacterGraph, a: u64, b: u64) -> Option<usize> {
    let (i, j) = (g.index_of(a)?, g.index_of(b)?);
    bfs_distances(g, i)[j]
}

fn adjacency_masks(g: &CharacterGraph) -> Vec<u32> {
    (0..g.vertex_count()).map(|i| g.nbr_idx(i).iter().fold(0u32, |m, &j| m | 1 << j)).collect()
}

fn max_clique(adj: &[u32], clique: u32, candidates: u32, best: &mut u32) {
    if candidates == 0 {
        *best = (*best).max(clique);
        return;
    }
    if clique + candidates.count_ones() <= *best {
        return;
    }
    let v = candidates.trailing_zeros();
    max_clique(adj, clique + 1, candidates & adj[v as usize], best);
    max_clique(adj, clique, candidates & !(1 << v), best);
}

/// Size of a largest clique, by exhaustive branch-and-bound over vertex
/// subsets. Capped at [`MAX_CLIQUE_VERTICES`] vertices.
pub fn clique_number(g: &CharacterGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > MAX_CLIQUE_VERTICES {
        return Err(Error::capacity(format!("clique search on {n} vertices exceeds the cap of {MAX_CLIQUE_VERTICES}")));
    }
    let adj = adjacency_masks(g);
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut best = 0;
    max_clique(&adj, 0, all, &mut best);
    Ok(best as usize)
}

/// Whether `g` contains no `K_n`.
pub fn is_kn_free(g: &CharacterGraph, n: usize) -> Result<bool> {
    Ok(clique_number(g)? < n)
}

/// Whether `g` is a simple path on exactly five vertices.
pub fn is_path5(g: &CharacterGraph) -> bool {
    if g.vertex_count() != 5 || g.edge_count() != 4 {
        return false;
    }
    let degrees: Vec<usize> = (0..5).map(|i| g.nbr_idx(i).len()).collect();
    let ends = degrees.iter().filter(|&&d| d == 1).count();
    let middles = degrees.iter().filter(|&&d| d == 2).count();
    ends == 2 && middles == 3 && diameter(g) == Diameter::Finite(4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<u64>,
    pub edges: Vec<[u64; 2]>,
}

impl From<&CharacterGraph> for GraphJson {
    fn from(g: &CharacterGraph) -> Self {
        GraphJson { vertices: g.vertices.clone(), edges: g.edges().map(|(a, b)| [a, b]).collect() }
    }
}

impl TryFrom<GraphJson> for CharacterGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        CharacterGraph::new(j.vertices, j.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

/// `{"vertices":[...],"edges":[[p,q],...]}`, compact, sorted.
pub fn to_json(g: &CharacterGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("plain data serializes")
}

/// Graphviz DOT: one line per vertex, then one `p -- q;` line per edge, sorted.
pub fn to_dot(g: &CharacterGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        out.push_str(&format!("  {v};\n"));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    out
}
