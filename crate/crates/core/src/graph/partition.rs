use serde::{Deserialize, Serialize};

use super::{diameter, CharacterGraph, Diameter};
use crate::error::{Error, Result};
use crate::numtheory::PrimeSet;

/// Four-block partition `ρ1 ∪ ρ2 ∪ ρ3 ∪ ρ4` of a diameter-three graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diam3Partition {
    pub rho1: PrimeSet,
    pub rho2: PrimeSet,
    pub rho3: PrimeSet,
    pub rho4: PrimeSet,
}

impl Diam3Partition {
    fn blocks(&self) -> [&PrimeSet; 4] {
        [&self.rho1, &self.rho2, &self.rho3, &self.rho4]
    }

    /// Checks every defining constraint against `g`; `Err` names the first
    /// one that fails.
    pub fn validate(&self, g: &CharacterGraph) -> std::result::Result<(), String> {
        let all: Vec<u64> = self.blocks().into_iter().flatten().copied().collect();
        let union: PrimeSet = all.iter().copied().collect();
        if union.len() != all.len() {
            return Err("blocks overlap".into());
        }
        if union != g.vertex_set() {
            return Err("blocks do not cover the vertex set".into());
        }
        let none_between = |xs: &PrimeSet, ys: &[&PrimeSet]| {
            xs.iter().all(|&x| ys.iter().all(|y| y.iter().all(|&v| !g.has_edge(x, v))))
        };
        if !none_between(&self.rho1, &[&self.rho3, &self.rho4]) {
            return Err("edge between ρ1 and ρ3 ∪ ρ4".into());
        }
        if !none_between(&self.rho4, &[&self.rho1, &self.rho2]) {
            return Err("edge between ρ4 and ρ1 ∪ ρ2".into());
        }
        let covered = |xs: &PrimeSet, ys: &PrimeSet| xs.iter().all(|&x| ys.iter().any(|&y| g.has_edge(x, y)));
        if !covered(&self.rho2, &self.rho3) || !covered(&self.rho3, &self.rho2) {
            return Err("ρ2 and ρ3 are not mutually dominating".into());
        }
        let complete = |a: &PrimeSet, b: &PrimeSet| {
            let side: Vec<u64> = a.iter().chain(b).copied().collect();
            side.iter().enumerate().all(|(i, &x)| side[i + 1..].iter().all(|&y| g.has_edge(x, y)))
        };
        if !complete(&self.rho1, &self.rho2) || !complete(&self.rho3, &self.rho4) {
            return Err("ρ1 ∪ ρ2 or ρ3 ∪ ρ4 is not complete".into());
        }
        Ok(())
    }
}

/// Whether vertices in blocks `a` and `b` (labels 1..=4) may be placed
/// given their adjacency.
fn pair_allowed(a: u8, b: u8, adjacent: bool) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    let same_side = hi <= 2 || lo >= 3;
    if same_side {
        return adjacent;
    }
    let forbidden = (lo == 1 && hi >= 3) || (hi == 4 && lo <= 2);
    !(forbidden && adjacent)
}

fn search(g: &CharacterGraph, assign: &mut Vec<u8>) -> bool {
    let i = assign.len();
    if i == g.vertex_count() {
        return dominating(g, assign);
    }
    for block in 1..=4u8 {
        if (0..i).all(|k| pair_allowed(assign[k], block, g.adjacent_idx(k, i))) {
            assign.push(block);
            if search(g, assign) {
                return true;
            }
            assign.pop();
        }
    }
    false
}

fn dominating(g: &CharacterGraph, assign: &[u8]) -> bool {
    (0..assign.len()).all(|i| match assign[i] {
        2 => g.nbr_idx(i).iter().any(|&j| assign[j] == 3),
        3 => g.nbr_idx(i).iter().any(|&j| assign[j] == 2),
        _ => true,
    })
}

/// The lexicographically least valid partition, comparing block labels
/// `1 < 2 < 3 < 4` vertex by vertex in sorted order, or `None` if there
/// is none. `g` must be connected with diameter exactly 3.
pub fn diam3_partition(g: &CharacterGraph) -> Result<Option<Diam3Partition>> {
    let d = diameter(g);
    if d != Diameter::Finite(3) {
        return Err(Error::domain(format!("diameter-3 partition needs a connected graph of diameter 3, got {d}")));
    }
    let mut assign = Vec::with_capacity(g.vertex_count());
    if !search(g, &mut assign) {
        return Ok(None);
    }
    let mut p =
        Diam3Partition { rho1: PrimeSet::new(), rho2: PrimeSet::new(), rho3: PrimeSet::new(), rho4: PrimeSet::new() };
    for (&v, &block) in g.vertices().iter().zip(&assign) {
        match block {
            1 => &mut p.rho1,
            2 => &mut p.rho2,
            3 => &mut p.rho3,
            _ => &mut p.rho4,
        }
        .insert(v);
    }
    Ok(Some(p))
}
