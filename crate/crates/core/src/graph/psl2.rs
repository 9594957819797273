use super::{build, induced, CharacterGraph};
use crate::catalog::{cd_direct_product, DegreeSet};
use crate::error::{Error, Result};
use crate::numtheory::{self, PrimeSet};

/// `Δ(PSL2(q))` assembled from its known structure rather than from a
/// degree set.
///
/// * even `q`: three complete components `{2}`, `π(q-1)`, `π(q+1)`;
/// * odd `q > 5`: the isolated vertex `{p}` plus `π(q²-1)`, which is
///   complete when `q-1` or `q+1` is a power of two, and otherwise splits
///   as `{2} ∪ M ∪ P` with `M`, `P` complete, both joined to 2, and no
///   `M`-`P` edges;
/// * `q = 5`: `PSL2(5) ≅ PSL2(4)`, three isolated vertices.
pub fn graph_psl2(q: u64) -> Result<CharacterGraph> {
    if q < 4 {
        return Err(Error::domain(format!("PSL2({q}) needs q ≥ 4")));
    }
    let (p, _) = numtheory::prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    if q > 1 << 62 {
        return Err(Error::domain(format!("q = {q} too large")));
    }
    let minus = numtheory::prime_support(q - 1)?;
    let plus = numtheory::prime_support(q + 1)?;
    if p == 2 {
        return Ok(disjoint_cliques([PrimeSet::from([2]), minus, plus]));
    }
    if q == 5 {
        return Ok(disjoint_cliques([PrimeSet::from([2]), PrimeSet::from([3]), PrimeSet::from([5])]));
    }
    let isolated = CharacterGraph::complete([p]);
    let side = if (q - 1).is_power_of_two() || (q + 1).is_power_of_two() {
        CharacterGraph::complete(minus.union(&plus).copied())
    } else {
        let m: Vec<u64> = minus.iter().copied().filter(|&t| t != 2).collect();
        let pp: Vec<u64> = plus.iter().copied().filter(|&t| t != 2).collect();
        let mp = disjoint_cliques([m.into_iter().collect(), pp.into_iter().collect()]);
        mp.join(&CharacterGraph::complete([2]))?
    };
    Ok(disjoint_cliques_with(&isolated, &side))
}

fn disjoint_cliques<const N: usize>(parts: [PrimeSet; N]) -> CharacterGraph {
    parts
        .into_iter()
        .map(CharacterGraph::complete)
        .reduce(|a, b| disjoint_cliques_with(&a, &b))
        .unwrap_or_else(CharacterGraph::empty)
}

fn disjoint_cliques_with(a: &CharacterGraph, b: &CharacterGraph) -> CharacterGraph {
    CharacterGraph::new(a.vertices().iter().chain(b.vertices()).copied(), a.edges().chain(b.edges()))
        .expect("operands have disjoint vertex sets")
}

/// Right-hand side of `Δ(S×T) ≅ K_F ∗ Δ(S)[ρ(S)-F] ∗ Δ(T)[ρ(T)-F]`, with
/// `F = ρ(S) ∩ ρ(T)`, as a labeled graph.
pub fn join_formula_graph(gs: &CharacterGraph, gt: &CharacterGraph) -> CharacterGraph {
    let (rs, rt) = (gs.vertex_set(), gt.vertex_set());
    let shared: PrimeSet = rs.intersection(&rt).copied().collect();
    let only = |g: &CharacterGraph, r: &PrimeSet| {
        induced(g, &r.difference(&shared).copied().collect()).expect("subset of the vertex set")
    };
    CharacterGraph::complete(shared.iter().copied())
        .join(&only(gs, &rs))
        .and_then(|g| g.join(&only(gt, &rt)))
        .expect("the three parts are disjoint")
}

/// Compares `Δ` of the product degree set with the join formula.
pub fn join_product_check(s: &DegreeSet, t: &DegreeSet) -> bool {
    let lhs = build(&cd_direct_product(s, t));
    lhs == join_formula_graph(&build(s), &build(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cd_psl2, lookup};
    use crate::graph::{components, matches_shape, parse_shape};

    fn set(v: &[u64]) -> PrimeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn even_q_components() {
        let g = graph_psl2(32).unwrap();
        assert_eq!(components(&g), vec![set(&[2]), set(&[3, 11]), set(&[31])]);
        assert!(matches_shape(&g, &parse_shape("K1∪K1∪K2").unwrap()).unwrap());
    }

    #[test]
    fn odd_q_clauses() {
        let g = graph_psl2(17).unwrap();
        assert_eq!(components(&g), vec![set(&[2, 3]), set(&[17])]);
        assert_eq!(g.edge_count(), 1);

        let g = graph_psl2(11).unwrap();
        assert_eq!(components(&g), vec![set(&[2, 3, 5]), set(&[11])]);
        assert!(g.has_edge(2, 5) && g.has_edge(2, 3) && !g.has_edge(3, 5));
    }

    #[test]
    fn shape_examples() {
        for (q, shape) in [(11, "K1∪((K1∪K1)∗K1)"), (127, "K1∪K3"), (29, "K1∪((K1∪K2)∗K1)")] {
            let built = build(&cd_psl2(q).unwrap());
            assert!(matches_shape(&built, &parse_shape(shape).unwrap()).unwrap(), "q = {q}");
            assert_eq!(built, graph_psl2(q).unwrap());
        }
    }

    #[test]
    fn invalid_q() {
        assert!(graph_psl2(3).is_err());
        assert!(graph_psl2(12).is_err());
    }

    #[test]
    fn small_q_agree_with_degree_sets() {
        for (q, _, _) in numtheory::prime_powers_in(4, 2000) {
            assert_eq!(build(&cd_psl2(q).unwrap()), graph_psl2(q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn join_examples() {
        let a5 = lookup("A5").unwrap().degrees;
        let l28 = lookup("PSL2(8)").unwrap().degrees;
        assert!(join_product_check(&a5, &a5));
        assert!(join_product_check(&a5, &l28));
        assert!(join_product_check(&DegreeSet::trivial(), &l28));
        assert!(join_product_check(&l28, &DegreeSet::trivial()));
        let rhs = join_formula_graph(&build(&a5), &build(&l28));
        // F = {2, 3}; 5 and 7 are joined to everything
        assert_eq!(rhs.vertices(), &[2, 3, 5, 7]);
        assert_eq!(rhs.edge_count(), 6);
    }
}
