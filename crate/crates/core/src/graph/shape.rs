//! Expressions over complete graphs `K_n` under disjoint union `∪` and
//! join `∗`, with a parser, a renderer, realization on anonymous vertices,
//! brute-force matching, and canonical decomposition of cographs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{component_indices, CharacterGraph, MAX_ISO_VERTICES};
use crate::error::{Error, Result};

/// Largest vertex count [`shape_to_graph`] will realize.
pub const MAX_SHAPE_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ShapeExpr {
    Complete(usize),
    Union(Box<ShapeExpr>, Box<ShapeExpr>),
    Join(Box<ShapeExpr>, Box<ShapeExpr>),
}

impl ShapeExpr {
    pub fn union(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn join(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            ShapeExpr::Complete(n) => *n,
            ShapeExpr::Union(a, b) | ShapeExpr::Join(a, b) => a.vertex_count() + b.vertex_count(),
        }
    }
}

impl fmt::Display for ShapeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeExpr::Complete(n) => write!(f, "K{n}"),
            ShapeExpr::Union(a, b) => {
                match **a {
                    ShapeExpr::Join(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, "∪")?;
                match **b {
                    ShapeExpr::Complete(_) => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
            ShapeExpr::Join(a, b) => {
                match **a {
                    ShapeExpr::Union(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, "∗")?;
                match **b {
                    ShapeExpr::Complete(_) => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    // union := join (('∪' | 'U') join)*
    fn union(&mut self) -> Result<ShapeExpr> {
        let mut lhs = self.join()?;
        while matches!(self.peek(), Some('∪' | 'U')) {
            self.pos += 1;
            lhs = ShapeExpr::union(lhs, self.join()?);
        }
        Ok(lhs)
    }

    // join := atom (('∗' | '*') atom)*
    fn join(&mut self) -> Result<ShapeExpr> {
        let mut lhs = self.atom()?;
        while matches!(self.peek(), Some('∗' | '*')) {
            self.pos += 1;
            lhs = ShapeExpr::join(lhs, self.atom()?);
        }
        Ok(lhs)
    }

    // atom := 'K' digits | '(' union ')'
    fn atom(&mut self) -> Result<ShapeExpr> {
        match self.peek() {
            Some('K') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected a vertex count after 'K'"));
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: usize = digits.parse().map_err(|_| Error::Syntax {
                    position: start,
                    message: format!("vertex count {digits} is too large"),
                })?;
                if n == 0 {
                    return Err(Error::Syntax { position: start, message: "K0 is not allowed".into() });
                }
                Ok(ShapeExpr::Complete(n))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}; expected 'K' or '('"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses `K3`, `K1∪K3`, `K1 U ((K1 U K2) * K1)`, and so on. Join binds
/// tighter than union; both associate to the left.
pub fn parse_shape(text: &str) -> Result<ShapeExpr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let expr = p.union()?;
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected trailing {c:?}")));
    }
    Ok(expr)
}

impl FromStr for ShapeExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_shape(s)
    }
}

fn realize(s: &ShapeExpr, next: &mut u64, edges: &mut Vec<(u64, u64)>) -> Vec<u64> {
    match s {
        ShapeExpr::Complete(n) => {
            let vs: Vec<u64> = (*next..*next + *n as u64).collect();
            *next += *n as u64;
            for (i, &a) in vs.iter().enumerate() {
                edges.extend(vs[i + 1..].iter().map(|&b| (a, b)));
            }
            vs
        }
        ShapeExpr::Union(a, b) => {
            let mut vs = realize(a, next, edges);
            vs.extend(realize(b, next, edges));
            vs
        }
        ShapeExpr::Join(a, b) => {
            let left = realize(a, next, edges);
            let right = realize(b, next, edges);
            for &x in &left {
                edges.extend(right.iter().map(|&y| (x, y)));
            }
            [left, right].concat()
        }
    }
}

/// Realizes a shape on vertices `0..n`, numbered left to right.
pub fn shape_to_graph(s: &ShapeExpr) -> Result<CharacterGraph> {
    let n = s.vertex_count();
    if n > MAX_SHAPE_VERTICES {
        return Err(Error::capacity(format!("shape has {n} vertices; cap is {MAX_SHAPE_VERTICES}")));
    }
    let mut edges = Vec::new();
    let mut next = 0;
    realize(s, &mut next, &mut edges);
    CharacterGraph::new(0..n as u64, edges)
}

fn sorted_degrees(g: &CharacterGraph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.vertex_count()).map(|i| g.nbr_idx(i).len()).collect();
    d.sort_unstable();
    d
}

fn extend_map(a: &CharacterGraph, b: &CharacterGraph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = map.len();
    if i == a.vertex_count() {
        return true;
    }
    let deg = a.nbr_idx(i).len();
    for j in 0..b.vertex_count() {
        if used[j] || b.nbr_idx(j).len() != deg {
            continue;
        }
        if (0..i).all(|k| a.adjacent_idx(k, i) == b.adjacent_idx(map[k], j)) {
            used[j] = true;
            map.push(j);
            if extend_map(a, b, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
    }
    false
}

/// Graph isomorphism by exhaustive search over vertex bijections (with
/// degree pruning). Capped at [`MAX_ISO_VERTICES`] vertices.
pub fn is_isomorphic(a: &CharacterGraph, b: &CharacterGraph) -> Result<bool> {
    let n = a.vertex_count().max(b.vertex_count());
    if n > MAX_ISO_VERTICES {
        return Err(Error::capacity(format!("isomorphism test on {n} vertices; cap is {MAX_ISO_VERTICES}")));
    }
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || sorted_degrees(a) != sorted_degrees(b)
    {
        return Ok(false);
    }
    let mut used = vec![false; b.vertex_count()];
    Ok(extend_map(a, b, &mut Vec::with_capacity(n), &mut used))
}

/// Whether `g` is isomorphic to the realization of `s`.
pub fn matches_shape(g: &CharacterGraph, s: &ShapeExpr) -> Result<bool> {
    let n = s.vertex_count().max(g.vertex_count());
    if n > MAX_ISO_VERTICES {
        return Err(Error::capacity(format!("shape match on {n} vertices; cap is {MAX_ISO_VERTICES}")));
    }
    is_isomorphic(g, &shape_to_graph(s)?)
}

fn canonical_cmp(a: &ShapeExpr, b: &ShapeExpr) -> Ordering {
    a.vertex_count().cmp(&b.vertex_count()).then_with(|| a.to_string().cmp(&b.to_string()))
}

fn fold(parts: Vec<ShapeExpr>, op: fn(ShapeExpr, ShapeExpr) -> ShapeExpr) -> ShapeExpr {
    parts.into_iter().reduce(op).expect("at least one part")
}

fn decompose(g: &CharacterGraph, verts: &[usize]) -> Option<ShapeExpr> {
    if verts.len() == 1 {
        return Some(ShapeExpr::Complete(1));
    }
    let sub = subgraph(g, verts);
    let comps = component_indices(&sub);
    if comps.len() > 1 {
        let mut parts = comps
            .iter()
            .map(|c| decompose(g, &c.iter().map(|&i| verts[i]).collect::<Vec<_>>()))
            .collect::<Option<Vec<_>>>()?;
        parts.sort_by(canonical_cmp);
        return Some(fold(parts, ShapeExpr::union));
    }
    let co_comps = component_indices(&super::complement(&sub));
    if co_comps.len() == 1 {
        // connected with connected complement: contains an induced P4
        return None;
    }
    let mut clique = 0;
    let mut rest = Vec::new();
    for c in &co_comps {
        match decompose(g, &c.iter().map(|&i| verts[i]).collect::<Vec<_>>())? {
            ShapeExpr::Complete(n) => clique += n,
            other => rest.push(other),
        }
    }
    rest.sort_by(canonical_cmp);
    if clique > 0 {
        rest.push(ShapeExpr::Complete(clique));
    }
    Some(fold(rest, ShapeExpr::join))
}

fn subgraph(g: &CharacterGraph, verts: &[usize]) -> CharacterGraph {
    let labels: Vec<u64> = verts.iter().map(|&i| g.vertices[i]).collect();
    let set = labels.iter().copied().collect();
    super::induced(g, &set).expect("labels are vertices")
}

/// Canonical union/join expression for a cograph, or `None` when `g` has
/// an induced four-vertex path (or no vertices).
///
/// Union operands are ordered by size, then rendering; within a join the
/// non-complete operands come first and the complete ones are merged into
/// a single trailing `K_n`. This reproduces forms like `K1∪((K1∪K2)∗K1)`.
pub fn shape_of(g: &CharacterGraph) -> Option<ShapeExpr> {
    if g.vertex_count() == 0 {
        return None;
    }
    decompose(g, &(0..g.vertex_count()).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{arb_graph, path};
    use proptest::prelude::*;

    #[test]
    fn parses_aliases_and_precedence() {
        let a = parse_shape("K1∪((K1∪K1)∗K1)").unwrap();
        let b = parse_shape("K1 U ((K1 U K1) * K1)").unwrap();
        assert_eq!(a, b);
        // join binds tighter: K1 ∪ (K2 ∗ K3)
        let c = parse_shape("K1∪K2∗K3").unwrap();
        assert_eq!(
            c,
            ShapeExpr::union(ShapeExpr::Complete(1), ShapeExpr::join(ShapeExpr::Complete(2), ShapeExpr::Complete(3)))
        );
        assert_eq!(c.vertex_count(), 6);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let pos = |s: &str| match parse_shape(s) {
            Err(Error::Syntax { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("K"), 1);
        assert_eq!(pos("K0"), 1);
        assert_eq!(pos("K1∪"), 3);
        assert_eq!(pos("(K1"), 3);
        assert_eq!(pos("K1 K2"), 3);
        assert_eq!(pos("X"), 0);
        assert_eq!(pos(""), 0);
    }

    #[test]
    fn renders_in_conventional_form() {
        for s in ["K1∪((K1∪K1)∗K1)", "K1∪K3", "K1∪K1∪K2", "K1∪((K2∪K2)∗K1)", "K4"] {
            assert_eq!(parse_shape(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn realization() {
        let g = shape_to_graph(&parse_shape("(K1∪K1)∗K1").unwrap()).unwrap();
        assert_eq!(g.vertices(), &[0, 1, 2]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert!(shape_to_graph(&ShapeExpr::Complete(65)).is_err());
    }

    #[test]
    fn isomorphism_basics() {
        let p4 = path(4);
        let relabeled = p4.relabel(|v| [7, 3, 11, 2][v as usize]).unwrap();
        assert!(is_isomorphic(&p4, &relabeled).unwrap());
        let star = CharacterGraph::new(0..4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_isomorphic(&p4, &star).unwrap());
        assert!(matches!(is_isomorphic(&path(11), &path(11)), Err(Error::Capacity(_))));
        assert!(matches!(matches_shape(&p4, &ShapeExpr::Complete(11)), Err(Error::Capacity(_))));
    }

    #[test]
    fn shape_of_cographs() {
        assert_eq!(shape_of(&path(4)), None);
        assert_eq!(shape_of(&CharacterGraph::empty()), None);
        let g = shape_to_graph(&parse_shape("K1∗(K2∪K1)∪K1").unwrap()).unwrap();
        assert_eq!(shape_of(&g).unwrap().to_string(), "K1∪((K1∪K2)∗K1)");
        let g = shape_to_graph(&parse_shape("K2∗K1∗K1").unwrap()).unwrap();
        assert_eq!(shape_of(&g).unwrap().to_string(), "K4");
    }

    fn arb_shape() -> impl Strategy<Value = ShapeExpr> {
        let leaf = (1usize..=3).prop_map(ShapeExpr::Complete);
        leaf.prop_recursive(4, 10, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ShapeExpr::union(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| ShapeExpr::join(a, b)),
            ]
        })
        .prop_filter("≤ 10 vertices", |s| s.vertex_count() <= 10)
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(s in arb_shape()) {
            let back = parse_shape(&s.to_string()).unwrap();
            let (g, h) = (shape_to_graph(&s).unwrap(), shape_to_graph(&back).unwrap());
            prop_assert!(is_isomorphic(&g, &h).unwrap());
        }

        #[test]
        fn shape_of_recovers_an_isomorphic_shape(s in arb_shape()) {
            let g = shape_to_graph(&s).unwrap();
            let canon = shape_of(&g).unwrap();
            prop_assert!(matches_shape(&g, &canon).unwrap());
        }

        #[test]
        fn matching_is_relabeling_invariant(
            s in arb_shape(),
            g in arb_graph(8),
            perm in Just((0..8u64).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let h = g.relabel(|v| 100 + perm[v as usize]).unwrap();
            prop_assert_eq!(matches_shape(&g, &s).unwrap(), matches_shape(&h, &s).unwrap());
            let realized = shape_to_graph(&s).unwrap();
            let n = realized.vertex_count() as u64;
            let shuffled = realized.relabel(|v| (v * 7 + 3) % n + 50).unwrap_or(realized.clone());
            prop_assert!(matches_shape(&shuffled, &s).unwrap());
        }
    }
}
