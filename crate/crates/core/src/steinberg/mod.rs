//! `SL2(2^f)` acting on the Steinberg twisted tensor modules
//! `V_J = ⊗_{j∈J} V_j` over `GF(2^f)`, where `V_j` is the natural module
//! twisted by `a ↦ a^(2^j)`, with exhaustive stabilizer computations.
//!
//! A vector of `V_J` stores one coefficient per basis tensor
//! `e_{ε_1} ⊗ … ⊗ e_{ε_k}`, `ε_t ∈ {1, 2}`, indexed in lexicographic order
//! of `(ε_1, …, ε_k)` over `J` sorted ascending. Index bit `k-1-t` is set
//! when `ε_t = 2`.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod field;

pub use field::{is_irreducible, make_field, FieldContext, Gf};

/// Enumeration caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest `f` for which `SL2(2^f)` is enumerated.
    pub max_f: u32,
    /// Largest number of vectors [`find_regular_vector`] examines.
    pub vector_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_f: 6, vector_budget: 1 << 24 }
    }
}

fn check_cap(ctx: &FieldContext, limits: &SearchLimits) -> Result<()> {
    if ctx.degree() > limits.max_f {
        return Err(Error::capacity(format!(
            "enumerating SL2(2^{}) exceeds the cap f ≤ {}",
            ctx.degree(),
            limits.max_f
        )));
    }
    Ok(())
}

/// `[[a, b], [c, d]]` with `ad + bc = 1` (characteristic 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sl2Element {
    pub a: Gf,
    pub b: Gf,
    pub c: Gf,
    pub d: Gf,
}

impl Sl2Element {
    pub const IDENTITY: Sl2Element = Sl2Element { a: Gf::ONE, b: Gf::ZERO, c: Gf::ZERO, d: Gf::ONE };

    pub fn new(ctx: &FieldContext, a: Gf, b: Gf, c: Gf, d: Gf) -> Result<Self> {
        if ![a, b, c, d].iter().all(|&x| ctx.contains(x)) {
            return Err(Error::domain("matrix entry outside the field"));
        }
        let x = Sl2Element { a, b, c, d };
        if x.det(ctx) != Gf::ONE {
            return Err(Error::domain("determinant is not 1"));
        }
        Ok(x)
    }

    pub fn det(&self, ctx: &FieldContext) -> Gf {
        ctx.mul(self.a, self.d) + ctx.mul(self.b, self.c)
    }

    pub fn mul(&self, ctx: &FieldContext, o: &Sl2Element) -> Sl2Element {
        let m = |x, y| ctx.mul(x, y);
        Sl2Element {
            a: m(self.a, o.a) + m(self.b, o.c),
            b: m(self.a, o.b) + m(self.b, o.d),
            c: m(self.c, o.a) + m(self.d, o.c),
            d: m(self.c, o.b) + m(self.d, o.d),
        }
    }

    /// In characteristic 2 the inverse of a determinant-one matrix swaps
    /// the diagonal and keeps the off-diagonal.
    pub fn inverse(&self) -> Sl2Element {
        Sl2Element { a: self.d, b: self.b, c: self.c, d: self.a }
    }
}

/// Entrywise `a ↦ a^(2^i)`; `i` is taken modulo `f`.
pub fn frobenius_twist(ctx: &FieldContext, x: &Sl2Element, i: u32) -> Sl2Element {
    let s = |v| ctx.frobenius(v, i);
    Sl2Element { a: s(x.a), b: s(x.b), c: s(x.c), d: s(x.d) }
}

/// `|SL2(2^f)| = q(q-1)(q+1)`.
pub fn sl2_order(ctx: &FieldContext) -> u64 {
    let q = ctx.order();
    q * (q - 1) * (q + 1)
}

/// Every element of `SL2(2^f)` exactly once, in lexicographic `(a, b, c, d)` order.
pub fn sl2_elements(ctx: &FieldContext, limits: &SearchLimits) -> Result<Vec<Sl2Element>> {
    check_cap(ctx, limits)?;
    let mut out = Vec::with_capacity(sl2_order(ctx) as usize);
    for a in ctx.elements() {
        for b in ctx.elements() {
            if a.is_zero() {
                // bc = 1
                if let Some(c) = ctx.inv(b) {
                    out.extend(ctx.elements().map(|d| Sl2Element { a, b, c, d }));
                }
            } else {
                let a_inv = ctx.inv(a).expect("nonzero");
                for c in ctx.elements() {
                    let d = ctx.mul(Gf::ONE + ctx.mul(b, c), a_inv);
                    out.push(Sl2Element { a, b, c, d });
                }
            }
        }
    }
    Ok(out)
}

/// Checks `j` is a strictly increasing list of indices below `f`.
pub fn validate_j(ctx: &FieldContext, j: &[u32]) -> Result<()> {
    if j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!("J = {j:?} must be strictly increasing")));
    }
    if let Some(&bad) = j.iter().find(|&&i| i >= ctx.degree()) {
        return Err(Error::domain(format!("index {bad} in J is not below f = {}", ctx.degree())));
    }
    Ok(())
}

/// Element of `V_J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorVector {
    j: Vec<u32>,
    coeffs: Vec<Gf>,
}

impl TensorVector {
    pub fn zero(j: &[u32]) -> Self {
        TensorVector { j: j.to_vec(), coeffs: vec![Gf::ZERO; 1 << j.len()] }
    }

    pub fn from_coeffs(ctx: &FieldContext, j: &[u32], coeffs: Vec<Gf>) -> Result<Self> {
        validate_j(ctx, j)?;
        if coeffs.len() != 1 << j.len() {
            return Err(Error::domain(format!(
                "V_J with |J| = {} needs {} coefficients, got {}",
                j.len(),
                1 << j.len(),
                coeffs.len()
            )));
        }
        if !coeffs.iter().all(|&c| ctx.contains(c)) {
            return Err(Error::domain("coefficient outside the field"));
        }
        Ok(TensorVector { j: j.to_vec(), coeffs })
    }

    /// Basis tensor `⊗ e_{ε_t}`; `eps` lists `ε_t ∈ {1, 2}` in `J` order.
    pub fn basis(j: &[u32], eps: &[u8]) -> Result<Self> {
        if eps.len() != j.len() || eps.iter().any(|e| !matches!(e, 1 | 2)) {
            return Err(Error::domain(format!("basis index {eps:?} does not fit J = {j:?}")));
        }
        let mut v = TensorVector::zero(j);
        v.coeffs[basis_index(eps)] = Gf::ONE;
        Ok(v)
    }

    pub fn j(&self) -> &[u32] {
        &self.j
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of the basis tensor with index tuple `eps`.
    pub fn coeff(&self, eps: &[u8]) -> Gf {
        self.coeffs[basis_index(eps)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &TensorVector) -> Result<TensorVector> {
        if self.j != other.j {
            return Err(Error::domain("adding vectors of different modules"));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&x, &y)| x + y).collect();
        Ok(TensorVector { j: self.j.clone(), coeffs })
    }

    pub fn scale(&self, ctx: &FieldContext, s: Gf) -> TensorVector {
        TensorVector { j: self.j.clone(), coeffs: self.coeffs.iter().map(|&c| ctx.mul(s, c)).collect() }
    }
}

fn basis_index(eps: &[u8]) -> usize {
    eps.iter().fold(0, |acc, &e| acc << 1 | (e as usize - 1))
}

/// The matrices `σ_j(g)` for `j ∈ J`, in `J` order.
fn twisted(ctx: &FieldContext, j: &[u32], g: &Sl2Element) -> Vec<Sl2Element> {
    j.iter().map(|&i| frobenius_twist(ctx, g, i)).collect()
}

fn apply_twisted(ctx: &FieldContext, mats: &[Sl2Element], coeffs: &mut [Gf]) {
    let k = mats.len();
    for (t, m) in mats.iter().enumerate() {
        let bit = 1 << (k - 1 - t);
        for idx in 0..coeffs.len() {
            if idx & bit != 0 {
                continue;
            }
            let (x1, x2) = (coeffs[idx], coeffs[idx | bit]);
            coeffs[idx] = ctx.mul(m.a, x1) + ctx.mul(m.b, x2);
            coeffs[idx | bit] = ctx.mul(m.c, x1) + ctx.mul(m.d, x2);
        }
    }
}

/// `g · v` in `V_J`: applies `⊗_{j∈J} σ_j(g)`.
pub fn module_action(ctx: &FieldContext, j: &[u32], g: &Sl2Element, v: &TensorVector) -> Result<TensorVector> {
    validate_j(ctx, j)?;
    if v.j != j {
        return Err(Error::domain(format!("vector lives in V_{:?}, not V_{j:?}", v.j)));
    }
    let mut coeffs = v.coeffs.clone();
    apply_twisted(ctx, &twisted(ctx, j, g), &mut coeffs);
    Ok(TensorVector { j: j.to_vec(), coeffs })
}

/// The vector from the regular-orbit construction: `e1 + e2` when
/// `J = {j0}`, otherwise
/// `⊗e1 + ⊗e2 + e1^{j0} ⊗ (⊗_{j≠j0} e2) + e2^{j0} ⊗ (⊗_{j≠j0} e1)`.
/// `j0` must be the least element of `J`.
pub fn lemma_center_vector(ctx: &FieldContext, j: &[u32], j0: u32) -> Result<TensorVector> {
    validate_j(ctx, j)?;
    let Some(&least) = j.first() else {
        return Err(Error::domain("J must be non-empty"));
    };
    if j0 != least {
        return Err(Error::domain(format!("j0 = {j0} must be min(J) = {least}")));
    }
    let k = j.len();
    let mut v = TensorVector::zero(j);
    let ones = vec![1u8; k];
    let twos = vec![2u8; k];
    let mut mixed_a = twos.clone();
    mixed_a[0] = 1;
    let mut mixed_b = ones.clone();
    mixed_b[0] = 2;
    for eps in [ones, twos, mixed_a, mixed_b] {
        // for |J| = 1 the mixed terms coincide with the pure ones
        v.coeffs[basis_index(&eps)] = Gf::ONE;
    }
    Ok(v)
}

/// `|C_G(v)|`, counted over all of `SL2(2^f)`.
pub fn stabilizer_order(ctx: &FieldContext, j: &[u32], v: &TensorVector, limits: &SearchLimits) -> Result<u64> {
    module_action(ctx, j, &Sl2Element::IDENTITY, v)?;
    let group = sl2_elements(ctx, limits)?;
    Ok(group
        .par_iter()
        .filter(|g| {
            let mut c = v.coeffs.clone();
            apply_twisted(ctx, &twisted(ctx, j, g), &mut c);
            c == v.coeffs
        })
        .count() as u64)
}

/// `|G · v|`, by collecting the images of `v` under every group element.
pub fn orbit_size(ctx: &FieldContext, j: &[u32], v: &TensorVector, limits: &SearchLimits) -> Result<u64> {
    module_action(ctx, j, &Sl2Element::IDENTITY, v)?;
    let group = sl2_elements(ctx, limits)?;
    let orbit: HashSet<Vec<Gf>> = group
        .iter()
        .map(|g| {
            let mut c = v.coeffs.clone();
            apply_twisted(ctx, &twisted(ctx, j, g), &mut c);
            c
        })
        .collect();
    Ok(orbit.len() as u64)
}

/// Position of a coefficient vector in coefficient-lexicographic order.
fn lex_rank(coeffs: &[Gf], q: u64) -> u128 {
    coeffs.iter().fold(0u128, |acc, c| acc * q as u128 + c.0 as u128)
}

fn lex_unrank(mut rank: u128, q: u64, len: usize) -> Vec<Gf> {
    let mut out = vec![Gf::ZERO; len];
    for slot in out.iter_mut().rev() {
        *slot = Gf((rank % q as u128) as u16);
        rank /= q as u128;
    }
    out
}

/// The first vector of `V_J`, in coefficient-lexicographic order, whose
/// stabilizer is trivial; `None` when the whole module is searched
/// without finding one.
///
/// Vectors are visited in order; each unvisited one has its full orbit
/// computed and marked, since stabilizer orders are constant on orbits.
/// Examining more than `limits.vector_budget` vectors is a capacity error
/// that reports how far the search got.
pub fn find_regular_vector(ctx: &FieldContext, j: &[u32], limits: &SearchLimits) -> Result<Option<TensorVector>> {
    validate_j(ctx, j)?;
    if j.is_empty() {
        return Err(Error::domain("J must be non-empty"));
    }
    let group = sl2_elements(ctx, limits)?;
    let q = ctx.order();
    let len = 1usize << j.len();
    let total: u128 = (q as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let tracked = total.min(limits.vector_budget as u128) as usize;
    let mut visited = vec![false; tracked];
    let mats: Vec<Vec<Sl2Element>> = group.iter().map(|g| twisted(ctx, j, g)).collect();
    let group_order = group.len();
    for rank in 0..total {
        if rank >= limits.vector_budget as u128 {
            return Err(Error::capacity(format!(
                "vector budget exhausted: examined {rank} of {total} vectors of V_{j:?} over GF(2^{}) without a regular one",
                ctx.degree()
            )));
        }
        if visited[rank as usize] {
            continue;
        }
        let start = lex_unrank(rank, q, len);
        let orbit: HashSet<Vec<Gf>> = mats
            .par_iter()
            .map(|m| {
                let mut c = start.clone();
                apply_twisted(ctx, m, &mut c);
                c
            })
            .collect();
        if orbit.len() == group_order {
            return Ok(Some(TensorVector { j: j.to_vec(), coeffs: start }));
        }
        for member in &orbit {
            let r = lex_rank(member, q);
            if r < tracked as u128 {
                visited[r as usize] = true;
            }
        }
    }
    Ok(None)
}

/// Orbit of `J ⊆ {0, …, f-1}` under the index shift `i ↦ i + 1 mod f`,
/// each member sorted.
pub fn galois_orbit(f: u32, j: &[u32]) -> Result<BTreeSet<Vec<u32>>> {
    if f == 0 {
        return Err(Error::domain("f must be positive"));
    }
    if let Some(&bad) = j.iter().find(|&&i| i >= f) {
        return Err(Error::domain(format!("index {bad} in J is not below f = {f}")));
    }
    let mut current: Vec<u32> = j.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut orbit = BTreeSet::new();
    while orbit.insert(current.clone()) {
        current = current.iter().map(|&i| (i + 1) % f).collect::<BTreeSet<_>>().into_iter().collect();
    }
    Ok(orbit)
}

/// Machine-readable summary of one stabilizer computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinbergReport {
    pub f: u32,
    pub modulus: u32,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    /// Coefficients in basis-index order; `None` when no vector was found.
    pub vector: Option<Vec<u16>>,
    pub stabilizer_order: Option<u64>,
    pub group_order: u64,
}

impl SteinbergReport {
    pub fn new(ctx: &FieldContext, j: &[u32], v: Option<&TensorVector>, stabilizer_order: Option<u64>) -> Self {
        SteinbergReport {
            f: ctx.degree(),
            modulus: ctx.modulus(),
            j: j.to_vec(),
            vector: v.map(|v| v.coeffs.iter().map(|c| c.0).collect()),
            stabilizer_order,
            group_order: sl2_order(ctx),
        }
    }
}
