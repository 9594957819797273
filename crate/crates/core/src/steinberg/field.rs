use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory;

/// Element of `GF(2^f)` in polynomial basis: bit `i` is the coefficient
/// of `x^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Gf {
    type Output = Gf;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

/// Carry-less product of two polynomials over GF(2).
fn clmul(a: u32, b: u32) -> u32 {
    let mut acc = 0;
    for i in 0..16 {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}

fn poly_degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most half the degree of `p`.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let d = poly_degree(p);
    if d == 0 {
        return false;
    }
    (2u32..1 << (d / 2 + 1)).all(|q| poly_rem(p, q) != 0)
}

/// `GF(2^f)` with log/exp tables over a fixed primitive element.
#[derive(Clone)]
pub struct FieldContext {
    f: u32,
    modulus: u32,
    generator: Gf,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext").field("f", &self.f).field("modulus", &self.modulus_string()).finish()
    }
}

impl FieldContext {
    /// The field of order `2^f` for `2 ≤ f ≤ 16`, defined by the least
    /// irreducible polynomial of degree `f` (coefficients read from `x^f`
    /// down, so numeric order of bitmasks).
    pub fn new(f: u32) -> Result<Self> {
        if !(2..=16).contains(&f) {
            return Err(Error::domain(format!("extension degree {f} outside 2..=16")));
        }
        let modulus = (1u32 << f..1 << (f + 1))
            .find(|&p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree");
        let order = 1u32 << f;
        let group = (order - 1) as u64;
        let prime_divisors = numtheory::prime_support(group).unwrap_or_default();
        let slow_pow = |g: u32, mut e: u64| {
            let (mut acc, mut base) = (1u32, g);
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_rem(clmul(acc, base), modulus);
                }
                base = poly_rem(clmul(base, base), modulus);
                e >>= 1;
            }
            acc
        };
        let generator = (2..order).find(|&g| prime_divisors.iter().all(|&r| slow_pow(g, group / r) != 1)).unwrap_or(1);
        let mut exp = vec![0u16; 2 * group as usize];
        let mut log = vec![0u16; order as usize];
        let mut x = 1u32;
        for i in 0..group as usize {
            exp[i] = x as u16;
            exp[i + group as usize] = x as u16;
            log[x as usize] = i as u16;
            x = poly_rem(clmul(x, generator), modulus);
        }
        Ok(FieldContext { f, modulus, generator: Gf(generator as u16), exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    /// Defining polynomial as a bitmask, e.g. `0b1011` for `x^3+x+1`.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn modulus_string(&self) -> String {
        let terms: Vec<String> = (0..=self.f)
            .rev()
            .filter(|i| self.modulus >> i & 1 == 1)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        terms.join("+")
    }

    pub fn order(&self) -> u64 {
        1 << self.f
    }

    /// A primitive element: the least one generating the multiplicative group.
    pub fn generator(&self) -> Gf {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..1u32 << self.f).map(|v| Gf(v as u16))
    }

    pub fn contains(&self, a: Gf) -> bool {
        (a.0 as u64) < self.order()
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        Gf(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: Gf) -> Option<Gf> {
        if a.is_zero() {
            return None;
        }
        let group = self.order() as usize - 1;
        Some(Gf(self.exp[(group - self.log[a.0 as usize] as usize) % group]))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let group = self.order() - 1;
        let l = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        Gf(self.exp[l as usize])
    }

    /// `a ↦ a^(2^i)`, the `i`-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: Gf, i: u32) -> Gf {
        self.pow(a, 1 << (i % self.f))
    }

    /// Product by shift-and-reduce, independent of the tables.
    pub fn mul_reference(&self, a: Gf, b: Gf) -> Gf {
        Gf(poly_rem(clmul(a.0 as u32, b.0 as u32), self.modulus) as u16)
    }
}

/// Constructs `GF(2^f)`; see [`FieldContext::new`].
pub fn make_field(f: u32) -> Result<FieldContext> {
    FieldContext::new(f)
}
