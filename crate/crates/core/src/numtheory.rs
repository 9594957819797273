//! 64-bit integer factorization and the bounded arithmetic searches:
//! prime supports `π(n)`, Zsigmondy primes, solutions of `p^f + 1 = r^m`,
//! and the Fermat/Mersenne classification of `q = 2^f`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted set of distinct primes.
pub type PrimeSet = BTreeSet<u64>;

/// Trial division bound; cofactors left over are handled by Miller-Rabin
/// and Pollard rho.
const TRIAL_LIMIT: u64 = 1 << 21;

/// Deterministic Miller-Rabin witnesses for every 64-bit integer.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs sorted by prime.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> PrimeSet {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn num_distinct(&self) -> usize {
        self.factors.len()
    }

    /// Returns `(p, e)` when `n = p^e` for a single prime `p`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, e)] => Some((*p, *e)),
            _ => None,
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic primality test valid on the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial divisor of an odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    for c in 1..n {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted constants for composite {n}")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factors `n ≥ 2` into sorted `(prime, exponent)` pairs.
pub fn factor(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::domain(format!("cannot factor {n}: need n ≥ 2")));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    while d < TRIAL_LIMIT && d.saturating_mul(d) <= rest {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for chunk in large.chunk_by(|a, b| a == b) {
            factors.push((chunk[0], chunk.len() as u32));
        }
    }
    Ok(Factorization { n, factors })
}

/// `π(n)`: the primes dividing `n`. `π(1)` is empty.
pub fn prime_support(n: u64) -> Result<PrimeSet> {
    match n {
        0 => Err(Error::domain("π(0) is undefined")),
        1 => Ok(PrimeSet::new()),
        _ => Ok(factor(n)?.primes()),
    }
}

/// `(p, e)` with `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    factor(q).ok()?.as_prime_power()
}

/// Sieve of Eratosthenes; primes `≤ limit` in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Prime powers `q` with `lo ≤ q ≤ hi`, sorted, paired with `(base, exponent)`.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for p in primes_up_to(hi) {
        let mut q = p;
        let mut e = 1;
        loop {
            if q >= lo {
                out.push((q, p, e));
            }
            match q.checked_mul(p) {
                Some(next) if next <= hi => {
                    q = next;
                    e += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// The least Zsigmondy (primitive) prime of `p^n - 1`: a prime dividing
/// `p^n - 1` but no `p^k - 1` with `1 ≤ k < n`. `None` when there is none.
pub fn zsigmondy(p: u64, n: u32) -> Result<Option<u64>> {
    if p < 2 || n < 1 {
        return Err(Error::domain(format!("zsigmondy needs p ≥ 2 and n ≥ 1, got ({p}, {n})")));
    }
    let power =
        p.checked_pow(n).filter(|&v| v < 1 << 63).ok_or_else(|| Error::domain(format!("{p}^{n} exceeds 2^63")))?;
    let support = prime_support(power - 1)?;
    Ok(support.into_iter().find(|&t| (1..n).all(|k| pow_mod(p, k as u64, t) != 1)))
}

/// Which of the three forms of `p^f + 1 = r^m` a solution takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CatalanCase {
    /// `2^3 + 1 = 3^2`.
    A,
    /// `p = 2`, `m = 1`, `r = 2^f + 1` a Fermat prime, `f` a power of two.
    B,
    /// `r = 2`, `f = 1`, `p = 2^m - 1` a Mersenne prime, `m` prime.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CatalanSolution {
    pub p: u64,
    pub f: u32,
    pub r: u64,
    pub m: u32,
    /// `None` would be a counterexample to the three-case classification.
    pub case: Option<CatalanCase>,
}

impl CatalanSolution {
    pub fn holds(&self) -> bool {
        BigUint::from(self.p).pow(self.f) + 1u32 == BigUint::from(self.r).pow(self.m)
    }
}

fn catalan_case(p: u64, f: u32, r: u64, m: u32) -> Option<CatalanCase> {
    if (p, f, r, m) == (2, 3, 3, 2) {
        Some(CatalanCase::A)
    } else if p == 2 && m == 1 && f.is_power_of_two() && is_prime(r) {
        Some(CatalanCase::B)
    } else if r == 2 && f == 1 && is_prime(m as u64) && is_prime(p) {
        Some(CatalanCase::C)
    } else {
        None
    }
}

/// All solutions of `p^f + 1 = r^m` with primes `p ≤ p_max`, `r ≤ r_max`,
/// and `1 ≤ f ≤ f_max`, `1 ≤ m ≤ m_max`, sorted lexicographically.
/// Exact for any bounds: `p^f + 1` is tested for every `m`-th root.
pub fn catalan_solutions(p_max: u64, f_max: u32, r_max: u64, m_max: u32) -> Vec<CatalanSolution> {
    let mut out = Vec::new();
    for p in primes_up_to(p_max) {
        for f in 1..=f_max {
            let n = BigUint::from(p).pow(f) + 1u32;
            for m in 1..=m_max {
                let root = n.nth_root(m);
                if root.pow(m) != n {
                    continue;
                }
                let Some(r) = root.to_u64() else {
                    continue;
                };
                if r <= r_max && is_prime(r) {
                    out.push(CatalanSolution { p, f, r, m, case: catalan_case(p, f, r, m) });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterestTag {
    /// `f` prime, `q - 1` a Mersenne prime, `|π(q + 1)| ∈ {2, 3}`.
    A,
    /// `f = 4`: `q - 1 = 3·5`, `q + 1 = 17`.
    B,
    /// `f = 8`: `q - 1 = 3·5·17`, `q + 1 = 257`.
    C,
}

/// Classification of `q = 2^f` by the sizes of `π(q ± 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterestCase {
    pub f: u32,
    /// Whether some `ε = ±1` has `|π(q + ε)| = 1` and `|π(q - ε)| ∈ {2, 3}`.
    pub condition_holds: bool,
    pub epsilon: Option<i8>,
    /// Which case applies; `None` either when the condition fails or, which
    /// would refute the trichotomy, when it holds but no case matches.
    pub tag: Option<InterestTag>,
    pub q_minus_one: Factorization,
    pub q_plus_one: Factorization,
}

pub fn classify_interest(f: u32) -> Result<InterestCase> {
    if !(2..=62).contains(&f) {
        return Err(Error::domain(format!("f = {f} outside 2..=62")));
    }
    let q = 1u64 << f;
    let minus = factor(q - 1)?;
    let plus = factor(q + 1)?;
    let (km, kp) = (minus.num_distinct(), plus.num_distinct());
    let small = |k: usize| k == 2 || k == 3;
    let epsilon = if kp == 1 && small(km) {
        Some(1)
    } else if km == 1 && small(kp) {
        Some(-1)
    } else {
        None
    };
    let tag = match epsilon {
        Some(-1) if is_prime(f as u64) && is_prime(q - 1) => Some(InterestTag::A),
        Some(1) if f == 4 => Some(InterestTag::B),
        Some(1) if f == 8 => Some(InterestTag::C),
        _ => None,
    };
    Ok(InterestCase { f, condition_holds: epsilon.is_some(), epsilon, tag, q_minus_one: minus, q_plus_one: plus })
}

/// One row of the `|π(2^f ± 1)| = 2` scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenFiveRow {
    pub f: u32,
    pub pi_minus: usize,
    pub pi_plus: usize,
    /// Both `|π(2^f - 1)| = 2` and `|π(2^f + 1)| = 2`.
    pub holds: bool,
    /// At least one side has exactly two prime divisors (recorded only).
    pub holds_either: bool,
    /// `holds` implies `f` prime or `f ∈ {6, 9}`.
    pub consistent: bool,
}

pub fn evenfive_scan(f_max: u32) -> Result<Vec<EvenFiveRow>> {
    if f_max > 62 {
        return Err(Error::domain(format!("f_max = {f_max} exceeds 62")));
    }
    (2..=f_max)
        .map(|f| {
            let q = 1u64 << f;
            let pi_minus = factor(q - 1)?.num_distinct();
            let pi_plus = factor(q + 1)?.num_distinct();
            let holds = pi_minus == 2 && pi_plus == 2;
            Ok(EvenFiveRow {
                f,
                pi_minus,
                pi_plus,
                holds,
                holds_either: pi_minus == 2 || pi_plus == 2,
                consistent: !holds || is_prime(f as u64) || f == 6 || f == 9,
            })
        })
        .collect()
}
