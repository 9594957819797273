//! Character-degree graph toolkit.
//!
//! Builds prime-divisor graphs of character degree sets, checks the graph
//! predicates used in the classification of groups with `K4`-free character
//! graphs of diameter three, scans `PSL2(q)` families, and brute-forces
//! stabilizers in Steinberg twisted tensor modules of `SL2(2^f)`.
//!
//! Modules, bottom-up:
//!
//! * [`numtheory`]: 64-bit factorization, Zsigmondy primes, the bounded
//!   arithmetic censuses.
//! * [`catalog`]: bundled degree sets and the `PSL2` degree formulas.
//! * [`graph`]: the character graph, its predicates, and the shape algebra.
//! * [`steinberg`]: `GF(2^f)`, `SL2(2^f)`, and the modules `V_J`.
//! * [`scanner`]: batch scans over prime powers and the catalog.

pub mod catalog;
pub mod error;
pub mod graph;
pub mod numtheory;
pub mod scanner;
pub mod steinberg;

pub use error::{Error, Result};
