//! Classification and density toolkit for elliptic curves over Q.
//!
//! Every curve is represented by its canonical integral model
//! `y^2 = x^3 + Ax + B` (no prime `q` with `q^4 | A` and `q^6 | B`), ordered
//! by the naive height `H = max(4|A|^3, 27 B^2)`. On top of that model the
//! crate provides:
//!
//! * [`curve`] — canonical models, heights, discriminants, `-1`-twists, and
//!   exhaustive enumeration of all curves below a height bound;
//! * [`reduction`] — per-prime reduction types for primes `>= 5`, Hasse
//!   coefficients, Teichmüller data mod `p^2`, and the valuation test for the
//!   Tate-period logarithm at split multiplicative primes;
//! * [`families`] — membership in the nested congruence families cut out by
//!   the reduction conditions at `p` and at primes `l = ±1 (mod p)`;
//! * [`densities`] — exact rational local densities of those families and
//!   certified enclosures of the associated Euler products;
//! * [`bounds`] — Selmer-average rank bounds, an exact-rational LP oracle
//!   verifying them, and the headline density combinations;
//! * [`survey`] — a parallel height-census harness comparing empirical
//!   frequencies against the exact densities.

pub mod bounds;
pub mod curve;
pub mod densities;
pub mod error;
pub mod families;
pub mod interval;
pub mod lp;
pub mod numeric;
pub mod primes;
pub mod reduction;
pub mod survey;

pub use curve::{CurveModel, HeightWindow};
pub use error::Error;
pub use interval::CertifiedInterval;

/// Exact rational values; all closed-form densities are returned in this type.
pub type ExactRational = num_rational::BigRational;
