//! Canonical integral models `y^2 = x^3 + Ax + B`, naive heights, and
//! exhaustive enumeration of all curves below a height bound.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// An elliptic curve `y^2 = x^3 + Ax + B` in canonical minimal form:
/// nonsingular (`disc_min != 0`) and with no prime `q` such that
/// `q^4 | A` and `q^6 | B`. Construction enforces both invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveModel {
    a: BigInt,
    b: BigInt,
}

impl CurveModel {
    /// Builds a canonical curve, rejecting singular and non-minimal pairs
    /// as distinct error cases.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let a = a.into();
        let b = b.into();
        if disc_min_pair(&a, &b).is_zero() {
            return Err(Error::SingularCurve);
        }
        if !is_minimal_pair(&a, &b) {
            return Err(Error::NonMinimalModel);
        }
        Ok(CurveModel { a, b })
    }

    /// Used by the enumerator, which has already performed both checks.
    pub(crate) fn new_unchecked(a: BigInt, b: BigInt) -> Self {
        debug_assert!(is_canonical(&a, &b));
        CurveModel { a, b }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Minimal-model discriminant `-16(4A^3 + 27B^2)`. The unit factor 16
    /// is invisible to valuations at primes >= 5 but is required for the
    /// mod-p^2 arithmetic on the Tate expansion, so this convention is used
    /// everywhere.
    pub fn disc_min(&self) -> BigInt {
        disc_min_pair(&self.a, &self.b)
    }

    /// Naive height `max(4|A|^3, 27B^2)`.
    pub fn height(&self) -> BigInt {
        height_pair(&self.a, &self.b)
    }

    /// The `-1`-twist `(A, -B)`. Height and discriminant are unchanged, so
    /// the result is again canonical and twisting is an involution.
    pub fn twist_minus_one(&self) -> CurveModel {
        CurveModel {
            a: self.a.clone(),
            b: -&self.b,
        }
    }
}

impl std::fmt::Display for CurveModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// `-16(4A^3 + 27B^2)` for an arbitrary integer pair.
pub fn disc_min_pair(a: &BigInt, b: &BigInt) -> BigInt {
    let four_a3 = (a * a * a) * 4i32;
    let twenty_seven_b2 = (b * b) * 27i32;
    -((four_a3 + twenty_seven_b2) * 16i32)
}

/// `max(4|A|^3, 27B^2)` for an arbitrary integer pair.
pub fn height_pair(a: &BigInt, b: &BigInt) -> BigInt {
    let ha = (a * a * a).abs() * 4i32;
    let hb = (b * b) * 27i32;
    ha.max(hb)
}

/// True iff the pair is nonsingular and minimal; the admission filter for
/// enumeration.
pub fn is_canonical(a: &BigInt, b: &BigInt) -> bool {
    !disc_min_pair(a, b).is_zero() && is_minimal_pair(a, b)
}

/// No integer d >= 2 with d^4 | A and d^6 | B. (A prime witness exists iff
/// an integer witness does, so plain integers are tested.) Candidates are
/// bounded by |A|^(1/4), or |B|^(1/6) when A = 0; A = B = 0 is singular and
/// reported minimal here.
fn is_minimal_pair(a: &BigInt, b: &BigInt) -> bool {
    let bound = if a.is_zero() && b.is_zero() {
        return true;
    } else if a.is_zero() {
        b.abs().nth_root(6)
    } else if b.is_zero() {
        a.abs().nth_root(4)
    } else {
        a.abs().nth_root(4).min(b.abs().nth_root(6))
    };
    let mut d = BigInt::from(2);
    while d <= bound {
        let d4 = d.pow(4);
        if (a % &d4).is_zero() && (b % d.pow(6)).is_zero() {
            return false;
        }
        d += 1u32;
    }
    true
}

/// The box of integer pairs with naive height strictly below `max_height`.
///
/// Because `H = max(4|A|^3, 27B^2)`, the region is a rectangle: `H < X` iff
/// `4|A|^3 < X` and `27B^2 < X`. Bounds are derived by exact integer root
/// extraction, no floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeightWindow {
    max_height: u64,
}

impl HeightWindow {
    pub fn new(max_height: u64) -> Self {
        HeightWindow { max_height }
    }

    pub fn max_height(&self) -> u64 {
        self.max_height
    }

    /// Largest `a >= 0` with `4a^3 < max_height`, or None for an empty window.
    pub fn a_bound(&self) -> Option<u64> {
        if self.max_height == 0 {
            return None;
        }
        let target = (self.max_height - 1) / 4; // need a^3 <= (X-1)/4
        let mut a = target.cbrt();
        while 4u128 * ((a + 1) as u128).pow(3) < self.max_height as u128 {
            a += 1;
        }
        while a > 0 && 4u128 * (a as u128).pow(3) >= self.max_height as u128 {
            a -= 1;
        }
        Some(a)
    }

    /// Largest `b >= 0` with `27b^2 < max_height`, or None for an empty window.
    pub fn b_bound(&self) -> Option<u64> {
        if self.max_height == 0 {
            return None;
        }
        let target = (self.max_height - 1) / 27;
        let mut b = target.sqrt();
        while 27u128 * ((b + 1) as u128).pow(2) < self.max_height as u128 {
            b += 1;
        }
        while b > 0 && 27u128 * (b as u128).pow(2) >= self.max_height as u128 {
            b -= 1;
        }
        Some(b)
    }

    /// All canonical curves with `H < max_height`, each exactly once, in
    /// lexicographic order by `(A, B)`.
    pub fn curves(&self) -> impl Iterator<Item = CurveModel> + '_ {
        let (amax, bmax) = match (self.a_bound(), self.b_bound()) {
            (Some(a), Some(b)) => (a as i64, b as i64),
            _ => (-1, -1), // empty ranges
        };
        (-amax..=amax).flat_map(move |a| {
            (-bmax..=bmax).filter_map(move |b| {
                let (a, b) = (BigInt::from(a), BigInt::from(b));
                is_canonical(&a, &b).then(|| CurveModel::new_unchecked(a, b))
            })
        })
    }
}
