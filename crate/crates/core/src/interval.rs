//! Certified enclosures of nonnegative reals.
//!
//! Endpoints are dyadic numbers `m / 2^64` with `m` an arbitrary-precision
//! integer, so every rounding step is an exact integer floor or ceiling —
//! 64 fractional bits of working precision with outward rounding at every
//! step. Only the operations the Euler products need are provided:
//! conversion from exact rationals, multiplication of nonnegative
//! intervals, and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::numeric::{decimal_string, Round};

/// Fractional bits carried by every endpoint.
pub const FRAC_BITS: u32 = 64;

fn scale() -> BigInt {
    BigInt::one() << FRAC_BITS
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_ceil(d)
}

/// A directed-rounded enclosure `lo <= x <= hi` of a nonnegative value,
/// endpoints in units of `2^-64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInterval {
    lo: BigInt,
    hi: BigInt,
}

impl CertifiedInterval {
    /// Tightest dyadic enclosure of a nonnegative rational.
    pub fn from_rational(r: &BigRational) -> Self {
        assert!(!r.is_negative(), "enclosures are for nonnegative values");
        let scaled_num = r.numer() * scale();
        CertifiedInterval {
            lo: floor_div(&scaled_num, r.denom()),
            hi: ceil_div(&scaled_num, r.denom()),
        }
    }

    /// Enclosure from rational endpoints, rounding each outward.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational) -> Self {
        assert!(lo <= hi);
        assert!(!lo.is_negative());
        CertifiedInterval {
            lo: floor_div(&(lo.numer() * scale()), lo.denom()),
            hi: ceil_div(&(hi.numer() * scale()), hi.denom()),
        }
    }

    /// Product of two nonnegative enclosures, rounded outward.
    pub fn mul(&self, other: &CertifiedInterval) -> CertifiedInterval {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        let s = scale();
        CertifiedInterval {
            lo: floor_div(&(&self.lo * &other.lo), &s),
            hi: ceil_div(&(&self.hi * &other.hi), &s),
        }
    }

    /// Multiply by an exact nonnegative rational.
    pub fn mul_rational(&self, r: &BigRational) -> CertifiedInterval {
        self.mul(&CertifiedInterval::from_rational(r))
    }

    /// Lower endpoint as an exact rational.
    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), scale())
    }

    /// Upper endpoint as an exact rational.
    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), scale())
    }

    /// Reported enclosure width `hi - lo`.
    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    /// True iff `self` is contained in `other`.
    pub fn subset_of(&self, other: &CertifiedInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Decimal rendering `[lo, hi]` with outward-rounded digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            decimal_string(&self.lo(), digits, Round::Floor),
            decimal_string(&self.hi(), digits, Round::Ceil)
        )
    }
}

impl std::fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_decimal(10))
    }
}
