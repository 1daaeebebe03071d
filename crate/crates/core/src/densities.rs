//! Exact rational local densities of the congruence families, certified
//! enclosures of the associated Euler products, and the vanishing density
//! used to discard curves with too few multiplicative primes.
//!
//! Every local density is measured in the normalization of the canonical
//! model: the raw measure on pairs of `l`-adic integers divided by
//! `1 - l^{-10}`, the measure of the minimal pairs at `l`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::CertifiedInterval;
use crate::primes::{is_prime, sieve};

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat(n: i64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow_int(base: u64, exp: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(exp))
}

fn require_prime_ge5(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// `(1 - l^{-10})^{-1} = l^10 / (l^10 - 1)`, the per-prime normalization.
pub fn norm_factor(ell: u64) -> BigRational {
    let l10 = pow_int(ell, 10);
    l10.clone() / (l10 - BigRational::one())
}

/// Density of curves with good ordinary or multiplicative reduction at `p`:
/// `(1 - 1/p) · (1 - p^{-10})^{-1}` (the mod-p condition is `p∤A`).
pub fn mu_s0(p: u64) -> Result<BigRational> {
    require_prime_ge5(p)?;
    Ok((BigRational::one() - rat(1, p)) * norm_factor(p))
}

/// `Σ_{k>=1, p∤k} p^{-k} = 1/(p-1) - 1/(p^p - 1)`, the geometric series
/// over valuations not divisible by p.
fn sum_k_not_div_p(p: u64) -> BigRational {
    let ppow = pow_int(p, p as u32);
    (int(p - 1)).recip() - (ppow - BigRational::one()).recip()
}

/// The three mod-5-power components of the family refined at 5: good
/// ordinary, nonsplit multiplicative (valuation prime to 5), and split
/// multiplicative passing the Tate-logarithm valuation test.
pub fn mu_s1prime_components_5() -> (BigRational, BigRational, BigRational) {
    let norm = norm_factor(5);
    let s = sum_k_not_div_p(5);
    let good = rat(16, 25) * &norm;
    // per-valuation summands 2(5-1)/5^{k+2} and (5-1)(2·5-1)/5^{k+3}
    let nonsplit = rat(8, 25) * &s * &norm;
    let split = rat(36, 125) * &s * &norm;
    (good, nonsplit, split)
}

/// Density of the family refined at 5:
/// `(99/125 - (19/125)·4/(5^5-1)) (1 - 5^{-10})^{-1} = 0.7918054…`.
pub fn mu_s1prime_5() -> BigRational {
    let (good, nonsplit, split) = mu_s1prime_components_5();
    good + nonsplit + split
}

/// Lower bound on the local density at a prime `l = ±1 (mod p)` of the
/// condition "p does not divide ord_l(disc)":
/// `(1 - 1/l^10)^{-1} (1 - (l-1)^2/(l^2(l^5-1)) - 1/l^5)`.
pub fn s1_local_factor(ell: u64, p: u64) -> Result<BigRational> {
    require_prime_ge5(p)?;
    if ell < 11 || !is_prime(ell) {
        return Err(Error::PreconditionViolated("need a prime l >= 11"));
    }
    let r = ell % p;
    if r != 1 && r != p - 1 {
        return Err(Error::PreconditionViolated("need l = ±1 (mod p)"));
    }
    let l5 = pow_int(ell, 5);
    let inner = BigRational::one()
        - int(ell - 1) * int(ell - 1) / (int(ell) * int(ell) * (&l5 - BigRational::one()))
        - l5.recip();
    Ok(norm_factor(ell) * inner)
}

/// A truncated Euler product with a certified tail: local factors are exact
/// rationals in (0, 1] that lower-bound the true local densities, so the
/// sound enclosure of `prefactor · Π(true factors)` is
/// `[prefactor · Π_{l<=L} factor(l) · (1 - 1/(2L^4)), prefactor]`.
/// The tail rule uses factor(l) >= 1 - 2/l^5 for l > L and bounds
/// `Σ_{n>L} 2/n^5` over all integers by `1/(2L^4)`.
pub struct EulerProductSpec {
    truncation: u64,
    prime_filter: Box<dyn Fn(u64) -> bool + Sync>,
    local_factor: Box<dyn Fn(u64) -> BigRational + Sync>,
}

impl EulerProductSpec {
    pub fn new(
        truncation: u64,
        prime_filter: impl Fn(u64) -> bool + Sync + 'static,
        local_factor: impl Fn(u64) -> BigRational + Sync + 'static,
    ) -> Self {
        EulerProductSpec {
            truncation,
            prime_filter: Box::new(prime_filter),
            local_factor: Box::new(local_factor),
        }
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// Certified enclosure of `prefactor × (product over filtered primes)`.
    pub fn evaluate(&self, prefactor: &BigRational) -> CertifiedInterval {
        let mut lo_side = CertifiedInterval::from_rational(prefactor);
        let one = BigRational::one();
        for ell in sieve(self.truncation) {
            if !(self.prime_filter)(ell) {
                continue;
            }
            let f = (self.local_factor)(ell);
            assert!(f > BigRational::zero() && f <= one, "local factor out of (0,1]");
            lo_side = lo_side.mul(&CertifiedInterval::from_rational(&f));
        }
        // tail: Σ_{n>L} 2/n^5 < 2·∫_L^∞ x^{-5} dx = 1/(2L^4)
        let l4 = pow_int(self.truncation, 4);
        let tail_lo = one - (int(2) * l4).recip();
        lo_side = lo_side.mul(&CertifiedInterval::from_bounds(&tail_lo, &BigRational::one()));
        CertifiedInterval::from_bounds(&lo_side.lo().max(BigRational::zero()), prefactor)
    }
}

/// Certified enclosure of the density of the fully refined family at 5:
/// the refined-at-5 density times the product over primes `l = ±1 (mod 5)`
/// of `s1_local_factor`. The lower bound exceeds `0.7917957` at `L = 10^4`.
pub fn mu_s1_5(truncation: u64) -> CertifiedInterval {
    assert!(truncation >= 11);
    let spec = EulerProductSpec::new(
        truncation,
        |l| l % 5 == 1 || l % 5 == 4,
        |l| s1_local_factor(l, 5).expect("filtered primes satisfy the precondition"),
    );
    spec.evaluate(&mu_s1prime_5())
}

/// Local events with closed-form measures (raw, unnormalized).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalEvent {
    /// `l∤A` and `ord_l(disc) = k`: measure `(l-1)^2 / l^{k+2}`.
    MultOrdEqualsK,
    /// Split multiplicative at `p` with `ord_p(disc) = k`, `p∤k`, and the
    /// Tate-logarithm valuation test passing: measure
    /// `(p-1)^2(2p-1)/(4p^{k+3})` for `p = 1 (mod 4)`, and
    /// `(p-1)^2(2p-1)/(2p^{k+3})` for `p = 3 (mod 4)`.
    SplitWithLTestAtP,
}

pub fn local_event_measure(event: LocalEvent, ell: u64, p: u64, k: u32) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::PreconditionViolated("need k >= 1"));
    }
    match event {
        LocalEvent::MultOrdEqualsK => {
            require_prime_ge5(ell)?;
            Ok(int(ell - 1) * int(ell - 1) / pow_int(ell, k + 2))
        }
        LocalEvent::SplitWithLTestAtP => {
            require_prime_ge5(p)?;
            if (k as u64).is_multiple_of(p) {
                return Err(Error::PreconditionViolated("need p∤k"));
            }
            let denom_factor = if p % 4 == 1 { 4 } else { 2 };
            Ok(int(p - 1) * int(p - 1) * int(2 * p - 1) / (int(denom_factor) * pow_int(p, k + 3)))
        }
    }
}

/// Raw measure of `{ord_l(disc) = 1}`: `(l-1)^2 / l^3`.
pub fn measure_ord_exactly_one(ell: u64) -> BigRational {
    int(ell - 1) * int(ell - 1) / pow_int(ell, 3)
}

/// Raw measure of `{ord_l(disc) <= 1}`: `1 - 1/l^2 - (l-1)/l^3`.
pub fn measure_ord_at_most_one(ell: u64) -> BigRational {
    BigRational::one() - pow_int(ell, 2).recip() - int(ell - 1) / pow_int(ell, 3)
}

/// Density of curves with at most one prime `q` in `[5, L] \ {p}` whose
/// discriminant valuation is exactly 1 — the set whose vanishing as
/// `L → ∞` guarantees two ramified multiplicative primes for almost all
/// curves. Computed as the exact per-prime product
/// `Π_q ν_q(ord≠1) + Σ_l ν_l(ord=1) Π_{q≠l} ν_q(ord≠1)` with normalized
/// local densities `ν_q(ord≠1) = (1 - q^{-10})^{-1}(1 - (q-1)^2/q^3)`.
/// Returns 0 when the prime range is empty.
pub fn mu_missing_two_mult(truncation: u64, p: u64) -> BigRational {
    let primes: Vec<u64> = sieve(truncation)
        .into_iter()
        .filter(|&q| q >= 5 && q != p)
        .collect();
    if primes.is_empty() {
        return BigRational::zero();
    }
    let not_one: Vec<BigRational> = primes
        .iter()
        .map(|&q| norm_factor(q) * (BigRational::one() - measure_ord_exactly_one(q)))
        .collect();
    let full: BigRational = not_one.iter().fold(BigRational::one(), |acc, f| acc * f);
    let mut total = full.clone();
    for (i, &ell) in primes.iter().enumerate() {
        let exactly = norm_factor(ell) * measure_ord_exactly_one(ell);
        total += &full / &not_one[i] * exactly;
    }
    total
}

/// Certified lower bound on the density of the intersection family at `p`:
/// `(1 - 1/p)^2 · Π_{l=±1 (mod p)} (1 - 1/l^10)^{-1}(1 - 1/l^5)^2`.
pub fn s0_s1_lower_bound(p: u64, truncation: u64) -> Result<CertifiedInterval> {
    require_prime_ge5(p)?;
    let prefactor = {
        let t = BigRational::one() - rat(1, p);
        t.clone() * t
    };
    let spec = EulerProductSpec::new(
        truncation.max(2),
        move |l| l > 2 && (l % p == 1 || l % p == p - 1),
        |l| {
            let t = BigRational::one() - pow_int(l, 5).recip();
            norm_factor(l) * t.clone() * t
        },
    );
    Ok(spec.evaluate(&prefactor))
}
