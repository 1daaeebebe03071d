//! Rank bounds from the Selmer-average input: closed-form lower bounds on
//! the proportion of curves with Selmer rank 0, 1, or "0 or 1" in a family
//! whose average p-Selmer order is p+1, an exact LP oracle verifying each
//! closed form, and the headline combinations of those bounds with the
//! family densities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::densities::{mu_s0, mu_s1prime_5, s0_s1_lower_bound};
use crate::error::{Error, Result};
use crate::interval::CertifiedInterval;
use crate::lp::{minimize, LinearProgram};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Inputs to the headline combination. The Selmer average, the parity
/// fraction, the equidistribution constant kappa, and the epsilon slack
/// are upstream constants, injectable but never recomputed here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInputs {
    pub p: u64,
    pub selmer_average: BigRational,
    pub parity_even_fraction: BigRational,
    pub kappa: BigRational,
    pub epsilon_mu_diff: BigRational,
}

impl BoundInputs {
    /// Default constants at a prime `p`: average `p + 1`, even/odd
    /// parity split `1/2`, kappa `0.5501`, epsilon `0.00001`.
    pub fn defaults(p: u64) -> Self {
        BoundInputs {
            p,
            selmer_average: int(p + 1),
            parity_even_fraction: rat(1, 2),
            kappa: rat(5501, 10_000),
            epsilon_mu_diff: rat(1, 100_000),
        }
    }
}

/// The three closed-form lower-bound fractions at a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBounds {
    pub x0: BigRational,
    pub x1: BigRational,
    pub x01: BigRational,
}

impl RankBounds {
    pub fn closed_forms(p: u64, parity_known: bool) -> Self {
        RankBounds {
            x0: rank0_bound(p),
            x1: rank1_bound(p),
            x01: rank01_bounds(p, parity_known),
        }
    }
}

/// Fraction of curves with Selmer rank 0 under an equidistributed parity
/// split: `(p-2)/(2p-2)`.
pub fn rank0_bound(p: u64) -> BigRational {
    rat(p as i64 - 2, 2 * p as i64 - 2)
}

/// Fraction with Selmer rank 1 under the same split:
/// `(p^2-p-1)/(2p^2-2p)`.
pub fn rank1_bound(p: u64) -> BigRational {
    let p = p as i64;
    rat(p * p - p - 1, 2 * p * p - 2 * p)
}

/// Fraction with Selmer rank 0 or 1: `(p^2-p-1)/(p^2-1)` without parity
/// information, `(2p-3)/(2p-2)` with it.
pub fn rank01_bounds(p: u64, parity_known: bool) -> BigRational {
    let p = p as i64;
    if parity_known {
        rat(2 * p - 3, 2 * p - 2)
    } else {
        rat(p * p - p - 1, p * p - 1)
    }
}

/// Target density the LP oracle minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpTarget {
    Rank0,
    Rank1,
    Rank0Or1,
}

/// Independent verifier for the closed forms: minimizes the target mass
/// over distributions `m_0..m_R` on Selmer ranks (group order `p^r`)
/// subject to the average-order constraint `Σ p^r m_r = selmer_average`
/// and, optionally, the even/odd parity split. Returns the worst-case
/// minimum and an extremal distribution.
pub fn lp_oracle(
    p: u64,
    max_rank: usize,
    parity_split: bool,
    target: LpTarget,
    inputs: &BoundInputs,
) -> Result<(BigRational, Vec<BigRational>)> {
    if max_rank < 4 {
        return Err(Error::PreconditionViolated("need max_rank >= 4"));
    }
    let nvars = max_rank + 1;
    let objective: Vec<BigRational> = (0..nvars)
        .map(|r| match target {
            LpTarget::Rank0 => {
                if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            LpTarget::Rank1 => {
                if r == 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            LpTarget::Rank0Or1 => {
                if r <= 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
        })
        .collect();

    let mut equalities = Vec::new();
    if parity_split {
        let even: Vec<BigRational> = (0..nvars)
            .map(|r| {
                if r % 2 == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let odd: Vec<BigRational> = (0..nvars)
            .map(|r| {
                if r % 2 == 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        equalities.push((even, inputs.parity_even_fraction.clone()));
        equalities.push((
            odd,
            BigRational::one() - inputs.parity_even_fraction.clone(),
        ));
    } else {
        equalities.push((vec![BigRational::one(); nvars], BigRational::one()));
    }
    // average of the group orders p^r
    let orders: Vec<BigRational> = (0..nvars)
        .map(|r| BigRational::from_integer(BigInt::from(p).pow(r as u32)))
        .collect();
    equalities.push((orders, inputs.selmer_average.clone()));

    let sol = minimize(&LinearProgram {
        objective,
        equalities,
    })?;
    Ok((sol.value, sol.point))
}

/// Result of the headline combination: the overall lower bound and the
/// two single-rank paths it dominates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadlineBreakdown {
    /// `7/8·κ·μ' + 19/24·(1-κ)·μ' - (7/8 + 19/24)·ε + 3/8·κ·(μ0 - μ')`
    /// with `μ' = mu_s1prime_5` and `μ0 = mu_s0(5)`.
    pub combined: BigRational,
    /// `3/8 · κ · μ0`.
    pub rank0_path: BigRational,
    /// `19/40 · κ · μ' - ε`.
    pub rank1_path: BigRational,
}

/// The headline lower bound on the density of curves with (algebraic and
/// analytic) rank 0 or 1, assembled from four terms:
/// equidistributed part, non-equidistributed remainder, the epsilon
/// corrections, and the rank-0 surplus from the base family.
pub fn headline(inputs: &BoundInputs) -> Result<HeadlineBreakdown> {
    let mu0 = mu_s0(5)?;
    let mu1p = mu_s1prime_5();
    let kappa = &inputs.kappa;
    let eps = &inputs.epsilon_mu_diff;

    let equi = rat(7, 8) * kappa * &mu1p;
    let rest = rat(19, 24) * (BigRational::one() - kappa) * &mu1p;
    let correction = (rat(7, 8) + rat(19, 24)) * eps;
    let surplus = rat(3, 8) * kappa * (&mu0 - &mu1p);
    let combined = equi + rest - correction + surplus;

    let rank0_path = rat(3, 8) * kappa * &mu0;
    let rank1_path = rat(19, 40) * kappa * &mu1p - eps;

    Ok(HeadlineBreakdown {
        combined,
        rank0_path,
        rank1_path,
    })
}

/// Certified enclosure of the density of curves that provably have rank 0
/// or 1 under an all-primes Selmer average: the intersection-family bound
/// at `p` times `(p^2-p-1)/(p^2-1)`. Tends to 1 as `p` grows.
pub fn conditional_100pct(p: u64, truncation: u64) -> Result<CertifiedInterval> {
    let base = s0_s1_lower_bound(p, truncation)?;
    Ok(base.mul_rational(&rank01_bounds(p, false)))
}

/// The bound template with hypothetical inputs: `bound × kappa × density`.
pub fn scenario(
    bound: &BigRational,
    kappa: &BigRational,
    family_density: &BigRational,
) -> Result<BigRational> {
    for v in [bound, kappa, family_density] {
        if v < &BigRational::zero() || v > &BigRational::one() {
            return Err(Error::PreconditionViolated("inputs must lie in [0,1]"));
        }
    }
    Ok(bound * kappa * family_density)
}
