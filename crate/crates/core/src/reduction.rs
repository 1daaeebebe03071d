//! Per-prime classification of canonical curves at primes `l >= 5`:
//! reduction type, ordinarity, split vs. nonsplit multiplicative reduction,
//! discriminant valuations, ramification of the mod-p representation away
//! from p, and the valuation-one test for the Tate-period logarithm at a
//! split multiplicative prime.
//!
//! Primes 2 and 3 are rejected: every condition checked by this crate lives
//! at primes >= 5, where the canonical model is automatically minimal.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::primes::{is_prime, powmod};

/// Reduction type of a canonical curve at a prime `l >= 5`.
///
/// Good reduction iff `l` does not divide the discriminant; multiplicative
/// iff `l` divides the discriminant but not `A`; additive iff `l` divides
/// both (equivalently, for `l >= 5`, both `A` and `B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionType {
    GoodOrdinary,
    GoodSupersingular,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionType {
    pub fn is_good(self) -> bool {
        matches!(self, Self::GoodOrdinary | Self::GoodSupersingular)
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, Self::MultiplicativeSplit | Self::MultiplicativeNonsplit)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::GoodOrdinary => "good ordinary",
            Self::GoodSupersingular => "good supersingular",
            Self::MultiplicativeSplit => "multiplicative split",
            Self::MultiplicativeNonsplit => "multiplicative nonsplit",
            Self::Additive => "additive",
        }
    }
}

impl std::fmt::Display for ReductionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification of one curve at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalProfile {
    pub ell: u64,
    pub rtype: ReductionType,
    /// `ord_l(disc_min)`; zero exactly for good reduction.
    pub k: u32,
    /// Valuation-one verdict for the Tate-period logarithm; present only at
    /// split multiplicative reduction with `l` not dividing `k`.
    pub l_invariant_ord1: Option<bool>,
}

impl LocalProfile {
    pub fn compute(curve: &CurveModel, ell: u64) -> Result<Self> {
        let rtype = reduction_type(curve, ell)?;
        let k = if rtype.is_good() {
            0
        } else {
            ord_at(&curve.disc_min(), ell)?
        };
        let l_invariant_ord1 = if rtype == ReductionType::MultiplicativeSplit
            && !(k as u64).is_multiple_of(ell)
        {
            Some(l_invariant_ord_is_one(curve, ell)?)
        } else {
            None
        };
        Ok(LocalProfile {
            ell,
            rtype,
            k,
            l_invariant_ord1,
        })
    }
}

fn require_prime_ge5(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// Nonnegative residue of a big integer mod a u64 modulus.
pub(crate) fn residue(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    u64::try_from(&r).expect("mod_floor result fits the modulus")
}

/// Largest e with `ell^e | n`.
pub fn ord_at(n: &BigInt, ell: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let ell = BigInt::from(ell);
    let mut e = 0u32;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(&ell);
        if !r.is_zero() {
            return Ok(e);
        }
        e += 1;
        cur = q;
    }
}

/// Coefficient of `x^(p-1)` in `(x^3 + Ax + B)^((p-1)/2)` over the field
/// with p elements, by the multinomial expansion: terms with
/// `i + j + k = (p-1)/2` and `3i + j = p - 1`.
pub fn hasse_coefficient(curve: &CurveModel, p: u64) -> Result<u64> {
    require_prime_ge5(p)?;
    let a = residue(curve.a(), p);
    let b = residue(curve.b(), p);
    let m = (p - 1) / 2;

    // factorials up to m < p, all invertible mod p
    let mut fact = vec![1u64; m as usize + 1];
    for i in 1..=m as usize {
        fact[i] = fact[i - 1] * (i as u64) % p;
    }
    let inv = |x: u64| powmod(x, p - 2, p);

    let mut acc = 0u64;
    let i_lo = m.div_ceil(2);
    let i_hi = ((p - 1) / 3).min(m);
    for i in i_lo..=i_hi {
        let j = p - 1 - 3 * i;
        let k = 2 * i - m;
        let multinomial = fact[m as usize]
            * inv(fact[i as usize] * fact[j as usize] % p * fact[k as usize] % p)
            % p;
        let term = multinomial * powmod(a, j, p) % p * powmod(b, k, p) % p;
        acc = (acc + term) % p;
    }
    Ok(acc)
}

/// Legendre symbol by Euler's criterion: 1, -1, or 0.
pub(crate) fn legendre(a: u64, ell: u64) -> i32 {
    let a = a % ell;
    if a == 0 {
        return 0;
    }
    let e = powmod(a, (ell - 1) / 2, ell);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Split test for a curve with multiplicative reduction at `l`: the double
/// root of `x^3 + Ax + B` mod `l` is `x0 = -3B/(2A)`, the node's tangent
/// slopes generate the extension by a square root of `3·x0`, and
/// `3·x0 = -18AB/(2A)^2`, so the slopes are rational iff `-2AB` is a
/// square mod `l`. For `l = 1 (mod 4)` this agrees with solvability of
/// `u^4 = -3A (mod l)`; for `l = 3 (mod 4)` the fourth-power form is wrong
/// (the two branches `±B` then have opposite splitness).
pub(crate) fn split_from_residues(a: u64, b: u64, ell: u64) -> bool {
    debug_assert!(!a.is_multiple_of(ell) && !b.is_multiple_of(ell));
    let t = (2u128 * a as u128 % ell as u128 * b as u128) % ell as u128;
    let minus_2ab = ((ell as u128 - t) % ell as u128) as u64;
    legendre(minus_2ab, ell) == 1
}

/// Solvability of `u^4 = -3A (mod l)`, as a power-residue test. Equivalent
/// to the split test only for `l = 1 (mod 4)`; exposed for cross-checking.
pub fn fourth_power_test(curve: &CurveModel, ell: u64) -> Result<bool> {
    require_prime_ge5(ell)?;
    let a = residue(curve.a(), ell);
    let m3a = (3 * (ell - a % ell)) % ell;
    if m3a == 0 {
        return Ok(true);
    }
    let g = if (ell - 1).is_multiple_of(4) { 4 } else { 2 };
    Ok(powmod(m3a, (ell - 1) / g, ell) == 1)
}

/// Classifies reduction at a prime `l >= 5`.
pub fn reduction_type(curve: &CurveModel, ell: u64) -> Result<ReductionType> {
    require_prime_ge5(ell)?;
    let a = residue(curve.a(), ell);
    let d = residue(&curve.disc_min(), ell);
    if d != 0 {
        return Ok(if hasse_coefficient(curve, ell)? != 0 {
            ReductionType::GoodOrdinary
        } else {
            ReductionType::GoodSupersingular
        });
    }
    if a == 0 {
        return Ok(ReductionType::Additive);
    }
    let b = residue(curve.b(), ell);
    // l | disc and l∤A force l∤B for l >= 5
    Ok(if split_from_residues(a, b, ell) {
        ReductionType::MultiplicativeSplit
    } else {
        ReductionType::MultiplicativeNonsplit
    })
}

/// Whether the mod-p representation is ramified at a multiplicative prime
/// `l != p`: true iff `p` does not divide `ord_l(disc_min)`.
pub fn is_ramified_at(curve: &CurveModel, p: u64, ell: u64) -> Result<bool> {
    require_prime_ge5(p)?;
    require_prime_ge5(ell)?;
    if p == ell {
        return Err(Error::PreconditionViolated("need ell != p"));
    }
    if !reduction_type(curve, ell)?.is_multiplicative() {
        return Err(Error::PreconditionViolated(
            "reduction at ell is not multiplicative",
        ));
    }
    let k = ord_at(&curve.disc_min(), ell)?;
    Ok(!(k as u64).is_multiple_of(p))
}

/// Teichmüller lifts mod `p^2` and the derived exceptional sets `S_k`.
///
/// `mu_set` is the image of `a -> a^p (mod p^2)` for `1 <= a <= p-1`, i.e.
/// the (p-1)-st roots of unity mod `p^2`. `s1_set` is
/// `{w - 24pw^2 : w in mu_set}`; for `k > 1` the exceptional set is
/// `mu_set` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeichmullerData {
    pub p: u64,
    pub p_squared: u64,
    pub mu_set: BTreeSet<u64>,
    pub s1_set: BTreeSet<u64>,
}

impl TeichmullerData {
    /// The set `S_k` (as residues mod `p^2`) for valuation `k >= 1`.
    pub fn sk_set(&self, k: u32) -> &BTreeSet<u64> {
        if k == 1 {
            &self.s1_set
        } else {
            &self.mu_set
        }
    }
}

pub fn teichmuller_data(p: u64) -> Result<TeichmullerData> {
    require_prime_ge5(p)?;
    assert!(p < (1u64 << 32), "p^2 must fit in u64");
    let p2 = p * p;
    let mu_set: BTreeSet<u64> = (1..p).map(|a| powmod(a, p, p2)).collect();
    debug_assert_eq!(mu_set.len(), (p - 1) as usize);
    let s1_set: BTreeSet<u64> = mu_set
        .iter()
        .map(|&w| {
            let w2 = (w as u128 * w as u128) % p2 as u128;
            let t = (24u128 * p as u128 % p2 as u128 * w2) % p2 as u128;
            ((w as u128 + p2 as u128 - t) % p2 as u128) as u64
        })
        .collect();
    Ok(TeichmullerData {
        p,
        p_squared: p2,
        mu_set,
        s1_set,
    })
}

/// Valuation test for the Tate-period logarithm at a split multiplicative
/// prime: with `k = ord_p(disc_min)` and `p∤k`, the valuation equals one
/// iff `disc_min / p^k (mod p^2)` avoids the exceptional set `S_k`.
pub fn l_invariant_ord_is_one(curve: &CurveModel, p: u64) -> Result<bool> {
    if reduction_type(curve, p)? != ReductionType::MultiplicativeSplit {
        return Err(Error::PreconditionViolated(
            "not split multiplicative at p",
        ));
    }
    let disc = curve.disc_min();
    let k = ord_at(&disc, p)?;
    if (k as u64).is_multiple_of(p) {
        return Err(Error::PreconditionViolated("p divides ord_p(disc)"));
    }
    let unit_part = &disc / BigInt::from(p).pow(k);
    let r = residue(&unit_part, p * p);
    Ok(!teichmuller_data(p)?.sk_set(k).contains(&r))
}
