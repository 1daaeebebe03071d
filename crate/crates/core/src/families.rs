//! Membership in the nested congruence families cut out at a prime `p >= 5`:
//! the base family (good ordinary or multiplicative reduction at `p`), the
//! refinement controlling the valuation and Tate-period logarithm at `p`,
//! and the further refinement controlling valuations at primes
//! `l = ±1 (mod p)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::reduction::{l_invariant_ord_is_one, reduction_type, ReductionType};

/// Complete factorization of a nonzero discriminant: sign and prime
/// exponents, by trial division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredDiscriminant {
    pub sign: i8,
    pub factors: BTreeMap<BigUint, u32>,
}

impl FactoredDiscriminant {
    /// Multiplies the factorization back together.
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let acc = BigInt::from(acc);
        if self.sign < 0 {
            -acc
        } else {
            acc
        }
    }
}

/// Factors `disc_min(curve)` completely by trial division (exact and
/// terminating; intended for desk-scale discriminants).
pub fn factor_discriminant(curve: &CurveModel) -> Result<FactoredDiscriminant> {
    let disc = curve.disc_min();
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let sign = if disc.is_negative() { -1 } else { 1 };
    let mut n = disc.magnitude().clone();
    let mut factors = BTreeMap::new();

    let mut push = |p: BigUint, e: u32| {
        *factors.entry(p).or_insert(0) += e;
    };

    for small in [2u32, 3, 5] {
        let small = BigUint::from(small);
        let mut e = 0;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &small);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            push(small, e);
        }
    }
    // wheel over 6k±1
    let mut d = BigUint::from(5u32);
    let two = BigUint::from(2u32);
    let four = BigUint::from(4u32);
    let mut step_two = true; // 5 -> 7 -> 11 -> 13 ...
    loop {
        d = if step_two { &d + &two } else { &d + &four };
        step_two = !step_two;
        if &d * &d > n {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &d);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            push(d.clone(), e);
        }
    }
    if !n.is_one() {
        push(n, 1);
    }
    let out = FactoredDiscriminant { sign, factors };
    debug_assert_eq!(out.reconstruct(), disc);
    Ok(out)
}

/// One checked condition with its verdict; conditions that do not apply to
/// the curve's reduction type are recorded as vacuously true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub label: &'static str,
    pub holds: bool,
}

/// Verdicts for the three nested families at `p`, with per-condition
/// diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMembership {
    pub in_s0: bool,
    pub in_s1prime: bool,
    pub in_s1: bool,
    pub diagnostics: Vec<ConditionReport>,
}

/// Classifies a canonical curve into the nested families at `p`:
///
/// * base: good ordinary or multiplicative reduction at `p`;
/// * refinement at `p`: if multiplicative, `p` must not divide
///   `ord_p(disc)`, and if split the Tate-logarithm valuation test must
///   pass;
/// * refinement away from `p`: `p` must not divide `ord_l(disc)` for any
///   prime `l = ±1 (mod p)` dividing the discriminant.
pub fn classify_family(curve: &CurveModel, p: u64) -> Result<FamilyMembership> {
    let rt = reduction_type(curve, p)?;
    let in_s0 = rt == ReductionType::GoodOrdinary || rt.is_multiplicative();

    let mut ord_ok = true;
    let mut l_inv_ok = true;
    if rt.is_multiplicative() {
        let k = crate::reduction::ord_at(&curve.disc_min(), p)?;
        ord_ok = !(k as u64).is_multiple_of(p);
        if rt == ReductionType::MultiplicativeSplit {
            l_inv_ok = ord_ok && l_invariant_ord_is_one(curve, p)?;
        }
    }
    let in_s1prime = in_s0 && ord_ok && l_inv_ok;

    let mut ram_ok = true;
    if in_s1prime {
        let factored = factor_discriminant(curve)?;
        for (ell, e) in &factored.factors {
            let r = (ell % p).to_u64().expect("residue fits u64");
            if (r == 1 || r == p - 1) && (*e as u64).is_multiple_of(p) {
                ram_ok = false;
                break;
            }
        }
    }
    let in_s1 = in_s1prime && ram_ok;

    Ok(FamilyMembership {
        in_s0,
        in_s1prime,
        in_s1,
        diagnostics: vec![
            ConditionReport {
                label: "good ordinary or multiplicative at p",
                holds: in_s0,
            },
            ConditionReport {
                label: "p does not divide ord_p(disc)",
                holds: ord_ok,
            },
            ConditionReport {
                label: "Tate-logarithm valuation is one at split p",
                holds: l_inv_ok,
            },
            ConditionReport {
                label: "p does not divide ord_l(disc) for primes l = ±1 mod p",
                holds: ram_ok,
            },
        ],
    })
}

/// Which component of the mod-5 decomposition a residue pair can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mod5Class {
    GoodOrdinary,
    Nonsplit,
    Split,
    Excluded,
}

/// The mod-5 class of `(A, B)`: good ordinary iff `5∤A` and `5∤disc`;
/// nonsplit iff `A = 2, B = ±2`; split iff `A = 3, B = ±1`; excluded
/// (supersingular or additive) iff `5 | A`.
pub fn local_class_mod5(a_res: u8, b_res: u8) -> Mod5Class {
    let a = (a_res % 5) as u32;
    let b = (b_res % 5) as u32;
    if a == 0 {
        return Mod5Class::Excluded;
    }
    // disc = -16(4A^3 + 27B^2) = A^3 + 3B^2 (mod 5)
    let disc = (a.pow(3) + 3 * b * b) % 5;
    if disc != 0 {
        return Mod5Class::GoodOrdinary;
    }
    match a {
        2 => Mod5Class::Nonsplit,
        3 => Mod5Class::Split,
        _ => unreachable!("disc = 0 mod 5 with 5∤A forces A = 2 or 3 mod 5"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn curve(a: i64, b: i64) -> CurveModel {
        CurveModel::new(a, b).unwrap()
    }

    fn factors_of(a: i64, b: i64) -> (i8, Vec<(u64, u32)>) {
        let f = factor_discriminant(&curve(a, b)).unwrap();
        (
            f.sign,
            f.factors
                .iter()
                .map(|(p, e)| (p.to_u64().unwrap(), *e))
                .collect(),
        )
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factors_of(3, 1), (-1, vec![(2, 4), (3, 3), (5, 1)]));
        assert_eq!(factors_of(1, 1), (-1, vec![(2, 4), (31, 1)]));
        assert_eq!(factors_of(1, 0), (-1, vec![(2, 6)]));
        // positive discriminant: disc(-2, 0) = -16*4*(-8) = 512
        assert_eq!(factors_of(-2, 0), (1, vec![(2, 9)]));
    }

    #[test]
    fn factorization_reconstructs_on_window() {
        for c in crate::curve::HeightWindow::new(3000).curves() {
            let f = factor_discriminant(&c).unwrap();
            assert_eq!(f.reconstruct(), c.disc_min());
            for p in f.factors.keys() {
                assert!(crate::primes::is_prime(p.to_u64().unwrap()));
            }
        }
    }

    fn verdicts(a: i64, b: i64, p: u64) -> (bool, bool, bool) {
        let m = classify_family(&curve(a, b), p).unwrap();
        (m.in_s0, m.in_s1prime, m.in_s1)
    }

    #[test]
    fn classification_examples() {
        // split at 5, k = 1, valuation test passes, no primes ±1 mod 5 in disc
        assert_eq!(verdicts(3, 1, 5), (true, true, true));
        // split at 5 but k = 3 and the valuation test fails
        assert_eq!(verdicts(3, 11, 5), (true, false, false));
        // supersingular at 5
        assert_eq!(verdicts(0, 1, 5), (false, false, false));
        // good ordinary at 5; disc has 31 = 1 mod 5 with exponent 1
        assert_eq!(verdicts(1, 1, 5), (true, true, true));
    }

    #[test]
    fn s1_detects_high_valuation_at_congruent_prime() {
        // Build (A, 1) with ord_11(disc) = 5 by Hensel-lifting the root
        // A = 6 (mod 11) of 4A^3 = -27 to modulus 11^5; 11 = 1 (mod 5).
        let ord11 = |a: u64| {
            crate::reduction::ord_at(
                &crate::curve::disc_min_pair(&BigInt::from(a), &BigInt::from(1)),
                11,
            )
            .unwrap()
        };
        let mut a = 6u64;
        for e in 2..=5u32 {
            let me = 11u64.pow(e);
            a = (a..me)
                .step_by(11usize.pow(e - 1))
                .find(|&c| ord11(c) >= e)
                .unwrap();
        }
        if ord11(a) > 5 {
            a += 11u64.pow(5); // the other class mod 11^6 has ord exactly 5
        }
        assert_eq!(ord11(a), 5);
        // adding 11^6 preserves ord_11 = 5 and shifts A mod 5 by one, so
        // pick the shift with A = 1 (mod 5): good ordinary at 5
        while a % 5 != 1 {
            a += 11u64.pow(6);
        }
        assert_eq!(ord11(a), 5);
        let c = CurveModel::new(BigInt::from(a), BigInt::from(1)).unwrap();
        assert_eq!(
            reduction_type(&c, 5).unwrap(),
            ReductionType::GoodOrdinary
        );
        let verdict = classify_family(&c, 5).unwrap();
        assert!(verdict.in_s1prime);
        assert!(!verdict.in_s1, "ord_11 = 5 is divisible by p = 5");
    }

    #[test]
    fn nesting_on_window() {
        for c in crate::curve::HeightWindow::new(4000).curves() {
            for p in [5u64, 7] {
                let m = classify_family(&c, p).unwrap();
                assert!(!m.in_s1 || m.in_s1prime, "{c} p={p}");
                assert!(!m.in_s1prime || m.in_s0, "{c} p={p}");
            }
        }
    }

    #[test]
    fn twist_stability_at_5() {
        for c in crate::curve::HeightWindow::new(4000).curves() {
            let t = c.twist_minus_one();
            let mc = classify_family(&c, 5).unwrap();
            let mt = classify_family(&t, 5).unwrap();
            assert_eq!((mc.in_s0, mc.in_s1prime, mc.in_s1), (mt.in_s0, mt.in_s1prime, mt.in_s1), "{c}");
        }
    }

    #[test]
    fn s0_consistency_random_curves() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        let mut checked = 0;
        while checked < 10_000 {
            let a = rng.gen_range(-300i64..=300);
            let b = rng.gen_range(-2000i64..=2000);
            let Ok(c) = CurveModel::new(a, b) else {
                continue;
            };
            checked += 1;
            let rt = reduction_type(&c, 5).unwrap();
            let expect = matches!(
                rt,
                ReductionType::GoodOrdinary
                    | ReductionType::MultiplicativeSplit
                    | ReductionType::MultiplicativeNonsplit
            );
            assert_eq!(classify_family(&c, 5).unwrap().in_s0, expect, "{c}");
        }
    }

    #[test]
    fn s0_is_exactly_5_not_dividing_a_below_1e5() {
        for c in crate::curve::HeightWindow::new(100_000).curves() {
            let m = classify_family(&c, 5).unwrap();
            let five_ndiv_a = crate::reduction::residue(c.a(), 5) != 0;
            assert_eq!(m.in_s0, five_ndiv_a, "{c}");
        }
    }

    #[test]
    fn mod5_class_table() {
        use Mod5Class::*;
        assert_eq!(local_class_mod5(2, 3), Nonsplit);
        assert_eq!(local_class_mod5(3, 4), Split);
        assert_eq!(local_class_mod5(0, 1), Excluded);
        let mut counts = std::collections::HashMap::new();
        for a in 0..5u8 {
            for b in 0..5u8 {
                *counts.entry(local_class_mod5(a, b)).or_insert(0u32) += 1;
            }
        }
        assert_eq!(counts[&GoodOrdinary], 16);
        assert_eq!(counts[&Nonsplit], 2);
        assert_eq!(counts[&Split], 2);
        assert_eq!(counts[&Excluded], 5);
    }

    #[test]
    fn diagnostics_identify_failing_condition() {
        let m = classify_family(&curve(3, 11), 5).unwrap();
        assert!(m.in_s0 && !m.in_s1prime);
        let failed: Vec<_> = m
            .diagnostics
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.label)
            .collect();
        assert_eq!(failed, vec!["Tate-logarithm valuation is one at split p"]);
    }
}
