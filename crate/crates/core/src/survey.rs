//! Mass-enumeration harness: sweep every canonical curve below a height
//! bound, classify each at a prime `p`, and aggregate counters that can be
//! compared against the exact densities.
//!
//! The sweep is partitioned into contiguous A-strips, one worker per
//! strip, each strip owning the full B-range; worker-local counters merge
//! by componentwise addition at the end, so the result and its content
//! digest are independent of the worker count. The inner loop works on
//! machine integers (the discriminant of any curve below height 2^64 fits
//! in an i128).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::curve::HeightWindow;
use crate::densities::{mu_s0, mu_s1prime_5, mu_s1_5};
use crate::error::{Error, Result};
use crate::primes::{is_prime, powmod, primes_congruent_pm1};
use crate::reduction::teichmuller_data;

/// Mergeable sweep counters: reduction classes at `p`, family membership,
/// and the pairs skipped by the admission filter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurveyCounters {
    pub total: u64,
    pub good_ordinary: u64,
    pub good_supersingular: u64,
    pub mult_split: u64,
    pub mult_nonsplit: u64,
    pub additive: u64,
    pub s0: u64,
    pub s1_prime: u64,
    pub s1: u64,
    pub skipped_singular: u64,
    pub skipped_nonminimal: u64,
}

impl SurveyCounters {
    /// Componentwise addition; associative and commutative.
    pub fn merge(&mut self, other: &SurveyCounters) {
        self.total += other.total;
        self.good_ordinary += other.good_ordinary;
        self.good_supersingular += other.good_supersingular;
        self.mult_split += other.mult_split;
        self.mult_nonsplit += other.mult_nonsplit;
        self.additive += other.additive;
        self.s0 += other.s0;
        self.s1_prime += other.s1_prime;
        self.s1 += other.s1;
        self.skipped_singular += other.skipped_singular;
        self.skipped_nonminimal += other.skipped_nonminimal;
    }

    pub fn class_sum(&self) -> u64 {
        self.good_ordinary
            + self.good_supersingular
            + self.mult_split
            + self.mult_nonsplit
            + self.additive
    }
}

/// Exact reference densities the sweep is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDensities {
    pub s0: BigRational,
    /// Defined for p = 5 only.
    pub s1_prime: Option<BigRational>,
    /// Certified lower bound, p = 5 only.
    pub s1_lower: Option<BigRational>,
}

/// Outcome of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyReport {
    pub max_height: u64,
    pub prime: u64,
    pub counters: SurveyCounters,
    pub reference: ReferenceDensities,
    pub wall_time_ms: u128,
    pub workers: usize,
    /// SHA-256 over (max_height, prime, counters); independent of the
    /// worker count and wall time.
    pub digest: String,
}

impl SurveyReport {
    pub fn empirical_s0(&self) -> Option<BigRational> {
        self.empirical(self.counters.s0)
    }

    pub fn empirical_s1_prime(&self) -> Option<BigRational> {
        self.empirical(self.counters.s1_prime)
    }

    pub fn empirical_s1(&self) -> Option<BigRational> {
        self.empirical(self.counters.s1)
    }

    fn empirical(&self, count: u64) -> Option<BigRational> {
        if self.counters.total == 0 {
            None
        } else {
            Some(BigRational::new(
                BigInt::from(count),
                BigInt::from(self.counters.total),
            ))
        }
    }

    /// |empirical s0 density - exact|; None for an empty sweep.
    pub fn s0_delta(&self) -> Option<BigRational> {
        let emp = self.empirical_s0()?;
        let d = emp - &self.reference.s0;
        Some(if d < BigRational::zero() { -d } else { d })
    }
}

fn digest_of(max_height: u64, prime: u64, c: &SurveyCounters) -> String {
    let content = format!(
        "ecb-survey-v1|X={max_height}|p={prime}|total={}|go={}|gs={}|ms={}|mn={}|ad={}|s0={}|s1p={}|s1={}|sing={}|nonmin={}",
        c.total,
        c.good_ordinary,
        c.good_supersingular,
        c.mult_split,
        c.mult_nonsplit,
        c.additive,
        c.s0,
        c.s1_prime,
        c.s1,
        c.skipped_singular,
        c.skipped_nonminimal,
    );
    let hash = Sha256::digest(content.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Shared read-only classification tables for one prime.
struct PrimeTables {
    p: u64,
    p2: u64,
    /// quadratic residues mod p (index by residue)
    qr: Vec<bool>,
    /// Hasse coefficient by (a mod p, b mod p), present for small p
    hasse: Option<Vec<u64>>,
    /// S_1 and S_{k>1} membership mod p^2
    s1_set: Vec<u64>,
    mu_set: Vec<u64>,
    /// primes l = ±1 (mod p) with l^p small enough that ord_l can reach p
    s1_candidates: Vec<u64>,
}

impl PrimeTables {
    fn build(p: u64, window: &HeightWindow) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let mut qr = vec![false; p as usize];
        for x in 0..p {
            qr[(x * x % p) as usize] = true;
        }
        let hasse = (p <= 1024).then(|| {
            let mut t = vec![0u64; (p * p) as usize];
            for a in 0..p {
                for b in 0..p {
                    t[(a * p + b) as usize] = hasse_coefficient_residues(a, b, p);
                }
            }
            t
        });
        let td = teichmuller_data(p)?;
        // the largest |disc| in the window bounds which primes can have
        // valuation >= p; all other valuations are < p, hence prime to p
        let (amax, bmax) = (
            window.a_bound().unwrap_or(0) as i128,
            window.b_bound().unwrap_or(0) as i128,
        );
        let disc_max = 16 * (4 * amax.pow(3) + 27 * bmax.pow(2));
        let sieve_limit = num_integer::Roots::nth_root(&(disc_max.max(0) as u128), p as u32) as u64 + 1;
        let s1_candidates = primes_congruent_pm1(p, sieve_limit)
            .into_iter()
            .filter(|&l| {
                let mut power = 1i128;
                for _ in 0..p {
                    power = power.saturating_mul(l as i128);
                }
                power <= disc_max
            })
            .collect();
        Ok(PrimeTables {
            p,
            p2: p * p,
            qr,
            hasse,
            s1_set: td.s1_set.into_iter().collect(),
            mu_set: td.mu_set.into_iter().collect(),
            s1_candidates,
        })
    }

    fn hasse_at(&self, a: u64, b: u64) -> u64 {
        match &self.hasse {
            Some(t) => t[(a * self.p + b) as usize],
            None => hasse_coefficient_residues(a, b, self.p),
        }
    }

    fn sk_contains(&self, k: u32, residue: u64) -> bool {
        let set = if k == 1 { &self.s1_set } else { &self.mu_set };
        set.binary_search(&residue).is_ok()
    }
}

/// Coefficient of x^(p-1) in (x^3 + ax + b)^((p-1)/2) mod p from residues.
fn hasse_coefficient_residues(a: u64, b: u64, p: u64) -> u64 {
    let m = (p - 1) / 2;
    let mut fact = vec![1u64; m as usize + 1];
    for i in 1..=m as usize {
        fact[i] = fact[i - 1] * (i as u64) % p;
    }
    let inv = |x: u64| powmod(x, p - 2, p);
    let mut acc = 0u64;
    for i in m.div_ceil(2)..=((p - 1) / 3).min(m) {
        let j = p - 1 - 3 * i;
        let k = 2 * i - m;
        let multinomial =
            fact[m as usize] * inv(fact[i as usize] * fact[j as usize] % p * fact[k as usize] % p) % p;
        acc = (acc + multinomial * powmod(a, j, p) % p * powmod(b, k, p) % p) % p;
    }
    acc
}

fn mod_i128(x: i128, m: u64) -> u64 {
    let r = x % m as i128;
    (if r < 0 { r + m as i128 } else { r }) as u64
}

fn ord_i128(mut n: i128, l: u64) -> u32 {
    debug_assert!(n != 0);
    let l = l as i128;
    let mut e = 0;
    while n % l == 0 {
        n /= l;
        e += 1;
    }
    e
}

/// Minimality of (a, b) over machine integers: no d >= 2 with d^4 | a and
/// d^6 | b.
fn is_minimal_i64(a: i64, b: i64) -> bool {
    if a == 0 && b == 0 {
        return true;
    }
    let mut d: i64 = 2;
    loop {
        let d4 = d * d * d * d;
        let within_a = a != 0 && d4 <= a.abs();
        let within_b = a == 0 && d4 * d * d <= b.abs();
        if !within_a && !within_b {
            return true;
        }
        if a % d4 == 0 && b % (d4 * d * d) == 0 {
            return false;
        }
        d += 1;
    }
}

fn sweep_strip(tables: &PrimeTables, a_range: std::ops::RangeInclusive<i64>, bmax: i64) -> SurveyCounters {
    let p = tables.p;
    let mut c = SurveyCounters::default();
    for a in a_range {
        let a3_term = 4 * (a as i128).pow(3);
        let ap = mod_i128(a as i128, p);
        for b in -bmax..=bmax {
            let disc = -16 * (a3_term + 27 * (b as i128).pow(2));
            if disc == 0 {
                c.skipped_singular += 1;
                continue;
            }
            if !is_minimal_i64(a, b) {
                c.skipped_nonminimal += 1;
                continue;
            }
            c.total += 1;

            let dp = mod_i128(disc, p);
            let mut in_s0 = false;
            let mut in_s1p = false;
            if dp != 0 {
                if tables.hasse_at(ap, mod_i128(b as i128, p)) != 0 {
                    c.good_ordinary += 1;
                    in_s0 = true;
                    in_s1p = true;
                } else {
                    c.good_supersingular += 1;
                }
            } else if ap != 0 {
                in_s0 = true;
                let minus_2ab = mod_i128(-(2 * a as i128 * b as i128), p);
                let split = tables.qr[minus_2ab as usize];
                if split {
                    c.mult_split += 1;
                } else {
                    c.mult_nonsplit += 1;
                }
                let k = ord_i128(disc, p);
                if !(k as u64).is_multiple_of(p) {
                    if split {
                        let unit = mod_i128(disc / (p as i128).pow(k), tables.p2);
                        in_s1p = !tables.sk_contains(k, unit);
                    } else {
                        in_s1p = true;
                    }
                }
            } else {
                c.additive += 1;
            }

            if in_s0 {
                c.s0 += 1;
            }
            if in_s1p {
                c.s1_prime += 1;
                let mut in_s1 = true;
                for &l in &tables.s1_candidates {
                    if disc % l as i128 == 0 {
                        let e = ord_i128(disc, l);
                        if (e as u64).is_multiple_of(p) {
                            in_s1 = false;
                            break;
                        }
                    }
                }
                if in_s1 {
                    c.s1 += 1;
                }
            }
        }
    }
    c
}

/// Sweeps all canonical curves with `H < max_height`, classifying each at
/// `p` with `workers` parallel strips. Empty sweeps are allowed.
pub fn run_survey(max_height: u64, p: u64, workers: usize) -> Result<SurveyReport> {
    let started = std::time::Instant::now();
    let window = HeightWindow::new(max_height);
    let tables = PrimeTables::build(p, &window)?;
    let workers = workers.max(1);

    let counters = match (window.a_bound(), window.b_bound()) {
        (Some(amax), Some(bmax)) => {
            let (amax, bmax) = (amax as i64, bmax as i64);
            let a_values = 2 * amax + 1;
            let strips = workers.min(a_values as usize).max(1);
            let chunk = a_values / strips as i64;
            let extra = a_values % strips as i64;
            let mut ranges = Vec::with_capacity(strips);
            let mut lo = -amax;
            for i in 0..strips {
                let len = chunk + if (i as i64) < extra { 1 } else { 0 };
                ranges.push(lo..=lo + len - 1);
                lo += len;
            }
            let mut partials: Vec<SurveyCounters> = Vec::with_capacity(strips);
            std::thread::scope(|scope| {
                let handles: Vec<_> = ranges
                    .into_iter()
                    .map(|r| scope.spawn(|| sweep_strip(&tables, r, bmax)))
                    .collect();
                for h in handles {
                    partials.push(h.join().expect("sweep worker panicked"));
                }
            });
            let mut merged = SurveyCounters::default();
            for part in &partials {
                merged.merge(part);
            }
            merged
        }
        _ => SurveyCounters::default(),
    };

    let reference = ReferenceDensities {
        s0: mu_s0(p)?,
        s1_prime: (p == 5).then(mu_s1prime_5),
        s1_lower: (p == 5).then(|| mu_s1_5(10_000).lo()),
    };
    let digest = digest_of(max_height, p, &counters);
    Ok(SurveyReport {
        max_height,
        prime: p,
        counters,
        reference,
        wall_time_ms: started.elapsed().as_millis(),
        workers,
        digest,
    })
}
