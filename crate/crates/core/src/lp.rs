//! Minimal exact-rational linear programming by vertex enumeration.
//!
//! Small dense problems only: minimize `c·x` subject to `Ax = b`, `x >= 0`.
//! Every basic feasible solution (choice of m linearly independent columns)
//! is enumerated; the optimum of a bounded feasible LP is attained at one
//! of them. Exact `BigRational` arithmetic throughout — this is the
//! independent verifier for the closed-form bounds, so it must not share
//! any algebra with them.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub struct LinearProgram {
    /// Objective coefficients, one per variable.
    pub objective: Vec<BigRational>,
    /// Equality rows `(coefficients, rhs)`.
    pub equalities: Vec<(Vec<BigRational>, BigRational)>,
}

/// Optimal value and an optimal vertex.
pub struct LpSolution {
    pub value: BigRational,
    pub point: Vec<BigRational>,
}

/// Solves the square system `M y = rhs` by Gaussian elimination; None if
/// singular.
fn solve_square(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for entry in aug[col].iter_mut() {
            *entry /= &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                // two rows in play; plain indices read clearer than split_at_mut
                #[allow(clippy::needless_range_loop)]
                for c in col..=n {
                    let sub = &aug[col][c] * &factor;
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

/// Minimizes the program over its bounded feasible region.
pub fn minimize(lp: &LinearProgram) -> Result<LpSolution> {
    let nvars = lp.objective.len();
    let nrows = lp.equalities.len();
    assert!(nrows >= 1 && nvars >= nrows);

    let mut best: Option<LpSolution> = None;
    // iterate over all size-nrows subsets of columns
    let mut subset: Vec<usize> = (0..nrows).collect();
    loop {
        // assemble the square basis system
        let m: Vec<Vec<BigRational>> = (0..nrows)
            .map(|r| subset.iter().map(|&c| lp.equalities[r].0[c].clone()).collect())
            .collect();
        let rhs: Vec<BigRational> = lp.equalities.iter().map(|(_, b)| b.clone()).collect();
        if let Some(basic) = solve_square(&m, &rhs) {
            if basic.iter().all(|v| !v.is_negative()) {
                let mut point = vec![BigRational::zero(); nvars];
                for (slot, &col) in subset.iter().enumerate() {
                    point[col] = basic[slot].clone();
                }
                let value: BigRational = point
                    .iter()
                    .zip(&lp.objective)
                    .map(|(x, c)| x * c)
                    .fold(BigRational::zero(), |acc, t| acc + t);
                if best.as_ref().is_none_or(|b| value < b.value) {
                    best = Some(LpSolution { value, point });
                }
            }
        }
        // next lexicographic subset
        let mut i = nrows;
        loop {
            if i == 0 {
                return best.ok_or(Error::InfeasibleConstraints);
            }
            i -= 1;
            if subset[i] != i + nvars - nrows {
                subset[i] += 1;
                for j in i + 1..nrows {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}
