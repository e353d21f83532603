//! Phase-one simplex over the rationals with Bland's anti-cycling rule.
//!
//! Only feasibility is needed by the rest of the crate, so the solver works on
//! `{y >= 0 : A y = b}` and returns a basic feasible solution. Artificial
//! variables are never stored: once one leaves the basis it can never re-enter,
//! so their tableau columns carry no information we use.

use num_traits::{Signed, Zero};

use super::Rational;

/// Basic feasible solution of `{y >= 0 : A y = b}`.
#[derive(Debug, Clone)]
pub(crate) struct BasicSolution {
    pub values: Vec<Rational>,
    /// Structural columns that ended in the basis (some may sit at zero).
    pub basic_columns: Vec<usize>,
}

/// Run phase one on the equality system. Returns `None` when infeasible.
pub(crate) fn phase_one(matrix: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Option<BasicSolution> {
    let rows = matrix.len();
    debug_assert_eq!(rows, rhs.len());

    // Tableau row layout: cols structural coefficients followed by the rhs.
    let mut tableau: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<Rational> = row.to_vec();
            r.push(b.clone());
            if b.is_negative() {
                for v in r.iter_mut() {
                    *v = -v.clone();
                }
            }
            r
        })
        .collect();

    // None marks an artificial variable still in the basis. Artificial i has
    // index cols + i for Bland tie-breaking.
    let mut basis: Vec<Option<usize>> = vec![None; rows];

    // Reduced costs of the phase-one objective (sum of artificials); the last
    // entry holds minus the current objective value.
    let mut cost = vec![Rational::zero(); cols + 1];
    for row in &tableau {
        for (c, v) in cost.iter_mut().zip(row) {
            *c -= v;
        }
    }

    let basis_key = |b: &Option<usize>, i: usize| b.unwrap_or(cols + i);

    while let Some(entering) = (0..cols).find(|&j| cost[j].is_negative()) {

        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            let a = &row[entering];
            if !a.is_positive() {
                continue;
            }
            let ratio = &row[cols] / a;
            let better = match &leaving {
                None => true,
                Some((li, best)) => {
                    ratio < *best || (ratio == *best && basis_key(&basis[i], i) < basis_key(&basis[*li], *li))
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // The phase-one objective is bounded below by zero, so a pivot row exists.
        let (pivot_row, _) = leaving.expect("phase-one objective is bounded");

        pivot(&mut tableau, &mut cost, pivot_row, entering);
        basis[pivot_row] = Some(entering);
    }

    if !cost[cols].is_zero() {
        return None;
    }

    let mut values = vec![Rational::zero(); cols];
    let mut basic_columns = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        if let Some(j) = *b {
            values[j] = tableau[i][cols].clone();
            basic_columns.push(j);
        }
    }
    basic_columns.sort_unstable();
    Some(BasicSolution { values, basic_columns })
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], pivot_row: usize, col: usize) {
    let pivot_value = tableau[pivot_row][col].clone();
    for v in tableau[pivot_row].iter_mut() {
        *v /= &pivot_value;
    }
    let normalized = tableau[pivot_row].clone();

    for (i, row) in tableau.iter_mut().enumerate() {
        if i == pivot_row || row[col].is_zero() {
            continue;
        }
        let factor = row[col].clone();
        for (v, p) in row.iter_mut().zip(&normalized) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for (v, p) in cost.iter_mut().zip(&normalized) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}
