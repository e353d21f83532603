//! Exact rational linear algebra and a vertex-producing feasibility solver.
//!
//! Everything here works over [`Rational`]; there is no floating point. The
//! simplex uses Bland's rule, so it terminates and always returns a basic
//! feasible solution. For convex-hull membership this is exactly a
//! Carathéodory witness: the supported points of a vertex of
//! `{μ >= 0, Σμ = 1, Σ μ_i p_i = t}` are affinely independent.

mod rational;
mod simplex;

use num_traits::{One, Signed, Zero};

pub use rational::{
    format_rational, int, lcm_of_denominators, parse_rational, positive_part, rat, snap_f64,
    to_f64, Exact, ParseRationalError, Rational,
};

/// Errors from the exact linear-algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("the linear system has no solution")]
    NoSolution,
    #[error("target lies outside the convex hull of the points")]
    Infeasible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty point set")]
    EmptyInput,
}

/// Solve `matrix · x = rhs` exactly.
///
/// When the system is consistent but underdetermined, free variables are set
/// to zero. Returns [`LpError::NoSolution`] if the system is inconsistent.
pub fn solve_exact_linear(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>, LpError> {
    if matrix.len() != rhs.len() {
        return Err(LpError::DimensionMismatch(format!(
            "{} rows but rhs has {} entries",
            matrix.len(),
            rhs.len()
        )));
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(LpError::DimensionMismatch("ragged matrix".into()));
    }

    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, cols);

    // Inconsistent iff some zero row has a nonzero rhs.
    if aug[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return Err(LpError::NoSolution);
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[row][cols].clone();
    }
    Ok(x)
}

/// Exact rank of a matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = matrix.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Reduced row echelon form on the first `cols` columns, in place. Returns
/// the pivot column of each leading row.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        let Some(found) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, found);
        let p = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Verdict of [`lp_feasible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A basic feasible point.
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Exact feasibility of `{x >= 0, a_ub·x <= b_ub, a_eq·x = b_eq}` with
/// `num_vars` variables.
pub fn lp_feasible(
    a_ub: &[Vec<Rational>],
    b_ub: &[Rational],
    a_eq: &[Vec<Rational>],
    b_eq: &[Rational],
    num_vars: usize,
) -> Result<Feasibility, LpError> {
    if a_ub.len() != b_ub.len() || a_eq.len() != b_eq.len() {
        return Err(LpError::DimensionMismatch("constraint rows vs rhs".into()));
    }
    if a_ub.iter().chain(a_eq).any(|r| r.len() != num_vars) {
        return Err(LpError::DimensionMismatch(format!("rows must have {num_vars} columns")));
    }

    // One slack per inequality row.
    let slacks = a_ub.len();
    let cols = num_vars + slacks;
    let mut rows = Vec::with_capacity(a_ub.len() + a_eq.len());
    let mut rhs = Vec::with_capacity(rows.capacity());
    for (i, (row, b)) in a_ub.iter().zip(b_ub).enumerate() {
        let mut r = row.clone();
        r.resize(cols, Rational::zero());
        r[num_vars + i] = Rational::one();
        rows.push(r);
        rhs.push(b.clone());
    }
    for (row, b) in a_eq.iter().zip(b_eq) {
        let mut r = row.clone();
        r.resize(cols, Rational::zero());
        rows.push(r);
        rhs.push(b.clone());
    }

    Ok(match simplex::phase_one(&rows, &rhs, cols) {
        Some(sol) => Feasibility::Feasible(sol.values[..num_vars].to_vec()),
        None => Feasibility::Infeasible,
    })
}

/// Vertex of the barycentric polytope: `target = Σ coefficient_i ·
/// points[support_indices[i]]` with strictly positive coefficients summing to
/// one, and the supported points affinely independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricSolution {
    pub support_indices: Vec<usize>,
    pub coefficients: Vec<Rational>,
}

impl BarycentricSolution {
    /// Check every contract of the solution against the input, exactly.
    pub fn verify(&self, points: &[Vec<i64>], target: &[i64]) -> bool {
        if self.support_indices.is_empty() || self.support_indices.len() != self.coefficients.len() {
            return false;
        }
        if self.coefficients.iter().any(|c| !c.is_positive()) {
            return false;
        }
        if self.coefficients.iter().sum::<Rational>() != Rational::one() {
            return false;
        }
        let dim = target.len();
        for axis in 0..dim {
            let combo: Rational = self
                .support_indices
                .iter()
                .zip(&self.coefficients)
                .map(|(&i, c)| c * int(points[i][axis]))
                .sum();
            if combo != int(target[axis]) {
                return false;
            }
        }
        let supported: Vec<&Vec<i64>> = self.support_indices.iter().map(|&i| &points[i]).collect();
        affinely_independent(&supported)
    }
}

/// True when the difference vectors from the first point are linearly
/// independent. A single point is always affinely independent.
pub fn affinely_independent(points: &[&Vec<i64>]) -> bool {
    let Some((first, rest)) = points.split_first() else {
        return true;
    };
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| int(a - b)).collect())
        .collect();
    rank(&diffs) == rest.len()
}

/// Find a vertex of `{μ >= 0, Σμ = 1, Σ μ_i points_i = target}`.
///
/// Duplicate points are collapsed onto their first occurrence. If the target is
/// itself one of the points the single-point solution is returned directly.
/// Returns [`LpError::Infeasible`] iff the target is outside the convex hull.
pub fn barycentric_vertex(points: &[Vec<i64>], target: &[i64]) -> Result<BarycentricSolution, LpError> {
    if points.is_empty() {
        return Err(LpError::EmptyInput);
    }
    let dim = target.len();
    if let Some(bad) = points.iter().position(|p| p.len() != dim) {
        return Err(LpError::DimensionMismatch(format!(
            "point {bad} has dimension {} but target has {dim}",
            points[bad].len()
        )));
    }

    let mut unique: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !unique.iter().any(|&j| points[j] == *p) {
            unique.push(i);
        }
    }
    if let Some(&hit) = unique.iter().find(|&&i| points[i].as_slice() == target) {
        return Ok(BarycentricSolution {
            support_indices: vec![hit],
            coefficients: vec![Rational::one()],
        });
    }

    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|axis| unique.iter().map(|&i| int(points[i][axis])).collect())
        .collect();
    rows.push(vec![Rational::one(); unique.len()]);
    let mut rhs: Vec<Rational> = target.iter().map(|&t| int(t)).collect();
    rhs.push(Rational::one());

    let sol = simplex::phase_one(&rows, &rhs, unique.len()).ok_or(LpError::Infeasible)?;
    let (support_indices, coefficients) = sol
        .basic_columns
        .iter()
        .filter(|&&j| sol.values[j].is_positive())
        .map(|&j| (unique[j], sol.values[j].clone()))
        .unzip();
    Ok(BarycentricSolution {
        support_indices,
        coefficients,
    })
}
