//! Exact linear algebra over the rationals (crate-internal).

use num_traits::Zero;

use crate::scalar::Rational;

/// Outcome of an exact rational linear solve.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum RationalSolve {
    /// Exactly one solution.
    Unique(Vec<Rational>),
    /// No solution.
    Inconsistent,
    /// A solution space of the given positive dimension.
    Underdetermined { dimension: usize },
}

/// Solves `A x = b` exactly by Gauss-Jordan elimination.
pub(crate) fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> RationalSolve {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // Augmented matrix.
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, src);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=cols {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    for row in m.iter().skip(pivot_row) {
        if !row[cols].is_zero() {
            return RationalSolve::Inconsistent;
        }
    }
    if pivot_cols.len() < cols {
        return RationalSolve::Underdetermined { dimension: cols - pivot_cols.len() };
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[r][cols].clone();
    }
    RationalSolve::Unique(x)
}

/// Whether `target` lies in the rational span of `vectors`.
pub(crate) fn in_rational_span(vectors: &[Vec<Rational>], target: &[Rational]) -> bool {
    if target.iter().all(Rational::is_zero) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    let dim = target.len();
    // Solve V^T c = target for combination coefficients c.
    let a: Vec<Vec<Rational>> = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    !matches!(solve_rational(&a, target), RationalSolve::Inconsistent)
}
