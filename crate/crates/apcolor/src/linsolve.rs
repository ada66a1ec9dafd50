//! Exact Gaussian elimination for rational linear systems.
//!
//! Pivoting is by nonzero check only: with exact arithmetic, pivot
//! magnitude is irrelevant. The solver reports the full solution-set
//! structure (unique point, affine set with a nullspace basis, or
//! inconsistent), which is what the critical-point search needs.

use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("matrix has {rows} rows but rhs has {rhs} entries")]
    DimensionMismatch { rows: usize, rhs: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolveResult {
    /// Exactly one solution.
    Unique(Vec<Rational>),
    /// An affine solution set: `particular + span(nullspace_basis)`.
    Affine {
        particular: Vec<Rational>,
        nullspace_basis: Vec<Vec<Rational>>,
    },
    /// No solution.
    Inconsistent,
}

impl LinearSolveResult {
    pub fn particular(&self) -> Option<&[Rational]> {
        match self {
            LinearSolveResult::Unique(p) => Some(p),
            LinearSolveResult::Affine { particular, .. } => Some(particular),
            LinearSolveResult::Inconsistent => None,
        }
    }
}

/// Solve `A x = b` exactly. `A` is given row-major; all rows must share
/// the length of the variable vector.
pub fn solve_linear(
    a: &[Vec<Rational>],
    b: &[Rational],
) -> Result<LinearSolveResult, SolveError> {
    let rows = a.len();
    if rows != b.len() {
        return Err(SolveError::DimensionMismatch { rows, rhs: b.len() });
    }
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    if a.iter().any(|r| r.len() != cols) {
        return Err(SolveError::RaggedMatrix);
    }

    // augmented matrix, reduced to row echelon form in place
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;

    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip().expect("pivot is nonzero");
        for c in col..=cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivot_col_of_row.push(col);
        pivot_row_of_col[col] = Some(rank);
        rank += 1;
    }

    // any zero row with nonzero rhs is a contradiction
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return Ok(LinearSolveResult::Inconsistent);
        }
    }

    // particular solution: free variables fixed at 0
    let mut particular = vec![Rational::zero(); cols];
    for (row, &col) in pivot_col_of_row.iter().enumerate() {
        particular[col] = m[row][cols].clone();
    }

    let free_cols: Vec<usize> = (0..cols).filter(|c| pivot_row_of_col[*c].is_none()).collect();
    if free_cols.is_empty() {
        return Ok(LinearSolveResult::Unique(particular));
    }

    let mut basis = Vec::with_capacity(free_cols.len());
    for &free in &free_cols {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            v[col] = -&m[row][free];
        }
        basis.push(v);
    }
    Ok(LinearSolveResult::Affine {
        particular,
        nullspace_basis: basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn mat(rows: &[&[Rational]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
            .collect()
    }

    #[test]
    fn identity_system() {
        let a = mat(&[&[rat!(1), rat!(0)], &[rat!(0), rat!(1)]]);
        let b = vec![rat!(1, 2), rat!(1, 3)];
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolveResult::Unique(vec![rat!(1, 2), rat!(1, 3)])
        );
    }

    #[test]
    fn one_equation_two_unknowns() {
        let a = mat(&[&[rat!(1), rat!(1)]]);
        let b = vec![rat!(1)];
        match solve_linear(&a, &b).unwrap() {
            LinearSolveResult::Affine {
                particular,
                nullspace_basis,
            } => {
                assert_eq!(particular, vec![rat!(1), rat!(0)]);
                assert_eq!(nullspace_basis.len(), 1);
                // basis spans (1, -1): exact null vector
                let v = &nullspace_basis[0];
                assert_eq!(mat_vec(&a, v), vec![rat!(0)]);
                assert_eq!(&v[0] * &rat!(-1), v[1]);
            }
            other => panic!("expected affine set, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_rows() {
        let a = mat(&[&[rat!(1), rat!(1)], &[rat!(1), rat!(1)]]);
        let b = vec![rat!(1), rat!(2)];
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolveResult::Inconsistent
        );
    }

    #[test]
    fn residual_is_exactly_zero() {
        // a few fixed systems with messy fractions: residual must vanish
        let a = mat(&[
            &[rat!(2, 3), rat!(-1, 7), rat!(5)],
            &[rat!(1, 2), rat!(1, 2), rat!(-3, 11)],
            &[rat!(0), rat!(4, 9), rat!(1, 13)],
        ]);
        let b = vec![rat!(1), rat!(-2, 5), rat!(7, 3)];
        match solve_linear(&a, &b).unwrap() {
            LinearSolveResult::Unique(x) => assert_eq!(mat_vec(&a, &x), b),
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn zero_dimensional_system() {
        let r = solve_linear(&[], &[]).unwrap();
        assert_eq!(r, LinearSolveResult::Unique(vec![]));
    }

    #[test]
    fn dimension_mismatch() {
        let a = mat(&[&[rat!(1)]]);
        assert!(matches!(
            solve_linear(&a, &[]),
            Err(SolveError::DimensionMismatch { .. })
        ));
    }
}
