//! Rank, nullspace and solve primitives with two backends.
//!
//! Exact scalars get Gaussian elimination with exact zero tests; numeric
//! scalars get SVD-based decisions with a relative singular-value threshold
//! (`rel_tol * sigma_max`). Generic callers dispatch on [`Scalar::EXACT`].

use nalgebra::DMatrix;

use crate::mat::Mat;
use crate::scalar::{Scalar, C64};

/// Default relative threshold for numeric rank decisions.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Reduced row echelon form in place; returns pivot column indices.
/// Exact scalars only (pivoting on exact nonzero entries).
pub fn rref_exact<S: Scalar>(m: &mut Mat<S>) -> Vec<usize> {
    debug_assert!(S::EXACT);
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let a = m.get(r, j).clone();
                let b = m.get(pr, j).clone();
                m.set(r, j, b);
                m.set(pr, j, a);
            }
        }
        let inv = m.get(r, c).inv().expect("pivot is nonzero");
        for j in 0..cols {
            m.set(r, j, inv.mul(m.get(r, j)));
        }
        for i in 0..rows {
            if i != r && !m.get(i, c).is_zero() {
                let f = m.get(i, c).clone();
                for j in 0..cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Numeric rank: number of singular values above `rel_tol * sigma_max`.
pub fn rank_numeric(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    rank_numeric_floored(m, rel_tol, 0.0)
}

/// Numeric rank with a scale floor: the threshold is taken relative to
/// `max(sigma_max, floor)`. Needed when the matrix is a difference of
/// nearly equal quantities, so that rounding noise does not masquerade as
/// full rank.
pub fn rank_numeric_floored(m: &DMatrix<C64>, rel_tol: f64, floor: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max).max(floor);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Rank of `m`, exact or numeric depending on the scalar.
pub fn rank<S: Scalar>(m: &Mat<S>, rel_tol: f64) -> usize {
    rank_floored(m, rel_tol, 0.0)
}

/// Rank with a numeric scale floor (ignored in the exact regime).
pub fn rank_floored<S: Scalar>(m: &Mat<S>, rel_tol: f64, floor: f64) -> usize {
    if S::EXACT {
        let mut work = m.clone();
        rref_exact(&mut work).len()
    } else {
        rank_numeric_floored(&m.to_na(), rel_tol, floor)
    }
}

/// Basis of the right nullspace of an exact matrix.
pub fn nullspace_exact<S: Scalar>(m: &Mat<S>) -> Vec<Vec<S>> {
    let mut work = m.clone();
    let pivots = rref_exact(&mut work);
    let cols = m.ncols();
    let mut basis = Vec::new();
    let mut pivot_of_col = vec![usize::MAX; cols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = r;
    }
    for free in 0..cols {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = work.get(r, free).neg();
        }
        basis.push(v);
    }
    basis
}

/// Basis of the right nullspace of a numeric matrix.
pub fn nullspace_numeric(m: &DMatrix<C64>, rel_tol: f64) -> Vec<Vec<C64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the thin SVD carries a full V factor.
    let rows = m.nrows().max(cols);
    let padded = DMatrix::from_fn(rows, cols, |r, c| {
        if r < m.nrows() {
            m[(r, c)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let mut basis = Vec::new();
    for k in 0..cols {
        let s = if k < sv.len() { sv[k] } else { 0.0 };
        if smax == 0.0 || s <= rel_tol * smax {
            // Column k of V is the conjugate of row k of V^H.
            basis.push((0..cols).map(|i| v_t[(k, i)].conj()).collect());
        }
    }
    basis
}

/// Nullspace basis with backend dispatch. The numeric branch materializes
/// vectors through `C64`, which is lossless there by construction.
pub fn nullspace<S: Scalar>(m: &Mat<S>, rel_tol: f64) -> Vec<Vec<S>> {
    if S::EXACT {
        nullspace_exact(m)
    } else {
        nullspace_numeric(&m.to_na(), rel_tol)
            .into_iter()
            .map(|v| v.into_iter().map(|z| c64_to_scalar::<S>(z)).collect())
            .collect()
    }
}

fn c64_to_scalar<S: Scalar>(z: C64) -> S {
    debug_assert!(!S::EXACT, "numeric backend reached with exact scalars");
    s_from_f64::<S>(z.re).add(&S::i().mul(&s_from_f64::<S>(z.im)))
}

fn s_from_f64<S: Scalar>(x: f64) -> S {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    // Exact binary expansion of the f64, so the numeric scalar round-trips.
    let r =
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)));
    S::from_big_ratio(&r)
}

/// Solves `A X = B` for square exact `A`; `None` when singular.
pub fn solve_square_exact<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Option<Mat<S>> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.nrows(), n);
    let bc = b.ncols();
    let mut aug = Mat::from_fn(n, n + bc, |r, c| {
        if c < n {
            a.get(r, c).clone()
        } else {
            b.get(r, c - n).clone()
        }
    });
    let pivots = rref_exact(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(Mat::from_fn(n, bc, |r, c| aug.get(r, n + c).clone()))
}

/// Solves `A X = B` with backend dispatch (numeric path: SVD solve).
pub fn solve_square<S: Scalar>(a: &Mat<S>, b: &Mat<S>, rel_tol: f64) -> Option<Mat<S>> {
    if S::EXACT {
        solve_square_exact(a, b)
    } else {
        let na = a.to_na();
        let svd = na.svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let smin = svd.singular_values.iter().copied().fold(f64::MAX, f64::min);
        if smax == 0.0 || smin <= rel_tol * smax {
            return None;
        }
        let x = svd.solve(&b.to_na(), 0.0).ok()?;
        Some(Mat::from_fn(x.nrows(), x.ncols(), |r, c| {
            c64_to_scalar::<S>(x[(r, c)])
        }))
    }
}

/// Smallest and largest singular values of a numeric matrix.
pub fn singular_range(m: &DMatrix<C64>) -> (f64, f64) {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if sv.is_empty() {
        (0.0, 0.0)
    } else {
        (smin, smax)
    }
}

/// Eigenvalue range of a Hermitian matrix (symmetrized before decomposition).
pub fn hermitian_eigen_range(m: &DMatrix<C64>) -> (f64, f64) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let max = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn exact_rank_and_nullspace() {
        // rows: (1,2,3), (2,4,6), (0,1,1) -> rank 2, nullspace dim 1
        let m = Mat::<Exact>::from_rows(vec![
            vec![Exact::from_i64(1), Exact::from_i64(2), Exact::from_i64(3)],
            vec![Exact::from_i64(2), Exact::from_i64(4), Exact::from_i64(6)],
            vec![Exact::from_i64(0), Exact::from_i64(1), Exact::from_i64(1)],
        ]);
        assert_eq!(rank(&m, RANK_REL_TOL), 2);
        let ns = nullspace_exact(&m);
        assert_eq!(ns.len(), 1);
        // Check M v = 0 exactly.
        for r in 0..3 {
            let mut acc = Exact::zero();
            for c in 0..3 {
                acc = acc.add(&m.get(r, c).mul(&ns[0][c]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn numeric_rank_and_nullspace() {
        let m = Mat::<C64>::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)],
            vec![C64::new(2.0, 0.0), C64::new(4.0, 0.0), C64::new(6.0, 0.0)],
        ]);
        assert_eq!(rank(&m, RANK_REL_TOL), 1);
        let ns = nullspace(&m, RANK_REL_TOL);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..3 {
                    acc += m.get(r, c) * v[c];
                }
                assert!(acc.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn exact_solve() {
        let a = Mat::<Exact>::from_rows(vec![
            vec![Exact::from_i64(2), Exact::from_i64(1)],
            vec![Exact::from_i64(1), Exact::from_i64(1)],
        ]);
        let b = Mat::<Exact>::from_rows(vec![vec![Exact::from_i64(3)], vec![Exact::from_i64(2)]]);
        let x = solve_square_exact(&a, &b).unwrap();
        assert_eq!(x.get(0, 0), &Exact::from_i64(1));
        assert_eq!(x.get(1, 0), &Exact::from_i64(1));
        let sing = Mat::<Exact>::from_rows(vec![
            vec![Exact::from_i64(1), Exact::from_i64(2)],
            vec![Exact::from_i64(2), Exact::from_i64(4)],
        ]);
        assert!(solve_square_exact(&sing, &b).is_none());
    }
}
