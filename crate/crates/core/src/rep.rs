//! Representation-matrix extraction and its certificates.
//!
//! For an action `Psi` and a basis orthonormal with respect to the GNS
//! product of an invariant faithful state, the matrix `u` with
//! `Psi(e_j) = sum_i e_i (x) u_{i,j}` is a representation of the semigroup:
//! unitary, intertwined with the conjugation matrix `T` (`e_i* = sum_p
//! tau_{p,i} e_p`), and admissible (entrywise adjoint and transpose both
//! invertible). Those checks are written once over [`CoeffAlgebra`], so the
//! numeric finite-dimensional route and the exact polynomial route share
//! them.

use crate::coact::Action;
use crate::error::{Error, Result};
use crate::fqs::{apply_functional_left, gns_inner_product, gram_residual, Element, State};
use crate::linalg;
use crate::mat::Mat;
use crate::qsg::QSemigroup;
use crate::scalar::Scalar;

/// The coefficient algebra that representation-matrix entries live in,
/// together with its comultiplication and tensor square.
pub trait CoeffAlgebra<S: Scalar> {
    type Elem: Clone + std::fmt::Debug;
    type Tensor: Clone + std::fmt::Debug;

    fn unit(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn adjoint(&self, a: &Self::Elem) -> Self::Elem;
    fn scale(&self, s: &S, a: &Self::Elem) -> Self::Elem;
    /// Largest coefficient magnitude (zero iff the element is zero in the
    /// exact regime).
    fn norm(&self, a: &Self::Elem) -> f64;

    fn comul(&self, a: &Self::Elem) -> Self::Tensor;
    fn tensor(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Tensor;
    fn tensor_sub(&self, x: &Self::Tensor, y: &Self::Tensor) -> Self::Tensor;
    fn tensor_norm(&self, x: &Self::Tensor) -> f64;

    /// Coordinates of a finite family over a common finite linear basis.
    fn coordinates(&self, family: &[Self::Elem]) -> Vec<Vec<S>>;
}

/// Coefficient algebra of a finite-dimensional quantum semigroup.
pub struct FdCoeff<S: Scalar> {
    semigroup: QSemigroup<S>,
}

impl<S: Scalar> FdCoeff<S> {
    pub fn new(semigroup: QSemigroup<S>) -> Self {
        FdCoeff { semigroup }
    }

    pub fn semigroup(&self) -> &QSemigroup<S> {
        &self.semigroup
    }
}

impl<S: Scalar> CoeffAlgebra<S> for FdCoeff<S> {
    type Elem = Element<S>;
    type Tensor = Element<S>;

    fn unit(&self) -> Element<S> {
        self.semigroup.algebra().unit()
    }
    fn zero(&self) -> Element<S> {
        self.semigroup.algebra().zero()
    }
    fn add(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a.add(b)
    }
    fn sub(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a.sub(b)
    }
    fn mul(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a.mul(b)
    }
    fn adjoint(&self, a: &Element<S>) -> Element<S> {
        a.adjoint()
    }
    fn scale(&self, s: &S, a: &Element<S>) -> Element<S> {
        a.scale(s)
    }
    fn norm(&self, a: &Element<S>) -> f64 {
        a.max_abs()
    }

    fn comul(&self, a: &Element<S>) -> Element<S> {
        self.semigroup.comul().apply(a)
    }
    fn tensor(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a.tensor(b)
    }
    fn tensor_sub(&self, x: &Element<S>, y: &Element<S>) -> Element<S> {
        x.sub(y)
    }
    fn tensor_norm(&self, x: &Element<S>) -> f64 {
        x.max_abs()
    }

    fn coordinates(&self, family: &[Element<S>]) -> Vec<Vec<S>> {
        family.iter().map(|e| e.coords()).collect()
    }
}

/// Representation matrix of an action in an orthonormal basis; entries live
/// in the coefficient algebra.
#[derive(Clone, Debug)]
pub struct RepMatrix<S: Scalar, E> {
    pub entries: Vec<Vec<E>>,
    /// The orthonormal basis the matrix was extracted in.
    pub basis: Vec<Element<S>>,
    /// Residual of `Psi(e_j) = sum_i e_i (x) u_{i,j}`.
    pub reconstruction_residual: f64,
    /// Invariance residual of the state used for extraction. Unitarity is
    /// only guaranteed when this vanishes; extraction itself is not.
    pub invariance_residual: f64,
}

impl<S: Scalar, E> RepMatrix<S, E> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

/// Conjugation matrix `tau` with `e_i* = sum_p tau_{p,i} e_p`, with an
/// invertibility certificate.
#[derive(Clone, Debug)]
pub struct ConjugationMatrix<S: Scalar> {
    pub tau: Mat<S>,
    /// Smallest singular value (numeric certificate of invertibility).
    pub min_singular_value: f64,
    /// Residual of the involution identity `tau . conj(tau) = 1`.
    pub involution_residual: f64,
}

/// Extracts the representation matrix of `action` in the basis `onb`,
/// orthonormal for the GNS product of `omega`.
///
/// `omega` must be faithful and `onb` orthonormal (checked against `tol`,
/// exact scalars demand zero); invariance of `omega` is *reported*, not
/// required, so that the effect of a non-invariant state on unitarity can
/// be witnessed downstream.
pub fn extract_rep<S: Scalar>(
    action: &Action<S>,
    onb: &[Element<S>],
    omega: &State<S>,
    tol: f64,
) -> Result<RepMatrix<S, Element<S>>> {
    let n_alg = action.space().clone();
    let a_alg = action.semigroup().algebra().clone();
    let n = n_alg.dim();
    if onb.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: onb.len(),
        });
    }
    let gram = gram_residual(omega, onb);
    let allowed = if S::EXACT { 0.0 } else { tol };
    if gram > allowed {
        return Err(Error::NotOrthonormal { residual: gram });
    }
    let invariance_residual = crate::coact::check_invariance(action, omega)?;

    // Functionals <e_i, .> over the canonical basis of N.
    let pairings: Vec<Vec<S>> = onb
        .iter()
        .map(|ei| {
            (0..n)
                .map(|p| gns_inner_product(omega, ei, &n_alg.basis_element(p)))
                .collect()
        })
        .collect();
    let mut entries: Vec<Vec<Element<S>>> = vec![Vec::with_capacity(n); n];
    let mut reconstruction_residual = 0.0f64;
    for ej in onb {
        let image = action.map().apply(ej);
        let mut recon = n_alg.zero::<S>().tensor(&a_alg.zero());
        for (i, phi) in pairings.iter().enumerate() {
            let uij = apply_functional_left(phi, &image, &n_alg, &a_alg);
            recon = recon.add(&onb[i].tensor(&uij));
            entries[i].push(uij);
        }
        reconstruction_residual = reconstruction_residual.max(recon.sub(&image).max_abs());
    }
    Ok(RepMatrix {
        entries,
        basis: onb.to_vec(),
        reconstruction_residual,
        invariance_residual,
    })
}

/// Solves `e_i* = sum_p tau_{p,i} e_p` for a linear basis of `N`.
pub fn conjugation_matrix<S: Scalar>(onb: &[Element<S>]) -> Result<ConjugationMatrix<S>> {
    let n = onb.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty basis".into()));
    }
    let dim = onb[0].algebra().dim();
    if dim != n {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: n,
        });
    }
    let basis_mat = Mat::from_fn(dim, n, |r, c| onb[c].coords()[r].clone());
    let adj_mat = Mat::from_fn(dim, n, |r, c| onb[c].adjoint().coords()[r].clone());
    let tau = linalg::solve_square(&basis_mat, &adj_mat, linalg::RANK_REL_TOL)
        .ok_or_else(|| Error::SingularSolve("the provided family is not a basis".into()))?;
    let (min_sv, _) = linalg::singular_range(&tau.to_na());
    let involution_residual = tau.matmul(&tau.conj()).sub(&Mat::identity(n)).max_abs();
    Ok(ConjugationMatrix {
        tau,
        min_singular_value: min_sv,
        involution_residual,
    })
}

#[derive(Clone, Debug)]
pub struct UnitaryReport {
    /// `|| u* u - 1 ||`
    pub left: f64,
    /// `|| u u* - 1 ||`
    pub right: f64,
}

impl UnitaryReport {
    pub fn max(&self) -> f64 {
        self.left.max(self.right)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

fn alg_matmul<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    x: &[Vec<A::Elem>],
    y: &[Vec<A::Elem>],
) -> Vec<Vec<A::Elem>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = coeffs.zero();
                    for k in 0..n {
                        acc = coeffs.add(&acc, &coeffs.mul(&x[i][k], &y[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Conjugate transpose `u*` of a matrix over the coefficient algebra.
fn alg_conj_transpose<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &[Vec<A::Elem>],
) -> Vec<Vec<A::Elem>> {
    let n = u.len();
    (0..n)
        .map(|i| (0..n).map(|j| coeffs.adjoint(&u[j][i])).collect())
        .collect()
}

/// Entrywise adjoint without transposition, written `u-bar`.
fn alg_entrywise_adjoint<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &[Vec<A::Elem>],
) -> Vec<Vec<A::Elem>> {
    u.iter()
        .map(|row| row.iter().map(|e| coeffs.adjoint(e)).collect())
        .collect()
}

fn alg_identity_residual<S: Scalar, A: CoeffAlgebra<S>>(coeffs: &A, m: &[Vec<A::Elem>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let target = if i == j { coeffs.unit() } else { coeffs.zero() };
            worst = worst.max(coeffs.norm(&coeffs.sub(e, &target)));
        }
    }
    worst
}

/// Unitarity residuals `u* u = 1` and `u u* = 1` in `M_n(A)`.
pub fn check_unitary<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &RepMatrix<S, A::Elem>,
) -> UnitaryReport {
    let star = alg_conj_transpose(coeffs, &u.entries);
    let left = alg_identity_residual(coeffs, &alg_matmul(coeffs, &star, &u.entries));
    let right = alg_identity_residual(coeffs, &alg_matmul(coeffs, &u.entries, &star));
    UnitaryReport { left, right }
}

/// Residual of the intertwining identity
/// `sum_i tau_{p,i} u_{i,j}* = sum_i u_{p,i} tau_{i,j}`,
/// i.e. `(T (x) 1) u-bar = u (T (x) 1)`.
pub fn check_intertwine<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &RepMatrix<S, A::Elem>,
    t: &ConjugationMatrix<S>,
) -> f64 {
    let n = u.size();
    let mut worst = 0.0f64;
    for p in 0..n {
        for j in 0..n {
            let mut lhs = coeffs.zero();
            let mut rhs = coeffs.zero();
            for i in 0..n {
                lhs = coeffs.add(
                    &lhs,
                    &coeffs.scale(t.tau.get(p, i), &coeffs.adjoint(&u.entries[i][j])),
                );
                rhs = coeffs.add(&rhs, &coeffs.scale(t.tau.get(i, j), &u.entries[p][i]));
            }
            worst = worst.max(coeffs.norm(&coeffs.sub(&lhs, &rhs)));
        }
    }
    worst
}

/// Residual of the representation identity
/// `Delta(u_{i,j}) = sum_k u_{i,k} (x) u_{k,j}`.
pub fn check_corepresentation<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &RepMatrix<S, A::Elem>,
) -> f64 {
    let n = u.size();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut res = coeffs.comul(&u.entries[i][j]);
            for k in 0..n {
                let term = coeffs.tensor(&u.entries[i][k], &u.entries[k][j]);
                res = coeffs.tensor_sub(&res, &term);
            }
            worst = worst.max(coeffs.tensor_norm(&res));
        }
    }
    worst
}

/// Admissibility of a representation matrix over a finite-dimensional
/// coefficient algebra: the entrywise adjoint `u-bar` and the transpose
/// `u^T` must both be invertible in `M_n(A)`, decided through the smallest
/// singular value of their block images.
#[derive(Clone, Debug)]
pub struct AdmissibleReport {
    pub u_bar_invertible: bool,
    pub u_transpose_invertible: bool,
    pub min_sv_u_bar: f64,
    pub min_sv_u_transpose: f64,
}

impl AdmissibleReport {
    pub fn passes(&self) -> bool {
        self.u_bar_invertible && self.u_transpose_invertible
    }
}

fn block_image_min_sv<S: Scalar>(entries: &[Vec<Element<S>>]) -> f64 {
    let n = entries.len();
    let algebra = entries[0][0].algebra().clone();
    let mut min_sv = f64::INFINITY;
    let mut max_sv = 0.0f64;
    for (b, &d) in algebra.blocks().iter().enumerate() {
        let big = Mat::from_fn(n * d, n * d, |r, c| {
            let (p, rr) = (r / d, r % d);
            let (q, cc) = (c / d, c % d);
            entries[p][q].block(b).get(rr, cc).clone()
        });
        let (lo, hi) = linalg::singular_range(&big.to_na());
        min_sv = min_sv.min(lo);
        max_sv = max_sv.max(hi);
    }
    if max_sv == 0.0 {
        0.0
    } else {
        min_sv
    }
}

pub fn check_admissible<S: Scalar>(u: &RepMatrix<S, Element<S>>) -> AdmissibleReport {
    let n = u.size();
    let u_bar: Vec<Vec<Element<S>>> = u
        .entries
        .iter()
        .map(|row| row.iter().map(|e| e.adjoint()).collect())
        .collect();
    let u_t: Vec<Vec<Element<S>>> = (0..n)
        .map(|i| (0..n).map(|j| u.entries[j][i].clone()).collect())
        .collect();
    let sv_bar = block_image_min_sv(&u_bar);
    let sv_t = block_image_min_sv(&u_t);
    let max_scale = u
        .entries
        .iter()
        .flatten()
        .map(|e| e.max_abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let threshold = 1e-9 * max_scale;
    AdmissibleReport {
        u_bar_invertible: sv_bar > threshold,
        u_transpose_invertible: sv_t > threshold,
        min_sv_u_bar: sv_bar,
        min_sv_u_transpose: sv_t,
    }
}

/// Admissibility certified by an explicit inverse: with `T` intertwining,
/// `u-bar^{-1} = (T^{-1} (x) 1) u* (T (x) 1)`; the transpose inverse is its
/// conjugate. Works over any coefficient algebra and yields exactly-zero
/// residuals in the exact regime.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub u_bar_left: f64,
    pub u_bar_right: f64,
    pub u_transpose_left: f64,
    pub u_transpose_right: f64,
}

impl WitnessReport {
    pub fn max(&self) -> f64 {
        self.u_bar_left
            .max(self.u_bar_right)
            .max(self.u_transpose_left)
            .max(self.u_transpose_right)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

pub fn check_admissible_witness<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &RepMatrix<S, A::Elem>,
    t: &ConjugationMatrix<S>,
) -> Result<WitnessReport> {
    let n = u.size();
    let tau_inv = linalg::solve_square(&t.tau, &Mat::identity(n), linalg::RANK_REL_TOL)
        .ok_or_else(|| Error::SingularSolve("conjugation matrix is singular".into()))?;
    let u_star = alg_conj_transpose(coeffs, &u.entries);
    // witness = (tau^{-1} . u* . tau) with scalar matrices acting entrywise
    let scaled: Vec<Vec<A::Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = coeffs.zero();
                    for k in 0..n {
                        for l in 0..n {
                            let s = tau_inv.get(i, k).mul(t.tau.get(l, j));
                            acc = coeffs.add(&acc, &coeffs.scale(&s, &u_star[k][l]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let u_bar = alg_entrywise_adjoint(coeffs, &u.entries);
    let left = alg_identity_residual(coeffs, &alg_matmul(coeffs, &u_bar, &scaled));
    let right = alg_identity_residual(coeffs, &alg_matmul(coeffs, &scaled, &u_bar));
    // u^T = (u-bar)*, witnessed by the conjugate transpose of the witness
    let u_t: Vec<Vec<A::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| u.entries[j][i].clone()).collect())
        .collect();
    let witness_star = alg_conj_transpose(coeffs, &scaled);
    let t_left = alg_identity_residual(coeffs, &alg_matmul(coeffs, &u_t, &witness_star));
    let t_right = alg_identity_residual(coeffs, &alg_matmul(coeffs, &witness_star, &u_t));
    Ok(WitnessReport {
        u_bar_left: left,
        u_bar_right: right,
        u_transpose_left: t_left,
        u_transpose_right: t_right,
    })
}

/// Dimension of `{ c in C^n : sum_j u_{i,j} c_j = c_i 1 }` -- the fixed
/// space of the action reconstructed from its representation matrix. For
/// an ergodic action this is 1.
pub fn fixed_dim_from_rep<S: Scalar, A: CoeffAlgebra<S>>(
    coeffs: &A,
    u: &RepMatrix<S, A::Elem>,
) -> usize {
    let n = u.size();
    let mut family: Vec<A::Elem> = Vec::with_capacity(n * n + 1);
    for row in &u.entries {
        family.extend(row.iter().cloned());
    }
    family.push(coeffs.unit());
    let coords = coeffs.coordinates(&family);
    let width = coords[0].len();
    let unit_coords = coords[n * n].clone();
    let scale = coords
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(1.0f64, f64::max);
    // rows indexed by (i, coordinate), columns by j
    let mut mat = Mat::zeros(n * width, n);
    for i in 0..n {
        for j in 0..n {
            let uc = &coords[i * n + j];
            for k in 0..width {
                let mut v = uc[k].clone();
                if i == j {
                    v = v.sub(&unit_coords[k]);
                }
                mat.set(i * width + k, j, v);
            }
        }
    }
    // The rows are differences of O(scale) data; floor the threshold.
    n - linalg::rank_floored(&mat, linalg::RANK_REL_TOL, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coact::check_ergodic;
    use crate::fqs::{orthonormal_basis, FdAlgebra};
    use crate::instances::{pauli_basis, skew_faithful_state, trivial_m2, z2_ad_sigma_z};
    use crate::scalar::C64;
    use crate::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_action_gives_identity_rep() {
        let act = trivial_m2();
        let omega = State::<C64>::tracial(act.space());
        let onb = orthonormal_basis(act.space(), &omega).unwrap();
        let u = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
        assert!(u.reconstruction_residual < 1e-12);
        assert!(u.invariance_residual < 1e-12);
        let coeffs = FdCoeff::new(act.semigroup().clone());
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { coeffs.unit() } else { coeffs.zero() };
                assert!(u.entries[i][j].sub(&target).max_abs() < 1e-12);
            }
        }
        assert!(check_unitary(&coeffs, &u).max() < 1e-12);
        assert!(check_corepresentation(&coeffs, &u) < 1e-12);
    }

    #[test]
    fn z2_rep_with_pauli_basis() {
        let act = z2_ad_sigma_z();
        let omega = State::<C64>::tracial(act.space());
        let onb = pauli_basis();
        let u = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
        assert!(u.reconstruction_residual < 1e-12);
        let coeffs = FdCoeff::new(act.semigroup().clone());
        // diagonal with values (1,1), (1,-1), (1,-1), (1,1) on (e, g)
        let expected_signs = [1.0, -1.0, -1.0, 1.0];
        for (i, row) in u.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if i != j {
                    assert!(e.max_abs() < 1e-12, "off-diagonal entry ({i},{j})");
                } else {
                    assert!((e.block(0).get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
                    assert!(
                        (e.block(1).get(0, 0) - c(expected_signs[i], 0.0)).norm() < 1e-12,
                        "entry ({i},{i}) at the nontrivial point"
                    );
                }
            }
        }
        assert!(check_unitary(&coeffs, &u).max() < 1e-12);
        assert!(check_corepresentation(&coeffs, &u) < 1e-12);

        // T = identity for a self-adjoint basis
        let t = conjugation_matrix(&onb).unwrap();
        assert!(t.tau.sub(&Mat::identity(4)).max_abs() < 1e-12);
        assert!(t.involution_residual < 1e-12);
        assert!(check_intertwine(&coeffs, &u, &t) < 1e-12);

        let adm = check_admissible(&u);
        assert!(adm.passes());
        assert!((adm.min_sv_u_bar - 1.0).abs() < 1e-9);
        assert!((adm.min_sv_u_transpose - 1.0).abs() < 1e-9);
        let witness = check_admissible_witness(&coeffs, &u, &t).unwrap();
        assert!(witness.max() < 1e-12);
    }

    #[test]
    fn non_invariant_state_breaks_unitarity() {
        let act = z2_ad_sigma_z();
        let omega = skew_faithful_state();
        let onb = orthonormal_basis(act.space(), &omega).unwrap();
        let u = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
        assert!(u.invariance_residual > 0.1);
        let coeffs = FdCoeff::new(act.semigroup().clone());
        let unitary = check_unitary(&coeffs, &u);
        assert!(unitary.left > 0.1, "left residual {}", unitary.left);
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let act = z2_ad_sigma_z();
        let omega = State::<C64>::tracial(act.space());
        let mut onb = pauli_basis();
        onb[1] = onb[1].scale(&c(2.0, 0.0));
        assert!(matches!(
            extract_rep(&act, &onb, &omega, DEFAULT_TOL),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn conjugation_matrix_powers_basis() {
        // scaled matrix units for the Powers state: tau_32 = 1/q, tau_23 = q
        // (ordering e11, e12, e21, e22)
        let q = 0.5f64;
        let m2 = FdAlgebra::m2();
        let d = (1.0 + q * q).sqrt();
        let scales = [d, d / q, d, d / q];
        let onb: Vec<Element<C64>> = (0..4)
            .map(|i| m2.basis_element::<C64>(i).scale(&c(scales[i], 0.0)))
            .collect();
        let t = conjugation_matrix(&onb).unwrap();
        assert!((t.tau.get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((t.tau.get(3, 3) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((t.tau.get(2, 1) - c(1.0 / q, 0.0)).norm() < 1e-12);
        assert!((t.tau.get(1, 2) - c(q, 0.0)).norm() < 1e-12);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 2), (3, 0)] {
            assert!(t.tau.get(i, j).norm() < 1e-12, "tau({i},{j})");
        }
        assert!(t.involution_residual < 1e-12);
        assert!(t.min_singular_value > 0.4);
    }

    #[test]
    fn rank_deficient_matrix_fails_admissibility() {
        let act = z2_ad_sigma_z();
        let a = act.semigroup().algebra().clone();
        let coeffs = FdCoeff::new(act.semigroup().clone());
        // a 2x2 matrix over A with a repeated row is not invertible
        let row = vec![coeffs.unit(), a.basis_element::<C64>(0)];
        let u = RepMatrix {
            entries: vec![row.clone(), row],
            basis: vec![],
            reconstruction_residual: 0.0,
            invariance_residual: 0.0,
        };
        let adm = check_admissible(&u);
        assert!(!adm.passes());
    }

    #[test]
    fn basis_covariance_under_scalar_unitary() {
        // rotating the basis by a scalar unitary V transforms u and T but
        // leaves every residual invariant
        let act = z2_ad_sigma_z();
        let omega = State::<C64>::tracial(act.space());
        let onb = pauli_basis();
        let coeffs = FdCoeff::new(act.semigroup().clone());

        // a fixed 4x4 unitary: discrete Fourier matrix
        let n = 4;
        let v = Mat::from_fn(n, n, |r, cc| {
            let angle = 2.0 * std::f64::consts::PI * (r * cc) as f64 / n as f64;
            c(angle.cos() / 2.0, angle.sin() / 2.0)
        });
        let rotated: Vec<Element<C64>> = (0..n)
            .map(|j| {
                let mut acc = act.space().zero::<C64>();
                for i in 0..n {
                    acc = acc.add(&onb[i].scale(v.get(i, j)));
                }
                acc
            })
            .collect();
        let u1 = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
        let u2 = extract_rep(&act, &rotated, &omega, DEFAULT_TOL).unwrap();
        let t1 = conjugation_matrix(&onb).unwrap();
        let t2 = conjugation_matrix(&rotated).unwrap();
        for (u, t) in [(&u1, &t1), (&u2, &t2)] {
            assert!(check_unitary(&coeffs, u).max() < 1e-10);
            assert!(check_intertwine(&coeffs, u, t) < 1e-10);
            assert!(check_corepresentation(&coeffs, u) < 1e-10);
            assert!(check_admissible(u).passes());
        }

        // u2 = V* u1 V as a scalar conjugation
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = coeffs.zero();
                for k in 0..n {
                    for l in 0..n {
                        let s = v.get(k, i).conj().mul(v.get(l, j));
                        acc = acc.add(&u1.entries[k][l].scale(&s));
                    }
                }
                worst = worst.max(acc.sub(&u2.entries[i][j]).max_abs());
            }
        }
        assert!(worst < 1e-10, "covariance residual {worst}");
    }

    #[test]
    fn fixed_dim_matches_action_ergodicity() {
        for act in [trivial_m2(), z2_ad_sigma_z()] {
            let omega = State::<C64>::tracial(act.space());
            let onb = orthonormal_basis(act.space(), &omega).unwrap();
            let u = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
            let coeffs = FdCoeff::new(act.semigroup().clone());
            assert_eq!(
                fixed_dim_from_rep(&coeffs, &u),
                check_ergodic(&act).fixed_dim
            );
        }
    }
}
