//! Classification of continuous actions on M2 preserving a faithful state.
//!
//! Every faithful state on M2 is a unitary conjugate of a Powers state
//! `omega_q`, `q in (0, 1]`: eigendecompose the density, order eigenvalues
//! descending, and set `q = sqrt(lambda_2 / lambda_1)`. Conjugating the
//! action by that unitary yields an action preserving `omega_q` itself; the
//! factorization through quantum SO(3) is then certified by the axiom,
//! density, invariance and representation-matrix checks (existence of the
//! connecting morphism follows from the universal property once the
//! certificate passes and is asserted, not constructed).

use crate::coact::{
    check_action_axiom, check_ergodic, check_invariance, check_podles, invariant_states, Action,
    InvariantFlag, PodlesReport,
};
use crate::error::{Error, Result};
use crate::fqs::{
    check_star_hom, is_faithful, orthonormal_basis, Element, FdAlgebra, LinearMap, StarHomReport,
    State,
};
use crate::instances::powers_state_m2;
use crate::mat::Mat;
use crate::rep::{
    check_admissible, check_corepresentation, check_intertwine, check_unitary, conjugation_matrix,
    extract_rep, AdmissibleReport, FdCoeff, UnitaryReport,
};
use crate::scalar::{Exact, Scalar, C64};
use crate::suq2::{verify_suite, QAlgebra, QParam, SuQ2Report};
use crate::DEFAULT_TOL;

/// Result of classifying an action on M2: the Powers parameter, the
/// conjugating unitary (gauge-fixed), ergodicity, and the certificate.
#[derive(Clone, Debug)]
pub struct Classification {
    pub q: QParam,
    pub u: Mat<C64>,
    pub ergodic: bool,
    pub certificate: Certificate,
    /// Real dimension of the invariant self-adjoint functional space; for
    /// an ergodic action with a faithful invariant state this is 1 (the
    /// invariant state is unique).
    pub invariant_state_dim: usize,
}

/// Certificate of the quantum-SO(3) factorization, numeric or exact.
#[derive(Clone, Debug)]
pub enum Certificate {
    Numeric(CertificateReport),
    Symbolic(SuQ2Report),
}

impl Certificate {
    pub fn passes(&self) -> bool {
        match self {
            Certificate::Numeric(r) => r.passes,
            Certificate::Symbolic(r) => r.passes_exactly(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub star_hom: StarHomReport,
    pub action_axiom: f64,
    pub podles: PodlesReport,
    pub powers_invariance: f64,
    pub rep_reconstruction: f64,
    pub unitary: UnitaryReport,
    pub intertwine: f64,
    pub corepresentation: f64,
    pub admissible: AdmissibleReport,
    pub passes: bool,
}

fn phase_fix_column(u: &mut Mat<C64>, col: usize) {
    // scale the column so its largest-modulus entry is real positive
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for r in 0..u.nrows() {
        let n = u.get(r, col).norm();
        if n > best_norm + 1e-12 {
            best_norm = n;
            best = r;
        }
    }
    let z = *u.get(best, col);
    if z.norm() == 0.0 {
        return;
    }
    let phase = z.conj() / z.norm();
    for r in 0..u.nrows() {
        let v = *u.get(r, col) * phase;
        u.set(r, col, v);
    }
}

/// Decomposes a faithful state on M2 as `omega(u x u*) = omega_q(x)`:
/// eigenvalues of the density in descending order give `q =
/// sqrt(lambda_2/lambda_1)`, the eigenvector matrix gives `u` (columns
/// phase-fixed; `u = 1` at the tracial point `q = 1` by convention).
pub fn classify_state(omega: &State<C64>) -> Result<(f64, Mat<C64>)> {
    if omega.algebra() != &FdAlgebra::m2() {
        return Err(Error::AlgebraMismatch("classification targets M2".into()));
    }
    let rep = is_faithful(omega);
    if !rep.faithful {
        return Err(Error::NotFaithful {
            min_eig: rep.min_eigenvalue,
        });
    }
    let rho = omega.density(0);
    let p = rho.get(0, 0).re;
    let r = rho.get(1, 1).re;
    let b = *rho.get(0, 1);
    // closed-form Hermitian 2x2 eigendecomposition; diagonal densities
    // bypass the discriminant so their eigenvalues stay bit-exact
    let (lam1, lam2) = if b.norm_sqr() == 0.0 {
        (p.max(r), p.min(r))
    } else {
        let disc = ((p - r) * (p - r) + 4.0 * b.norm_sqr()).sqrt();
        ((p + r + disc) / 2.0, (p + r - disc) / 2.0)
    };
    let scale = lam1.abs().max(1e-300);
    if (lam1 - lam2).abs() <= 1e-12 * scale {
        // tracial point: every unitary conjugates the trace to itself
        return Ok((1.0, Mat::identity(2)));
    }
    let mut u = Mat::<C64>::zeros(2, 2);
    if b.norm() <= 1e-15 * scale {
        // already diagonal: order by descending eigenvalue
        if p >= r {
            u = Mat::identity(2);
        } else {
            u.set(0, 1, C64::new(1.0, 0.0));
            u.set(1, 0, C64::new(1.0, 0.0));
        }
    } else {
        for (col, lam) in [(0usize, lam1), (1usize, lam2)] {
            // (b, lam - p) is an eigenvector; fall back to the second form
            // when it degenerates
            let (v0, v1) = if (lam - p).abs() >= (lam - r).abs() {
                (b, C64::new(lam - p, 0.0))
            } else {
                (C64::new(lam - r, 0.0), b.conj())
            };
            let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
            u.set(0, col, v0 / norm);
            u.set(1, col, v1 / norm);
        }
        phase_fix_column(&mut u, 0);
        phase_fix_column(&mut u, 1);
    }
    let q = (lam2 / lam1).max(0.0).sqrt().min(1.0);
    Ok((q, u))
}

/// Exact classification for a diagonal rational density (the symbolic
/// route); `q` comes out as an exact rational when the eigenvalue ratio is
/// a perfect square.
pub fn classify_state_exact(omega: &State<Exact>) -> Result<(QParam, Mat<Exact>)> {
    use num_traits::Zero;
    if omega.algebra() != &FdAlgebra::m2() {
        return Err(Error::AlgebraMismatch("classification targets M2".into()));
    }
    let rho = omega.density(0);
    if !rho.get(0, 1).is_zero() || !rho.get(1, 0).is_zero() {
        return Err(Error::InvalidParameter(
            "exact classification requires a diagonal density; use the numeric route".into(),
        ));
    }
    let lam_a = rho
        .get(0, 0)
        .as_ratio()
        .ok_or_else(|| Error::InvalidParameter("density entries must be rational".into()))?
        .clone();
    let lam_b = rho
        .get(1, 1)
        .as_ratio()
        .ok_or_else(|| Error::InvalidParameter("density entries must be rational".into()))?
        .clone();
    if lam_a.is_zero() || lam_b.is_zero() {
        return Err(Error::NotFaithful { min_eig: 0.0 });
    }
    let (lam1, lam2, swap) = if lam_a >= lam_b {
        (lam_a, lam_b, false)
    } else {
        (lam_b, lam_a, true)
    };
    let ratio = Exact::from_rational(lam2 / lam1);
    let root = ratio.sqrt_nonneg().ok_or(Error::ExactSqrtUnavailable)?;
    let q_rat = root.as_ratio().ok_or(Error::ExactSqrtUnavailable)?.clone();
    let q = QParam::from_rational(q_rat)?;
    let u = if swap && !q.is_one() {
        let mut m = Mat::<Exact>::zeros(2, 2);
        m.set(0, 1, Exact::one());
        m.set(1, 0, Exact::one());
        m
    } else {
        Mat::identity(2)
    };
    Ok((q, u))
}

/// Conjugates an action on M2 by a unitary:
/// `Psi'(m) = (u* (x) 1) Psi(u m u*) (u (x) 1)`.
pub fn conjugate_action<S: Scalar>(action: &Action<S>, u: &Mat<S>, tol: f64) -> Result<Action<S>> {
    let n = action.space().clone();
    if n.blocks().len() != 1 {
        return Err(Error::AlgebraMismatch(
            "conjugation is defined on a single matrix block".into(),
        ));
    }
    let d = n.blocks()[0];
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.nrows(),
        });
    }
    let unitary_residual = u.adjoint().matmul(u).sub(&Mat::identity(d)).max_abs();
    let allowed = if S::EXACT { 0.0 } else { tol };
    if unitary_residual > allowed {
        return Err(Error::NotUnitary {
            residual: unitary_residual,
        });
    }
    let a = action.semigroup().algebra().clone();
    let u_elem = Element::new(n.clone(), vec![u.clone()])?;
    let u_star_elem = u_elem.adjoint();
    let left = u_star_elem.tensor(&a.unit());
    let right = u_elem.tensor(&a.unit());
    let images: Vec<Element<S>> = (0..n.dim())
        .map(|p| {
            let e = n.basis_element::<S>(p);
            let conjugated =
                Element::new(n.clone(), vec![u.matmul(e.block(0)).matmul(&u.adjoint())])
                    .expect("shape");
            left.mul(&action.map().apply(&conjugated)).mul(&right)
        })
        .collect();
    let map = LinearMap::from_images(&n, &n.tensor(&a), &images);
    Action::new_unchecked(n, action.semigroup().clone(), map)
}

/// Runs the full numeric certificate for an action expected to preserve
/// `omega_q`: axioms, density, invariance, and the representation-matrix
/// pipeline in an orthonormal basis of the Powers state.
pub fn so3_certificate(action: &Action<C64>, q: f64, tol: f64) -> Result<CertificateReport> {
    let star_hom = check_star_hom(action.map());
    let action_axiom = check_action_axiom(action);
    let podles = check_podles(action);
    let omega_q = powers_state_m2(q);
    let powers_invariance = check_invariance(action, &omega_q)?;
    let onb = orthonormal_basis(action.space(), &omega_q)?;
    let rep = extract_rep(action, &onb, &omega_q, tol)?;
    let coeffs = FdCoeff::new(action.semigroup().clone());
    let unitary = check_unitary(&coeffs, &rep);
    let t = conjugation_matrix(&onb)?;
    let intertwine = check_intertwine(&coeffs, &rep, &t);
    let corepresentation = check_corepresentation(&coeffs, &rep);
    let admissible = check_admissible(&rep);
    let passes = star_hom.passes(tol)
        && action_axiom <= tol
        && podles.passes
        && powers_invariance <= tol
        && rep.reconstruction_residual <= tol
        && unitary.passes(tol)
        && intertwine <= tol
        && corepresentation <= tol
        && admissible.passes();
    Ok(CertificateReport {
        star_hom,
        action_axiom,
        podles,
        powers_invariance,
        rep_reconstruction: rep.reconstruction_residual,
        unitary,
        intertwine,
        corepresentation,
        admissible,
        passes,
    })
}

/// End-to-end classification of a numeric action on M2.
///
/// Finds a faithful invariant state (refusing when none exists -- only
/// actions preserving a faithful state factor through the compact quantum
/// group), classifies it into Powers form `(q, u)`, conjugates the action,
/// certifies the factorization, and reports ergodicity.
pub fn classify_action(action: &Action<C64>, tol: f64) -> Result<Classification> {
    let report = action.validate();
    if !report.passes(tol) {
        return Err(Error::InvalidParameter(format!(
            "not an action: star-hom {:.3e}, axiom {:.3e}",
            report.star_hom.max(),
            report.action_axiom
        )));
    }
    // The refusal test comes first: without a faithful invariant state no
    // classification exists on any space, M2 or otherwise.
    let inv = invariant_states(action);
    let omega = match (&inv.flag, inv.best) {
        (InvariantFlag::Faithful, Some(state)) => state,
        _ => return Err(Error::NoFaithfulInvariantState),
    };
    if action.space() != &FdAlgebra::m2() {
        return Err(Error::AlgebraMismatch("classification targets M2".into()));
    }
    let (q, u) = classify_state(&omega)?;
    let conjugated = conjugate_action(action, &u, tol)?;
    let certificate = so3_certificate(&conjugated, q, tol)?;
    let ergodic_report = check_ergodic(action);
    Ok(Classification {
        q: QParam::from_f64(q)?,
        u,
        ergodic: ergodic_report.ergodic,
        certificate: Certificate::Numeric(certificate),
        invariant_state_dim: inv.herm_dim,
    })
}

/// Classification of the built-in symbolic action `Psi_q`: the invariant
/// state is `omega_q` itself, so `u = 1`, and the certificate is the exact
/// verification suite.
pub fn classify_builtin_psi_q(q: QParam) -> Result<Classification> {
    let alg = QAlgebra::<Exact>::new(q);
    let omega = crate::suq2::powers_state_object(&alg);
    let (q_out, u_exact) = classify_state_exact(&omega)?;
    let report = verify_suite(&alg)?;
    let fixed_dim = report.fixed_dim;
    Ok(Classification {
        q: q_out,
        u: u_exact.convert(|z: &Exact| z.to_c64()),
        ergodic: fixed_dim == 1,
        certificate: Certificate::Symbolic(report),
        invariant_state_dim: if fixed_dim == 1 { 1 } else { 0 },
    })
}

/// Convenience wrapper with the default tolerance.
pub fn classify_action_default(action: &Action<C64>) -> Result<Classification> {
    classify_action(action, DEFAULT_TOL)
}
