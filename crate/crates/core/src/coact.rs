//! Actions of quantum semigroups on finite quantum spaces: the action
//! axiom, the Podles density condition, invariant functionals, conditional
//! expectations and ergodicity.

use crate::error::{Error, Result};
use crate::fqs::{
    apply_functional_left, apply_functional_right, check_star_hom, is_faithful, FdAlgebra,
    LinearMap, StarHomReport, State,
};
use crate::linalg;
use crate::mat::Mat;
use crate::qsg::QSemigroup;
use crate::scalar::{Scalar, C64};

/// An action `Psi: N -> N (x) A` of a quantum semigroup `(A, Delta)` on the
/// finite quantum space dual to `N`.
#[derive(Clone, Debug)]
pub struct Action<S: Scalar> {
    space: FdAlgebra,
    semigroup: QSemigroup<S>,
    map: LinearMap<S>,
}

#[derive(Clone, Debug)]
pub struct ActionReport {
    pub star_hom: StarHomReport,
    pub action_axiom: f64,
    /// Kernel dimension of the action map (injectivity diagnostic).
    pub kernel_dim: usize,
}

impl ActionReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.star_hom.passes(tol) && self.action_axiom <= tol
    }
}

impl<S: Scalar> Action<S> {
    pub fn new_unchecked(
        space: FdAlgebra,
        semigroup: QSemigroup<S>,
        map: LinearMap<S>,
    ) -> Result<Self> {
        let expected = space.tensor(semigroup.algebra());
        if map.source() != &space || map.target() != &expected {
            return Err(Error::AlgebraMismatch(
                "action map must send N to N (x) A".into(),
            ));
        }
        Ok(Action {
            space,
            semigroup,
            map,
        })
    }

    pub fn new(
        space: FdAlgebra,
        semigroup: QSemigroup<S>,
        map: LinearMap<S>,
        tol: f64,
    ) -> Result<Self> {
        let a = Self::new_unchecked(space, semigroup, map)?;
        let report = a.validate();
        if !report.passes(tol) {
            return Err(Error::InvalidParameter(format!(
                "action violates the axioms (star-hom {:.3e}, action axiom {:.3e})",
                report.star_hom.max(),
                report.action_axiom
            )));
        }
        Ok(a)
    }

    pub fn space(&self) -> &FdAlgebra {
        &self.space
    }

    pub fn semigroup(&self) -> &QSemigroup<S> {
        &self.semigroup
    }

    pub fn map(&self) -> &LinearMap<S> {
        &self.map
    }

    pub fn validate(&self) -> ActionReport {
        ActionReport {
            star_hom: check_star_hom(&self.map),
            action_axiom: check_action_axiom(self),
            kernel_dim: self.map.kernel_dim(),
        }
    }

    pub fn to_numeric(&self) -> Action<C64> {
        let f = |s: &S| s.to_c64();
        Action {
            space: self.space.clone(),
            semigroup: self.semigroup.convert(&f),
            map: self.map.convert(&f),
        }
    }
}

/// Residual of `(Psi (x) id) . Psi = (id (x) Delta) . Psi` over the
/// canonical basis of `N`.
pub fn check_action_axiom<S: Scalar>(action: &Action<S>) -> f64 {
    let id_a = LinearMap::identity(action.semigroup.algebra());
    let id_n = LinearMap::identity(&action.space);
    let lhs = action.map.tensor(&id_a).compose(&action.map);
    let rhs = id_n.tensor(action.semigroup.comul()).compose(&action.map);
    lhs.distance(&rhs)
}

#[derive(Clone, Debug)]
pub struct PodlesReport {
    pub rank: usize,
    pub full_rank_needed: usize,
    pub passes: bool,
}

/// Podles condition in finite dimensions: the products
/// `Psi(m)(1 (x) a)` over canonical basis elements must span `N (x) A`.
pub fn check_podles<S: Scalar>(action: &Action<S>) -> PodlesReport {
    let n = &action.space;
    let a = action.semigroup.algebra();
    let needed = n.dim() * a.dim();
    let unit_n = n.unit::<S>();
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(needed);
    for p in 0..n.dim() {
        let psi_m = action.map.apply(&n.basis_element(p));
        for q in 0..a.dim() {
            let one_a = unit_n.tensor(&a.basis_element(q));
            rows.push(psi_m.mul(&one_a).coords());
        }
    }
    let mat = Mat::from_rows(rows);
    let rank = linalg::rank(&mat, linalg::RANK_REL_TOL);
    PodlesReport {
        rank,
        full_rank_needed: needed,
        passes: rank == needed,
    }
}

/// Residual of state invariance: `(omega (x) id) Psi(n) = omega(n) 1`.
pub fn check_invariance<S: Scalar>(action: &Action<S>, omega: &State<S>) -> Result<f64> {
    if omega.algebra() != &action.space {
        return Err(Error::AlgebraMismatch(
            "state must live on the acted-on algebra".into(),
        ));
    }
    let phi = omega.functional_coords();
    let a = action.semigroup.algebra();
    let unit_a = a.unit::<S>();
    let mut worst = 0.0f64;
    for p in 0..action.space.dim() {
        let n_elem = action.space.basis_element::<S>(p);
        let lhs = apply_functional_left(&phi, &action.map.apply(&n_elem), &action.space, a);
        let rhs = unit_a.scale(&omega.eval(&n_elem));
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct ErgodicReport {
    pub fixed_dim: usize,
    pub ergodic: bool,
}

/// Dimension of `{ n : Psi(n) = n (x) 1 }`; the action is ergodic iff only
/// scalar multiples of the unit are fixed.
pub fn check_ergodic<S: Scalar>(action: &Action<S>) -> ErgodicReport {
    let n = &action.space;
    let a = action.semigroup.algebra();
    let unit_a = a.unit::<S>();
    let tensor_dim = n.dim() * a.dim();
    let mut cols: Vec<Vec<S>> = Vec::with_capacity(n.dim());
    let mut scale = 1.0f64;
    for p in 0..n.dim() {
        let e = n.basis_element::<S>(p);
        let image = action.map.apply(&e);
        scale = scale.max(image.max_abs());
        let diff = image.sub(&e.tensor(&unit_a));
        cols.push(diff.coords());
    }
    let mat = Mat::from_fn(tensor_dim, n.dim(), |r, c| cols[c][r].clone());
    // The columns are differences of O(scale) quantities; floor the rank
    // threshold so rounding noise is not counted.
    let fixed_dim = n.dim() - linalg::rank_floored(&mat, linalg::RANK_REL_TOL, scale);
    ErgodicReport {
        fixed_dim,
        ergodic: fixed_dim == 1,
    }
}

/// Conditional expectation `E = (id (x) h) . Psi` onto the fixed points of
/// an averaging state `h` on the semigroup algebra.
pub fn conditional_expectation<S: Scalar>(
    action: &Action<S>,
    h: &State<S>,
) -> Result<LinearMap<S>> {
    if h.algebra() != action.semigroup.algebra() {
        return Err(Error::AlgebraMismatch(
            "averaging state must live on the semigroup algebra".into(),
        ));
    }
    let psi = h.functional_coords();
    let n = &action.space;
    let a = action.semigroup.algebra();
    let images: Vec<_> = (0..n.dim())
        .map(|p| apply_functional_right(&psi, &action.map.apply(&n.basis_element(p)), n, a))
        .collect();
    Ok(LinearMap::from_images(n, n, &images))
}

/// Outcome of the search for invariant states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantFlag {
    /// A faithful invariant state was found (returned in the report).
    Faithful,
    /// Invariant states exist but none is faithful.
    NotFaithful,
    /// No invariant state at all.
    None,
}

#[derive(Clone, Debug)]
pub struct InvariantStatesReport {
    /// Real dimension of the space of invariant self-adjoint functionals.
    pub herm_dim: usize,
    /// Hermitian density-block bases of that space (unnormalized).
    pub herm_basis: Vec<Vec<Mat<C64>>>,
    pub flag: InvariantFlag,
    /// Best invariant state found (max-min-eigenvalue representative).
    pub best: Option<State<C64>>,
    pub best_min_eig: f64,
}

struct HermParam {
    blocks: Vec<usize>,
    n_params: usize,
}

impl HermParam {
    fn new(algebra: &FdAlgebra) -> Self {
        let n_params = algebra.blocks().iter().map(|&d| d * d).sum();
        HermParam {
            blocks: algebra.blocks().to_vec(),
            n_params,
        }
    }

    /// Hermitian densities from real parameters: per block, `d` diagonal
    /// entries then (re, im) for each strict upper entry.
    fn densities(&self, t: &[f64]) -> Vec<Mat<C64>> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut k = 0;
        for &d in &self.blocks {
            let mut m = Mat::zeros(d, d);
            for i in 0..d {
                m.set(i, i, C64::new(t[k], 0.0));
                k += 1;
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    let z = C64::new(t[k], t[k + 1]);
                    k += 2;
                    m.set(i, j, z);
                    m.set(j, i, z.conj());
                }
            }
            out.push(m);
        }
        out
    }
}

fn min_eigenvalue(densities: &[Mat<C64>]) -> f64 {
    densities
        .iter()
        .map(|m| linalg::hermitian_eigen_range(&m.to_na()).0)
        .fold(f64::INFINITY, f64::min)
}

fn total_trace(densities: &[Mat<C64>]) -> f64 {
    densities.iter().map(|m| m.trace().re).sum()
}

fn lin_comb(basis: &[Vec<Mat<C64>>], coeffs: &[f64]) -> Vec<Mat<C64>> {
    let mut out: Vec<Mat<C64>> = basis[0]
        .iter()
        .map(|m| m.scale(&C64::new(coeffs[0], 0.0)))
        .collect();
    for (b, &c) in basis.iter().zip(coeffs).skip(1) {
        for (acc, m) in out.iter_mut().zip(b) {
            *acc = acc.add(&m.scale(&C64::new(c, 0.0)));
        }
    }
    out
}

/// Solves the linear invariance identity for functionals on `N`, intersects
/// with self-adjoint normalized functionals, and searches the invariant
/// state set for a maximally faithful representative.
///
/// The search maximizes the smallest density eigenvalue over the compact
/// convex invariant state set by deterministic pattern search; the objective
/// is concave, so the local optimum found is global up to the step floor.
pub fn invariant_states<S: Scalar>(action: &Action<S>) -> InvariantStatesReport {
    let action = action.to_numeric();
    let n = action.space().clone();
    let a = action.semigroup().algebra().clone();
    let param = HermParam::new(&n);

    // Invariance of the functional is linear in its density parameters:
    // rows indexed by (basis of N, coordinate of A), stacked re/im.
    let mut real_rows: Vec<Vec<f64>> = Vec::new();
    let images: Vec<Vec<C64>> = (0..n.dim())
        .map(|p| action.map().apply(&n.basis_element(p)).coords())
        .collect();
    let unit_a_coords = a.unit::<C64>().coords();
    for k in 0..param.n_params {
        let mut t = vec![0.0; param.n_params];
        t[k] = 1.0;
        let densities = param.densities(&t);
        let omega = State::new(n.clone(), densities).expect("param shape");
        let w = omega.functional_coords();
        // column k of the complex equation matrix
        let mut col: Vec<C64> = Vec::with_capacity(n.dim() * a.dim());
        for (p, img) in images.iter().enumerate() {
            for q in 0..a.dim() {
                let mut acc = C64::new(0.0, 0.0);
                for (pn, wv) in w.iter().enumerate() {
                    acc += wv * img_coord(img, &n, &a, pn, q);
                }
                acc -= w[p] * unit_a_coords[q];
                col.push(acc);
            }
        }
        real_rows.push(col.iter().map(|z| z.re).collect());
        real_rows.push(col.iter().map(|z| z.im).collect());
        let _ = k;
    }
    // real_rows currently holds columns (split into re/im); transpose into
    // the equation matrix.
    let n_eq = n.dim() * a.dim();
    let na_mat = nalgebra::DMatrix::from_fn(2 * n_eq, param.n_params, |r, c| {
        let col = &real_rows[2 * c + (r >= n_eq) as usize];
        C64::new(col[r % n_eq], 0.0)
    });
    let null = linalg::nullspace_numeric(&na_mat, linalg::RANK_REL_TOL);
    let herm_basis: Vec<Vec<Mat<C64>>> = null
        .iter()
        .map(|v| {
            let t: Vec<f64> = v.iter().map(|z| z.re).collect();
            param.densities(&t)
        })
        .collect();
    let herm_dim = herm_basis.len();
    if herm_dim == 0 {
        return InvariantStatesReport {
            herm_dim,
            herm_basis,
            flag: InvariantFlag::None,
            best: None,
            best_min_eig: f64::NEG_INFINITY,
        };
    }

    // Normalize onto the trace-one affine slice.
    let traces: Vec<f64> = herm_basis.iter().map(|b| total_trace(b)).collect();
    let tnorm: f64 = traces.iter().map(|t| t * t).sum();
    if tnorm < 1e-18 {
        // every invariant self-adjoint functional is traceless
        return InvariantStatesReport {
            herm_dim,
            herm_basis,
            flag: InvariantFlag::None,
            best: None,
            best_min_eig: f64::NEG_INFINITY,
        };
    }
    let base_coeffs: Vec<f64> = traces.iter().map(|t| t / tnorm).collect();
    let rho0 = lin_comb(&herm_basis, &base_coeffs);

    // Traceless directions spanning the slice.
    let mut directions: Vec<Vec<Mat<C64>>> = Vec::new();
    for (b, &tr) in herm_basis.iter().zip(&traces) {
        let d: Vec<Mat<C64>> = b
            .iter()
            .zip(&rho0)
            .map(|(m, r)| m.sub(&r.scale(&C64::new(tr, 0.0))))
            .collect();
        let scale = d.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
        if scale > 1e-12 {
            let d = d
                .iter()
                .map(|m| m.scale(&C64::new(1.0 / scale, 0.0)))
                .collect();
            directions.push(d);
        }
    }

    // Deterministic pattern search for the max-min-eigenvalue state.
    let eval = |coeffs: &[f64]| -> f64 {
        let mut rho = rho0.clone();
        for (dir, &c) in directions.iter().zip(coeffs) {
            for (acc, m) in rho.iter_mut().zip(dir) {
                *acc = acc.add(&m.scale(&C64::new(c, 0.0)));
            }
        }
        min_eigenvalue(&rho)
    };
    let mut coeffs = vec![0.0; directions.len()];
    let mut best_val = eval(&coeffs);
    let mut step = 0.5f64;
    let mut iterations = 0;
    while step > 1e-10 && iterations < 20_000 {
        let mut improved = false;
        for j in 0..coeffs.len() {
            for sign in [1.0, -1.0] {
                let mut trial = coeffs.clone();
                trial[j] += sign * step;
                let v = eval(&trial);
                iterations += 1;
                if v > best_val + 1e-15 {
                    best_val = v;
                    coeffs = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let mut best_rho = rho0.clone();
    for (dir, &c) in directions.iter().zip(&coeffs) {
        for (acc, m) in best_rho.iter_mut().zip(dir) {
            *acc = acc.add(&m.scale(&C64::new(c, 0.0)));
        }
    }
    let best_min_eig = best_val;
    if best_min_eig < -1e-9 {
        // no positive normalized solution anywhere near the slice optimum
        return InvariantStatesReport {
            herm_dim,
            herm_basis,
            flag: InvariantFlag::None,
            best: None,
            best_min_eig,
        };
    }
    let state = State::new(n, best_rho).expect("shape");
    let faithful = is_faithful(&state).faithful && best_min_eig > 1e-9;
    InvariantStatesReport {
        herm_dim,
        herm_basis,
        flag: if faithful {
            InvariantFlag::Faithful
        } else {
            InvariantFlag::NotFaithful
        },
        best: Some(state),
        best_min_eig,
    }
}

fn img_coord(img: &[C64], n: &FdAlgebra, a: &FdAlgebra, pn: usize, pa: usize) -> C64 {
    img[n.tensor_index(a, pn, pa)]
}
