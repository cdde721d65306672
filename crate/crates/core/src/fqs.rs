//! Finite-dimensional C*-algebras: block elements, states, the GNS scalar
//! product, orthonormalization, tensor products and *-homomorphism checks.
//!
//! An algebra is a direct sum of full matrix blocks. The canonical linear
//! basis used everywhere is the matrix units of each block, blocks in
//! declared order, row-major inside a block; every [`LinearMap`] matrix is
//! written over this basis.

use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::Scalar;

/// Direct sum of full matrix algebras, described by its block sizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FdAlgebra {
    blocks: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidParameter(
                "block sizes must be a nonempty list of positive integers".into(),
            ));
        }
        Ok(FdAlgebra { blocks })
    }

    /// The full matrix algebra M_n.
    pub fn full(n: usize) -> Self {
        FdAlgebra { blocks: vec![n] }
    }

    /// The commutative algebra C^k (k blocks of size 1).
    pub fn commutative(k: usize) -> Self {
        FdAlgebra { blocks: vec![1; k] }
    }

    pub fn m2() -> Self {
        Self::full(2)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Linear dimension: sum of squared block sizes.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    /// Tensor product algebra; blocks are all pairwise products in
    /// lexicographic order.
    pub fn tensor(&self, other: &FdAlgebra) -> FdAlgebra {
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for &d in &self.blocks {
            for &e in &other.blocks {
                blocks.push(d * e);
            }
        }
        FdAlgebra { blocks }
    }

    /// Decomposes a canonical basis index into (block, row, col).
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let mut rest = idx;
        for (b, &d) in self.blocks.iter().enumerate() {
            if rest < d * d {
                return (b, rest / d, rest % d);
            }
            rest -= d * d;
        }
        panic!("basis index {idx} out of range for dim {}", self.dim());
    }

    /// Canonical basis index of the matrix unit (block, row, col).
    pub fn ravel(&self, block: usize, row: usize, col: usize) -> usize {
        let offset: usize = self.blocks[..block].iter().map(|d| d * d).sum();
        let d = self.blocks[block];
        offset + row * d + col
    }

    pub fn unit<S: Scalar>(&self) -> Element<S> {
        Element {
            algebra: self.clone(),
            data: self.blocks.iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn zero<S: Scalar>(&self) -> Element<S> {
        Element {
            algebra: self.clone(),
            data: self.blocks.iter().map(|&d| Mat::zeros(d, d)).collect(),
        }
    }

    /// The canonical basis element with the given index (a matrix unit).
    pub fn basis_element<S: Scalar>(&self, idx: usize) -> Element<S> {
        let mut e = self.zero();
        let (b, r, c) = self.unravel(idx);
        e.data[b].set(r, c, S::one());
        e
    }

    /// Canonical index of the pair (p, q) inside the tensor algebra
    /// `self (x) other`, where p, q index the factor bases. The tensor
    /// algebra's own basis is matrix units of its blocks, so pairs of
    /// factor units map to units of the product blocks.
    pub fn tensor_index(&self, other: &FdAlgebra, p: usize, q: usize) -> usize {
        let (bi, r, rp) = self.unravel(p);
        let (bj, s, sp) = other.unravel(q);
        let e = other.blocks[bj];
        let block = bi * other.blocks.len() + bj;
        let row = r * e + s;
        let col = rp * e + sp;
        self.tensor(other).ravel(block, row, col)
    }
}

/// Element of an [`FdAlgebra`]: one square matrix per block.
#[derive(Clone, PartialEq, Debug)]
pub struct Element<S: Scalar> {
    algebra: FdAlgebra,
    data: Vec<Mat<S>>,
}

impl<S: Scalar> Element<S> {
    pub fn new(algebra: FdAlgebra, data: Vec<Mat<S>>) -> Result<Self> {
        if data.len() != algebra.blocks().len()
            || data
                .iter()
                .zip(algebra.blocks())
                .any(|(m, &d)| m.nrows() != d || m.ncols() != d)
        {
            return Err(Error::AlgebraMismatch(
                "block shapes do not match the algebra".into(),
            ));
        }
        Ok(Element { algebra, data })
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn block(&self, b: usize) -> &Mat<S> {
        &self.data[b]
    }

    pub fn blocks_mut(&mut self) -> &mut [Mat<S>] {
        &mut self.data
    }

    fn zip(&self, other: &Self, f: impl Fn(&Mat<S>, &Mat<S>) -> Mat<S>) -> Self {
        assert_eq!(
            self.algebra, other.algebra,
            "elements live in different algebras"
        );
        Element {
            algebra: self.algebra.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.matmul(b))
    }

    pub fn adjoint(&self) -> Self {
        Element {
            algebra: self.algebra.clone(),
            data: self.data.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Element {
            algebra: self.algebra.clone(),
            data: self.data.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|m| m.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|m| m.is_zero())
    }

    /// Coordinates over the canonical basis.
    pub fn coords(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for m in &self.data {
            out.extend(m.data().iter().cloned());
        }
        out
    }

    pub fn from_coords(algebra: &FdAlgebra, coords: &[S]) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "coordinate length mismatch");
        let mut data = Vec::with_capacity(algebra.blocks().len());
        let mut off = 0;
        for &d in algebra.blocks() {
            data.push(Mat::from_fn(d, d, |r, c| coords[off + r * d + c].clone()));
            off += d * d;
        }
        Element {
            algebra: algebra.clone(),
            data,
        }
    }

    /// Tensor product element in `self.algebra (x) other.algebra`.
    pub fn tensor(&self, other: &Self) -> Self {
        let algebra = self.algebra.tensor(&other.algebra);
        let mut data = Vec::with_capacity(algebra.blocks().len());
        for (bi, &d) in self.algebra.blocks().iter().enumerate() {
            for (bj, &e) in other.algebra.blocks().iter().enumerate() {
                let a = &self.data[bi];
                let b = &other.data[bj];
                data.push(Mat::from_fn(d * e, d * e, |row, col| {
                    let (r, s) = (row / e, row % e);
                    let (rp, sp) = (col / e, col % e);
                    a.get(r, rp).mul(b.get(s, sp))
                }));
            }
        }
        Element { algebra, data }
    }

    pub fn convert<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> Element<T> {
        Element {
            algebra: self.algebra.clone(),
            data: self.data.iter().map(|m| m.convert(f)).collect(),
        }
    }
}

/// Positive normalized functional, stored as one density block per algebra
/// block; evaluation is the sum of block traces against the densities.
#[derive(Clone, PartialEq, Debug)]
pub struct State<S: Scalar> {
    algebra: FdAlgebra,
    densities: Vec<Mat<S>>,
}

impl<S: Scalar> State<S> {
    pub fn new(algebra: FdAlgebra, densities: Vec<Mat<S>>) -> Result<Self> {
        if densities.len() != algebra.blocks().len()
            || densities
                .iter()
                .zip(algebra.blocks())
                .any(|(m, &d)| m.nrows() != d || m.ncols() != d)
        {
            return Err(Error::AlgebraMismatch(
                "density shapes do not match the algebra".into(),
            ));
        }
        Ok(State { algebra, densities })
    }

    /// Normalized trace.
    pub fn tracial(algebra: &FdAlgebra) -> Self {
        let total: usize = algebra.blocks().iter().sum();
        let w = S::from_ratio(1, total as i64);
        State {
            algebra: algebra.clone(),
            densities: algebra
                .blocks()
                .iter()
                .map(|&d| Mat::identity(d).scale(&w))
                .collect(),
        }
    }

    /// State on a commutative algebra C^k given by a probability vector.
    pub fn on_commutative(weights: &[S]) -> Self {
        let algebra = FdAlgebra::commutative(weights.len());
        State {
            densities: weights
                .iter()
                .map(|w| {
                    let mut m = Mat::zeros(1, 1);
                    m.set(0, 0, w.clone());
                    m
                })
                .collect(),
            algebra,
        }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn density(&self, b: usize) -> &Mat<S> {
        &self.densities[b]
    }

    pub fn eval(&self, x: &Element<S>) -> S {
        assert_eq!(
            self.algebra,
            *x.algebra(),
            "state and element algebras differ"
        );
        let mut acc = S::zero();
        for (rho, xb) in self.densities.iter().zip(0..) {
            acc = acc.add(&rho.matmul(x.block(xb)).trace());
        }
        acc
    }

    /// Values on the canonical basis: the functional as a dual vector.
    pub fn functional_coords(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for (b, rho) in self.densities.iter().enumerate() {
            let d = self.algebra.blocks()[b];
            for r in 0..d {
                for c in 0..d {
                    // omega(E_rc) = trace(rho E_rc) = rho[c][r]
                    out.push(rho.get(c, r).clone());
                }
            }
        }
        out
    }

    pub fn convert<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> State<T> {
        State {
            algebra: self.algebra.clone(),
            densities: self.densities.iter().map(|m| m.convert(f)).collect(),
        }
    }
}

/// Report of [`is_faithful`]: eigenvalue extremes over all density blocks.
#[derive(Clone, Debug)]
pub struct FaithfulReport {
    pub faithful: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Relative eigenvalue floor deciding faithfulness.
pub const FAITHFUL_REL_TOL: f64 = 1e-12;

/// A state is faithful iff every density block is strictly positive
/// definite; decided numerically with a relative eigenvalue threshold.
pub fn is_faithful<S: Scalar>(omega: &State<S>) -> FaithfulReport {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for b in 0..omega.algebra().blocks().len() {
        let (lo, hi) = linalg::hermitian_eigen_range(&omega.density(b).to_na());
        min = min.min(lo);
        max = max.max(hi);
    }
    FaithfulReport {
        faithful: min > FAITHFUL_REL_TOL * max.max(f64::MIN_POSITIVE),
        min_eigenvalue: min,
        max_eigenvalue: max,
    }
}

/// GNS scalar product `<x, y> = omega(x* y)`; conjugate-linear in `x`.
pub fn gns_inner_product<S: Scalar>(omega: &State<S>, x: &Element<S>, y: &Element<S>) -> S {
    omega.eval(&x.adjoint().mul(y))
}

/// Orthonormal basis for the GNS scalar product of a faithful state.
///
/// Modified Gram-Schmidt over the canonical basis, seeded with the unit as
/// the first vector; deterministic. In the exact regime the norms must stay
/// inside the scalar's quadratic field, otherwise
/// [`Error::ExactSqrtUnavailable`] is returned.
pub fn orthonormal_basis<S: Scalar>(
    algebra: &FdAlgebra,
    omega: &State<S>,
) -> Result<Vec<Element<S>>> {
    let rep = is_faithful(omega);
    if !rep.faithful {
        return Err(Error::NotFaithful {
            min_eig: rep.min_eigenvalue,
        });
    }
    let dim = algebra.dim();
    let mut candidates: Vec<Element<S>> = Vec::with_capacity(dim + 1);
    candidates.push(algebra.unit());
    for idx in 0..dim {
        candidates.push(algebra.basis_element(idx));
    }
    let mut basis: Vec<Element<S>> = Vec::with_capacity(dim);
    // Dependent candidates reduce to (near-)zero; the cutoff is relative to
    // the candidate's own norm scale.
    let drop_tol = 1e-9;
    for cand in candidates {
        let scale = gns_inner_product(omega, &cand, &cand).abs().sqrt();
        let mut v = cand;
        for e in &basis {
            let coeff = gns_inner_product(omega, e, &v);
            v = v.sub(&e.scale(&coeff));
        }
        let norm_sq = gns_inner_product(omega, &v, &v);
        if S::EXACT {
            if norm_sq.is_zero() {
                continue;
            }
        } else if norm_sq.abs().sqrt() <= drop_tol * scale.max(1.0) {
            continue;
        }
        let norm = norm_sq.sqrt_nonneg().ok_or(Error::ExactSqrtUnavailable)?;
        let inv = norm.inv().ok_or(Error::SingularSolve(
            "zero norm in orthonormalization".into(),
        ))?;
        basis.push(v.scale(&inv));
        if basis.len() == dim {
            break;
        }
    }
    if basis.len() != dim {
        return Err(Error::NotFaithful {
            min_eig: rep.min_eigenvalue,
        });
    }
    Ok(basis)
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn gram_residual<S: Scalar>(omega: &State<S>, basis: &[Element<S>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, ei) in basis.iter().enumerate() {
        for (j, ej) in basis.iter().enumerate() {
            let g = gns_inner_product(omega, ei, ej);
            let target = if i == j { S::one() } else { S::zero() };
            worst = worst.max(g.sub(&target).abs());
        }
    }
    worst
}

/// Linear map between algebras, stored as a matrix over canonical bases.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearMap<S: Scalar> {
    source: FdAlgebra,
    target: FdAlgebra,
    matrix: Mat<S>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(source: FdAlgebra, target: FdAlgebra, matrix: Mat<S>) -> Result<Self> {
        if matrix.nrows() != target.dim() || matrix.ncols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim() * source.dim(),
                got: matrix.nrows() * matrix.ncols(),
            });
        }
        Ok(LinearMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(algebra: &FdAlgebra) -> Self {
        LinearMap {
            source: algebra.clone(),
            target: algebra.clone(),
            matrix: Mat::identity(algebra.dim()),
        }
    }

    /// Builds the map from the images of the canonical basis (as columns).
    pub fn from_images(source: &FdAlgebra, target: &FdAlgebra, images: &[Element<S>]) -> Self {
        assert_eq!(images.len(), source.dim(), "one image per basis element");
        let mut matrix = Mat::zeros(target.dim(), source.dim());
        for (col, img) in images.iter().enumerate() {
            assert_eq!(img.algebra(), target, "image in wrong algebra");
            for (row, v) in img.coords().into_iter().enumerate() {
                matrix.set(row, col, v);
            }
        }
        LinearMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        }
    }

    pub fn source(&self) -> &FdAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FdAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.matrix
    }

    pub fn apply(&self, x: &Element<S>) -> Element<S> {
        assert_eq!(
            *x.algebra(),
            self.source,
            "element not in the map's source algebra"
        );
        let coords = x.coords();
        let mut out = vec![S::zero(); self.target.dim()];
        for (col, xc) in coords.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (row, o) in out.iter_mut().enumerate() {
                *o = o.add(&self.matrix.get(row, col).mul(xc));
            }
        }
        Element::from_coords(&self.target, &out)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &LinearMap<S>) -> LinearMap<S> {
        assert_eq!(other.target, self.source, "composition mismatch");
        LinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    /// Tensor product of maps over the canonical tensor bases.
    pub fn tensor(&self, other: &LinearMap<S>) -> LinearMap<S> {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let mut matrix = Mat::zeros(target.dim(), source.dim());
        for p in 0..self.source.dim() {
            let fp = self.apply(&self.source.basis_element(p));
            for q in 0..other.source.dim() {
                let gq = other.apply(&other.source.basis_element(q));
                let col = self.source.tensor_index(&other.source, p, q);
                for (row, v) in fp.tensor(&gq).coords().into_iter().enumerate() {
                    if !v.is_zero() {
                        matrix.set(row, col, v);
                    }
                }
            }
        }
        LinearMap {
            source,
            target,
            matrix,
        }
    }

    /// Max-norm of the difference with another map (entrywise on matrices).
    pub fn distance(&self, other: &LinearMap<S>) -> f64 {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        self.matrix.sub(&other.matrix).max_abs()
    }

    pub fn convert<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> LinearMap<T> {
        LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.convert(f),
        }
    }

    /// Dimension of the kernel (injectivity diagnostic).
    pub fn kernel_dim(&self) -> usize {
        self.source.dim() - linalg::rank(&self.matrix, linalg::RANK_REL_TOL)
    }
}

/// Applies a functional on the left tensor leg: `phi (x) id` on `N (x) A`.
/// `phi` is given by its values on the canonical basis of `N`.
pub fn apply_functional_left<S: Scalar>(
    phi: &[S],
    z: &Element<S>,
    n: &FdAlgebra,
    a: &FdAlgebra,
) -> Element<S> {
    assert_eq!(phi.len(), n.dim());
    assert_eq!(*z.algebra(), n.tensor(a), "element not in N (x) A");
    let coords = z.coords();
    let mut out = vec![S::zero(); a.dim()];
    for (p, w) in phi.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (q, o) in out.iter_mut().enumerate() {
            let idx = n.tensor_index(a, p, q);
            *o = o.add(&w.mul(&coords[idx]));
        }
    }
    Element::from_coords(a, &out)
}

/// Applies a functional on the right tensor leg: `id (x) psi` on `N (x) A`.
pub fn apply_functional_right<S: Scalar>(
    psi: &[S],
    z: &Element<S>,
    n: &FdAlgebra,
    a: &FdAlgebra,
) -> Element<S> {
    assert_eq!(psi.len(), a.dim());
    assert_eq!(*z.algebra(), n.tensor(a), "element not in N (x) A");
    let coords = z.coords();
    let mut out = vec![S::zero(); n.dim()];
    for (q, w) in psi.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (p, o) in out.iter_mut().enumerate() {
            let idx = n.tensor_index(a, p, q);
            *o = o.add(&w.mul(&coords[idx]));
        }
    }
    Element::from_coords(n, &out)
}

/// Residuals of the unital *-homomorphism conditions for a linear map.
#[derive(Clone, Debug)]
pub struct StarHomReport {
    pub unital: f64,
    pub multiplicative: f64,
    pub adjoint: f64,
}

impl StarHomReport {
    pub fn max(&self) -> f64 {
        self.unital.max(self.multiplicative).max(self.adjoint)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Checks `phi(1) = 1`, `phi(xy) = phi(x)phi(y)` on canonical basis pairs,
/// and `phi(x*) = phi(x)*`.
pub fn check_star_hom<S: Scalar>(phi: &LinearMap<S>) -> StarHomReport {
    let src = phi.source();
    let unital = phi.apply(&src.unit()).sub(&phi.target().unit()).max_abs();
    let dim = src.dim();
    let images: Vec<Element<S>> = (0..dim).map(|i| phi.apply(&src.basis_element(i))).collect();
    let mut multiplicative = 0.0f64;
    for i in 0..dim {
        let ei = src.basis_element::<S>(i);
        for j in 0..dim {
            let ej = src.basis_element::<S>(j);
            let lhs = phi.apply(&ei.mul(&ej));
            let rhs = images[i].mul(&images[j]);
            multiplicative = multiplicative.max(lhs.sub(&rhs).max_abs());
        }
    }
    let mut adjoint = 0.0f64;
    for i in 0..dim {
        let ei = src.basis_element::<S>(i);
        let lhs = phi.apply(&ei.adjoint());
        adjoint = adjoint.max(lhs.sub(&images[i].adjoint()).max_abs());
    }
    StarHomReport {
        unital,
        multiplicative,
        adjoint,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, C64};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn m2() -> FdAlgebra {
        FdAlgebra::m2()
    }

    fn pauli_x() -> Element<C64> {
        let mut e = m2().zero::<C64>();
        e.blocks_mut()[0].set(0, 1, c(1.0, 0.0));
        e.blocks_mut()[0].set(1, 0, c(1.0, 0.0));
        e
    }

    fn pauli_y() -> Element<C64> {
        let mut e = m2().zero::<C64>();
        e.blocks_mut()[0].set(0, 1, c(0.0, -1.0));
        e.blocks_mut()[0].set(1, 0, c(0.0, 1.0));
        e
    }

    fn pauli_z() -> Element<C64> {
        let mut e = m2().zero::<C64>();
        e.blocks_mut()[0].set(0, 0, c(1.0, 0.0));
        e.blocks_mut()[0].set(1, 1, c(-1.0, 0.0));
        e
    }

    fn powers_state(q: f64) -> State<C64> {
        let d = 1.0 + q * q;
        let mut rho = Mat::zeros(2, 2);
        rho.set(0, 0, c(1.0 / d, 0.0));
        rho.set(1, 1, c(q * q / d, 0.0));
        State::new(m2(), vec![rho]).unwrap()
    }

    #[test]
    fn gns_unit_is_one() {
        let omega = State::<C64>::tracial(&m2());
        let one = m2().unit::<C64>();
        let v = gns_inner_product(&omega, &one, &one);
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gns_powers_matrix_unit() {
        // q = 1/2: density diag(0.8, 0.2); <e12, e12> = omega(e22) = 0.2
        let omega = powers_state(0.5);
        let e12 = m2().basis_element::<C64>(1);
        let v = gns_inner_product(&omega, &e12, &e12);
        assert!((v - c(0.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gns_trace_orthogonality_of_paulis() {
        let omega = State::<C64>::tracial(&m2());
        let v = gns_inner_product(&omega, &pauli_x(), &pauli_y());
        assert!(v.norm() < 1e-15);
        // each Pauli has unit GNS norm under the normalized trace
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let n = gns_inner_product(&omega, &p, &p);
            assert!((n - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn gns_associativity_transfer() {
        // <x, yz> = <y* x, z>
        let omega = powers_state(0.7);
        let x = pauli_x().add(&pauli_z().scale(&c(0.3, 0.4)));
        let y = pauli_y().add(&m2().unit().scale(&c(0.2, -0.1)));
        let z = m2().basis_element::<C64>(2).scale(&c(1.5, 0.0));
        let lhs = gns_inner_product(&omega, &x, &y.mul(&z));
        let rhs = gns_inner_product(&omega, &y.adjoint().mul(&x), &z);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn faithfulness_reports() {
        assert!(is_faithful(&powers_state(0.5)).faithful);
        let mut rho = Mat::zeros(2, 2);
        rho.set(0, 0, c(1.0, 0.0));
        let degenerate = State::new(m2(), vec![rho]).unwrap();
        let rep = is_faithful(&degenerate);
        assert!(!rep.faithful);
        assert!(rep.min_eigenvalue.abs() < 1e-12);
        let mut rho2 = Mat::zeros(2, 2);
        rho2.set(0, 0, c(0.8, 0.0));
        rho2.set(1, 1, c(0.2, 0.0));
        let rep2 = is_faithful(&State::new(m2(), vec![rho2]).unwrap());
        assert!(rep2.faithful);
        assert!((rep2.min_eigenvalue - 0.2).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_tracial_m2() {
        let omega = State::<C64>::tracial(&m2());
        let basis = orthonormal_basis(&m2(), &omega).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(gram_residual(&omega, &basis) < 1e-10);
        // first element is a multiple of the unit
        let first = &basis[0];
        assert!(first.block(0).get(0, 1).norm() < 1e-12);
        assert!((first.block(0).get(0, 0) - first.block(0).get(1, 1)).norm() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_one_dim() {
        let alg = FdAlgebra::commutative(1);
        let omega = State::<C64>::tracial(&alg);
        let basis = orthonormal_basis(&alg, &omega).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0].block(0).get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_rejects_degenerate_state() {
        let mut rho = Mat::zeros(2, 2);
        rho.set(0, 0, c(1.0, 0.0));
        let degenerate = State::new(m2(), vec![rho]).unwrap();
        assert!(orthonormal_basis(&m2(), &degenerate).is_err());
    }

    #[test]
    fn powers_basis_is_orthonormal() {
        // the scaled matrix units listed for omega_q are orthonormal
        let q = 0.5;
        let omega = powers_state(q);
        let d = (1.0 + q * q).sqrt();
        let units: Vec<Element<C64>> = (0..4).map(|i| m2().basis_element(i)).collect();
        let scales = [d, d / q, d, d / q];
        let basis: Vec<Element<C64>> = units
            .iter()
            .zip(scales)
            .map(|(u, s)| u.scale(&c(s, 0.0)))
            .collect();
        assert!(gram_residual(&omega, &basis) < 1e-12);
    }

    #[test]
    fn exact_orthonormal_basis_powers_state() {
        // exact Gram-Schmidt stays inside Q(sqrt(5)) at q = 1/2
        let q = Exact::from_ratio(1, 2);
        let q2 = q.mul(&q);
        let d = Exact::one().add(&q2);
        let dinv = d.inv().unwrap();
        let mut rho = Mat::<Exact>::zeros(2, 2);
        rho.set(0, 0, dinv.clone());
        rho.set(1, 1, q2.mul(&dinv));
        let omega = State::new(m2(), vec![rho]).unwrap();
        let basis = orthonormal_basis(&m2(), &omega).unwrap();
        assert_eq!(basis.len(), 4);
        for (i, ei) in basis.iter().enumerate() {
            for (j, ej) in basis.iter().enumerate() {
                let g = gns_inner_product(&omega, ei, ej);
                let want = if i == j { Exact::one() } else { Exact::zero() };
                assert_eq!(g, want, "Gram entry ({i},{j})");
            }
        }
    }

    #[test]
    fn tensor_dimensions_and_bilinearity() {
        let a = m2();
        let b = FdAlgebra::commutative(2);
        let t = a.tensor(&b);
        assert_eq!(t.blocks(), &[2, 2]);
        assert_eq!(a.tensor(&a).dim(), 16);
        // (x (x) 1)(1 (x) a) = x (x) a
        let x = pauli_x();
        let unit_b = b.unit::<C64>();
        let delta = b.basis_element::<C64>(1);
        let lhs = x.tensor(&unit_b).mul(&a.unit().tensor(&delta));
        let rhs = x.tensor(&delta);
        assert!(lhs.sub(&rhs).max_abs() < 1e-15);
    }

    #[test]
    fn tensor_index_matches_element_tensor() {
        let a = m2();
        let b = FdAlgebra::new(vec![1, 2]).unwrap();
        for p in 0..a.dim() {
            for q in 0..b.dim() {
                let t = a.basis_element::<C64>(p).tensor(&b.basis_element(q));
                let coords = t.coords();
                for (idx, v) in coords.iter().enumerate() {
                    let want = if idx == a.tensor_index(&b, p, q) {
                        1.0
                    } else {
                        0.0
                    };
                    assert!((v - c(want, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn star_hom_identity_and_transpose() {
        let id = LinearMap::<C64>::identity(&m2());
        let rep = check_star_hom(&id);
        assert!(rep.max() < 1e-15);

        // transpose is an anti-homomorphism: multiplicativity fails
        let transpose = LinearMap::from_images(
            &m2(),
            &m2(),
            &(0..4)
                .map(|i| {
                    let (b, r, cc) = m2().unravel(i);
                    let mut e = m2().zero::<C64>();
                    e.blocks_mut()[b].set(cc, r, c(1.0, 0.0));
                    e
                })
                .collect::<Vec<_>>(),
        );
        let rep = check_star_hom(&transpose);
        assert!(rep.unital < 1e-15);
        assert!(rep.multiplicative > 0.5);
    }

    #[test]
    fn star_hom_unitary_conjugation() {
        // x -> u x u* for a unitary u is a *-automorphism
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut u = Mat::zeros(2, 2);
        u.set(0, 0, c(s, 0.0));
        u.set(0, 1, c(s, 0.0));
        u.set(1, 0, c(0.0, s));
        u.set(1, 1, c(0.0, -s));
        let images: Vec<Element<C64>> = (0..4)
            .map(|i| {
                let e = m2().basis_element::<C64>(i);
                let m = u.matmul(e.block(0)).matmul(&u.adjoint());
                Element::new(m2(), vec![m]).unwrap()
            })
            .collect();
        let conj = LinearMap::from_images(&m2(), &m2(), &images);
        assert!(check_star_hom(&conj).max() < 1e-12);
    }

    #[test]
    fn functional_contractions() {
        let n = m2();
        let a = FdAlgebra::commutative(2);
        let x = pauli_z();
        let delta = a.basis_element::<C64>(1);
        let z = x.tensor(&delta);
        let omega = State::<C64>::tracial(&n);
        // (omega (x) id)(x (x) delta) = omega(x) delta = 0 (traceless)
        let left = apply_functional_left(&omega.functional_coords(), &z, &n, &a);
        assert!(left.max_abs() < 1e-15);
        // (id (x) psi)(x (x) delta) with psi = evaluation at second point
        let psi = State::<C64>::on_commutative(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let right = apply_functional_right(&psi.functional_coords(), &z, &n, &a);
        assert!(right.sub(&x).max_abs() < 1e-15);
    }
}
