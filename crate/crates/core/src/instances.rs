//! Bundled instances: the worked examples and counterexamples used by the
//! test battery and exposed as named builtins by the CLI.

use num_rational::BigRational;

use crate::coact::Action;
use crate::fqs::{Element, FdAlgebra, LinearMap, State};
use crate::mat::Mat;
use crate::qsg::{cyclic_group_table, from_finite_semigroup, QSemigroup};
use crate::scalar::{Exact, Scalar, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The Pauli matrices `1, sigma_x, sigma_y, sigma_z` as elements of M2;
/// an orthonormal basis for the GNS product of the normalized trace.
pub fn pauli_basis() -> Vec<Element<C64>> {
    let m2 = FdAlgebra::m2();
    let mk = |entries: [[C64; 2]; 2]| {
        let mut m = Mat::zeros(2, 2);
        for (r, row) in entries.iter().enumerate() {
            for (cc, v) in row.iter().enumerate() {
                m.set(r, cc, *v);
            }
        }
        Element::new(m2.clone(), vec![m]).unwrap()
    };
    vec![
        m2.unit(),
        mk([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
        mk([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
        mk([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
    ]
}

/// The Powers state on M2 with parameter `q`: density
/// `diag(1, q^2) / (1 + q^2)`.
pub fn powers_state_m2(q: f64) -> State<C64> {
    let d = 1.0 + q * q;
    let mut rho = Mat::zeros(2, 2);
    rho.set(0, 0, c(1.0 / d, 0.0));
    rho.set(1, 1, c(q * q / d, 0.0));
    State::new(FdAlgebra::m2(), vec![rho]).unwrap()
}

/// Exact Powers state on M2 for rational `q`.
pub fn powers_state_m2_exact(q: &BigRational) -> State<Exact> {
    let qe = Exact::from_rational(q.clone());
    let q2 = qe.mul(&qe);
    let dinv = Exact::one().add(&q2).inv().expect("1 + q^2 > 0");
    let mut rho = Mat::<Exact>::zeros(2, 2);
    rho.set(0, 0, dinv.clone());
    rho.set(1, 1, q2.mul(&dinv));
    State::new(FdAlgebra::m2(), vec![rho]).unwrap()
}

/// Trivial action `Psi(n) = n (x) 1` of the trivial monoid on M2.
pub fn trivial_m2() -> Action<C64> {
    let n = FdAlgebra::m2();
    let sg = from_finite_semigroup::<C64>(&[vec![0]]).unwrap();
    let a = sg.algebra().clone();
    let images: Vec<Element<C64>> = (0..n.dim())
        .map(|p| n.basis_element::<C64>(p).tensor(&a.unit()))
        .collect();
    let map = LinearMap::from_images(&n, &n.tensor(&a), &images);
    Action::new_unchecked(n, sg, map).unwrap()
}

/// Z2 acting on M2 by conjugation with `sigma_z` on the nontrivial point.
pub fn z2_ad_sigma_z() -> Action<C64> {
    let n = FdAlgebra::m2();
    let sg = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
    let a = sg.algebra().clone();
    let mut sz = Mat::zeros(2, 2);
    sz.set(0, 0, c(1.0, 0.0));
    sz.set(1, 1, c(-1.0, 0.0));
    let images: Vec<Element<C64>> = (0..n.dim())
        .map(|p| {
            let e = n.basis_element::<C64>(p);
            let conj = Element::new(n.clone(), vec![sz.matmul(e.block(0)).matmul(&sz)]).unwrap();
            e.tensor(&a.basis_element(0))
                .add(&conj.tensor(&a.basis_element(1)))
        })
        .collect();
    let map = LinearMap::from_images(&n, &n.tensor(&a), &images);
    Action::new_unchecked(n, sg, map).unwrap()
}

/// The idempotent counterexample: `Psi(x, y) = (x, x) (x) 1` on C^2 over
/// the trivial monoid. A *-homomorphism action that fails the Podles
/// condition and preserves no faithful state.
pub fn idempotent_noncontinuous() -> Action<C64> {
    let n = FdAlgebra::commutative(2);
    let sg = from_finite_semigroup::<C64>(&[vec![0]]).unwrap();
    let a = sg.algebra().clone();
    let both = n
        .basis_element::<C64>(0)
        .add(&n.basis_element(1))
        .tensor(&a.unit());
    let images = vec![both, n.zero::<C64>().tensor(&a.unit())];
    let map = LinearMap::from_images(&n, &n.tensor(&a), &images);
    Action::new_unchecked(n, sg, map).unwrap()
}

fn s3_permutations() -> Vec<[usize; 3]> {
    vec![
        [0, 1, 2],
        [1, 0, 2],
        [2, 1, 0],
        [0, 2, 1],
        [1, 2, 0],
        [2, 0, 1],
    ]
}

/// Multiplication table of S3 under composition `(p . q)(x) = p(q(x))`.
pub fn s3_table() -> Vec<Vec<usize>> {
    let perms = s3_permutations();
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let composed = [p[q[0]], p[q[1]], p[q[2]]];
                    index_of(&composed)
                })
                .collect()
        })
        .collect()
}

/// S3 permuting three points: `Psi(delta_x) = sum over pi of
/// delta_{pi(x)} (x) delta_pi` on C^3 over C(S3). Ergodic.
pub fn s3_permutation_action() -> Action<C64> {
    let n = FdAlgebra::commutative(3);
    let sg = from_finite_semigroup::<C64>(&s3_table()).unwrap();
    let a = sg.algebra().clone();
    let perms = s3_permutations();
    let images: Vec<Element<C64>> = (0..3)
        .map(|x| {
            let mut acc = n.zero::<C64>().tensor(&a.zero());
            for (pi, perm) in perms.iter().enumerate() {
                acc = acc.add(&n.basis_element::<C64>(perm[x]).tensor(&a.basis_element(pi)));
            }
            acc
        })
        .collect();
    let map = LinearMap::from_images(&n, &n.tensor(&a), &images);
    Action::new_unchecked(n, sg, map).unwrap()
}

/// Two-element semigroup with constant product `xy = 0`.
pub fn null_semigroup() -> QSemigroup<C64> {
    from_finite_semigroup(&[vec![0, 0], vec![0, 0]]).unwrap()
}

/// Left-zero semigroup of order 2: `x y = x`.
pub fn left_zero_2() -> QSemigroup<C64> {
    from_finite_semigroup(&[vec![0, 0], vec![1, 1]]).unwrap()
}

/// A faithful state on M2 that the Z2 conjugation action does not preserve
/// (density diagonal in the sigma_x eigenbasis).
pub fn skew_faithful_state() -> State<C64> {
    let mut rho = Mat::zeros(2, 2);
    rho.set(0, 0, c(0.5, 0.0));
    rho.set(0, 1, c(0.3, 0.0));
    rho.set(1, 0, c(0.3, 0.0));
    rho.set(1, 1, c(0.5, 0.0));
    State::new(FdAlgebra::m2(), vec![rho]).unwrap()
}
