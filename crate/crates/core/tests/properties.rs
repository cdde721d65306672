//! Property tests for the algebraic invariants: GNS sesquilinearity
//! transfer, normal-form confluence, coproduct/involution compatibility,
//! Haar positivity, and the classification round trip.

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use qsact::fqs::{gns_inner_product, State};
use qsact::instances::powers_state_m2;
use qsact::m2class::classify_state;
use qsact::scalar::{Exact, Scalar, C64};
use qsact::suq2::{Gen, QAlgebra, QPoly};
use qsact::{Element, FdAlgebra, Mat};

fn c64_strategy() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| C64::new(re, im))
}

fn m2_element() -> impl Strategy<Value = Element<C64>> {
    proptest::collection::vec(c64_strategy(), 4)
        .prop_map(|coords| Element::from_coords(&FdAlgebra::m2(), &coords))
}

fn gen_strategy() -> impl Strategy<Value = Gen> {
    prop_oneof![
        Just(Gen::A),
        Just(Gen::AStar),
        Just(Gen::C),
        Just(Gen::CStar)
    ]
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Vec<Gen>> {
    proptest::collection::vec(gen_strategy(), 0..=max_len)
}

fn small_ratio() -> impl Strategy<Value = Exact> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Exact::from_ratio(n, d))
}

/// Random exact polynomial of degree <= 3 with up to four terms.
fn qpoly_strategy() -> impl Strategy<Value = QPoly<Exact>> {
    proptest::collection::vec((word_strategy(3), small_ratio()), 1..=4).prop_map(|terms| {
        let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
        let mut acc = QPoly::zero();
        for (w, coeff) in terms {
            acc = acc.add(&alg.word_to_poly(&w).scale(&coeff));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gns_associativity_transfer(x in m2_element(), y in m2_element(), z in m2_element()) {
        // <x, yz> = <y* x, z>
        let omega = powers_state_m2(0.7);
        let lhs = gns_inner_product(&omega, &x, &y.mul(&z));
        let rhs = gns_inner_product(&omega, &y.adjoint().mul(&x), &z);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn gns_positivity(x in m2_element()) {
        let omega = powers_state_m2(0.4);
        let v = gns_inner_product(&omega, &x, &x);
        prop_assert!(v.re >= -1e-12);
        prop_assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn tensor_product_is_multiplicative(
        x in m2_element(), y in m2_element(),
        a in m2_element(), b in m2_element(),
    ) {
        // (x (x) a)(y (x) b) = xy (x) ab and (x (x) a)* = x* (x) a*
        let lhs = x.tensor(&a).mul(&y.tensor(&b));
        let rhs = x.mul(&y).tensor(&a.mul(&b));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10);
        let star = x.tensor(&a).adjoint();
        prop_assert!(star.sub(&x.adjoint().tensor(&a.adjoint())).max_abs() < 1e-12);
    }

    #[test]
    fn normal_form_confluence(w in word_strategy(6), v in word_strategy(6)) {
        // normalizing the concatenation equals multiplying the normal forms
        let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
        let mut wv = w.clone();
        wv.extend_from_slice(&v);
        let direct = alg.word_to_poly(&wv);
        let split = alg.mul(&alg.word_to_poly(&w), &alg.word_to_poly(&v));
        prop_assert!(direct.sub(&split).is_zero());
    }

    #[test]
    fn normal_form_matches_oracle(w in word_strategy(5)) {
        // the rewritten word represents the same operator in the truncation
        let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
        let rep = qsact::suq2::TruncatedRep::new(24, 0.5);
        prop_assert!(rep.word_residual(&alg, &w) < 1e-11);
    }

    #[test]
    fn coproduct_star_compatibility(p in qpoly_strategy()) {
        // Delta(p*) = (Delta p)* legwise, up to degree 4
        let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
        let lhs = alg.comul(&alg.adjoint(&p));
        let rhs = alg.adjoint2(&alg.comul(&p));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn haar_positive_definite(p in qpoly_strategy()) {
        let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
        let h = alg.haar_state(&alg.mul(&alg.adjoint(&p), &p)).unwrap();
        let r = h.as_ratio().expect("h(p* p) is real rational");
        if p.is_zero() {
            prop_assert!(r.is_zero());
        } else {
            prop_assert!(r.is_positive(), "h(p* p) = {r} for p = {p:?}");
        }
    }

    #[test]
    fn classification_round_trip(
        d0 in 0.05f64..0.95,
        re in -0.45f64..0.45,
        im in -0.45f64..0.45,
    ) {
        // random faithful density: clamp the off-diagonal into positivity
        let d1 = 1.0 - d0;
        let cap = (d0 * d1).sqrt() * 0.95;
        let norm = (re * re + im * im).sqrt();
        let (bre, bim) = if norm > cap && norm > 0.0 {
            (re * cap / norm, im * cap / norm)
        } else {
            (re, im)
        };
        let mut rho = Mat::<C64>::zeros(2, 2);
        rho.set(0, 0, C64::new(d0, 0.0));
        rho.set(0, 1, C64::new(bre, bim));
        rho.set(1, 0, C64::new(bre, -bim));
        rho.set(1, 1, C64::new(d1, 0.0));
        let omega = State::new(FdAlgebra::m2(), vec![rho]).unwrap();
        prop_assume!(qsact::fqs::is_faithful(&omega).faithful);
        let (q, u) = classify_state(&omega).unwrap();
        prop_assert!(q > 0.0 && q <= 1.0);
        // max-basis residual of omega(u x u*) - omega_q(x)
        let m2 = FdAlgebra::m2();
        let omega_q = powers_state_m2(q);
        let mut worst = 0.0f64;
        for p in 0..4 {
            let x = m2.basis_element::<C64>(p);
            let rotated = Element::new(
                m2.clone(),
                vec![u.matmul(x.block(0)).matmul(&u.adjoint())],
            ).unwrap();
            worst = worst.max((omega.eval(&rotated) - omega_q.eval(&x)).norm());
        }
        prop_assert!(worst < 1e-10, "round-trip residual {worst}");
    }

    #[test]
    fn gauge_of_q_under_conjugation(theta in 0.0f64..3.0, q0 in 0.2f64..1.0) {
        // q depends only on the eigenvalue ratio
        let base = powers_state_m2(q0);
        let mut v = Mat::<C64>::zeros(2, 2);
        v.set(0, 0, C64::new(theta.cos(), 0.0));
        v.set(0, 1, C64::new(-theta.sin(), 0.0));
        v.set(1, 0, C64::new(theta.sin(), 0.0));
        v.set(1, 1, C64::new(theta.cos(), 0.0));
        let rho = v.matmul(base.density(0)).matmul(&v.adjoint());
        let omega = State::new(FdAlgebra::m2(), vec![rho]).unwrap();
        let (q, _) = classify_state(&omega).unwrap();
        prop_assert!((q - q0).abs() < 1e-10);
    }
}
