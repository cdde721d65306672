use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use qsact::coact::check_podles;
use qsact::fqs::{orthonormal_basis, State};
use qsact::instances::{powers_state_m2, z2_ad_sigma_z};
use qsact::m2class::classify_state;
use qsact::rep::{check_unitary, extract_rep, FdCoeff};
use qsact::scalar::{Exact, C64};
use qsact::suq2::{extract_rep_symbolic, powers_onb, Gen, QAlgebra};
use qsact::{FdAlgebra, Mat, DEFAULT_TOL};

fn bench_normal_form(c: &mut Criterion) {
    let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
    // a degree-12 word exercising every rewrite rule
    let word = [
        Gen::C,
        Gen::A,
        Gen::CStar,
        Gen::AStar,
        Gen::A,
        Gen::C,
        Gen::AStar,
        Gen::CStar,
        Gen::A,
        Gen::AStar,
        Gen::C,
        Gen::A,
    ];
    c.bench_function("normal_form_degree_12_word", |b| {
        b.iter(|| alg.word_to_poly(std::hint::black_box(&word)))
    });
}

fn bench_symbolic_extraction(c: &mut Criterion) {
    let alg = QAlgebra::<Exact>::exact(1, 2).unwrap();
    let onb = powers_onb(&alg).unwrap();
    c.bench_function("symbolic_extract_and_unitarity", |b| {
        b.iter(|| {
            let rep = extract_rep_symbolic(&alg, &onb).unwrap();
            check_unitary(&alg, &rep).max()
        })
    });
}

fn bench_numeric_pipeline(c: &mut Criterion) {
    let act = z2_ad_sigma_z();
    let omega = State::<C64>::tracial(act.space());
    c.bench_function("z2_extract_pipeline", |b| {
        b.iter_batched(
            || orthonormal_basis(act.space(), &omega).unwrap(),
            |onb| {
                let rep = extract_rep(&act, &onb, &omega, DEFAULT_TOL).unwrap();
                let coeffs = FdCoeff::new(act.semigroup().clone());
                check_unitary(&coeffs, &rep).max()
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("z2_podles_rank", |b| b.iter(|| check_podles(&act).rank));
}

fn bench_classification(c: &mut Criterion) {
    let omega = powers_state_m2(0.37);
    let mut rotated = Mat::<C64>::zeros(2, 2);
    let th = 0.7f64;
    rotated.set(0, 0, C64::new(th.cos(), 0.0));
    rotated.set(0, 1, C64::new(-th.sin(), 0.2));
    rotated.set(1, 0, C64::new(th.sin(), 0.2));
    rotated.set(1, 1, C64::new(th.cos(), 0.0));
    // make the density a genuine faithful state by conjugation-free mixing
    let rho = omega
        .density(0)
        .add(&Mat::identity(2).scale(&C64::new(0.1, 0.0)));
    let tr = rho.trace().re;
    let state = State::new(FdAlgebra::m2(), vec![rho.scale(&C64::new(1.0 / tr, 0.0))]).unwrap();
    c.bench_function("classify_state_m2", |b| {
        b.iter(|| classify_state(std::hint::black_box(&state)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_normal_form,
    bench_symbolic_extraction,
    bench_numeric_pipeline,
    bench_classification
);
criterion_main!(benches);
