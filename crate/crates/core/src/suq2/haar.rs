//! The Haar state on the polynomial algebra, computed degree by degree
//! from invariance.
//!
//! For every monomial `x` of degree `n`, expanding `(h (x) id) Delta(x) =
//! h(x) 1` and matching coefficients of the second leg yields linear
//! equations among the values `h(x')` with `deg(x') <= n` and matching
//! parity. Degrees are solved incrementally and cached; lower-degree values
//! enter as knowns. Normalization is `h(1) = 1`.

use std::collections::HashMap;

use super::{QAlgebra, QMonomial, QPoly};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::Scalar;

pub(crate) struct HaarCache<S: Scalar> {
    values: HashMap<QMonomial, S>,
    solved_degree: Option<u32>,
}

impl<S: Scalar> HaarCache<S> {
    pub(crate) fn new() -> Self {
        HaarCache {
            values: HashMap::new(),
            solved_degree: None,
        }
    }
}

/// All normal-form monomials of exact total degree `n`.
pub(crate) fn monomials_of_degree(n: u32) -> Vec<QMonomial> {
    let mut out = Vec::new();
    for k in 0..=n {
        for l in 0..=(n - k) {
            let m = n - k - l;
            out.push(QMonomial {
                astar: false,
                k,
                l,
                m,
            });
            if k >= 1 {
                out.push(QMonomial {
                    astar: true,
                    k,
                    l,
                    m,
                });
            }
        }
    }
    out.sort();
    out
}

fn solve_degree<S: Scalar>(alg: &QAlgebra<S>, n: u32) -> Result<()> {
    if n == 0 {
        let mut cache = alg.haar_cache().lock().unwrap();
        cache.values.insert(QMonomial::one(), S::one());
        cache.solved_degree = Some(0);
        return Ok(());
    }
    let unknowns = monomials_of_degree(n);
    let index_of: HashMap<QMonomial, usize> =
        unknowns.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let known: HashMap<QMonomial, S> = {
        let cache = alg.haar_cache().lock().unwrap();
        cache.values.clone()
    };

    // One block of equations per monomial x of degree n: for every
    // second-leg monomial y of Delta(x),
    //   sum_{x'} c_{x',y} h(x') - [y = 1] h(x) = 0.
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut rhs: Vec<S> = Vec::new();
    for x in &unknowns {
        let delta = alg.comul(&QPoly::monomial(*x, S::one()));
        // group coefficients by the second leg
        let mut by_y: HashMap<QMonomial, Vec<(QMonomial, S)>> = HashMap::new();
        for ((x1, y), c) in delta.terms() {
            by_y.entry(*y).or_default().push((*x1, c.clone()));
        }
        for (y, pairs) in by_y {
            let mut row = vec![S::zero(); unknowns.len()];
            let mut known_sum = S::zero();
            for (x1, c) in pairs {
                if let Some(&col) = index_of.get(&x1) {
                    row[col] = row[col].add(&c);
                } else if let Some(v) = known.get(&x1) {
                    known_sum = known_sum.add(&c.mul(v));
                } else {
                    return Err(Error::SingularSolve(format!(
                        "unsolved lower-degree value for {x1:?}"
                    )));
                }
            }
            if y == QMonomial::one() {
                let col = index_of[x];
                row[col] = row[col].sub(&S::one());
            }
            rows.push(row);
            rhs.push(known_sum.neg());
        }
    }

    // Solve the overdetermined system exactly / in least-squares-free form:
    // append the rhs and reduce; the solution must be unique.
    let n_unknowns = unknowns.len();
    let n_rows = rows.len();
    let mut aug = Mat::from_fn(n_rows, n_unknowns + 1, |r, c| {
        if c < n_unknowns {
            rows[r][c].clone()
        } else {
            rhs[r].clone()
        }
    });
    let values = if S::EXACT {
        let pivots = linalg::rref_exact(&mut aug);
        if pivots.contains(&n_unknowns) {
            return Err(Error::SingularSolve(format!(
                "inconsistent invariance system at degree {n}"
            )));
        }
        if pivots.len() < n_unknowns {
            return Err(Error::SingularSolve(format!(
                "invariance system underdetermined at degree {n}"
            )));
        }
        (0..n_unknowns)
            .map(|i| aug.get(i, n_unknowns).clone())
            .collect::<Vec<S>>()
    } else {
        // numeric least squares via SVD
        let a = Mat::from_fn(n_rows, n_unknowns, |r, c| rows[r][c].clone()).to_na();
        let b = nalgebra::DMatrix::from_fn(n_rows, 1, |r, _| rhs[r].to_c64());
        let svd = a.svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let smin = svd
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if smax == 0.0 || smin <= 1e-12 * smax {
            return Err(Error::SingularSolve(format!(
                "invariance system underdetermined at degree {n}"
            )));
        }
        let x = svd
            .solve(&b, 0.0)
            .map_err(|e| Error::SingularSolve(e.to_string()))?;
        (0..n_unknowns)
            .map(|i| {
                let z = x[(i, 0)];
                S::from_big_ratio(
                    &num_rational::BigRational::from_float(z.re)
                        .unwrap_or_else(num_traits::Zero::zero),
                )
                .add(
                    &S::i().mul(&S::from_big_ratio(
                        &num_rational::BigRational::from_float(z.im)
                            .unwrap_or_else(num_traits::Zero::zero),
                    )),
                )
            })
            .collect::<Vec<S>>()
    };

    let mut cache = alg.haar_cache().lock().unwrap();
    for (m, v) in unknowns.iter().zip(values) {
        cache.values.insert(*m, v);
    }
    cache.solved_degree = Some(n);
    Ok(())
}

fn ensure_degree<S: Scalar>(alg: &QAlgebra<S>, degree: u32) -> Result<()> {
    let solved = alg.haar_cache().lock().unwrap().solved_degree;
    let start = match solved {
        Some(d) if d >= degree => return Ok(()),
        Some(d) => d + 1,
        None => 0,
    };
    for n in start..=degree {
        solve_degree(alg, n)?;
    }
    Ok(())
}

pub(crate) fn haar_state<S: Scalar>(alg: &QAlgebra<S>, p: &QPoly<S>) -> Result<S> {
    let degree = p.degree();
    if degree > alg.degree_bound() {
        return Err(Error::DegreeBound {
            got: degree as usize,
            bound: alg.degree_bound() as usize,
        });
    }
    ensure_degree(alg, degree)?;
    let cache = alg.haar_cache().lock().unwrap();
    let mut acc = S::zero();
    for (m, c) in p.terms() {
        let v = cache
            .values
            .get(m)
            .expect("value solved up to the polynomial degree");
        acc = acc.add(&c.mul(v));
    }
    Ok(acc)
}

/// Closed form for the diagonal moments: `h((c c*)^l)`.
/// Equals `(1 - q^2) / (1 - q^{2l+2})` for `q < 1` and `1/(l+1)` at `q = 1`
/// (the limit value).
pub fn haar_diagonal_closed_form<S: Scalar>(alg: &QAlgebra<S>, l: u32) -> S {
    if alg.q_param().is_one() {
        return S::from_ratio(1, (l as i64) + 1);
    }
    let q2 = alg.q().mul(alg.q());
    let num = S::one().sub(&q2);
    let den = S::one().sub(&alg.q_pow(2 * (l as i64) + 2));
    num.mul(&den.inv().expect("q < 1 makes the denominator nonzero"))
}
