//! Truncated-representation oracle for the polynomial algebra.
//!
//! On the (K+1)-level truncation of the standard infinite-dimensional
//! representation, `a` lowers with weights `sqrt(1 - q^{2n})` and `c` is
//! diagonal `q^n`. All defining relations hold exactly except
//! `aa* + q^2 cc* = 1`, which deviates only at the top level; any symbolic
//! identity verified by the engine must therefore also vanish numerically
//! on vectors supported below `K - deg`.

use nalgebra::DMatrix;

use super::{Gen, QAlgebra, QPoly};
use crate::scalar::{Scalar, C64};

pub struct TruncatedRep {
    k: usize,
    q: f64,
    a: DMatrix<C64>,
    a_star: DMatrix<C64>,
    c: DMatrix<C64>,
    c_star: DMatrix<C64>,
}

impl TruncatedRep {
    pub fn new(k: usize, q: f64) -> Self {
        let n = k + 1;
        let mut a = DMatrix::<C64>::zeros(n, n);
        for level in 1..n {
            let w = (1.0 - q.powi(2 * level as i32)).max(0.0).sqrt();
            a[(level - 1, level)] = C64::new(w, 0.0);
        }
        let mut c = DMatrix::<C64>::zeros(n, n);
        for level in 0..n {
            c[(level, level)] = C64::new(q.powi(level as i32), 0.0);
        }
        let a_star = a.adjoint();
        let c_star = c.adjoint();
        TruncatedRep {
            k,
            q,
            a,
            a_star,
            c,
            c_star,
        }
    }

    pub fn level_count(&self) -> usize {
        self.k + 1
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn gen_matrix(&self, g: Gen) -> &DMatrix<C64> {
        match g {
            Gen::A => &self.a,
            Gen::AStar => &self.a_star,
            Gen::C => &self.c,
            Gen::CStar => &self.c_star,
        }
    }

    /// Evaluates a free word as an operator product.
    pub fn eval_word(&self, word: &[Gen]) -> DMatrix<C64> {
        let n = self.level_count();
        let mut acc = DMatrix::<C64>::identity(n, n);
        for &g in word {
            acc = &acc * self.gen_matrix(g);
        }
        acc
    }

    /// Evaluates a normal-form polynomial.
    pub fn eval<S: Scalar>(&self, p: &QPoly<S>) -> DMatrix<C64> {
        let n = self.level_count();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for (m, coeff) in p.terms() {
            let word = m.letters();
            acc += self.eval_word(&word) * coeff.to_c64();
        }
        acc
    }

    /// Largest magnitude over the columns `0..=last_col` (vectors supported
    /// below that level).
    pub fn sup_on_columns(&self, m: &DMatrix<C64>, last_col: usize) -> f64 {
        let mut worst = 0.0f64;
        for col in 0..=last_col.min(self.k) {
            for row in 0..self.level_count() {
                worst = worst.max(m[(row, col)].norm());
            }
        }
        worst
    }

    /// Checks that the engine's normal form represents the same operator as
    /// the free word, away from the truncation boundary.
    pub fn word_residual<S: Scalar>(&self, alg: &QAlgebra<S>, word: &[Gen]) -> f64 {
        let direct = self.eval_word(word);
        let normal = self.eval(&alg.word_to_poly(word));
        let deg = word.len();
        if deg >= self.k {
            return 0.0;
        }
        self.sup_on_columns(&(direct - normal), self.k - deg)
    }

    /// Haar state via the weighted trace `(1-q^2) sum_n q^{2n} <n|p|n>`;
    /// valid for q < 1, with truncation error of order `q^{2K}`.
    pub fn haar_weighted<S: Scalar>(&self, p: &QPoly<S>) -> C64 {
        assert!(self.q < 1.0, "weighted-trace formula requires q < 1");
        let mat = self.eval(p);
        let mut acc = C64::new(0.0, 0.0);
        for level in 0..self.level_count() {
            acc += mat[(level, level)] * C64::new(self.q.powi(2 * level as i32), 0.0);
        }
        acc * C64::new(1.0 - self.q * self.q, 0.0)
    }
}
