//! Exact engine for the polynomial *-algebra of q-deformed SU(2).
//!
//! Generators `a, c` with relations
//!
//! ```text
//! ac = q ca,   ac* = q c*a,   cc* = c*c,
//! a*a + c*c = 1,   aa* + q^2 cc* = 1
//! ```
//!
//! and the comultiplication of the fundamental matrix
//! `U = [[a, -q c*], [c, a*]]`:
//! `Delta(a) = a (x) a - q c* (x) c`, `Delta(c) = c (x) a + a* (x) c`.
//! Sign conventions for the `-q c*` corner vary across the literature; this
//! crate fixes the one above and verifies every identity against it.
//!
//! Normal-form monomials are `a^k c^l c*^m` or `a*^k c^l c*^m` (`k >= 1` in
//! the second shape). Coefficients are scalars of the ambient [`Scalar`]
//! field with `q` a fixed parameter; in the exact regime all identities are
//! demanded to hold identically, not approximately.

mod action;
mod haar;
mod oracle;
mod tensor;

pub use action::{
    extract_rep_symbolic, fundamental_unitary, in_even_subalgebra, powers_density, powers_onb,
    powers_state_eval, powers_state_object, psi_q, psi_q_on_units, symbolic_fixed_dim,
    symbolic_podles_spanning, verify_suite, M2QElement, SpanningReport, SuQ2Report,
};
pub use haar::haar_diagonal_closed_form;
pub use oracle::TruncatedRep;
pub use tensor::{comul_left, comul_right, QPoly2, QPoly3};

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar, C64};

/// Deformation parameter `q` in `(0, 1]`: exact rational or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum QParam {
    Exact(BigRational),
    Approx(f64),
}

impl QParam {
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        QParam::Exact(BigRational::new(num.into(), den.into())).validated()
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        QParam::Exact(r).validated()
    }

    pub fn from_f64(q: f64) -> Result<Self> {
        QParam::Approx(q).validated()
    }

    fn validated(self) -> Result<Self> {
        let ok = match &self {
            QParam::Exact(r) => r.is_positive() && *r <= BigRational::one(),
            QParam::Approx(q) => *q > 0.0 && *q <= 1.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(
                "q must lie in the interval (0, 1]".into(),
            ))
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            QParam::Exact(r) => crate::scalar::big_ratio_to_f64(r),
            QParam::Approx(q) => *q,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            QParam::Exact(r) => Some(r),
            QParam::Approx(_) => None,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            QParam::Exact(r) => r.is_one(),
            QParam::Approx(q) => *q == 1.0,
        }
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        match self {
            QParam::Exact(r) => S::from_big_ratio(r),
            QParam::Approx(q) => {
                let r = BigRational::from_float(*q).unwrap_or_else(BigRational::zero);
                S::from_big_ratio(&r)
            }
        }
    }
}

/// One of the four generators, used to spell free *-words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    A,
    AStar,
    C,
    CStar,
}

/// Normal-form monomial: `a^k c^l c*^m` when `astar` is false, otherwise
/// `a*^k c^l c*^m` with `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMonomial {
    pub astar: bool,
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

impl QMonomial {
    pub fn one() -> Self {
        QMonomial {
            astar: false,
            k: 0,
            l: 0,
            m: 0,
        }
    }

    pub fn new(astar: bool, k: u32, l: u32, m: u32) -> Result<Self> {
        if astar && k == 0 {
            return Err(Error::InvalidParameter(
                "a*-shaped monomial requires k >= 1".into(),
            ));
        }
        Ok(QMonomial { astar, k, l, m })
    }

    /// Total degree, each generator counting 1.
    pub fn degree(&self) -> u32 {
        self.k + self.l + self.m
    }

    /// The generator letters in normal order.
    pub fn letters(&self) -> Vec<Gen> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        let head = if self.astar { Gen::AStar } else { Gen::A };
        out.extend(std::iter::repeat_n(head, self.k as usize));
        out.extend(std::iter::repeat_n(Gen::C, self.l as usize));
        out.extend(std::iter::repeat_n(Gen::CStar, self.m as usize));
        out
    }
}

/// Element of the polynomial algebra in normal form: a finitely supported
/// coefficient table keyed by ordered monomials. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly<S: Scalar> {
    terms: BTreeMap<QMonomial, S>,
}

impl<S: Scalar> QPoly<S> {
    pub fn zero() -> Self {
        QPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(QMonomial::one(), S::one())
    }

    pub fn monomial(m: QMonomial, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        QPoly { terms }
    }

    pub fn generator(g: Gen) -> Self {
        let m = match g {
            Gen::A => QMonomial {
                astar: false,
                k: 1,
                l: 0,
                m: 0,
            },
            Gen::AStar => QMonomial {
                astar: true,
                k: 1,
                l: 0,
                m: 0,
            },
            Gen::C => QMonomial {
                astar: false,
                k: 0,
                l: 1,
                m: 0,
            },
            Gen::CStar => QMonomial {
                astar: false,
                k: 0,
                l: 0,
                m: 1,
            },
        };
        Self::monomial(m, S::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &QMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    fn insert_add(&mut self, m: QMonomial, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let v = existing.add(&coeff);
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.neg());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, s.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }

    pub fn convert<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> QPoly<T> {
        QPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, f(c))).collect(),
        }
    }
}

/// The polynomial algebra at a fixed deformation parameter. Carries the
/// scalar images of `q` and `q^{-1}` and the Haar-state cache.
pub struct QAlgebra<S: Scalar> {
    q: S,
    q_inv: S,
    q_sq: S,
    param: QParam,
    degree_bound: u32,
    haar: Arc<Mutex<haar::HaarCache<S>>>,
}

impl<S: Scalar> Clone for QAlgebra<S> {
    fn clone(&self) -> Self {
        QAlgebra {
            q: self.q.clone(),
            q_inv: self.q_inv.clone(),
            q_sq: self.q_sq.clone(),
            param: self.param.clone(),
            degree_bound: self.degree_bound,
            haar: Arc::clone(&self.haar),
        }
    }
}

/// Default total-degree bound for Haar solves and spanning checks.
pub const DEFAULT_DEGREE_BOUND: u32 = 8;

impl<S: Scalar> QAlgebra<S> {
    pub fn new(param: QParam) -> Self {
        let q: S = param.to_scalar();
        let q_inv = q.inv().expect("q > 0");
        let q_sq = q.mul(&q);
        QAlgebra {
            q,
            q_inv,
            q_sq,
            param,
            degree_bound: DEFAULT_DEGREE_BOUND,
            haar: Arc::new(Mutex::new(haar::HaarCache::new())),
        }
    }

    pub fn with_degree_bound(mut self, bound: u32) -> Self {
        self.degree_bound = bound;
        self
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn q_param(&self) -> &QParam {
        &self.param
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// `q^e` for a signed exponent.
    pub fn q_pow(&self, e: i64) -> S {
        let base = if e >= 0 { &self.q } else { &self.q_inv };
        let mut acc = S::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(base);
        }
        acc
    }

    /// Right-multiplies a normal monomial by a single generator.
    fn mul_gen(&self, mono: &QMonomial, g: Gen) -> QPoly<S> {
        let &QMonomial { astar, k, l, m } = mono;
        match g {
            Gen::C => QPoly::monomial(
                QMonomial {
                    astar,
                    k,
                    l: l + 1,
                    m,
                },
                S::one(),
            ),
            Gen::CStar => QPoly::monomial(
                QMonomial {
                    astar,
                    k,
                    l,
                    m: m + 1,
                },
                S::one(),
            ),
            Gen::A => {
                // move a left through c^l c*^m: each crossing contributes q^{-1}
                let factor = self.q_pow(-((l + m) as i64));
                if !astar {
                    QPoly::monomial(
                        QMonomial {
                            astar: false,
                            k: k + 1,
                            l,
                            m,
                        },
                        factor,
                    )
                } else {
                    // a*^k a = a*^{k-1} (1 - c c*)
                    let head = QMonomial {
                        astar: k > 1,
                        k: k - 1,
                        l,
                        m,
                    };
                    let tail = QMonomial {
                        astar: k > 1,
                        k: k - 1,
                        l: l + 1,
                        m: m + 1,
                    };
                    let mut out = QPoly::monomial(head, factor.clone());
                    out.insert_add(tail, factor.neg());
                    out
                }
            }
            Gen::AStar => {
                // each crossing with a c-letter contributes q
                let factor = self.q_pow((l + m) as i64);
                if astar || k == 0 {
                    QPoly::monomial(
                        QMonomial {
                            astar: true,
                            k: k + 1,
                            l,
                            m,
                        },
                        factor,
                    )
                } else {
                    // a^k a* = a^{k-1} (1 - q^2 c c*)
                    let head = QMonomial {
                        astar: false,
                        k: k - 1,
                        l,
                        m,
                    };
                    let tail = QMonomial {
                        astar: false,
                        k: k - 1,
                        l: l + 1,
                        m: m + 1,
                    };
                    let mut out = QPoly::monomial(head, factor.clone());
                    out.insert_add(tail, factor.neg().mul(&self.q_sq));
                    out
                }
            }
        }
    }

    /// Product of two normal monomials.
    pub fn mono_mul(&self, x: &QMonomial, y: &QMonomial) -> QPoly<S> {
        let mut acc = QPoly::monomial(*x, S::one());
        for g in y.letters() {
            let mut next = QPoly::zero();
            for (m, c) in acc.terms() {
                let prod = self.mul_gen(m, g);
                for (pm, pc) in prod.terms() {
                    next.insert_add(*pm, c.mul(pc));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn mul(&self, x: &QPoly<S>, y: &QPoly<S>) -> QPoly<S> {
        let mut out = QPoly::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let prod = self.mono_mul(mx, my);
                let c = cx.mul(cy);
                for (pm, pc) in prod.terms() {
                    out.insert_add(*pm, c.mul(pc));
                }
            }
        }
        out
    }

    /// Involution: `(alpha^k c^l c*^m)* = q^{+-k(l+m)} alpha*^k c^m c*^l`.
    pub fn adjoint(&self, x: &QPoly<S>) -> QPoly<S> {
        let mut out = QPoly::zero();
        for (m, c) in x.terms() {
            let sign = if m.astar { -1i64 } else { 1i64 };
            let factor = self.q_pow(sign * (m.k as i64) * ((m.l + m.m) as i64));
            let target = QMonomial {
                astar: !m.astar && m.k > 0,
                k: m.k,
                l: m.m,
                m: m.l,
            };
            out.insert_add(target, c.conj().mul(&factor));
        }
        out
    }

    /// Normal form of a free *-word in the generators.
    pub fn word_to_poly(&self, word: &[Gen]) -> QPoly<S> {
        let mut acc = QPoly::<S>::one();
        for &g in word {
            let mut next = QPoly::zero();
            for (m, c) in acc.terms() {
                let prod = self.mul_gen(m, g);
                for (pm, pc) in prod.terms() {
                    next.insert_add(*pm, c.mul(pc));
                }
            }
            acc = next;
        }
        acc
    }

    /// Comultiplication on a polynomial, landing in the tensor square.
    pub fn comul(&self, x: &QPoly<S>) -> QPoly2<S> {
        let mut out = QPoly2::zero();
        for (m, c) in x.terms() {
            let mut acc = QPoly2::one();
            for g in m.letters() {
                acc = self.mul2(&acc, &self.comul_gen(g));
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    fn comul_gen(&self, g: Gen) -> QPoly2<S> {
        let gen = |h: Gen| QPoly::<S>::generator(h);
        let mut out = QPoly2::zero();
        match g {
            Gen::A => {
                out.add_product(&gen(Gen::A), &gen(Gen::A), &S::one());
                out.add_product(&gen(Gen::CStar), &gen(Gen::C), &self.q.neg());
            }
            Gen::AStar => {
                out.add_product(&gen(Gen::AStar), &gen(Gen::AStar), &S::one());
                out.add_product(&gen(Gen::C), &gen(Gen::CStar), &self.q.neg());
            }
            Gen::C => {
                out.add_product(&gen(Gen::C), &gen(Gen::A), &S::one());
                out.add_product(&gen(Gen::AStar), &gen(Gen::C), &S::one());
            }
            Gen::CStar => {
                out.add_product(&gen(Gen::CStar), &gen(Gen::AStar), &S::one());
                out.add_product(&gen(Gen::A), &gen(Gen::CStar), &S::one());
            }
        }
        out
    }

    /// Product in the tensor square (legwise multiplication).
    pub fn mul2(&self, x: &QPoly2<S>, y: &QPoly2<S>) -> QPoly2<S> {
        let mut out = QPoly2::zero();
        for ((x1, x2), cx) in x.terms() {
            for ((y1, y2), cy) in y.terms() {
                let left = self.mono_mul(x1, y1);
                let right = self.mono_mul(x2, y2);
                let c = cx.mul(cy);
                for (lm, lc) in left.terms() {
                    for (rm, rc) in right.terms() {
                        out.insert_add((*lm, *rm), c.mul(lc).mul(rc));
                    }
                }
            }
        }
        out
    }

    /// Adjoint in the tensor square (legwise involution).
    pub fn adjoint2(&self, x: &QPoly2<S>) -> QPoly2<S> {
        let mut out = QPoly2::zero();
        for ((m1, m2), c) in x.terms() {
            let a1 = self.adjoint(&QPoly::monomial(*m1, S::one()));
            let a2 = self.adjoint(&QPoly::monomial(*m2, S::one()));
            for (lm, lc) in a1.terms() {
                for (rm, rc) in a2.terms() {
                    out.insert_add((*lm, *rm), c.conj().mul(lc).mul(rc));
                }
            }
        }
        out
    }

    /// Haar state of a polynomial: the unique invariant normalized
    /// functional values on the spanned degrees, solved degree by degree.
    pub fn haar_state(&self, p: &QPoly<S>) -> Result<S> {
        haar::haar_state(self, p)
    }

    pub(crate) fn haar_cache(&self) -> &Mutex<haar::HaarCache<S>> {
        &self.haar
    }
}

impl QAlgebra<Exact> {
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        Ok(QAlgebra::new(QParam::exact(num, den)?))
    }
}

impl QAlgebra<C64> {
    pub fn numeric(q: f64) -> Result<Self> {
        Ok(QAlgebra::new(QParam::from_f64(q)?))
    }
}
