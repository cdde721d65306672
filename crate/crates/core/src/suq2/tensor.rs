//! Tensor powers of the polynomial algebra: coefficient tables keyed by
//! pairs and triples of normal-form monomials. Only the operations the
//! verification pipeline needs are provided.

use std::collections::BTreeMap;

use super::{QAlgebra, QMonomial, QPoly};
use crate::scalar::Scalar;

/// Element of the tensor square `Pol (x) Pol`.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly2<S: Scalar> {
    terms: BTreeMap<(QMonomial, QMonomial), S>,
}

impl<S: Scalar> QPoly2<S> {
    pub fn zero() -> Self {
        QPoly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((QMonomial::one(), QMonomial::one()), S::one());
        QPoly2 { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(QMonomial, QMonomial), &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub(crate) fn insert_add(&mut self, key: (QMonomial, QMonomial), coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let v = existing.add(&coeff);
                if v.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// Adds `scale * (x (x) y)` for plain polynomials `x`, `y`.
    pub fn add_product(&mut self, x: &QPoly<S>, y: &QPoly<S>, scale: &S) {
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                self.insert_add((*mx, *my), scale.mul(cx).mul(cy));
            }
        }
    }

    pub fn from_product(x: &QPoly<S>, y: &QPoly<S>) -> Self {
        let mut out = Self::zero();
        out.add_product(x, y, &S::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.neg());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QPoly2 {
            terms: self.terms.iter().map(|(k, c)| (*k, s.mul(c))).collect(),
        }
    }
}

/// Element of the tensor cube, used only for coassociativity checks.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly3<S: Scalar> {
    terms: BTreeMap<(QMonomial, QMonomial, QMonomial), S>,
}

impl<S: Scalar> QPoly3<S> {
    pub fn zero() -> Self {
        QPoly3 {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    fn insert_add(&mut self, key: (QMonomial, QMonomial, QMonomial), coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let v = existing.add(&coeff);
                if v.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.neg());
        }
        out
    }
}

/// `(Delta (x) id)` applied to a tensor-square element.
pub fn comul_left<S: Scalar>(alg: &QAlgebra<S>, x: &QPoly2<S>) -> QPoly3<S> {
    let mut out = QPoly3::zero();
    for ((m1, m2), c) in x.terms() {
        let d = alg.comul(&QPoly::monomial(*m1, S::one()));
        for ((p1, p2), dc) in d.terms() {
            out.insert_add((*p1, *p2, *m2), c.mul(dc));
        }
    }
    out
}

/// `(id (x) Delta)` applied to a tensor-square element.
pub fn comul_right<S: Scalar>(alg: &QAlgebra<S>, x: &QPoly2<S>) -> QPoly3<S> {
    let mut out = QPoly3::zero();
    for ((m1, m2), c) in x.terms() {
        let d = alg.comul(&QPoly::monomial(*m2, S::one()));
        for ((p1, p2), dc) in d.terms() {
            out.insert_add((*m1, *p1, *p2), c.mul(dc));
        }
    }
    out
}
