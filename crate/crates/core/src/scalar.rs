//! Scalar fields for the two arithmetic regimes.
//!
//! Every algebraic structure in this crate is generic over a [`Scalar`]:
//! either [`C64`] (double-precision complex, residuals compared against
//! tolerances) or [`Exact`] (complex numbers with coordinates in a real
//! quadratic extension of the rationals, residuals demanded identically
//! zero). The quadratic part is what lets orthonormalization stay exact:
//! norms like 1/sqrt(1+q^2) live in Q(sqrt(1+q^2)), not in Q.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Complex scalar used by numeric instances.
pub type C64 = Complex64;

/// Field operations shared by the numeric and exact regimes.
///
/// `EXACT` selects the linear-algebra backend: exact scalars get
/// fraction-free style Gaussian elimination, numeric scalars get SVD-based
/// rank and least-squares decisions.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_big_ratio(r: &BigRational) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Complex conjugate.
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Magnitude as f64, used for residual reporting in both regimes.
    fn abs(&self) -> f64;
    fn to_c64(&self) -> C64;

    /// Square root of a nonnegative real scalar, when representable in the
    /// field. Numeric scalars always succeed; exact scalars succeed when the
    /// radicand is `r^2` or `r^2 * m` for the value's radicand `m`.
    fn sqrt_nonneg(&self) -> Option<Self>;

    /// Real and imaginary parts as plain rationals, when the scalar is an
    /// exact value with no radical component. Numeric scalars return `None`.
    fn rational_parts(&self) -> Option<(BigRational, BigRational)>;
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_big_ratio(r: &BigRational) -> Self {
        Complex64::new(big_ratio_to_f64(r), 0.0)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn inv(&self) -> Option<Self> {
        if self.norm_sqr() == 0.0 {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }

    fn sqrt_nonneg(&self) -> Option<Self> {
        // Norms computed from states carry rounding noise in the imaginary
        // part; only the real part is meaningful here.
        Some(Complex64::new(self.re.max(0.0).sqrt(), 0.0))
    }

    fn rational_parts(&self) -> Option<(BigRational, BigRational)> {
        None
    }
}

/// Converts a big rational to f64 without overflowing on large terms.
pub fn big_ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Parses "p/q" or "p" into a rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("not a rational: {s}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("not a rational: {s}")))?;
    if den.is_zero() {
        return Err(Error::InvalidParameter(format!("zero denominator: {s}")));
    }
    Ok(BigRational::new(num, den))
}

fn big_is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Splits `n >= 1` as `s^2 * m` with `m` square-reduced by trial division.
/// Leftover factors above the trial bound are kept in `m`; that only affects
/// how radicands are normalized, never field correctness.
fn extract_square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut m = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(1000);
    while &p * &p <= m && p <= bound {
        let p2 = &p * &p;
        while (&m % &p2).is_zero() {
            m /= &p2;
            s *= &p;
        }
        p += 1;
    }
    if let Some(r) = big_is_perfect_square(&m) {
        s *= r;
        m = BigInt::one();
    }
    (s, m)
}

/// Real element `a + b*sqrt(m)` of a quadratic extension of Q.
/// Normalization: `b = 0` forces `m = 0`; `m` is never a perfect square.
#[derive(Clone, PartialEq, Eq)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    m: BigInt,
}

impl Quad {
    pub fn from_ratio(a: BigRational) -> Self {
        Quad {
            a,
            b: BigRational::zero(),
            m: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_ratio(BigRational::one())
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.m = BigInt::zero();
        }
        self
    }

    fn radicand(&self, other: &Quad) -> BigInt {
        // The joint radicand for a binary operation; mismatched nonzero
        // radicands cannot be combined inside a single quadratic field.
        if self.b.is_zero() {
            other.m.clone()
        } else if other.b.is_zero() || self.m == other.m {
            self.m.clone()
        } else {
            panic!(
                "incompatible radicands sqrt({}) and sqrt({}); use the numeric scalar field",
                self.m, other.m
            );
        }
    }

    pub fn add(&self, other: &Quad) -> Quad {
        let m = self.radicand(other);
        Quad {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            m,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Quad) -> Quad {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Quad {
        Quad {
            a: -self.a.clone(),
            b: -self.b.clone(),
            m: self.m.clone(),
        }
    }

    pub fn mul(&self, other: &Quad) -> Quad {
        let m = self.radicand(other);
        let mr = BigRational::from_integer(m.clone());
        Quad {
            a: &self.a * &other.a + &self.b * &other.b * &mr,
            b: &self.a * &other.b + &self.b * &other.a,
            m,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn inv(&self) -> Option<Quad> {
        if self.is_zero() {
            return None;
        }
        // (a + b sqrt m)^-1 = (a - b sqrt m) / (a^2 - b^2 m)
        let mr = BigRational::from_integer(self.m.clone());
        let den = &self.a * &self.a - &self.b * &self.b * &mr;
        if den.is_zero() {
            // impossible for non-square m; guard anyway
            return None;
        }
        Some(
            Quad {
                a: &self.a / &den,
                b: -(&self.b / &den),
                m: self.m.clone(),
            }
            .normalized(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        let root = self.m.to_f64().unwrap_or(f64::MAX).sqrt();
        big_ratio_to_f64(&self.a) + big_ratio_to_f64(&self.b) * root
    }

    /// Exact sign of the value.
    pub fn is_negative(&self) -> bool {
        if self.b.is_zero() {
            return self.a.is_negative();
        }
        if self.a.is_zero() {
            return self.b.is_negative();
        }
        // a and b both nonzero: compare a against -b sqrt(m) by squaring.
        let mr = BigRational::from_integer(self.m.clone());
        let a2 = &self.a * &self.a;
        let b2m = &self.b * &self.b * &mr;
        match (self.a.is_negative(), self.b.is_negative()) {
            (false, false) => false,
            (true, true) => true,
            (false, true) => a2 < b2m,
            (true, false) => a2 > b2m,
        }
    }

    /// Exact square root of a nonnegative value, when it stays inside the
    /// same quadratic field.
    pub fn sqrt_nonneg(&self) -> Option<Quad> {
        if self.is_negative() {
            return None;
        }
        if !self.b.is_zero() {
            // A nested radical; not representable here.
            return None;
        }
        if self.a.is_zero() {
            return Some(Quad::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q; split p*q = s^2 * m.
        let p = self.a.numer().clone();
        let q = self.a.denom().clone();
        let (s, m) = extract_square_part(&(&p * &q));
        let coeff = BigRational::new(s, q);
        if m.is_one() {
            Some(Quad::from_ratio(coeff))
        } else {
            Some(
                Quad {
                    a: BigRational::zero(),
                    b: coeff,
                    m,
                }
                .normalized(),
            )
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// The rational value, if the radical part vanishes.
    pub fn as_ratio(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.m)
        }
    }
}

/// Exact complex scalar: real and imaginary parts in a quadratic extension.
#[derive(Clone, PartialEq)]
pub struct Exact {
    pub re: Quad,
    pub im: Quad,
}

impl Exact {
    pub fn from_rational(r: BigRational) -> Self {
        Exact {
            re: Quad::from_ratio(r),
            im: Quad::zero(),
        }
    }

    pub fn from_quad(re: Quad) -> Self {
        Exact {
            re,
            im: Quad::zero(),
        }
    }

    /// The rational value, if the scalar is real rational.
    pub fn as_ratio(&self) -> Option<&BigRational> {
        if self.im.is_zero() {
            self.re.as_ratio()
        } else {
            None
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{:?}", self.re)
        } else {
            write!(f, "({:?})+({:?})i", self.re, self.im)
        }
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Exact {
            re: Quad::zero(),
            im: Quad::zero(),
        }
    }
    fn one() -> Self {
        Exact {
            re: Quad::one(),
            im: Quad::zero(),
        }
    }
    fn i() -> Self {
        Exact {
            re: Quad::zero(),
            im: Quad::one(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Exact::from_rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_big_ratio(r: &BigRational) -> Self {
        Exact::from_rational(r.clone())
    }

    fn add(&self, other: &Self) -> Self {
        Exact {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        Exact {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        Exact {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }
    fn neg(&self) -> Self {
        Exact {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
    fn conj(&self) -> Self {
        Exact {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
    fn inv(&self) -> Option<Self> {
        // z^-1 = conj(z) / |z|^2 with |z|^2 real in the quadratic field.
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ninv = norm.inv()?;
        Some(Exact {
            re: self.re.mul(&ninv),
            im: self.im.neg().mul(&ninv),
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> C64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn sqrt_nonneg(&self) -> Option<Self> {
        if !self.im.is_zero() {
            return None;
        }
        Some(Exact {
            re: self.re.sqrt_nonneg()?,
            im: Quad::zero(),
        })
    }

    fn rational_parts(&self) -> Option<(BigRational, BigRational)> {
        Some((self.re.as_ratio()?.clone(), self.im.as_ratio()?.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn quad_field_ops() {
        // x = 1 + 2 sqrt(5), y = 3 - sqrt(5)
        let five = BigInt::from(5);
        let x = Quad {
            a: ratio(1, 1),
            b: ratio(2, 1),
            m: five.clone(),
        };
        let y = Quad {
            a: ratio(3, 1),
            b: ratio(-1, 1),
            m: five.clone(),
        };
        // x*y = 3 - sqrt5 + 6 sqrt5 - 2*5 = -7 + 5 sqrt5
        let xy = x.mul(&y);
        assert_eq!(xy.a, ratio(-7, 1));
        assert_eq!(xy.b, ratio(5, 1));
        // x * x^-1 = 1
        let xinv = x.inv().unwrap();
        assert_eq!(x.mul(&xinv), Quad::one());
    }

    #[test]
    fn quad_sqrt_within_field() {
        // sqrt(4/5) = (2/5) sqrt(5)
        let v = Quad::from_ratio(ratio(4, 5));
        let r = v.sqrt_nonneg().unwrap();
        assert_eq!(r.a, ratio(0, 1));
        assert_eq!(r.b, ratio(2, 5));
        assert_eq!(r.m, BigInt::from(5));
        assert_eq!(r.mul(&r), v);
        // sqrt of a perfect square collapses to a rational
        let w = Quad::from_ratio(ratio(25, 16)).sqrt_nonneg().unwrap();
        assert_eq!(w.as_ratio().unwrap(), &ratio(5, 4));
    }

    #[test]
    fn quad_sign() {
        let five = BigInt::from(5);
        // 3 - sqrt(5) > 0, 2 - sqrt(5) < 0
        let p = Quad {
            a: ratio(3, 1),
            b: ratio(-1, 1),
            m: five.clone(),
        };
        let n = Quad {
            a: ratio(2, 1),
            b: ratio(-1, 1),
            m: five,
        };
        assert!(!p.is_negative());
        assert!(n.is_negative());
    }

    #[test]
    fn exact_complex_inverse() {
        let z = Exact {
            re: Quad::from_ratio(ratio(1, 2)),
            im: Quad::from_ratio(ratio(-3, 4)),
        };
        let zi = z.inv().unwrap();
        assert_eq!(z.mul(&zi), Exact::one());
    }

    #[test]
    fn parse_ratio_forms() {
        assert_eq!(parse_ratio("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_ratio("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_ratio(" -2/6 ").unwrap(), ratio(-1, 3));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn nested_radical_rejected() {
        let five = BigInt::from(5);
        let v = Quad {
            a: ratio(1, 1),
            b: ratio(1, 1),
            m: five,
        };
        assert!(v.sqrt_nonneg().is_none());
    }
}
