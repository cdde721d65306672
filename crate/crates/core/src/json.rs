//! JSON interchange schemas (format 1).
//!
//! Complex numbers are two-element arrays `[re, im]`; each part is either a
//! JSON number or an exact rational `[numerator, denominator]` given as
//! decimal-digit strings (arbitrary precision). Elements are lists of
//! row-major block matrices; states carry one density block per algebra
//! block; linear maps carry their matrix over the canonical bases of the
//! declared source and target. Loading is scalar-generic: the exact regime
//! refuses non-integral floating entries instead of rounding them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coact::Action;
use crate::error::{Error, Result};
use crate::fqs::{Element, FdAlgebra, LinearMap, State};
use crate::mat::Mat;
use crate::qsg::{from_finite_semigroup, QSemigroup};
use crate::scalar::Scalar;
use crate::suq2::{QMonomial, QPoly};

/// Schema version carried by every top-level document.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonReal {
    Num(f64),
    Ratio([String; 2]),
}

pub type JsonComplex = [JsonReal; 2];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub blocks: Vec<usize>,
}

/// Row-major square matrix of complex entries.
pub type MatrixJson = Vec<Vec<JsonComplex>>;

/// One matrix per algebra block.
pub type ElementJson = Vec<MatrixJson>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub densities: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearMapJson {
    pub source: AlgebraJson,
    pub target: AlgebraJson,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QSemigroupJson {
    pub algebra: AlgebraJson,
    pub comul: LinearMapJson,
}

/// A semigroup instance: either classical multiplication-table data or the
/// full quantum data.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemigroupInput {
    Table { semigroup_table: Vec<Vec<usize>> },
    Quantum(QSemigroupJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionJson {
    pub space: AlgebraJson,
    pub semigroup: SemigroupInput,
    pub map: LinearMapJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialJson {
    pub astar: bool,
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QTermJson {
    pub monomial: MonomialJson,
    pub coeff: JsonComplex,
}

pub type QPolyJson = Vec<QTermJson>;

fn parse_digits(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Schema(format!("not a decimal integer: {s}")))
}

pub fn real_from_json<S: Scalar>(j: &JsonReal) -> Result<S> {
    match j {
        JsonReal::Num(x) => {
            if S::EXACT {
                if x.fract() != 0.0 || x.abs() > 9.007_199_254_740_992e15 {
                    return Err(Error::Schema(format!(
                        "exact mode requires integer or [num, den] entries, got {x}"
                    )));
                }
                Ok(S::from_big_ratio(&BigRational::from_integer(BigInt::from(
                    *x as i64,
                ))))
            } else {
                let r = BigRational::from_float(*x)
                    .ok_or_else(|| Error::Schema(format!("non-finite number {x}")))?;
                Ok(S::from_big_ratio(&r))
            }
        }
        JsonReal::Ratio([num, den]) => {
            let n = parse_digits(num)?;
            let d = parse_digits(den)?;
            if d.is_zero() {
                return Err(Error::Schema("zero denominator".into()));
            }
            Ok(S::from_big_ratio(&BigRational::new(n, d)))
        }
    }
}

pub fn complex_from_json<S: Scalar>(j: &JsonComplex) -> Result<S> {
    let re = real_from_json::<S>(&j[0])?;
    let im = real_from_json::<S>(&j[1])?;
    Ok(re.add(&S::i().mul(&im)))
}

fn ratio_to_json(r: &BigRational) -> JsonReal {
    JsonReal::Ratio([r.numer().to_string(), r.denom().to_string()])
}

pub fn complex_to_json<S: Scalar>(s: &S) -> JsonComplex {
    match s.rational_parts() {
        Some((re, im)) => [ratio_to_json(&re), ratio_to_json(&im)],
        None => {
            let z = s.to_c64();
            [JsonReal::Num(z.re), JsonReal::Num(z.im)]
        }
    }
}

fn mat_from_json<S: Scalar>(m: &MatrixJson, rows: usize, cols: usize) -> Result<Mat<S>> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Schema(format!(
            "matrix shape mismatch: expected {rows}x{cols}"
        )));
    }
    let mut out = Mat::zeros(rows, cols);
    for (r, row) in m.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            out.set(r, c, complex_from_json(z)?);
        }
    }
    Ok(out)
}

fn mat_to_json<S: Scalar>(m: &Mat<S>) -> MatrixJson {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| complex_to_json(m.get(r, c)))
                .collect()
        })
        .collect()
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<FdAlgebra> {
    FdAlgebra::new(j.blocks.clone())
}

pub fn algebra_to_json(a: &FdAlgebra) -> AlgebraJson {
    AlgebraJson {
        blocks: a.blocks().to_vec(),
    }
}

pub fn element_from_json<S: Scalar>(algebra: &FdAlgebra, j: &ElementJson) -> Result<Element<S>> {
    if j.len() != algebra.blocks().len() {
        return Err(Error::Schema("wrong number of element blocks".into()));
    }
    let blocks = j
        .iter()
        .zip(algebra.blocks())
        .map(|(m, &d)| mat_from_json(m, d, d))
        .collect::<Result<Vec<_>>>()?;
    Element::new(algebra.clone(), blocks).map_err(|e| Error::Schema(e.to_string()))
}

pub fn element_to_json<S: Scalar>(e: &Element<S>) -> ElementJson {
    (0..e.algebra().blocks().len())
        .map(|b| mat_to_json(e.block(b)))
        .collect()
}

pub fn state_from_json<S: Scalar>(algebra: &FdAlgebra, j: &StateJson) -> Result<State<S>> {
    if j.densities.len() != algebra.blocks().len() {
        return Err(Error::Schema("wrong number of density blocks".into()));
    }
    let densities = j
        .densities
        .iter()
        .zip(algebra.blocks())
        .map(|(m, &d)| mat_from_json(m, d, d))
        .collect::<Result<Vec<_>>>()?;
    State::new(algebra.clone(), densities).map_err(|e| Error::Schema(e.to_string()))
}

pub fn state_to_json<S: Scalar>(s: &State<S>) -> StateJson {
    StateJson {
        densities: (0..s.algebra().blocks().len())
            .map(|b| mat_to_json(s.density(b)))
            .collect(),
    }
}

pub fn linear_map_from_json<S: Scalar>(j: &LinearMapJson) -> Result<LinearMap<S>> {
    let source = algebra_from_json(&j.source)?;
    let target = algebra_from_json(&j.target)?;
    let matrix = mat_from_json(&j.matrix, target.dim(), source.dim())?;
    LinearMap::new(source, target, matrix).map_err(|e| Error::Schema(e.to_string()))
}

pub fn linear_map_to_json<S: Scalar>(m: &LinearMap<S>) -> LinearMapJson {
    LinearMapJson {
        source: algebra_to_json(m.source()),
        target: algebra_to_json(m.target()),
        matrix: mat_to_json(m.matrix()),
    }
}

pub fn semigroup_from_json<S: Scalar>(j: &SemigroupInput) -> Result<QSemigroup<S>> {
    match j {
        SemigroupInput::Table { semigroup_table } => from_finite_semigroup(semigroup_table),
        SemigroupInput::Quantum(qj) => {
            let algebra = algebra_from_json(&qj.algebra)?;
            let comul = linear_map_from_json(&qj.comul)?;
            QSemigroup::new_unchecked(algebra, comul)
        }
    }
}

pub fn semigroup_to_json<S: Scalar>(s: &QSemigroup<S>) -> QSemigroupJson {
    QSemigroupJson {
        algebra: algebra_to_json(s.algebra()),
        comul: linear_map_to_json(s.comul()),
    }
}

pub fn action_from_json<S: Scalar>(j: &ActionJson) -> Result<Action<S>> {
    let space = algebra_from_json(&j.space)?;
    let semigroup = semigroup_from_json(&j.semigroup)?;
    let map = linear_map_from_json(&j.map)?;
    Action::new_unchecked(space, semigroup, map)
}

pub fn action_to_json<S: Scalar>(a: &Action<S>) -> ActionJson {
    ActionJson {
        space: algebra_to_json(a.space()),
        semigroup: SemigroupInput::Quantum(semigroup_to_json(a.semigroup())),
        map: linear_map_to_json(a.map()),
    }
}

pub fn qpoly_to_json<S: Scalar>(p: &QPoly<S>) -> QPolyJson {
    p.terms()
        .map(|(m, c)| QTermJson {
            monomial: MonomialJson {
                astar: m.astar,
                k: m.k,
                l: m.l,
                m: m.m,
            },
            coeff: complex_to_json(c),
        })
        .collect()
}

pub fn qpoly_from_json<S: Scalar>(j: &QPolyJson) -> Result<QPoly<S>> {
    let mut out = QPoly::zero();
    for term in j {
        let m = QMonomial::new(
            term.monomial.astar,
            term.monomial.k,
            term.monomial.l,
            term.monomial.m,
        )?;
        out = out.add(&QPoly::monomial(m, complex_from_json(&term.coeff)?));
    }
    Ok(out)
}
