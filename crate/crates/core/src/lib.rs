//! Verification and classification toolkit for quantum semigroup actions on
//! finite quantum spaces.
//!
//! A *finite quantum space* is the dual object of a finite-dimensional
//! C*-algebra; a *quantum semigroup* is an algebra together with a
//! coassociative comultiplication; an *action* is a morphism
//! `Psi: N -> N (x) A` compatible with the comultiplication. This crate
//! checks the defining axioms (coassociativity, the action identity, the
//! Podles density condition, state invariance, ergodicity), extracts the
//! representation matrix of an action relative to an orthonormal basis for
//! the GNS scalar product of an invariant state, certifies unitarity,
//! intertwining and admissibility, and classifies actions on M2 preserving a
//! faithful state into Powers-state form (q, u) with a quantum-SO(3)
//! factorization certificate. A dedicated exact engine covers the polynomial
//! *-algebra of q-deformed SU(2), where every identity is demanded to hold
//! in rational arithmetic.

#![allow(clippy::needless_range_loop)]

pub mod coact;
pub mod error;
pub mod fqs;
pub mod instances;
pub mod json;
pub mod linalg;
pub mod m2class;
pub mod mat;
pub mod qsg;
pub mod rep;
pub mod scalar;
pub mod suq2;

pub use error::{Error, Result};
pub use fqs::{Element, FdAlgebra, LinearMap, State};
pub use mat::Mat;
pub use scalar::{Exact, Scalar, C64};

/// Default pass/fail tolerance for numeric residuals.
pub const DEFAULT_TOL: f64 = 1e-9;
