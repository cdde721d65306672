//! Machine-readable check reports with deterministic serialization.
//!
//! Field order is fixed by the struct definitions, so identical inputs and
//! flags produce byte-identical output apart from the timestamp. Every
//! failing check names the mathematical identity it violates.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub citation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format: u32,
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub instance: String,
    pub checks: Vec<CheckEntry>,
    pub overall: Status,
}

impl Report {
    pub fn new(instance_digest: String) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs().to_string())
            .unwrap_or_else(|_| "0".into());
        Report {
            format: qsact::json::FORMAT_VERSION,
            tool: "qsact".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            instance: instance_digest,
            checks: Vec::new(),
            overall: Status::Pass,
        }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        if entry.status == Status::Fail {
            self.overall = Status::Fail;
        }
        self.checks.push(entry);
    }

    pub fn residual_check(&mut self, name: &str, residual: f64, tol: f64, citation: &str) {
        let status = if residual <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        self.push(CheckEntry {
            name: name.into(),
            status,
            residual: Some(residual),
            data: None,
            citation: citation.into(),
        });
    }

    pub fn bool_check(&mut self, name: &str, ok: bool, data: serde_json::Value, citation: &str) {
        self.push(CheckEntry {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            data: Some(data),
            citation: citation.into(),
        });
    }

    pub fn info(&mut self, name: &str, data: serde_json::Value, citation: &str) {
        self.push(CheckEntry {
            name: name.into(),
            status: Status::Pass,
            residual: None,
            data: Some(data),
            citation: citation.into(),
        });
    }

    pub fn passes(&self) -> bool {
        self.overall == Status::Pass
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

/// Identity names used as citations in reports.
pub mod cite {
    pub const COASSOCIATIVITY: &str =
        "coassociativity: (Delta ox id) . Delta = (id ox Delta) . Delta";
    pub const HOM_UNITAL: &str = "unital *-homomorphism: phi(1) = 1";
    pub const HOM_MULT: &str = "unital *-homomorphism: phi(xy) = phi(x) phi(y)";
    pub const HOM_ADJOINT: &str = "unital *-homomorphism: phi(x*) = phi(x)*";
    pub const ACTION_AXIOM: &str = "action axiom: (Psi ox id) . Psi = (id ox Delta) . Psi";
    pub const PODLES: &str = "Podles density: span{Psi(m)(1 ox a)} = N ox A";
    pub const INVARIANCE: &str = "state invariance: (omega ox id) Psi(n) = omega(n) 1";
    pub const ERGODICITY: &str = "ergodicity: Psi(n) = n ox 1 only for scalar n";
    pub const RECONSTRUCTION: &str = "matrix form: Psi(e_j) = sum_i e_i ox u_ij";
    pub const UNITARITY: &str = "unitarity: u* u = 1 = u u*";
    pub const INTERTWINING: &str = "intertwining: (T ox 1) u-bar = u (T ox 1)";
    pub const COREPRESENTATION: &str = "representation identity: Delta(u_ij) = sum_k u_ik ox u_kj";
    pub const ADMISSIBILITY: &str = "admissibility: u-bar and u^T invertible in M_n(A)";
    pub const INVARIANT_STATE: &str =
        "faithful invariant state: required for the compact-quantum-group factorization";
    pub const POWERS_FORM: &str = "Powers form: omega(u x u*) = omega_q(x), q in (0,1]";
    pub const EVEN_SUBALGEBRA: &str =
        "even subalgebra: action matrix entries have even total degree";
    pub const FUNDAMENTAL_UNITARY: &str = "fundamental matrix unitarity: U* U = 1 = U U*";
}
