//! Named bundled instances and their expected check outcomes.

use qsact::coact::Action;
use qsact::instances;
use qsact::qsg::QSemigroup;
use qsact::scalar::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinKind {
    Semigroup,
    Action,
    /// The symbolic q-parametrized action on M2.
    Symbolic,
}

pub struct Builtin {
    pub name: &'static str,
    pub kind: BuiltinKind,
    /// Overall status the builtin's natural check command must produce.
    pub expected: &'static str,
    pub description: &'static str,
}

pub const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "z2_ad_sigma_z",
        kind: BuiltinKind::Action,
        expected: "pass",
        description: "Z2 acting on M2 by sigma_z conjugation",
    },
    Builtin {
        name: "trivial_m2",
        kind: BuiltinKind::Action,
        expected: "pass",
        description: "trivial action of the trivial monoid on M2",
    },
    Builtin {
        name: "idempotent_noncontinuous",
        kind: BuiltinKind::Action,
        expected: "fail",
        description: "idempotent compression on C^2: fails the density condition",
    },
    Builtin {
        name: "psi_q",
        kind: BuiltinKind::Symbolic,
        expected: "pass",
        description: "the q-deformed SU(2) action on M2 (exact engine)",
    },
    Builtin {
        name: "null_semigroup",
        kind: BuiltinKind::Semigroup,
        expected: "pass",
        description: "two-element semigroup with constant product",
    },
    Builtin {
        name: "left_zero_2",
        kind: BuiltinKind::Semigroup,
        expected: "pass",
        description: "left-zero semigroup of order 2",
    },
];

pub fn builtin_action(name: &str) -> Option<Action<C64>> {
    match name {
        "z2_ad_sigma_z" => Some(instances::z2_ad_sigma_z()),
        "trivial_m2" => Some(instances::trivial_m2()),
        "idempotent_noncontinuous" => Some(instances::idempotent_noncontinuous()),
        _ => None,
    }
}

pub fn builtin_semigroup(name: &str) -> Option<QSemigroup<C64>> {
    match name {
        "null_semigroup" => Some(instances::null_semigroup()),
        "left_zero_2" => Some(instances::left_zero_2()),
        _ => None,
    }
}
