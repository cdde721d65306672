//! Subcommand implementations: load an instance, run the checks, emit a
//! report value and an overall pass flag.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde_json::{json, Value};

use qsact::coact::{
    check_action_axiom, check_ergodic, check_invariance, check_podles, invariant_states, Action,
    InvariantFlag,
};
use qsact::fqs::{check_star_hom, is_faithful, orthonormal_basis, StarHomReport, State};
use qsact::json as schema;
use qsact::m2class::{classify_action, classify_builtin_psi_q, Certificate, Classification};
use qsact::qsg::{check_coassociativity, QSemigroup};
use qsact::rep::{
    check_admissible, check_corepresentation, check_intertwine, check_unitary, conjugation_matrix,
    extract_rep, FdCoeff,
};
use qsact::scalar::{parse_ratio, Exact, Scalar, C64};
use qsact::suq2::{verify_suite, QAlgebra, QParam, SuQ2Report};

use crate::builtins::{self, BuiltinKind};
use crate::report::{cite, digest_bytes, Report};

pub struct Outcome {
    pub value: Value,
    pub passes: bool,
}

#[derive(Clone)]
pub struct CommonOpts {
    pub tolerance: f64,
    pub exact: bool,
}

impl CommonOpts {
    fn effective_tol(&self) -> f64 {
        if self.exact {
            0.0
        } else {
            self.tolerance
        }
    }
}

fn read_input(path: &Path) -> anyhow::Result<(String, String)> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read input file {}", path.display()))?;
    let text = String::from_utf8(bytes).context("input is not valid UTF-8")?;
    Ok((digest_bytes(text.as_bytes()), text))
}

fn report_value(report: &Report) -> Value {
    serde_json::to_value(report).expect("report serialization")
}

fn push_star_hom(report: &mut Report, prefix: &str, hom: &StarHomReport, tol: f64) {
    report.residual_check(
        &format!("{prefix}_unital"),
        hom.unital,
        tol,
        cite::HOM_UNITAL,
    );
    report.residual_check(
        &format!("{prefix}_multiplicative"),
        hom.multiplicative,
        tol,
        cite::HOM_MULT,
    );
    report.residual_check(
        &format!("{prefix}_adjoint"),
        hom.adjoint,
        tol,
        cite::HOM_ADJOINT,
    );
}

fn semigroup_report<S: Scalar>(sg: &QSemigroup<S>, tol: f64, digest: String) -> Report {
    let mut report = Report::new(digest);
    push_star_hom(
        &mut report,
        "comultiplication",
        &check_star_hom(sg.comul()),
        tol,
    );
    report.residual_check(
        "coassociativity",
        check_coassociativity(sg),
        tol,
        cite::COASSOCIATIVITY,
    );
    report
}

fn action_report<S: Scalar>(
    action: &Action<S>,
    state: Option<&State<S>>,
    tol: f64,
    digest: String,
) -> Report {
    let mut report = Report::new(digest);
    push_star_hom(
        &mut report,
        "comultiplication",
        &check_star_hom(action.semigroup().comul()),
        tol,
    );
    report.residual_check(
        "coassociativity",
        check_coassociativity(action.semigroup()),
        tol,
        cite::COASSOCIATIVITY,
    );
    push_star_hom(
        &mut report,
        "action_map",
        &check_star_hom(action.map()),
        tol,
    );
    report.residual_check(
        "action_axiom",
        check_action_axiom(action),
        tol,
        cite::ACTION_AXIOM,
    );
    let podles = check_podles(action);
    report.bool_check(
        "podles_density",
        podles.passes,
        json!({"rank": podles.rank, "full_rank_needed": podles.full_rank_needed}),
        cite::PODLES,
    );
    if let Some(omega) = state {
        match check_invariance(action, omega) {
            Ok(res) => report.residual_check("state_invariance", res, tol, cite::INVARIANCE),
            Err(e) => report.bool_check(
                "state_invariance",
                false,
                json!({"error": e.to_string()}),
                cite::INVARIANCE,
            ),
        }
    }
    let inv = invariant_states(action);
    report.info(
        "invariant_states",
        json!({
            "dimension": inv.herm_dim,
            "faithful_found": inv.flag == InvariantFlag::Faithful,
            "best_min_eigenvalue": inv.best_min_eig,
        }),
        cite::INVARIANT_STATE,
    );
    let ergodic = check_ergodic(action);
    report.info(
        "ergodicity",
        json!({"fixed_dim": ergodic.fixed_dim, "ergodic": ergodic.ergodic}),
        cite::ERGODICITY,
    );
    report.info(
        "injectivity",
        json!({"kernel_dim": action.map().kernel_dim()}),
        cite::ACTION_AXIOM,
    );
    report
}

pub fn check_semigroup(
    input: Option<&Path>,
    builtin: Option<&str>,
    opts: &CommonOpts,
) -> anyhow::Result<Outcome> {
    let tol = opts.effective_tol();
    let report = match (input, builtin) {
        (Some(path), None) => {
            let (digest, text) = read_input(path)?;
            let parsed: schema::SemigroupInput =
                serde_json::from_str(&text).context("schema: semigroup input")?;
            if opts.exact {
                let sg = schema::semigroup_from_json::<Exact>(&parsed)?;
                semigroup_report(&sg, tol, digest)
            } else {
                let sg = schema::semigroup_from_json::<C64>(&parsed)?;
                semigroup_report(&sg, tol, digest)
            }
        }
        (None, Some(name)) => {
            let sg = builtins::builtin_semigroup(name)
                .ok_or_else(|| anyhow!("no semigroup builtin named {name}"))?;
            semigroup_report(&sg, tol, digest_bytes(format!("builtin:{name}").as_bytes()))
        }
        _ => bail!("provide exactly one of an input file or --builtin"),
    };
    Ok(Outcome {
        value: report_value(&report),
        passes: report.passes(),
    })
}

pub fn check_action(
    input: Option<&Path>,
    builtin: Option<&str>,
    state_path: Option<&Path>,
    opts: &CommonOpts,
) -> anyhow::Result<Outcome> {
    let tol = opts.effective_tol();
    let report = match (input, builtin) {
        (Some(path), None) => {
            let (digest, text) = read_input(path)?;
            let parsed: schema::ActionJson =
                serde_json::from_str(&text).context("schema: action input")?;
            if opts.exact {
                let action = schema::action_from_json::<Exact>(&parsed)?;
                let state = load_state_for(&action, state_path)?;
                action_report(&action, state.as_ref(), tol, digest)
            } else {
                let action = schema::action_from_json::<C64>(&parsed)?;
                let state = load_state_for(&action, state_path)?;
                action_report(&action, state.as_ref(), tol, digest)
            }
        }
        (None, Some(name)) => {
            let action = builtins::builtin_action(name)
                .ok_or_else(|| anyhow!("no action builtin named {name}"))?;
            let state = load_state_for(&action, state_path)?;
            action_report(
                &action,
                state.as_ref(),
                tol,
                digest_bytes(format!("builtin:{name}").as_bytes()),
            )
        }
        _ => bail!("provide exactly one of an input file or --builtin"),
    };
    Ok(Outcome {
        value: report_value(&report),
        passes: report.passes(),
    })
}

fn load_state_for<S: Scalar>(
    action: &Action<S>,
    path: Option<&Path>,
) -> anyhow::Result<Option<State<S>>> {
    let Some(path) = path else { return Ok(None) };
    let (_, text) = read_input(path)?;
    let parsed: schema::StateJson = serde_json::from_str(&text).context("schema: state input")?;
    Ok(Some(schema::state_from_json(action.space(), &parsed)?))
}

pub fn extract_rep_cmd(
    input: &Path,
    state_path: &Path,
    opts: &CommonOpts,
) -> anyhow::Result<Outcome> {
    let tol = opts.effective_tol();
    let (digest, text) = read_input(input)?;
    let parsed: schema::ActionJson = serde_json::from_str(&text).context("schema: action input")?;
    if opts.exact {
        let action = schema::action_from_json::<Exact>(&parsed)?;
        let omega = load_state_for(&action, Some(state_path))?.expect("state path given");
        extract_rep_generic(&action, &omega, tol, digest)
    } else {
        let action = schema::action_from_json::<C64>(&parsed)?;
        let omega = load_state_for(&action, Some(state_path))?.expect("state path given");
        extract_rep_generic(&action, &omega, tol, digest)
    }
}

fn extract_rep_generic<S: Scalar>(
    action: &Action<S>,
    omega: &State<S>,
    tol: f64,
    digest: String,
) -> anyhow::Result<Outcome> {
    let faithful = is_faithful(omega);
    if !faithful.faithful {
        bail!(
            "the supplied state is not faithful (min eigenvalue {:.3e}); extraction requires a faithful state",
            faithful.min_eigenvalue
        );
    }
    let onb = orthonormal_basis(action.space(), omega)?;
    let rep = extract_rep(action, &onb, omega, tol.max(1e-9))?;
    let coeffs = FdCoeff::new(action.semigroup().clone());
    let mut report = Report::new(digest);
    report.residual_check(
        "reconstruction",
        rep.reconstruction_residual,
        tol,
        cite::RECONSTRUCTION,
    );
    report.residual_check(
        "state_invariance",
        rep.invariance_residual,
        tol,
        cite::INVARIANCE,
    );
    let unitary = check_unitary(&coeffs, &rep);
    report.residual_check("unitarity_left", unitary.left, tol, cite::UNITARITY);
    report.residual_check("unitarity_right", unitary.right, tol, cite::UNITARITY);
    let t = conjugation_matrix(&onb)?;
    report.residual_check(
        "conjugation_involution",
        t.involution_residual,
        tol,
        cite::INTERTWINING,
    );
    report.residual_check(
        "intertwining",
        check_intertwine(&coeffs, &rep, &t),
        tol,
        cite::INTERTWINING,
    );
    report.residual_check(
        "representation_identity",
        check_corepresentation(&coeffs, &rep),
        tol,
        cite::COREPRESENTATION,
    );
    let adm = check_admissible(&rep);
    report.bool_check(
        "admissibility",
        adm.passes(),
        json!({
            "min_sv_u_bar": adm.min_sv_u_bar,
            "min_sv_u_transpose": adm.min_sv_u_transpose,
        }),
        cite::ADMISSIBILITY,
    );
    let u_json: Vec<Vec<schema::ElementJson>> = rep
        .entries
        .iter()
        .map(|row| row.iter().map(schema::element_to_json).collect())
        .collect();
    let t_json: Vec<Vec<schema::JsonComplex>> = (0..t.tau.nrows())
        .map(|r| {
            (0..t.tau.ncols())
                .map(|c| schema::complex_to_json(t.tau.get(r, c)))
                .collect()
        })
        .collect();
    let passes = report.passes();
    Ok(Outcome {
        value: json!({
            "u": u_json,
            "T": t_json,
            "report": report_value(&report),
        }),
        passes,
    })
}

fn qparam_to_json(q: &QParam) -> Value {
    match q {
        QParam::Exact(r) => {
            if r.denom().to_string() == "1" {
                Value::String(r.numer().to_string())
            } else {
                Value::String(format!("{}/{}", r.numer(), r.denom()))
            }
        }
        QParam::Approx(x) => json!(x),
    }
}

/// The exact suite as a standard checks array (all thresholds zero).
fn suq2_report(r: &SuQ2Report, digest: String) -> Report {
    let mut report = Report::new(digest);
    report.residual_check(
        "fundamental_unitary_left",
        r.fundamental_unitary_left,
        0.0,
        cite::FUNDAMENTAL_UNITARY,
    );
    report.residual_check(
        "fundamental_unitary_right",
        r.fundamental_unitary_right,
        0.0,
        cite::FUNDAMENTAL_UNITARY,
    );
    report.residual_check(
        "action_map_unital",
        r.star_hom_unital,
        0.0,
        cite::HOM_UNITAL,
    );
    report.residual_check(
        "action_map_multiplicative",
        r.star_hom_multiplicative,
        0.0,
        cite::HOM_MULT,
    );
    report.residual_check(
        "action_map_adjoint",
        r.star_hom_adjoint,
        0.0,
        cite::HOM_ADJOINT,
    );
    report.residual_check("action_axiom", r.action_axiom, 0.0, cite::ACTION_AXIOM);
    report.residual_check(
        "powers_invariance",
        r.powers_invariance,
        0.0,
        cite::INVARIANCE,
    );
    report.bool_check(
        "entries_even",
        r.entries_even,
        json!({}),
        cite::EVEN_SUBALGEBRA,
    );
    report.bool_check(
        "podles_density",
        r.podles.passes,
        json!({
            "product_rank": r.podles.product_rank,
            "targets": r.podles.targets,
            "targets_in_span": r.podles.targets_in_span,
        }),
        cite::PODLES,
    );
    report.bool_check(
        "ergodicity",
        r.fixed_dim == 1,
        json!({"fixed_dim": r.fixed_dim}),
        cite::ERGODICITY,
    );
    report.residual_check(
        "rep_reconstruction",
        r.rep_reconstruction,
        0.0,
        cite::RECONSTRUCTION,
    );
    report.residual_check("rep_unitary_left", r.rep_unitary_left, 0.0, cite::UNITARITY);
    report.residual_check(
        "rep_unitary_right",
        r.rep_unitary_right,
        0.0,
        cite::UNITARITY,
    );
    report.residual_check("intertwining", r.intertwine, 0.0, cite::INTERTWINING);
    report.residual_check(
        "representation_identity",
        r.corepresentation,
        0.0,
        cite::COREPRESENTATION,
    );
    report.residual_check(
        "admissible_witness",
        r.admissible_witness,
        0.0,
        cite::ADMISSIBILITY,
    );
    report
}

fn classification_value(c: &Classification, digest: String, tol: f64) -> Value {
    let u_json: Vec<Vec<schema::JsonComplex>> = (0..c.u.nrows())
        .map(|r| {
            (0..c.u.ncols())
                .map(|cc| schema::complex_to_json(c.u.get(r, cc)))
                .collect()
        })
        .collect();
    let certificate = match &c.certificate {
        Certificate::Numeric(rep) => {
            let mut report = Report::new(digest);
            report.residual_check(
                "action_map_star_hom",
                rep.star_hom.max(),
                tol,
                cite::HOM_MULT,
            );
            report.residual_check("action_axiom", rep.action_axiom, tol, cite::ACTION_AXIOM);
            report.bool_check(
                "podles_density",
                rep.podles.passes,
                json!({"rank": rep.podles.rank, "full_rank_needed": rep.podles.full_rank_needed}),
                cite::PODLES,
            );
            report.residual_check(
                "powers_invariance",
                rep.powers_invariance,
                tol,
                cite::INVARIANCE,
            );
            report.residual_check(
                "rep_reconstruction",
                rep.rep_reconstruction,
                tol,
                cite::RECONSTRUCTION,
            );
            report.residual_check("unitarity_left", rep.unitary.left, tol, cite::UNITARITY);
            report.residual_check("unitarity_right", rep.unitary.right, tol, cite::UNITARITY);
            report.residual_check("intertwining", rep.intertwine, tol, cite::INTERTWINING);
            report.residual_check(
                "representation_identity",
                rep.corepresentation,
                tol,
                cite::COREPRESENTATION,
            );
            report.bool_check(
                "admissibility",
                rep.admissible.passes(),
                json!({
                    "min_sv_u_bar": rep.admissible.min_sv_u_bar,
                    "min_sv_u_transpose": rep.admissible.min_sv_u_transpose,
                }),
                cite::ADMISSIBILITY,
            );
            let mut v = serde_json::to_value(&report).expect("report serialization");
            v["kind"] = json!("numeric");
            v
        }
        Certificate::Symbolic(rep) => {
            let mut v = serde_json::to_value(suq2_report(rep, digest)).expect("report");
            v["kind"] = json!("symbolic");
            v
        }
    };
    json!({
        "format": schema::FORMAT_VERSION,
        "q": qparam_to_json(&c.q),
        "u": u_json,
        "ergodic": c.ergodic,
        "invariant_state_dim": c.invariant_state_dim,
        "certificate": certificate,
        "overall": if c.certificate.passes() { "pass" } else { "fail" },
    })
}

fn refusal_value(digest: String) -> Value {
    let mut report = Report::new(digest);
    report.bool_check(
        "faithful_invariant_state",
        false,
        json!({"reason": qsact::Error::NoFaithfulInvariantState.to_string()}),
        cite::INVARIANT_STATE,
    );
    report.push(crate::report::CheckEntry {
        name: "powers_classification".into(),
        status: crate::report::Status::Skipped,
        residual: None,
        data: None,
        citation: cite::POWERS_FORM.into(),
    });
    report.push(crate::report::CheckEntry {
        name: "factorization_certificate".into(),
        status: crate::report::Status::Skipped,
        residual: None,
        data: None,
        citation: cite::INVARIANT_STATE.into(),
    });
    let mut v = serde_json::to_value(&report).expect("report serialization");
    v["refused"] = json!(qsact::Error::NoFaithfulInvariantState.to_string());
    v
}

pub fn classify_m2(
    input: Option<&Path>,
    builtin: Option<&str>,
    q_flag: Option<&str>,
    opts: &CommonOpts,
) -> anyhow::Result<Outcome> {
    let run_numeric = |action: &Action<C64>, digest: String| -> anyhow::Result<Outcome> {
        match classify_action(action, opts.tolerance) {
            Ok(c) => Ok(Outcome {
                passes: c.certificate.passes(),
                value: classification_value(&c, digest, opts.tolerance),
            }),
            Err(qsact::Error::NoFaithfulInvariantState) => Ok(Outcome {
                value: refusal_value(digest),
                passes: false,
            }),
            Err(e) => Err(e.into()),
        }
    };
    match (input, builtin) {
        (Some(path), None) => {
            let (digest, text) = read_input(path)?;
            let parsed: schema::ActionJson =
                serde_json::from_str(&text).context("schema: action input")?;
            let action = schema::action_from_json::<C64>(&parsed)?;
            run_numeric(&action, digest)
        }
        (None, Some("psi_q")) => {
            let q_text = q_flag.unwrap_or("1/2");
            let q = QParam::from_rational(parse_ratio(q_text)?)?;
            let digest = digest_bytes(format!("builtin:psi_q:{q_text}").as_bytes());
            let c = classify_builtin_psi_q(q)?;
            Ok(Outcome {
                passes: c.certificate.passes(),
                value: classification_value(&c, digest, 0.0),
            })
        }
        (None, Some(name)) => {
            let action = builtins::builtin_action(name)
                .ok_or_else(|| anyhow!("no action builtin named {name}"))?;
            run_numeric(&action, digest_bytes(format!("builtin:{name}").as_bytes()))
        }
        _ => bail!("provide exactly one of an input file or --builtin"),
    }
}

pub fn suq2_verify(q_text: &str) -> anyhow::Result<Outcome> {
    let q = QParam::from_rational(parse_ratio(q_text)?)?;
    let alg = QAlgebra::<Exact>::new(q.clone());
    let suite = verify_suite(&alg)?;
    let digest = digest_bytes(format!("builtin:psi_q:{q_text}").as_bytes());
    let report = suq2_report(&suite, digest);
    let passes = suite.passes_exactly() && report.passes();
    let mut value = serde_json::to_value(&report)?;
    value["q"] = qparam_to_json(&q);
    Ok(Outcome { value, passes })
}

pub fn list_builtins() -> Outcome {
    let list: Vec<Value> = builtins::BUILTINS
        .iter()
        .map(|b| {
            json!({
                "name": b.name,
                "kind": match b.kind {
                    BuiltinKind::Semigroup => "semigroup",
                    BuiltinKind::Action => "action",
                    BuiltinKind::Symbolic => "symbolic",
                },
                "expected_status": b.expected,
                "description": b.description,
            })
        })
        .collect();
    Outcome {
        value: json!({"format": schema::FORMAT_VERSION, "builtins": list}),
        passes: true,
    }
}

/// Runs every `.json` file in a directory concurrently; a file containing a
/// `space`/`map` pair is treated as an action, otherwise as a semigroup.
pub fn batch(dir: &Path, opts: &CommonOpts) -> anyhow::Result<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    let results: Vec<(String, anyhow::Result<Outcome>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| {
                let opts = opts.clone();
                scope.spawn(move || {
                    let name = path
                        .file_name()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let kind = serde_json::from_str::<Value>(
                        &std::fs::read_to_string(path).unwrap_or_default(),
                    )
                    .ok()
                    .map(|v| v.get("map").is_some());
                    let outcome = match kind {
                        Some(true) => check_action(Some(path), None, None, &opts),
                        _ => check_semigroup(Some(path), None, &opts),
                    };
                    (name, outcome)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut entries = Vec::new();
    let mut all_pass = true;
    let mut had_error = false;
    for (name, result) in results {
        match result {
            Ok(outcome) => {
                all_pass &= outcome.passes;
                entries.push(json!({"file": name, "report": outcome.value}));
            }
            Err(e) => {
                had_error = true;
                all_pass = false;
                entries.push(json!({"file": name, "error": e.to_string()}));
            }
        }
    }
    if had_error {
        bail!(
            "batch encountered invalid inputs: {}",
            serde_json::to_string(&entries)?
        );
    }
    Ok(Outcome {
        value: json!({
            "format": schema::FORMAT_VERSION,
            "results": entries,
            "overall": if all_pass { "pass" } else { "fail" },
        }),
        passes: all_pass,
    })
}
