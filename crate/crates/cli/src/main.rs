//! Command-line front end: load JSON instances, dispatch the check,
//! extraction and classification pipelines, and emit machine-readable
//! reports with deterministic exit codes (0 pass, 1 check failure,
//! 2 input or schema error).

mod builtins;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CommonOpts, Outcome};

#[derive(Parser)]
#[command(
    name = "qsact",
    version,
    about = "Verification and classification of quantum semigroup actions on finite quantum spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CheckOpts {
    /// Residual pass/fail threshold for numeric checks.
    #[arg(long, default_value_t = qsact::DEFAULT_TOL)]
    tolerance: f64,
    /// Load with exact rational scalars; residuals must vanish identically.
    #[arg(long)]
    exact: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quantum-semigroup axioms of an instance.
    CheckSemigroup {
        /// Instance file ({"semigroup_table": ...} or {"algebra", "comul"}).
        input: Option<PathBuf>,
        /// Use a named bundled instance instead of a file.
        #[arg(long)]
        builtin: Option<String>,
        /// Check every .json file in a directory (concurrently).
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Check the action axioms, density condition, invariant states and
    /// ergodicity of an action instance.
    CheckAction {
        /// Action file ({"space", "semigroup", "map"}).
        input: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        /// Optional state file; its invariance is then checked.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Check every .json file in a directory (concurrently).
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Extract the representation matrix of an action in an orthonormal
    /// basis of a faithful state, and certify it.
    ExtractRep {
        /// Action file.
        input: PathBuf,
        /// State file (must be faithful).
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Classify an action on M2 preserving a faithful state into Powers
    /// form (q, u) with a factorization certificate.
    ClassifyM2 {
        /// Action file; alternatively use --builtin psi_q --q <rational>.
        input: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        /// Deformation parameter for the symbolic builtin (rational "p/q").
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Run the exact verification suite for the q-deformed SU(2) action.
    Suq2Verify {
        /// Deformation parameter as a rational "p/q" in (0, 1].
        #[arg(long)]
        q: String,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// List the bundled instances and their expected statuses.
    ListBuiltins,
}

fn emit(outcome: &Outcome, out: Option<&PathBuf>) -> anyhow::Result<()> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(&outcome.value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            // tolerate a closed pipe (e.g. piping into head)
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn run() -> anyhow::Result<Outcome> {
    let cli = Cli::parse();
    match cli.command {
        Command::CheckSemigroup {
            input,
            builtin,
            batch,
            opts,
        } => {
            let common = CommonOpts {
                tolerance: opts.tolerance,
                exact: opts.exact,
            };
            let outcome = if let Some(dir) = batch {
                commands::batch(&dir, &common)?
            } else {
                commands::check_semigroup(input.as_deref(), builtin.as_deref(), &common)?
            };
            emit(&outcome, opts.out.as_ref())?;
            Ok(outcome)
        }
        Command::CheckAction {
            input,
            builtin,
            state,
            batch,
            opts,
        } => {
            let common = CommonOpts {
                tolerance: opts.tolerance,
                exact: opts.exact,
            };
            let outcome = if let Some(dir) = batch {
                commands::batch(&dir, &common)?
            } else {
                commands::check_action(
                    input.as_deref(),
                    builtin.as_deref(),
                    state.as_deref(),
                    &common,
                )?
            };
            emit(&outcome, opts.out.as_ref())?;
            Ok(outcome)
        }
        Command::ExtractRep { input, state, opts } => {
            let common = CommonOpts {
                tolerance: opts.tolerance,
                exact: opts.exact,
            };
            let outcome = commands::extract_rep_cmd(&input, &state, &common)?;
            emit(&outcome, opts.out.as_ref())?;
            Ok(outcome)
        }
        Command::ClassifyM2 {
            input,
            builtin,
            q,
            opts,
        } => {
            let common = CommonOpts {
                tolerance: opts.tolerance,
                exact: opts.exact,
            };
            let outcome =
                commands::classify_m2(input.as_deref(), builtin.as_deref(), q.as_deref(), &common)?;
            emit(&outcome, opts.out.as_ref())?;
            Ok(outcome)
        }
        Command::Suq2Verify { q, opts } => {
            let outcome = commands::suq2_verify(&q)?;
            emit(&outcome, opts.out.as_ref())?;
            Ok(outcome)
        }
        Command::ListBuiltins => {
            let outcome = commands::list_builtins();
            emit(&outcome, None)?;
            Ok(outcome)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(outcome) => {
            if outcome.passes {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
