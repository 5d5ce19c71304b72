//! crossedk: verification and K-theory computations for crossed products
//! of finite-dimensional C*-algebras by finite cyclic groups.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed,
//! 2 input or usage error.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crossedk::kgroup::{FgAbelianGroup, KPair};
use crossedk::DEFAULT_TOL;

use input::{InputDocument, Mode};
use report::{run_kgroups, run_symbolic, run_verify, to_json, RunSettings};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "crossedk",
    version,
    about = "K-theory of crossed products A x| Z_n: verification batteries, corner towers, and the exact-sequence recursion"
)]
struct Cli {
    /// Input document (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Expected mode; must agree with the input document when both are
    /// given.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Numeric tolerance override (flag wins over the input file and the
    /// CROSSEDK_TOL environment variable).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for all randomized decisions.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Exponent m of the primitive root xi = exp(2 pi i m / n); must be
    /// coprime to n.
    #[arg(long = "xi-exponent", global = true)]
    xi_exponent: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Concrete,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification battery (algebra closure, projection
    /// identities, embedding checks, ideal and corner structure) on a
    /// concrete input.
    Verify,
    /// Compute K-groups of the whole corner tower, run the recursion, and
    /// compare against the direct Wedderburn oracle.
    Kgroups,
    /// Run the recursion on symbolic K-group inputs.
    RecurseSymbolic,
    /// Reproduce the order-3 symbolic bookkeeping with inputs
    /// K(A0) = (Z, 0) and all quotients (Z, 0).
    ExamplePsl2 {
        /// Override the group order (default 3).
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Math(msg)) => {
            eprintln!("mathematical check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Verify => {
            let (act, settings) = concrete_input(cli)?;
            let report = run_verify(&act, settings)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", to_json(&report)),
            }
            Ok(report.passed)
        }
        Command::Kgroups => {
            let (act, settings) = concrete_input(cli)?;
            let report = run_kgroups(&act, settings)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", to_json(&report)),
            }
            Ok(report.oracle_matches && report.paschke.as_ref().is_none_or(|p| p.passed()))
        }
        Command::RecurseSymbolic => {
            let doc = load_document(cli, Mode::Symbolic)?;
            let settings = settings_from(cli, &doc)?;
            let n = doc
                .n
                .ok_or_else(|| CliError::Usage("symbolic mode requires n".into()))?;
            let symbolic = doc.symbolic.as_ref().expect("validated");
            let a0 = symbolic.a0.to_pair();
            let quotients: Vec<KPair> = symbolic.quotients.iter().map(|q| q.to_pair()).collect();
            let report = run_symbolic(n, &a0, &quotients, settings)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", to_json(&report)),
            }
            Ok(true)
        }
        Command::ExamplePsl2 { n } => {
            let n = n.unwrap_or(3);
            if n < 2 {
                return Err(CliError::Usage("n must be at least 2".into()));
            }
            let settings = RunSettings {
                tol: resolve_tol(cli, None)?,
                seed: cli.seed.unwrap_or(0),
                xi_exponent: cli.xi_exponent.unwrap_or(1),
            };
            // The geometric inputs: K(A0) = (Z, 0) and every quotient
            // K(A0/I_k) = (Z, 0). Relabeling the eigenspaces through
            // another primitive root permutes the quotient list, which is
            // symmetric here, so the result is independent of
            // --xi-exponent.
            let z = KPair::new(FgAbelianGroup::free(1), FgAbelianGroup::zero());
            let quotients = vec![z.clone(); n - 1];
            let report = run_symbolic(n, &z, &quotients, settings)?;
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", to_json(&report)),
            }
            let expected = FgAbelianGroup::free(n);
            let final_pair = report
                .ledger
                .final_pair()
                .ok_or_else(|| CliError::Math("bookkeeping did not resolve".into()))?;
            if final_pair.k0 != expected || !final_pair.k1.is_zero() {
                return Err(CliError::Math(format!(
                    "expected final (K0, K1) = ({expected}, 0), got {final_pair}"
                )));
            }
            if n == 3 {
                let b1 = report.ledger.steps[0].resolved.as_ref().expect("forced");
                if b1.k0 != FgAbelianGroup::free(2) {
                    return Err(CliError::Math(format!(
                        "expected K0(B_1) = Z^2, got {}",
                        b1.k0
                    )));
                }
            }
            Ok(true)
        }
    }
}

fn concrete_input(cli: &Cli) -> Result<(crossedk::ZnAction, RunSettings), CliError> {
    let doc = load_document(cli, Mode::Concrete)?;
    let settings = settings_from(cli, &doc)?;
    let act = doc.build_action(settings.tol, settings.xi_exponent)?;
    Ok((act, settings))
}

fn load_document(cli: &Cli, required: Mode) -> Result<InputDocument, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command requires --input PATH".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = InputDocument::parse(&text)?;
    if let Some(flag_mode) = cli.mode {
        let flag_mode = match flag_mode {
            ModeArg::Concrete => Mode::Concrete,
            ModeArg::Symbolic => Mode::Symbolic,
        };
        if flag_mode != doc.mode {
            return Err(CliError::Usage(
                "--mode disagrees with the input document".into(),
            ));
        }
    }
    if doc.mode != required {
        return Err(CliError::Usage(format!(
            "this command requires {} mode",
            match required {
                Mode::Concrete => "concrete",
                Mode::Symbolic => "symbolic",
            }
        )));
    }
    Ok(doc)
}

fn settings_from(cli: &Cli, doc: &InputDocument) -> Result<RunSettings, CliError> {
    Ok(RunSettings {
        tol: resolve_tol(cli, doc.tol)?,
        seed: cli.seed.or(doc.seed).unwrap_or(0),
        xi_exponent: cli.xi_exponent.or(doc.xi_exponent).unwrap_or(1),
    })
}

/// Tolerance precedence: flag, then input file, then CROSSEDK_TOL, then
/// the built-in default.
fn resolve_tol(cli: &Cli, file_tol: Option<f64>) -> Result<f64, CliError> {
    if let Some(t) = cli.tol {
        return check_tol(t);
    }
    if let Some(t) = file_tol {
        return check_tol(t);
    }
    if let Ok(text) = std::env::var("CROSSEDK_TOL") {
        let t: f64 = text
            .parse()
            .map_err(|_| CliError::Usage(format!("CROSSEDK_TOL is not a number: {text}")))?;
        return check_tol(t);
    }
    Ok(DEFAULT_TOL)
}

fn check_tol(t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be in (0, 1), got {t}"
        )))
    }
}
