//! Report assembly and rendering.
//!
//! Every command produces a structured report that renders either as
//! human-readable text or as JSON (`--format=json`). The JSON form is
//! deterministic for a fixed input and seed: field order is fixed by the
//! struct definitions and no timing or environment data is included.

use serde::Serialize;

use crossedk::crossed::{
    embedding_battery, exact_sequence, full_corner_check, projection_battery, structure_battery,
    CheckLine,
};
use crossedk::kgroup::KPair;
use crossedk::recursion::{
    paschke_specialize, run_recursion_concrete, run_recursion_symbolic, ConcreteRun, PaschkeReport,
    RecursionLedger,
};
use crossedk::{SplitMix64, ZnAction};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct RunSettings {
    pub tol: f64,
    pub seed: u64,
    pub xi_exponent: usize,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub settings: RunSettings,
    pub n: usize,
    pub algebra_dim: usize,
    pub ambient_dim: usize,
    pub lines: Vec<CheckLine>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verification battery (n = {}, dim A = {}, ambient = {}, tol = {:e}, seed = {})\n",
            self.n, self.algebra_dim, self.ambient_dim, self.settings.tol, self.settings.seed
        ));
        for line in &self.lines {
            out.push_str(&format!(
                "  {} {:<58} residual {:.3e} (threshold {:.1e})\n",
                if line.passed { "PASS" } else { "FAIL" },
                line.name,
                line.residual,
                line.threshold
            ));
        }
        out.push_str(if self.passed {
            "all checks passed\n"
        } else {
            "CHECKS FAILED\n"
        });
        out
    }
}

/// Runs the full verification battery for one action.
pub fn run_verify(act: &ZnAction, settings: RunSettings) -> Result<VerifyReport, CliError> {
    let mut rng = SplitMix64::new(settings.seed);
    let tol = act.tol();
    let mut lines = Vec::new();

    let a_report = act.algebra().verify();
    lines.push(CheckLine::residual(
        "A product closure",
        a_report.product_residual,
        tol,
    ));
    lines.push(CheckLine::residual(
        "A star closure",
        a_report.star_residual,
        tol,
    ));
    lines.push(CheckLine::residual(
        "A unit axioms",
        a_report.unit_residual,
        tol,
    ));

    let proj = projection_battery(act).map_err(math)?;
    lines.push(CheckLine::residual(
        "projections P_j P_k = delta_jk P_k",
        proj.idempotent,
        10.0 * tol,
    ));
    lines.push(CheckLine::residual(
        "projections sum to identity",
        proj.resolution,
        10.0 * tol,
    ));
    lines.push(CheckLine::residual(
        "alpha P_k = xi^k P_k",
        proj.eigenvalue,
        10.0 * tol,
    ));

    let emb = embedding_battery(act, 8, &mut rng).map_err(math)?;
    lines.push(CheckLine::residual(
        "embedding is multiplicative",
        emb.homomorphism,
        10.0 * tol,
    ));
    lines.push(CheckLine::residual(
        "embedding preserves adjoints",
        emb.star,
        10.0 * tol,
    ));
    lines.push(CheckLine::residual(
        "embedding round trip",
        emb.round_trip,
        10.0 * tol,
    ));
    lines.push(CheckLine::residual(
        "embedding onto round trip",
        emb.onto_round_trip,
        10.0 * tol,
    ));

    let tower = crossedk::CornerTower::build(act).map_err(math)?;
    let structure = structure_battery(act, &tower).map_err(math)?;
    lines.extend(structure.lines);

    for k in 0..act.order() - 1 {
        let fc = full_corner_check(act, &tower, k, &mut rng).map_err(math)?;
        lines.extend(fc.lines);
        let seq = exact_sequence(act, &tower, k, &mut rng).map_err(math)?;
        lines.extend(seq.lines);
    }

    let passed = lines.iter().all(|l| l.passed);
    Ok(VerifyReport {
        settings,
        n: act.order(),
        algebra_dim: act.algebra().dim(),
        ambient_dim: act.algebra().ambient_dim(),
        lines,
        passed,
    })
}

#[derive(Debug, Serialize)]
pub struct TowerRow {
    pub k: usize,
    pub corner: KPair,
    pub ideal: Option<KPair>,
    pub quotient: Option<KPair>,
}

#[derive(Debug, Serialize)]
pub struct KGroupsReport {
    pub settings: RunSettings,
    pub n: usize,
    pub rows: Vec<TowerRow>,
    pub ledger: RecursionLedger,
    pub oracle: crossedk::FgAbelianGroup,
    pub oracle_matches: bool,
    pub paschke: Option<PaschkeReport>,
}

impl KGroupsReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("corner tower K-groups (n = {})\n", self.n));
        for row in &self.rows {
            out.push_str(&format!("  B_{}: {}\n", row.k, row.corner));
            if let Some(ideal) = &row.ideal {
                out.push_str(&format!("    J_{}: {}\n", row.k, ideal));
            }
            if let Some(q) = &row.quotient {
                out.push_str(&format!("    A0/I_{}: {}\n", row.k, q));
            }
        }
        out.push_str("recursion ledger:\n");
        out.push_str(&indent(&self.ledger.to_string()));
        out.push_str(&format!(
            "oracle: direct Wedderburn K0(B_0) = {} -> {}\n",
            self.oracle,
            if self.oracle_matches {
                "recursion agrees"
            } else {
                "MISMATCH"
            }
        ));
        if let Some(p) = &self.paschke {
            out.push_str("single-sequence form (n = 2):\n");
            out.push_str(&indent(&p.to_string()));
        }
        out
    }
}

pub fn run_kgroups(act: &ZnAction, settings: RunSettings) -> Result<KGroupsReport, CliError> {
    let mut rng = SplitMix64::new(settings.seed);
    let run: ConcreteRun = run_recursion_concrete(act, &mut rng).map_err(math)?;
    let n = act.order();
    let rows = (0..n)
        .map(|k| TowerRow {
            k,
            corner: run.corner_pairs[k].clone(),
            ideal: run.ideal_pairs.get(k).cloned(),
            quotient: run.quotient_pairs.get(k).cloned(),
        })
        .collect();
    let paschke = if n == 2 {
        Some(paschke_specialize(act, &run).map_err(math)?)
    } else {
        None
    };
    let final_k0 = &run.ledger.final_pair().expect("concrete runs resolve").k0;
    let oracle_matches = final_k0 == &run.oracle;
    Ok(KGroupsReport {
        settings,
        n,
        rows,
        oracle: run.oracle.clone(),
        oracle_matches,
        ledger: run.ledger,
        paschke,
    })
}

#[derive(Debug, Serialize)]
pub struct SymbolicReport {
    pub settings: RunSettings,
    pub n: usize,
    pub ledger: RecursionLedger,
    pub fully_resolved: bool,
}

impl SymbolicReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("symbolic recursion (n = {})\n", self.n));
        out.push_str(&indent(&self.ledger.to_string()));
        match self.ledger.final_pair() {
            Some(pair) => out.push_str(&format!("final: K of the crossed product = {pair}\n")),
            None => out.push_str("final: unresolved (see ambiguous steps above)\n"),
        }
        out
    }
}

pub fn run_symbolic(
    n: usize,
    a0: &KPair,
    quotients: &[KPair],
    settings: RunSettings,
) -> Result<SymbolicReport, CliError> {
    let ledger = run_recursion_symbolic(n, a0, quotients).map_err(|e| match e {
        crossedk::Error::LengthMismatch { .. } | crossedk::Error::InvalidArgument(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Math(other.to_string()),
    })?;
    Ok(SymbolicReport {
        settings,
        n,
        fully_resolved: ledger.fully_resolved(),
        ledger,
    })
}

fn math(e: crossedk::Error) -> CliError {
    CliError::Math(e.to_string())
}

pub fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}
