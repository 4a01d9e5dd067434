//! JSON reports written by the command line tool, and their text tables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bestresponse::Mode;
use crate::equilibrium::{EquilibriumReport, MonotoneReport, StaticsReport, TheoremReport};
use crate::game::{AttitudeKind, GameSpec, ProfileRecord};
use crate::satisfaction::ShapeReport;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct GameSummary {
    pub players: usize,
    pub type_counts: Vec<usize>,
    pub action_counts: Vec<Vec<usize>>,
    pub structured: bool,
    pub attitudes: Vec<Vec<AttitudeKind>>,
}

impl GameSummary {
    pub fn of(game: &GameSpec) -> Self {
        Self {
            players: game.players(),
            type_counts: game.type_counts().to_vec(),
            action_counts: (0..game.players())
                .map(|n| (0..game.type_count(n)).map(|t| game.action_count(n, t)).collect())
                .collect(),
            structured: game.is_structured(),
            attitudes: (0..game.players())
                .map(|n| (0..game.type_count(n)).map(|t| game.attitude(n, t).kind()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FoundEquilibrium {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Action indices (pure) or weights (mixed).
    pub profile: ProfileRecord,
    /// Action levels `[n][t_n]` of a pure profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<Vec<f64>>>,
    pub verification: EquilibriumReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Found,
    None,
    NoConvergence,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationSummary {
    pub iterations: usize,
    pub alpha: f64,
    /// Sup-norm changes of the last iterations (no convergence only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tail: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub game: GameSummary,
    pub mode: Mode,
    pub method: &'static str,
    pub tolerance: f64,
    pub status: SolveStatus,
    pub equilibria: Vec<FoundEquilibrium>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iteration: Option<IterationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeEntry {
    pub player: usize,
    #[serde(rename = "type")]
    pub ty: usize,
    pub report: ShapeReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParametricEntry {
    pub from: f64,
    pub to: f64,
    pub report: MonotoneReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckResult {
    Monotone(MonotoneReport),
    Parametric(Vec<ParametricEntry>),
    Shape(Vec<ShapeEntry>),
    Theorems(TheoremReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub result: CheckResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub lambdas: Vec<f64>,
    pub increasing: bool,
    pub assumptions_hold: bool,
    pub statics: StaticsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub game: Option<GameSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_size: Option<usize>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render_solve(r: &SolveReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} equilibria ({:?} mode, method {}, tolerance {:e}): {}",
        r.equilibria.len(),
        r.mode,
        r.method,
        r.tolerance,
        match r.status {
            SolveStatus::Found => "found",
            SolveStatus::None => "none found",
            SolveStatus::NoConvergence => "no convergence",
        }
    );
    for (i, e) in r.equilibria.iter().enumerate() {
        let name = e.label.clone().unwrap_or_else(|| format!("#{i}"));
        let profile = match (&e.levels, &e.profile) {
            (Some(levels), _) => format!("{levels:?}"),
            (None, ProfileRecord::Pure(p)) => format!("{p:?}"),
            (None, ProfileRecord::Mixed(w)) => format!("{w:?}"),
        };
        let _ = writeln!(out, "  {name:<8} {profile}  max regret {:.3e}", e.verification.max_regret());
    }
    if let Some(it) = &r.iteration {
        let _ = writeln!(out, "  iterations {} (damping {})", it.iterations, it.alpha);
    }
    out
}

pub fn render_monotone(report: &MonotoneReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = match c.status {
            crate::equilibrium::CheckStatus::Pass => "pass",
            crate::equilibrium::CheckStatus::Fail => "FAIL",
            crate::equilibrium::CheckStatus::Undecidable => "undecidable",
        };
        let _ = writeln!(out, "  {:<34} {:<12} {} violations", c.name, status, c.violations);
        for d in c.details.iter().take(3) {
            let _ = writeln!(out, "      {d}");
        }
    }
    out
}

pub fn render_check(r: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {}: {}", r.suite, verdict(r.passed));
    match &r.result {
        CheckResult::Monotone(m) => out.push_str(&render_monotone(m)),
        CheckResult::Parametric(entries) => {
            for e in entries {
                let _ = writeln!(out, " {} -> {}", e.from, e.to);
                out.push_str(&render_monotone(&e.report));
            }
        }
        CheckResult::Shape(entries) => {
            let _ = writeln!(out, "  player type  concave convex quasi-concave strongly-concave strongly-convex");
            for e in entries {
                let s = &e.report;
                let _ = writeln!(
                    out,
                    "  {:<6} {:<5} {:<7} {:<6} {:<13} {:<16} {}",
                    e.player, e.ty, s.concave, s.convex, s.quasi_concave, s.strongly_concave, s.strongly_convex
                );
            }
        }
        CheckResult::Theorems(t) => {
            let _ = writeln!(out, "  pure action-based equilibria       {}", t.action_equilibria.len());
            let _ = writeln!(out, "  pure distribution-based equilibria {}", t.distribution_equilibria.len());
            let _ = writeln!(out, "  distribution set inside action set {}", verdict(t.inclusion));
            if let Some(eq) = t.equality {
                let _ = writeln!(out, "  sets equal                         {}", verdict(eq));
            }
            if let Some(n) = t.agreement_checked {
                let _ = writeln!(out, "  verdicts agree on {n} profiles      {}", verdict(t.agreement_failures.is_empty()));
            }
            if let Some(n) = t.direction_checked {
                let _ = writeln!(
                    out,
                    "  distribution implies action ({n} samples) {}",
                    verdict(t.direction_failures.is_empty())
                );
            }
        }
    }
    out
}

pub fn render_sweep(r: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "increasing: {}  assumptions: {}",
        verdict(r.increasing),
        verdict(r.assumptions_hold)
    );
    for p in &r.statics.points {
        let _ = writeln!(out, "  lambda {:<8} bottom {:?} top {:?}", p.lambda, p.bottom, p.top);
    }
    for p in &r.statics.pairs {
        if !p.assumptions.all_pass {
            let failed: Vec<&str> = p.assumptions.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
            let _ = writeln!(out, "  {} -> {}: {}", p.from, p.to, failed.join(", "));
        }
    }
    out
}
