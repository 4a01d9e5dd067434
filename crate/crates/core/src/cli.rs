//! Command line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bestresponse::Mode;
use crate::config::DEFAULT_PROFILE_CAP;
use crate::equilibrium::{
    best_response_iteration, check_monotone_assumptions, check_parametric_assumptions, comparative_statics_sweep,
    enumerate_pure_equilibria_capped, pure_levels, tarski_iterate, theorem_suite, verify_profile, Direction,
    IterationOutcome,
};
use crate::error::{Error, Result};
use crate::game::{load_document, Document, GameSpec, ProfileRecord, StrategyProfile};
use crate::report::{
    render_check, render_solve, render_sweep, to_json, CheckReport, CheckResult, FoundEquilibrium, GameSummary,
    IterationSummary, ParametricEntry, ShapeEntry, SolveReport, SolveStatus, SweepReport, ValidateReport,
    REPORT_SCHEMA_VERSION,
};
use crate::satisfaction::{check_shape, DEFAULT_SHAPE_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_EQUILIBRIUM: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ambigame", version, about = "Equilibria of games with ambiguous beliefs")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "AMBIGAME_JOBS")]
    pub jobs: Option<usize>,
    /// Write the JSON report here; the text table then goes to stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enumerate,
    Iterate,
    Tarski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Monotone,
    Parametric,
    Shape,
    Theorems,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a game or family file is well formed.
    Validate { path: PathBuf },
    /// Find equilibria.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "action")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: Method,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Largest number of pure profiles to enumerate.
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: u128,
        /// Damping of best-response iteration.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Run extremal iteration even when the monotonicity checks fail.
        #[arg(long)]
        force: bool,
    },
    /// Run a property suite on a game (or a family, for `parametric`).
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples for the shape and theorem suites.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: u128,
    },
    /// Extremal equilibria across a parameter family.
    Sweep {
        path: PathBuf,
        /// Comma-separated parameters replacing the file's list.
        #[arg(long, value_delimiter = ',')]
        param_list: Option<Vec<f64>>,
    },
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::LpFailure(_) => EXIT_INTERNAL,
        Error::Oscillation { .. } => EXIT_NO_EQUILIBRIUM,
        _ => EXIT_INVALID,
    }
}

/// JSON to `--output` with the table on stdout, or JSON on stdout with the
/// table on stderr.
fn emit(output: Option<&Path>, json: String, table: String) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, json)?;
            print!("{table}");
        }
        None => {
            print!("{json}");
            eprint!("{table}");
        }
    }
    Ok(())
}

fn load_game(path: &Path) -> Result<GameSpec> {
    match load_document(path)? {
        Document::Game(g) => Ok(*g),
        Document::Family(_) => Err(Error::Unsupported("expected a single game, found a family".into())),
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Validate { path } => {
            let report = match load_document(path)? {
                Document::Game(g) => ValidateReport {
                    schema_version: REPORT_SCHEMA_VERSION,
                    command: "validate",
                    valid: true,
                    game: Some(GameSummary::of(&g)),
                    family_size: None,
                },
                Document::Family(f) => ValidateReport {
                    schema_version: REPORT_SCHEMA_VERSION,
                    command: "validate",
                    valid: true,
                    game: None,
                    family_size: Some(f.build()?.games().len()),
                },
            };
            emit(output, to_json(&report), format!("{}: valid\n", path.display()))?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            path,
            mode,
            method,
            tolerance,
            cap,
            alpha,
            max_iter,
            force,
        } => {
            let game = load_game(path)?;
            let report = solve(&game, *mode, *method, *tolerance, *cap, *alpha, *max_iter, *force)?;
            let code = match report.status {
                SolveStatus::Found => EXIT_OK,
                _ => EXIT_NO_EQUILIBRIUM,
            };
            emit(output, to_json(&report), render_solve(&report))?;
            Ok(code)
        }
        Command::Check {
            path,
            suite,
            seed,
            samples,
            tolerance,
            cap,
        } => {
            let report = check(path, *suite, *seed, *samples, *tolerance, *cap)?;
            emit(output, to_json(&report), render_check(&report))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Sweep { path, param_list } => {
            let Document::Family(spec) = load_document(path)? else {
                return Err(Error::Unsupported("sweep needs a file with a `family` key".into()));
            };
            let spec = match param_list {
                Some(list) => spec.with_lambdas(list.clone()),
                None => spec,
            };
            let family = spec.build()?;
            let statics = comparative_statics_sweep(&family)?;
            let report = SweepReport {
                schema_version: REPORT_SCHEMA_VERSION,
                command: "sweep",
                lambdas: family.lambdas().to_vec(),
                increasing: statics.increasing,
                assumptions_hold: statics.assumptions_hold,
                statics,
            };
            emit(output, to_json(&report), render_sweep(&report))?;
            Ok(if report.increasing { EXIT_OK } else { EXIT_INVALID })
        }
    }
}

fn found(game: &GameSpec, label: Option<&str>, delta: &StrategyProfile, mode: Mode, eps: f64) -> Result<FoundEquilibrium> {
    let verification = verify_profile(game, delta, mode, eps)?;
    if !verification.verdict {
        return Err(Error::Internal(format!(
            "solver output failed verification (max regret {})",
            verification.max_regret()
        )));
    }
    Ok(FoundEquilibrium {
        label: label.map(str::to_owned),
        profile: ProfileRecord::of(game, delta),
        levels: delta.as_pure().map(|p| pure_levels(game, &p)),
        verification,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    game: &GameSpec,
    mode: Mode,
    method: Method,
    eps: f64,
    cap: u128,
    alpha: f64,
    max_iter: usize,
    force: bool,
) -> Result<SolveReport> {
    let mut report = SolveReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "solve",
        game: GameSummary::of(game),
        mode,
        method: match method {
            Method::Enumerate => "enumerate",
            Method::Iterate => "iterate",
            Method::Tarski => "tarski",
        },
        tolerance: eps,
        status: SolveStatus::None,
        equilibria: Vec::new(),
        iteration: None,
        sweeps: None,
    };
    match method {
        Method::Enumerate => {
            for pure in enumerate_pure_equilibria_capped(game, mode, eps, cap)? {
                report.equilibria.push(found(game, None, &StrategyProfile::pure(game, &pure), mode, eps)?);
            }
        }
        Method::Iterate => {
            let init = StrategyProfile::uniform(game);
            match best_response_iteration(game, mode, &init, alpha, max_iter, eps / 10.0)? {
                IterationOutcome::Converged { profile, iterations, .. } => {
                    report.equilibria.push(found(game, None, &profile, mode, eps)?);
                    report.iteration = Some(IterationSummary {
                        iterations,
                        alpha,
                        tail: Vec::new(),
                    });
                }
                IterationOutcome::NoConvergence { iterations, tail, .. } => {
                    report.status = SolveStatus::NoConvergence;
                    report.iteration = Some(IterationSummary { iterations, alpha, tail });
                    return Ok(report);
                }
            }
        }
        Method::Tarski => {
            let bottom = tarski_iterate(game, Direction::Bottom, force)?;
            let top = tarski_iterate(game, Direction::Top, force)?;
            for (label, r) in [("bottom", &bottom), ("top", &top)] {
                let delta = StrategyProfile::pure(game, &r.profile);
                report.equilibria.push(found(game, Some(label), &delta, mode, eps)?);
            }
            report.sweeps = Some([bottom.sweeps, top.sweeps]);
        }
    }
    if !report.equilibria.is_empty() {
        report.status = SolveStatus::Found;
    }
    Ok(report)
}

fn check(path: &Path, suite: Suite, seed: u64, samples: Option<usize>, eps: f64, cap: u128) -> Result<CheckReport> {
    let document = load_document(path)?;
    let (name, passed, result) = match suite {
        Suite::Parametric => {
            let Document::Family(spec) = document else {
                return Err(Error::Unsupported("the parametric suite needs a file with a `family` key".into()));
            };
            let family = spec.build()?;
            let mut entries = Vec::new();
            for (i, pair) in family.games().windows(2).enumerate() {
                entries.push(ParametricEntry {
                    from: family.lambdas()[i],
                    to: family.lambdas()[i + 1],
                    report: check_parametric_assumptions(&pair[0], &pair[1])?,
                });
            }
            let passed = entries.iter().all(|e| e.report.all_pass);
            ("parametric", passed, CheckResult::Parametric(entries))
        }
        _ => {
            let Document::Game(game) = document else {
                return Err(Error::Unsupported("expected a single game, found a family".into()));
            };
            match suite {
                Suite::Monotone => {
                    let r = check_monotone_assumptions(&game)?;
                    ("monotone", r.all_pass, CheckResult::Monotone(r))
                }
                Suite::Shape => {
                    let samples = samples.unwrap_or(DEFAULT_SHAPE_SAMPLES);
                    let mut entries = Vec::new();
                    for (n, t) in game.agents() {
                        entries.push(ShapeEntry {
                            player: n,
                            ty: t,
                            report: check_shape(&game, n, t, samples, seed)?,
                        });
                    }
                    // the shape suite reports properties; it has no failing outcome
                    ("shape", true, CheckResult::Shape(entries))
                }
                Suite::Theorems => {
                    let r = theorem_suite(&game, eps, samples.unwrap_or(50), seed, cap)?;
                    ("theorems", r.passed, CheckResult::Theorems(r))
                }
                Suite::Parametric => unreachable!(),
            }
        }
    };
    Ok(CheckReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "check",
        suite: name,
        seed,
        passed,
        result,
    })
}
