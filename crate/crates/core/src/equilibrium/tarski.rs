use serde::{Deserialize, Serialize};

use super::assumptions::{check_monotone_assumptions, MonotoneReport};
use super::verify::{verify_profile, EquilibriumReport};
use crate::bestresponse::{action_best_set, Mode};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::game::{AttitudeKind, GameSpec, PureProfile, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Start from every lowest action, keep the smallest best reply.
    Bottom,
    /// Start from every highest action, keep the largest best reply.
    Top,
}

#[derive(Debug, Clone)]
pub struct TarskiResult {
    pub direction: Direction,
    pub profile: PureProfile,
    pub sweeps: usize,
    pub report: EquilibriumReport,
    /// `None` when the run was forced past the assumption check.
    pub assumptions: Option<MonotoneReport>,
}

impl TarskiResult {
    pub fn levels(&self, game: &GameSpec) -> Vec<Vec<f64>> {
        pure_levels(game, &self.profile)
    }
}

pub fn pure_levels(game: &GameSpec, pure: &PureProfile) -> Vec<Vec<f64>> {
    pure.iter()
        .enumerate()
        .map(|(n, row)| {
            row.iter()
                .enumerate()
                .map(|(t, &a)| game.action_grid(n, t).point(a)[0])
                .collect()
        })
        .collect()
}

/// Whether each player's action is weakly increasing in its own type.
pub fn is_monotone_profile(game: &GameSpec, pure: &PureProfile) -> bool {
    pure_levels(game, pure)
        .iter()
        .all(|row| row.windows(2).all(|w| w[0] <= w[1]))
}

/// Sweep bound: a monotone run moves some agent at least one grid step per
/// sweep.
fn sweep_limit(game: &GameSpec) -> usize {
    let agents = game.agents();
    let max_actions = agents.iter().map(|&(n, t)| game.action_count(n, t)).max().unwrap_or(1);
    max_actions * agents.len() + 1
}

/// Simultaneous extremal best-reply iteration from the bottom or top pure
/// profile. Needs a structured game where every player-type is
/// enterprising and the monotonicity assumptions hold, unless `force`.
pub fn tarski_iterate(game: &GameSpec, direction: Direction, force: bool) -> Result<TarskiResult> {
    let assumptions = if force {
        None
    } else {
        if !game.all_kinds(AttitudeKind::Enterprising) {
            return Err(Error::Unsupported("extremal iteration needs enterprising player-types".into()));
        }
        let report = check_monotone_assumptions(game)?;
        if !report.all_pass {
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
            return Err(Error::Unsupported(format!(
                "monotonicity assumptions fail: {}",
                failed.join(", ")
            )));
        }
        Some(report)
    };
    let eps = Tolerances::default().snap;
    let agents = game.agents();
    let mut pure: PureProfile = (0..game.players())
        .map(|n| {
            (0..game.type_count(n))
                .map(|t| match direction {
                    Direction::Bottom => 0,
                    Direction::Top => game.action_count(n, t) - 1,
                })
                .collect()
        })
        .collect();
    let limit = sweep_limit(game);
    for sweep in 1..=limit {
        let delta = StrategyProfile::pure(game, &pure);
        let mut next = pure.clone();
        for &(n, t) in &agents {
            let best = action_best_set(game, n, t, &delta, eps)?;
            next[n][t] = match direction {
                Direction::Bottom => *best.iter().min().expect("nonempty best set"),
                Direction::Top => *best.iter().max().expect("nonempty best set"),
            };
        }
        if next == pure {
            let report = verify_profile(game, &delta, Mode::Action, Tolerances::default().regret)?;
            if !report.verdict {
                return Err(Error::Internal(format!(
                    "extremal fixed point {pure:?} failed verification (max regret {})",
                    report.max_regret()
                )));
            }
            return Ok(TarskiResult {
                direction,
                profile: pure,
                sweeps: sweep,
                report,
                assumptions,
            });
        }
        pure = next;
    }
    Err(Error::Oscillation { sweeps: limit })
}
