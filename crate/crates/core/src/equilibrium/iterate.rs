use std::collections::VecDeque;

use super::verify::{verify_profile, EquilibriumReport};
use crate::bestresponse::{action_best_set, best_response, Mode};
use crate::config::Tolerances;
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::game::{GameSpec, StrategyProfile};

const TAIL: usize = 10;

#[derive(Debug, Clone)]
pub enum IterationOutcome {
    /// Converged and verified at `10·tol`.
    Converged {
        profile: StrategyProfile,
        iterations: usize,
        report: EquilibriumReport,
    },
    NoConvergence {
        iterations: usize,
        /// Sup-norm changes of the last iterations.
        tail: Vec<f64>,
        last: StrategyProfile,
    },
}

impl IterationOutcome {
    pub fn converged(&self) -> bool {
        matches!(self, IterationOutcome::Converged { .. })
    }
}

/// Damped simultaneous best-response dynamics
/// `δ ← (1-α)·δ + α·target(δ)`. Targets are uniform over the best pure
/// actions (action mode) or an optimal action distribution (distribution
/// mode).
pub fn best_response_iteration(
    game: &GameSpec,
    mode: Mode,
    init: &StrategyProfile,
    alpha: f64,
    max_iter: usize,
    tol: f64,
) -> Result<IterationOutcome> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Unsupported(format!("damping {alpha} outside (0, 1]")));
    }
    let eps = Tolerances::default().regret;
    let mut current = init.clone();
    let mut tail = VecDeque::with_capacity(TAIL);
    for it in 1..=max_iter {
        let mut next = current.clone();
        for (n, t) in game.agents() {
            let grid = game.action_grid(n, t).clone();
            let target = match mode {
                Mode::Action => {
                    let best = action_best_set(game, n, t, &current, eps)?;
                    let mut w = vec![0.0; grid.len()];
                    for &a in &best {
                        w[a] = 1.0 / best.len() as f64;
                    }
                    DiscreteDistribution::new(grid, w)?
                }
                Mode::Distribution => best_response(game, n, t, &current, mode, eps)?.optimal_dist,
            };
            let mixed = DiscreteDistribution::mix(&[(1.0 - alpha, current.get(n, t)), (alpha, &target)])?;
            next.set(n, t, mixed);
        }
        let change = next.distance(&current);
        if tail.len() == TAIL {
            tail.pop_front();
        }
        tail.push_back(change);
        current = next;
        if change < tol {
            let report = verify_profile(game, &current, mode, 10.0 * tol)?;
            if report.verdict {
                return Ok(IterationOutcome::Converged {
                    profile: current,
                    iterations: it,
                    report,
                });
            }
        }
    }
    Ok(IterationOutcome::NoConvergence {
        iterations: max_iter,
        tail: tail.into_iter().collect(),
        last: current,
    })
}
