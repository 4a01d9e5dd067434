use serde::Serialize;

use super::enumerate::enumerate_pure_equilibria_capped;
use crate::bestresponse::Mode;
use crate::error::{Error, Result};
use crate::game::{AmbiguityAttitude, GameSpec, PriorSet, PureProfile, StrategyProfile};

#[derive(Debug, Clone, Serialize)]
pub struct RobustnessPoint {
    pub eta: f64,
    pub equilibria: Vec<PureProfile>,
    /// Largest distance from a perturbed equilibrium to the nearest base
    /// one; `None` when the base set is empty but the perturbed set is not.
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustnessReport {
    pub base: Vec<PureProfile>,
    /// Sorted by decreasing `eta`.
    pub points: Vec<RobustnessPoint>,
    /// Distances never grow as `eta` shrinks.
    pub non_increasing: bool,
}

/// Every prior `ρ` replaced by `(1-η)·ρ + η·uniform` on its local domain.
pub fn perturb_priors(game: &GameSpec, eta: f64) -> Result<GameSpec> {
    let general = game.to_general()?;
    general.with_attitudes(|n, tn, att| {
        let Some(PriorSet::Flat(flat)) = att.prior_set() else {
            return att.clone();
        };
        let k = general.local(n, tn).states.len() as f64;
        let mixed = flat
            .iter()
            .map(|w| w.iter().map(|x| (1.0 - eta) * x + eta / k).collect())
            .collect();
        att.with_priors(PriorSet::Flat(mixed))
    })
}

/// Directed distance `max_{x ∈ from} min_{y ∈ to} |x - y|_∞` over weights.
fn directed_distance(game: &GameSpec, from: &[PureProfile], to: &[PureProfile]) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for x in from {
        let dx = StrategyProfile::pure(game, x);
        let nearest = to
            .iter()
            .map(|y| dx.distance(&StrategyProfile::pure(game, y)))
            .fold(f64::INFINITY, f64::min);
        if nearest.is_infinite() {
            return None;
        }
        worst = worst.max(nearest);
    }
    Some(worst)
}

/// Pure equilibria under uniformly perturbed priors, compared with the
/// unperturbed set.
pub fn robustness_probe(game: &GameSpec, etas: &[f64], mode: Mode, eps: f64, cap: u128) -> Result<RobustnessReport> {
    for &(n, t) in &game.agents() {
        if !matches!(
            game.attitude(n, t),
            AmbiguityAttitude::Alarmist(_) | AmbiguityAttitude::Enterprising(_)
        ) {
            return Err(Error::Unsupported(format!(
                "robustness probe needs alarmist or enterprising player-types; player {n} type {t} is {:?}",
                game.attitude(n, t).kind()
            )));
        }
    }
    if let Some(eta) = etas.iter().find(|e| !(0.0..1.0).contains(*e)) {
        return Err(Error::validation("eta", format!("{eta} outside [0, 1)")));
    }
    let base = enumerate_pure_equilibria_capped(game, mode, eps, cap)?;
    let mut sorted = etas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut points = Vec::with_capacity(sorted.len());
    for eta in sorted {
        let perturbed = perturb_priors(game, eta)?;
        let equilibria = enumerate_pure_equilibria_capped(&perturbed, mode, eps, cap)?;
        let distance = directed_distance(game, &equilibria, &base);
        points.push(RobustnessPoint {
            eta,
            equilibria,
            distance,
        });
    }
    let key = |d: Option<f64>| d.unwrap_or(f64::INFINITY);
    let non_increasing = points.windows(2).all(|w| key(w[1].distance) <= key(w[0].distance));
    Ok(RobustnessReport {
        base,
        points,
        non_increasing,
    })
}

