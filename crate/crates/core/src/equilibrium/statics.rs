use rayon::prelude::*;
use serde::Serialize;

use super::assumptions::{check_monotone_assumptions, check_parametric_assumptions, MonotoneReport};
use super::tarski::{tarski_iterate, Direction};
use crate::error::{Error, Result};
use crate::game::GameSpec;

/// Games `Γ(λ)` on a strictly increasing parameter list.
#[derive(Debug, Clone)]
pub struct ParametricFamily {
    lambdas: Vec<f64>,
    games: Vec<GameSpec>,
}

impl ParametricFamily {
    pub fn new<F>(lambdas: Vec<f64>, mut build: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<GameSpec>,
    {
        if lambdas.is_empty() {
            return Err(Error::Empty("parameter list"));
        }
        if lambdas.iter().any(|l| !l.is_finite()) || lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("family.lambdas", "parameters must be finite and strictly increasing"));
        }
        let games = lambdas.iter().map(|&l| build(l)).collect::<Result<Vec<_>>>()?;
        Ok(Self { lambdas, games })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn games(&self) -> &[GameSpec] {
        &self.games
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticsPoint {
    pub lambda: f64,
    /// Smallest equilibrium action levels `[n][t_n]`.
    pub bottom: Vec<Vec<f64>>,
    pub top: Vec<Vec<f64>>,
    pub bottom_sweeps: usize,
    pub top_sweeps: usize,
    pub assumptions: MonotoneReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticsPair {
    pub from: f64,
    pub to: f64,
    pub assumptions: MonotoneReport,
    pub bottom_increasing: bool,
    pub top_increasing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticsReport {
    pub points: Vec<StaticsPoint>,
    pub pairs: Vec<StaticsPair>,
    /// Both extremal equilibria are componentwise increasing along the list.
    pub increasing: bool,
    /// Every per-game and per-pair assumption check passed.
    pub assumptions_hold: bool,
}

fn leq(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x <= y)
}

/// Extremal equilibria of every member, with the assumption reports. The
/// iteration is forced where the checks fail, so a failed verdict comes
/// with the assumption that explains it.
pub fn comparative_statics_sweep(family: &ParametricFamily) -> Result<StaticsReport> {
    let points = family
        .lambdas
        .par_iter()
        .zip(family.games.par_iter())
        .map(|(&lambda, game)| {
            let assumptions = check_monotone_assumptions(game)?;
            let bottom = tarski_iterate(game, Direction::Bottom, true)?;
            let top = tarski_iterate(game, Direction::Top, true)?;
            Ok(StaticsPoint {
                lambda,
                bottom: bottom.levels(game),
                top: top.levels(game),
                bottom_sweeps: bottom.sweeps,
                top_sweeps: top.sweeps,
                assumptions,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 1..points.len() {
        let assumptions = check_parametric_assumptions(&family.games[i - 1], &family.games[i])?;
        pairs.push(StaticsPair {
            from: points[i - 1].lambda,
            to: points[i].lambda,
            assumptions,
            bottom_increasing: leq(&points[i - 1].bottom, &points[i].bottom),
            top_increasing: leq(&points[i - 1].top, &points[i].top),
        });
    }
    let increasing = pairs.iter().all(|p| p.bottom_increasing && p.top_increasing);
    let assumptions_hold =
        points.iter().all(|p| p.assumptions.all_pass) && pairs.iter().all(|p| p.assumptions.all_pass);
    Ok(StaticsReport {
        points,
        pairs,
        increasing,
        assumptions_hold,
    })
}
