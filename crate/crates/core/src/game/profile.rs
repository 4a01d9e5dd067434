use serde::{Deserialize, Serialize};

use super::spec::GameSpec;
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};

/// Action index per `(n, t_n)`.
pub type PureProfile = Vec<Vec<usize>>;

/// One action distribution per `(n, t_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    strategies: Vec<Vec<DiscreteDistribution>>,
}

impl StrategyProfile {
    pub fn new(game: &GameSpec, strategies: Vec<Vec<DiscreteDistribution>>) -> Result<Self> {
        if strategies.len() != game.players() {
            return Err(Error::validation("profile", "wrong number of players"));
        }
        for (n, row) in strategies.iter().enumerate() {
            if row.len() != game.type_count(n) {
                return Err(Error::validation(format!("profile[{n}]"), "wrong number of types"));
            }
            for (t, d) in row.iter().enumerate() {
                if **d.grid() != **game.action_grid(n, t) {
                    return Err(Error::validation(
                        format!("profile[{n}][{t}]"),
                        "strategy is not on the action grid",
                    ));
                }
            }
        }
        Ok(Self { strategies })
    }

    /// Builds a profile from raw weight vectors.
    pub fn from_weights(game: &GameSpec, weights: &[Vec<Vec<f64>>]) -> Result<Self> {
        let mut strategies = Vec::with_capacity(weights.len());
        for (n, row) in weights.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (t, w) in row.iter().enumerate() {
                if n >= game.players() || t >= game.type_count(n) {
                    return Err(Error::validation("profile", "more entries than agents"));
                }
                out.push(
                    DiscreteDistribution::new(game.action_grid(n, t).clone(), w.clone()).map_err(
                        |e| Error::validation(format!("profile[{n}][{t}]"), e.to_string()),
                    )?,
                );
            }
            strategies.push(out);
        }
        Self::new(game, strategies)
    }

    pub fn pure(game: &GameSpec, actions: &[Vec<usize>]) -> Self {
        let strategies = actions
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .map(|(t, &a)| DiscreteDistribution::dirac_at(game.action_grid(n, t).clone(), a))
                    .collect()
            })
            .collect();
        Self { strategies }
    }

    pub fn uniform(game: &GameSpec) -> Self {
        let strategies = (0..game.players())
            .map(|n| {
                (0..game.type_count(n))
                    .map(|t| DiscreteDistribution::uniform(game.action_grid(n, t).clone()))
                    .collect()
            })
            .collect();
        Self { strategies }
    }

    pub fn get(&self, n: usize, tn: usize) -> &DiscreteDistribution {
        &self.strategies[n][tn]
    }

    pub fn set(&mut self, n: usize, tn: usize, d: DiscreteDistribution) {
        self.strategies[n][tn] = d;
    }

    pub fn strategies(&self) -> &[Vec<DiscreteDistribution>] {
        &self.strategies
    }

    pub fn as_pure(&self) -> Option<PureProfile> {
        self.strategies
            .iter()
            .map(|row| row.iter().map(DiscreteDistribution::as_dirac).collect())
            .collect()
    }

    /// Largest weight difference over all agents and actions.
    pub fn distance(&self, other: &Self) -> f64 {
        self.strategies
            .iter()
            .flatten()
            .zip(other.strategies.iter().flatten())
            .flat_map(|(a, b)| a.weights().iter().zip(b.weights()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn weights(&self) -> Vec<Vec<Vec<f64>>> {
        self.strategies
            .iter()
            .map(|row| row.iter().map(|d| d.weights().to_vec()).collect())
            .collect()
    }

    pub fn action_levels(&self, game: &GameSpec) -> Option<Vec<Vec<f64>>> {
        let pure = self.as_pure()?;
        Some(
            pure.iter()
                .enumerate()
                .map(|(n, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(t, &a)| game.action_grid(n, t).dims()[0][a])
                        .collect()
                })
                .collect(),
        )
    }
}

/// Serializable view of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileRecord {
    /// Action levels per `(n, t_n)`.
    Pure(Vec<Vec<f64>>),
    /// Weight vectors per `(n, t_n)`.
    Mixed(Vec<Vec<Vec<f64>>>),
}

impl ProfileRecord {
    pub fn of(game: &GameSpec, profile: &StrategyProfile) -> Self {
        match profile.action_levels(game) {
            Some(levels) => ProfileRecord::Pure(levels),
            None => ProfileRecord::Mixed(profile.weights()),
        }
    }
}

/// Calls `f(partial, weight)` for every opponent action profile of `n` in
/// type profile `profile` with positive probability under `delta`.
/// `partial` is the flat action-profile index with the own action at 0.
pub(crate) fn for_each_opponent_action<F>(
    game: &GameSpec,
    n: usize,
    profile: usize,
    delta: &StrategyProfile,
    mut f: F,
) where
    F: FnMut(usize, f64),
{
    let types = &game.type_profiles()[profile];
    let strides = game.action_strides(profile);
    let supports: Vec<Vec<(usize, f64)>> = (0..game.players())
        .filter(|&m| m != n)
        .map(|m| {
            let d = delta.get(m, types[m]);
            d.support().map(|a| (a * strides[m], d.weight(a))).collect()
        })
        .collect();
    if supports.is_empty() {
        f(0, 1.0);
        return;
    }
    let mut pos = vec![0usize; supports.len()];
    loop {
        let mut offset = 0;
        let mut w = 1.0;
        for (s, &p) in supports.iter().zip(&pos) {
            offset += s[p].0;
            w *= s[p].1;
        }
        f(offset, w);
        let mut k = supports.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < supports[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}
