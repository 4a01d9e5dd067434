//! Payoff-distribution vectors: for every state a player-type considers
//! possible, the distribution of its utility.

use std::sync::Arc;

use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::game::{for_each_opponent_action, GameSpec, StrategyProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct PayoffDistVector {
    owner: (usize, usize),
    entries: Vec<DiscreteDistribution>,
}

impl PayoffDistVector {
    /// `entries[l]` is the utility distribution at local state `l`.
    pub fn new(owner: (usize, usize), entries: Vec<DiscreteDistribution>) -> Self {
        Self { owner, entries }
    }

    pub fn owner(&self) -> (usize, usize) {
        self.owner
    }

    pub fn entries(&self) -> &[DiscreteDistribution] {
        &self.entries
    }

    pub fn entry(&self, l: usize) -> &DiscreteDistribution {
        &self.entries[l]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mean utility per state.
    pub fn means(&self) -> Vec<f64> {
        self.entries.iter().map(DiscreteDistribution::mean).collect()
    }

    /// Entrywise mixture.
    pub fn mix(components: &[(f64, &PayoffDistVector)]) -> Result<Self> {
        let first = components.first().ok_or(Error::Empty("mixture"))?.1;
        if components.iter().any(|(_, v)| v.owner != first.owner || v.len() != first.len()) {
            return Err(Error::GridMismatch);
        }
        let entries = (0..first.len())
            .map(|l| {
                let parts: Vec<(f64, &DiscreteDistribution)> =
                    components.iter().map(|(w, v)| (*w, &v.entries[l])).collect();
                DiscreteDistribution::mix(&parts)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            owner: first.owner,
            entries,
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.owner == other.owner
            && self.len() == other.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// One payoff-distribution vector per own action.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteKernel {
    owner: (usize, usize),
    actions: Arc<SupportGrid>,
    rows: Vec<PayoffDistVector>,
}

impl FiniteKernel {
    pub fn new(owner: (usize, usize), actions: Arc<SupportGrid>, rows: Vec<PayoffDistVector>) -> Result<Self> {
        if rows.len() != actions.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.owner != owner || r.len() != first.len()) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(Self { owner, actions, rows })
    }

    pub fn owner(&self) -> (usize, usize) {
        self.owner
    }

    pub fn actions(&self) -> &Arc<SupportGrid> {
        &self.actions
    }

    pub fn row(&self, a: usize) -> &PayoffDistVector {
        &self.rows[a]
    }

    pub fn rows(&self) -> &[PayoffDistVector] {
        &self.rows
    }
}

fn utility_index(levels: &[f64], value: f64) -> usize {
    levels
        .binary_search_by(|x| x.total_cmp(&value))
        .expect("utility grid holds every payoff value")
}

/// Calls `f(l, utility, weight)` for each local state and opponent action
/// profile with positive probability.
fn for_each_outcome<F>(game: &GameSpec, n: usize, tn: usize, a: usize, delta: &StrategyProfile, mut f: F)
where
    F: FnMut(usize, f64, f64),
{
    let domain = game.local(n, tn);
    for block in &domain.blocks {
        let own = a * game.action_strides(block.profile)[n];
        for_each_opponent_action(game, n, block.profile, delta, |partial, w| {
            for l in block.range.clone() {
                let st = domain.states[l];
                f(l, game.payoff(n, block.profile, own + partial, st.omega_pos), w);
            }
        });
    }
}

/// Payoff-distribution vector of pure action `a` against `delta`'s opponents.
pub fn action_payoff_vector(
    game: &GameSpec,
    n: usize,
    tn: usize,
    a: usize,
    delta: &StrategyProfile,
) -> PayoffDistVector {
    let grid = game.utility_grid(n, tn);
    let levels = &grid.dims()[0];
    let k = game.local(n, tn).states.len();
    let mut weights = vec![vec![0.0; grid.len()]; k];
    for_each_outcome(game, n, tn, a, delta, |l, u, w| {
        weights[l][utility_index(levels, u)] += w;
    });
    let entries = weights
        .into_iter()
        .map(|w| DiscreteDistribution::from_parts_unchecked(grid.clone(), w))
        .collect();
    PayoffDistVector::new((n, tn), entries)
}

/// Mean utility per local state of pure action `a`; equals
/// `action_payoff_vector(..).means()` without building distributions.
pub fn action_state_means(game: &GameSpec, n: usize, tn: usize, a: usize, delta: &StrategyProfile) -> Vec<f64> {
    let mut means = vec![0.0; game.local(n, tn).states.len()];
    for_each_outcome(game, n, tn, a, delta, |l, u, w| means[l] += w * u);
    means
}

/// Mixture of the action vectors under the own strategy `own`.
pub fn strategy_payoff_vector(
    game: &GameSpec,
    n: usize,
    tn: usize,
    own: &DiscreteDistribution,
    delta: &StrategyProfile,
) -> Result<PayoffDistVector> {
    integrate_kernel(&kernel(game, n, tn, delta), own)
}

pub fn kernel(game: &GameSpec, n: usize, tn: usize, delta: &StrategyProfile) -> FiniteKernel {
    let rows = (0..game.action_count(n, tn))
        .map(|a| action_payoff_vector(game, n, tn, a, delta))
        .collect();
    FiniteKernel {
        owner: (n, tn),
        actions: game.action_grid(n, tn).clone(),
        rows,
    }
}

pub fn integrate_kernel(kernel: &FiniteKernel, own: &DiscreteDistribution) -> Result<PayoffDistVector> {
    if **own.grid() != *kernel.actions {
        return Err(Error::GridMismatch);
    }
    let parts: Vec<(f64, &PayoffDistVector)> = own
        .weights()
        .iter()
        .zip(&kernel.rows)
        .map(|(w, r)| (*w, r))
        .collect();
    PayoffDistVector::mix(&parts)
}
