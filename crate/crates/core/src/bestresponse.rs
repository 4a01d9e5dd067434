//! Best responses against a fixed opponent profile, and the agent form.

use serde::{Deserialize, Serialize};

use crate::config::{DEFAULT_PROFILE_CAP, SIMPLEX_GRID_LIMIT};
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::game::{lexicographic, AmbiguityAttitude, AttitudeKind, GameSpec, PureProfile, StrategyProfile};
use crate::lp::solve_matrix_game;
use crate::payoffvec::{action_payoff_vector, action_state_means, strategy_payoff_vector, PayoffDistVector};
use crate::satisfaction::{aggregate, prefers, prior_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Action,
    Distribution,
}

/// `g[a][j]`: expected utility of pure action `a` under the `j`-th prior.
pub fn prior_value_matrix(game: &GameSpec, n: usize, tn: usize, delta: &StrategyProfile) -> Vec<Vec<f64>> {
    let priors = game.priors(n, tn);
    (0..game.action_count(n, tn))
        .map(|a| {
            let means = action_state_means(game, n, tn, a, delta);
            priors.iter().map(|rho| prior_value(rho, &means)).collect()
        })
        .collect()
}

/// Satisfaction of each pure action.
pub fn action_values(game: &GameSpec, n: usize, tn: usize, delta: &StrategyProfile) -> Result<Vec<f64>> {
    let kind = game.attitude(n, tn).kind();
    prior_value_matrix(game, n, tn, delta)
        .iter()
        .map(|row| aggregate(kind, row))
        .collect()
}

/// Satisfaction of a mixed own strategy, from the prior-value matrix.
pub fn mixed_value(kind: AttitudeKind, matrix: &[Vec<f64>], own: &[f64]) -> Result<f64> {
    let priors = matrix.first().map_or(0, Vec::len);
    let values: Vec<f64> = (0..priors)
        .map(|j| own.iter().zip(matrix).map(|(w, row)| w * row[j]).sum())
        .collect();
    aggregate(kind, &values)
}

/// Actions within `eps` of the best; for custom preferences, the actions
/// no other action is strictly preferred to.
pub fn action_best_set(
    game: &GameSpec,
    n: usize,
    tn: usize,
    delta: &StrategyProfile,
    eps: f64,
) -> Result<Vec<usize>> {
    if let AmbiguityAttitude::Custom(pref) = game.attitude(n, tn) {
        let vectors: Vec<PayoffDistVector> = (0..game.action_count(n, tn))
            .map(|a| action_payoff_vector(game, n, tn, a, delta))
            .collect();
        return Ok((0..vectors.len())
            .filter(|&a| !vectors.iter().any(|b| pref.prefers(b, &vectors[a])))
            .collect());
    }
    let values = action_values(game, n, tn, delta)?;
    Ok(eps_argmax(&values, eps))
}

pub(crate) fn eps_argmax(values: &[f64], eps: f64) -> Vec<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&a| values[a] >= best - eps).collect()
}

/// Whether `own` is supported on the `eps`-best actions, with the mass it
/// puts elsewhere.
pub fn is_action_best_response(
    own: &DiscreteDistribution,
    game: &GameSpec,
    n: usize,
    tn: usize,
    delta: &StrategyProfile,
    eps: f64,
) -> Result<(bool, f64)> {
    let best = action_best_set(game, n, tn, delta, eps)?;
    let off: f64 = own.support().filter(|a| !best.contains(a)).map(|a| own.weight(a)).sum();
    Ok((off <= 1e-12, off))
}

#[derive(Debug, Clone)]
pub struct BestResponseResult {
    pub mode: Mode,
    /// `eps`-best pure actions.
    pub maximal_actions: Vec<usize>,
    pub optimal_dist: DiscreteDistribution,
    /// Best satisfaction over the mode's strategy set.
    pub value: f64,
    /// Best satisfaction over pure actions.
    pub pure_value: f64,
    kind: AttitudeKind,
    matrix: Vec<Vec<f64>>,
}

impl BestResponseResult {
    /// `value - achieved` for a candidate own strategy.
    pub fn regret_of(&self, own: &DiscreteDistribution) -> Result<f64> {
        Ok(self.value - mixed_value(self.kind, &self.matrix, own.weights())?)
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }
}

/// Best responses over pure actions (`Mode::Action`) or all action
/// distributions (`Mode::Distribution`).
pub fn best_response(
    game: &GameSpec,
    n: usize,
    tn: usize,
    delta: &StrategyProfile,
    mode: Mode,
    eps: f64,
) -> Result<BestResponseResult> {
    let kind = game.attitude(n, tn).kind();
    if kind == AttitudeKind::Custom {
        return Err(Error::Unsupported(
            "custom preferences have no scalar best response; use the simplex grid search".into(),
        ));
    }
    let matrix = prior_value_matrix(game, n, tn, delta);
    let pure: Vec<f64> = matrix.iter().map(|r| aggregate(kind, r)).collect::<Result<_>>()?;
    let maximal_actions = eps_argmax(&pure, eps);
    let best = maximal_actions
        .iter()
        .copied()
        .max_by(|&a, &b| pure[a].total_cmp(&pure[b]).then(b.cmp(&a)))
        .expect("action grids are nonempty");
    let pure_value = pure[best];
    let grid = game.action_grid(n, tn).clone();
    let (optimal_dist, value) = if mode == Mode::Distribution && kind == AttitudeKind::Alarmist {
        let sol = solve_matrix_game(&matrix)?;
        if sol.value > pure_value {
            let dist = DiscreteDistribution::new(grid.clone(), sol.row_strategy)
                .map_err(|e| Error::LpFailure(e.to_string()))?;
            let v = mixed_value(kind, &matrix, dist.weights())?;
            (dist, v.max(pure_value))
        } else {
            (DiscreteDistribution::dirac_at(grid, best), pure_value)
        }
    } else {
        (DiscreteDistribution::dirac_at(grid, best), pure_value)
    };
    Ok(BestResponseResult {
        mode,
        maximal_actions,
        optimal_dist,
        value,
        pure_value,
        kind,
        matrix,
    })
}

/// Best response over all action distributions.
pub fn dist_best_response(game: &GameSpec, n: usize, tn: usize, delta: &StrategyProfile) -> Result<BestResponseResult> {
    best_response(game, n, tn, delta, Mode::Distribution, crate::config::Tolerances::default().regret)
}

/// Points of the simplex over `k` actions with coordinates in multiples of `1/m`.
pub fn simplex_grid(k: usize, m: usize) -> Result<Vec<Vec<f64>>> {
    let count = binomial(m + k - 1, k - 1);
    if count > SIMPLEX_GRID_LIMIT as u128 {
        return Err(Error::GridTooLarge {
            points: count.min(usize::MAX as u128) as usize,
            limit: SIMPLEX_GRID_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0usize; k];
    compositions(m, 0, &mut cur, &mut out, m);
    Ok(out)
}

fn compositions(left: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>, m: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.iter().map(|&c| c as f64 / m as f64).collect());
        return;
    }
    for c in (0..=left).rev() {
        cur[pos] = c;
        compositions(left - c, pos + 1, cur, out, m);
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct GridBestResponse {
    /// Grid strategies no other grid strategy is strictly preferred to.
    pub maximal: Vec<DiscreteDistribution>,
    /// Their satisfaction, when the preference has one.
    pub value: Option<f64>,
}

/// Maximal elements among the simplex grid of step `h`. An `h`-approximation
/// of the distribution best response.
pub fn dist_best_response_grid(
    game: &GameSpec,
    n: usize,
    tn: usize,
    delta: &StrategyProfile,
    h: f64,
) -> Result<GridBestResponse> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::Unsupported(format!("grid step {h} outside (0, 1]")));
    }
    let m = (1.0 / h).round() as usize;
    if ((m as f64) * h - 1.0).abs() > 1e-9 {
        return Err(Error::Unsupported(format!("grid step {h} does not divide 1")));
    }
    let grid = game.action_grid(n, tn).clone();
    let points = simplex_grid(grid.len(), m)?;
    let dists: Vec<DiscreteDistribution> = points
        .into_iter()
        .map(|w| DiscreteDistribution::from_parts_unchecked(grid.clone(), w))
        .collect();
    let kind = game.attitude(n, tn).kind();
    if kind == AttitudeKind::Custom {
        let vectors: Vec<PayoffDistVector> = dists
            .iter()
            .map(|d| strategy_payoff_vector(game, n, tn, d, delta))
            .collect::<Result<_>>()?;
        let mut maximal = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let mut beaten = false;
            for w in &vectors {
                if prefers(game, w, v)? {
                    beaten = true;
                    break;
                }
            }
            if !beaten {
                maximal.push(dists[i].clone());
            }
        }
        return Ok(GridBestResponse { maximal, value: None });
    }
    let matrix = prior_value_matrix(game, n, tn, delta);
    let values: Vec<f64> = dists
        .iter()
        .map(|d| mixed_value(kind, &matrix, d.weights()))
        .collect::<Result<_>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximal = dists
        .into_iter()
        .zip(&values)
        .filter(|(_, v)| **v == best)
        .map(|(d, _)| d)
        .collect();
    Ok(GridBestResponse {
        maximal,
        value: Some(best),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentFormPath {
    /// Factored priors: optimize over `𝒬` of `Σ p · ∫ ũ dν`.
    Structured,
    /// Flat priors over the player's states.
    General,
}

/// `s̃(a, a_{-n})` for one agent; opponents are all agents of other players.
#[derive(Debug, Clone)]
pub struct AgentTable {
    pub opponents: Vec<(usize, usize)>,
    pub radices: Vec<usize>,
    pub own_actions: usize,
    /// `values[a * opponent_profiles + k]`, `k` lexicographic over `opponents`.
    pub values: Vec<f64>,
}

impl AgentTable {
    pub fn opponent_profiles(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn opponent_index(&self, pure: &PureProfile) -> usize {
        self.opponents
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&(m, tm), &r)| acc * r + pure[m][tm])
    }

    pub fn value(&self, a: usize, pure: &PureProfile) -> f64 {
        self.values[a * self.opponent_profiles() + self.opponent_index(pure)]
    }
}

#[derive(Debug, Clone)]
pub struct AgentForm {
    tables: Vec<Vec<AgentTable>>,
}

impl AgentForm {
    pub fn table(&self, n: usize, tn: usize) -> &AgentTable {
        &self.tables[n][tn]
    }

    pub fn value(&self, n: usize, tn: usize, a: usize, pure: &PureProfile) -> f64 {
        self.tables[n][tn].value(a, pure)
    }
}

/// `s̃_{n,t_n}(a, ·)` against the pure profile `pure` (own entry ignored).
pub fn agent_value(game: &GameSpec, n: usize, tn: usize, a: usize, pure: &PureProfile, path: AgentFormPath) -> Result<f64> {
    let kind = game.attitude(n, tn).kind();
    if kind == AttitudeKind::Custom {
        return Err(Error::NoScalarSatisfaction);
    }
    let domain = game.local(n, tn);
    // utility at each local state under the pure profile
    let mut utility = Vec::with_capacity(domain.states.len());
    for block in &domain.blocks {
        let strides = game.action_strides(block.profile);
        let idx: usize = (0..game.players())
            .map(|m| {
                let am = if m == n { a } else { pure[m][block.types[m]] };
                am * strides[m]
            })
            .sum();
        for l in block.range.clone() {
            utility.push(game.payoff(n, block.profile, idx, domain.states[l].omega_pos));
        }
    }
    let values: Vec<f64> = match (path, game.factored(n, tn)) {
        (AgentFormPath::Structured, Some(fac)) => fac
            .q
            .iter()
            .map(|nu| {
                domain
                    .blocks
                    .iter()
                    .zip(&fac.type_probs)
                    .zip(nu)
                    .map(|((block, p), dist)| {
                        let v: f64 = dist
                            .weights()
                            .iter()
                            .zip(&utility[block.range.clone()])
                            .map(|(w, u)| w * u)
                            .sum();
                        p * v
                    })
                    .sum()
            })
            .collect(),
        (AgentFormPath::Structured, None) => {
            return Err(Error::Unsupported(format!(
                "player {n} type {tn} has no factored prior set"
            )))
        }
        (AgentFormPath::General, _) => game.priors(n, tn).iter().map(|rho| prior_value(rho, &utility)).collect(),
    };
    aggregate(kind, &values)
}

/// Full agent-form tables, using factored priors where available.
pub fn agent_form(game: &GameSpec) -> Result<AgentForm> {
    agent_form_with(game, None)
}

/// Agent-form tables through one evaluation path (`None`: structured where possible).
pub fn agent_form_with(game: &GameSpec, path: Option<AgentFormPath>) -> Result<AgentForm> {
    agent_form_capped(game, path, DEFAULT_PROFILE_CAP)
}

/// As [`agent_form_with`], refusing tables with more than `cap` entries.
pub fn agent_form_capped(game: &GameSpec, path: Option<AgentFormPath>, cap: u128) -> Result<AgentForm> {
    let mut tables = Vec::with_capacity(game.players());
    for n in 0..game.players() {
        let opponents: Vec<(usize, usize)> = game.agents().into_iter().filter(|&(m, _)| m != n).collect();
        let radices: Vec<usize> = opponents.iter().map(|&(m, tm)| game.action_count(m, tm)).collect();
        let mut per_type = Vec::new();
        for tn in 0..game.type_count(n) {
            let own = game.action_count(n, tn);
            let total = radices.iter().map(|&r| r as u128).product::<u128>() * own as u128;
            if total > cap {
                return Err(Error::CapExceeded { count: total, cap });
            }
            let p = path.unwrap_or(if game.factored(n, tn).is_some() {
                AgentFormPath::Structured
            } else {
                AgentFormPath::General
            });
            let mut pure: PureProfile = (0..game.players()).map(|m| vec![0; game.type_count(m)]).collect();
            let opp_profiles = lexicographic(&radices);
            let mut values = Vec::with_capacity(total as usize);
            for a in 0..own {
                for combo in &opp_profiles {
                    for (&(m, tm), &am) in opponents.iter().zip(combo) {
                        pure[m][tm] = am;
                    }
                    values.push(agent_value(game, n, tn, a, &pure, p)?);
                }
            }
            per_type.push(AgentTable {
                opponents: opponents.clone(),
                radices: radices.clone(),
                own_actions: own,
                values,
            });
        }
        tables.push(per_type);
    }
    Ok(AgentForm { tables })
}
