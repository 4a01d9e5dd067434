use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::attitude::{AmbiguityAttitude, AttitudeKind, FactoredPriors, PriorSet};
use super::priors::{scenario_a_priors, scenario_b_priors};
use crate::config::Tolerances;
use crate::dist::{check_probability_vector, DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::payoffvec::PayoffDistVector;

/// How states of the world are organised.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpace {
    /// Finite state set `0..count`; `partition[t]` lists the states
    /// compatible with type profile `t` (lexicographic profile index).
    General { count: usize, partition: Vec<Vec<usize>> },
    /// Every `Ω_t` is `{t} × grid`.
    Structured { grid: Arc<SupportGrid> },
}

/// Raw game description. [`GameDef::build`] validates it into a [`GameSpec`].
#[derive(Debug, Clone)]
pub struct GameDef {
    pub players: usize,
    pub type_counts: Vec<usize>,
    /// `[n][t_n]` strictly increasing action levels.
    pub action_levels: Vec<Vec<Vec<f64>>>,
    pub states: StateSpace,
    /// `[n][t]` with `t` the lexicographic type-profile index; each entry is
    /// flat over (action profile lexicographic, state position in `Ω_t`).
    pub payoff: Vec<Vec<Vec<f64>>>,
    pub attitudes: Vec<Vec<AmbiguityAttitude>>,
}

impl GameDef {
    pub fn build(self) -> Result<GameSpec> {
        GameSpec::new(self)
    }
}

/// One state a `(n, t_n)` player considers possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalState {
    /// Type-profile index of the block this state belongs to.
    pub profile: usize,
    /// Position inside `Ω_t`.
    pub omega_pos: usize,
    /// Global state id.
    pub state: usize,
}

/// States sharing one opponent type profile `t_{-n}`.
#[derive(Debug, Clone)]
pub struct OpponentBlock {
    /// Full type profile (own type included).
    pub types: Vec<usize>,
    pub profile: usize,
    /// Positions of this block's states in the local state list.
    pub range: Range<usize>,
}

/// `Ω_{n,t_n}` laid out as opponent blocks in lexicographic `t_{-n}` order.
#[derive(Debug, Clone)]
pub struct LocalDomain {
    pub grid: Arc<SupportGrid>,
    pub states: Vec<LocalState>,
    pub blocks: Vec<OpponentBlock>,
}

#[derive(Debug, Clone)]
pub struct GameSpec {
    def: GameDef,
    action_grids: Vec<Vec<Arc<SupportGrid>>>,
    type_profiles: Vec<Vec<usize>>,
    omega_t: Vec<Vec<usize>>,
    action_strides: Vec<Vec<usize>>,
    action_profile_counts: Vec<usize>,
    local: Vec<Vec<LocalDomain>>,
    priors: Vec<Vec<Vec<DiscreteDistribution>>>,
    factored: Vec<Vec<Option<FactoredPriors>>>,
    utility_grids: Vec<Vec<Arc<SupportGrid>>>,
}

/// Lexicographic enumeration of all tuples with the given radices.
pub(crate) fn lexicographic(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return out;
    }
    let mut cur = vec![0; radices.len()];
    loop {
        out.push(cur.clone());
        let mut k = radices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < radices[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

fn strides_for(radices: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; radices.len()];
    for k in (0..radices.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * radices[k + 1];
    }
    strides
}

impl GameSpec {
    pub fn new(def: GameDef) -> Result<Self> {
        let players = def.players;
        if players == 0 {
            return Err(Error::validation("players", "game needs at least one player"));
        }
        if def.type_counts.len() != players {
            return Err(Error::validation("types", format!("expected {players} type counts")));
        }
        if let Some(n) = def.type_counts.iter().position(|&c| c == 0) {
            return Err(Error::validation(format!("types[{n}]"), "player has no types"));
        }
        if def.action_levels.len() != players {
            return Err(Error::validation("actions", format!("expected {players} players")));
        }
        let mut action_grids = Vec::with_capacity(players);
        for (n, per_type) in def.action_levels.iter().enumerate() {
            if per_type.len() != def.type_counts[n] {
                return Err(Error::validation(
                    format!("actions[{n}]"),
                    format!("expected {} type entries", def.type_counts[n]),
                ));
            }
            let mut grids = Vec::with_capacity(per_type.len());
            for (t, levels) in per_type.iter().enumerate() {
                let grid = SupportGrid::line(levels.clone()).map_err(|e| {
                    Error::validation(format!("actions[{n}][{t}]"), e.to_string())
                })?;
                grids.push(Arc::new(grid));
            }
            action_grids.push(grids);
        }

        let type_profiles = lexicographic(&def.type_counts);
        let omega_t: Vec<Vec<usize>> = match &def.states {
            StateSpace::Structured { grid } => {
                let g = grid.len();
                (0..type_profiles.len())
                    .map(|t| (t * g..(t + 1) * g).collect())
                    .collect()
            }
            StateSpace::General { count, partition } => {
                if partition.len() != type_profiles.len() {
                    return Err(Error::validation(
                        "states.general.partition",
                        format!("expected {} type-profile blocks", type_profiles.len()),
                    ));
                }
                let mut owner = vec![None; *count];
                for (t, block) in partition.iter().enumerate() {
                    for &s in block {
                        if s >= *count {
                            return Err(Error::validation(
                                format!("states.general.partition[{t}]"),
                                format!("state {s} out of range 0..{count}"),
                            ));
                        }
                        if let Some(prev) = owner[s] {
                            return Err(Error::validation(
                                format!("states.general.partition[{t}]"),
                                format!("state {s} also belongs to block {prev}: blocks overlap"),
                            ));
                        }
                        owner[s] = Some(t);
                    }
                }
                if let Some(s) = owner.iter().position(Option::is_none) {
                    return Err(Error::validation(
                        "states.general.partition",
                        format!("state {s} belongs to no type profile"),
                    ));
                }
                partition.clone()
            }
        };

        let mut action_strides = Vec::with_capacity(type_profiles.len());
        let mut action_profile_counts = Vec::with_capacity(type_profiles.len());
        for types in &type_profiles {
            let radices: Vec<usize> = types
                .iter()
                .enumerate()
                .map(|(m, &t)| action_grids[m][t].len())
                .collect();
            action_strides.push(strides_for(&radices));
            action_profile_counts.push(radices.iter().product());
        }

        // payoff table shape and finiteness
        if def.payoff.len() != players {
            return Err(Error::validation("payoff_utility", format!("expected {players} players")));
        }
        for n in 0..players {
            if def.payoff[n].len() != type_profiles.len() {
                return Err(Error::validation(
                    format!("payoff_utility[{n}]"),
                    format!("expected {} type profiles", type_profiles.len()),
                ));
            }
            for (t, table) in def.payoff[n].iter().enumerate() {
                let expected = action_profile_counts[t] * omega_t[t].len();
                if table.len() != expected {
                    let states = omega_t[t].len().max(1);
                    let a = table.len() / states;
                    let types = &type_profiles[t];
                    let radices: Vec<usize> =
                        types.iter().enumerate().map(|(m, &tm)| action_grids[m][tm].len()).collect();
                    let a_multi = lexicographic(&radices).get(a).cloned().unwrap_or_default();
                    return Err(Error::validation(
                        format!("payoff_utility[{n}][{t}]"),
                        format!(
                            "missing payoff entry for (n={n}, t={types:?}, a={a_multi:?}, ω={}): \
                             expected {expected} entries, found {}",
                            table.len() % states,
                            table.len()
                        ),
                    ));
                }
                if let Some(i) = table.iter().position(|v| !v.is_finite()) {
                    return Err(Error::validation(
                        format!("payoff_utility[{n}][{t}]"),
                        format!("entry {i} is not finite"),
                    ));
                }
            }
        }

        // local domains
        let mut local = Vec::with_capacity(players);
        for n in 0..players {
            let mut per_type = Vec::with_capacity(def.type_counts[n]);
            for tn in 0..def.type_counts[n] {
                let mut states = Vec::new();
                let mut blocks = Vec::new();
                for (t, types) in type_profiles.iter().enumerate() {
                    if types[n] != tn {
                        continue;
                    }
                    let start = states.len();
                    for (pos, &s) in omega_t[t].iter().enumerate() {
                        states.push(LocalState {
                            profile: t,
                            omega_pos: pos,
                            state: s,
                        });
                    }
                    blocks.push(OpponentBlock {
                        types: types.clone(),
                        profile: t,
                        range: start..states.len(),
                    });
                }
                if states.is_empty() {
                    return Err(Error::validation(
                        format!("states (player {n}, type {tn})"),
                        "the player-type considers no state possible",
                    ));
                }
                let grid = Arc::new(SupportGrid::indices(states.len())?);
                per_type.push(LocalDomain {
                    grid,
                    states,
                    blocks,
                });
            }
            local.push(per_type);
        }

        let mut spec = Self {
            def,
            action_grids,
            type_profiles,
            omega_t,
            action_strides,
            action_profile_counts,
            local,
            priors: Vec::new(),
            factored: Vec::new(),
            utility_grids: Vec::new(),
        };
        spec.utility_grids = spec.derive_utility_grids()?;
        spec.resolve_attitudes()?;
        Ok(spec)
    }

    fn derive_utility_grids(&self) -> Result<Vec<Vec<Arc<SupportGrid>>>> {
        let mut out = Vec::with_capacity(self.players());
        for n in 0..self.players() {
            let mut per_type = Vec::new();
            for tn in 0..self.type_count(n) {
                let mut values: Vec<f64> = self.local[n][tn]
                    .blocks
                    .iter()
                    .flat_map(|b| self.def.payoff[n][b.profile].iter().copied())
                    .collect();
                values.sort_by(f64::total_cmp);
                values.dedup();
                per_type.push(Arc::new(SupportGrid::line(values)?));
            }
            out.push(per_type);
        }
        Ok(out)
    }

    fn resolve_attitudes(&mut self) -> Result<()> {
        let players = self.players();
        if self.def.attitudes.len() != players {
            return Err(Error::validation("attitudes", format!("expected {players} players")));
        }
        let mut priors = Vec::with_capacity(players);
        let mut factored = Vec::with_capacity(players);
        for n in 0..players {
            if self.def.attitudes[n].len() != self.type_count(n) {
                return Err(Error::validation(
                    format!("attitudes[{n}]"),
                    format!("expected {} type entries", self.type_count(n)),
                ));
            }
            let mut p_row = Vec::new();
            let mut f_row = Vec::new();
            for tn in 0..self.type_count(n) {
                let loc = format!("attitudes[{n}][{tn}]");
                let attitude = self.def.attitudes[n][tn].clone();
                let (flat, fac) = match attitude.prior_set() {
                    Some(set) => self.resolve_prior_set(n, tn, set, &loc)?,
                    None => (Vec::new(), None),
                };
                if attitude.kind() == AttitudeKind::Traditional && flat.len() != 1 {
                    return Err(Error::validation(
                        loc,
                        format!("traditional attitude needs exactly one prior, got {}", flat.len()),
                    ));
                }
                if let AmbiguityAttitude::Custom(pref) = &attitude {
                    self.sample_comparator(n, tn, pref, &loc)?;
                }
                p_row.push(flat);
                f_row.push(fac);
            }
            priors.push(p_row);
            factored.push(f_row);
        }
        self.priors = priors;
        self.factored = factored;
        Ok(())
    }

    fn resolve_prior_set(
        &self,
        n: usize,
        tn: usize,
        set: &PriorSet,
        loc: &str,
    ) -> Result<(Vec<DiscreteDistribution>, Option<FactoredPriors>)> {
        let domain = &self.local[n][tn];
        let wrap = |e: Error| Error::validation(loc, e.to_string());
        if set.is_empty() {
            return Err(Error::validation(loc, "prior set is empty"));
        }
        let factored = match set {
            PriorSet::Flat(list) => {
                let mut out = Vec::with_capacity(list.len());
                for (i, w) in list.iter().enumerate() {
                    out.push(DiscreteDistribution::new(domain.grid.clone(), w.clone()).map_err(|e| {
                        Error::validation(format!("{loc}.priors[{i}]"), e.to_string())
                    })?);
                }
                return Ok((out, None));
            }
            PriorSet::Factored { type_probs, q } => FactoredPriors {
                type_probs: type_probs.clone(),
                q: q.clone(),
            },
            PriorSet::ScenarioA {
                type_probs,
                per_opponent,
            } => FactoredPriors {
                type_probs: type_probs.clone(),
                q: scenario_a_priors(&self.opponent_type_counts(n), per_opponent).map_err(wrap)?,
            },
            PriorSet::ScenarioB { type_probs, set } => FactoredPriors {
                type_probs: type_probs.clone(),
                q: scenario_b_priors(domain.blocks.len(), set),
            },
        };
        let StateSpace::Structured { grid } = &self.def.states else {
            return Err(Error::validation(loc, "factored prior sets need a structured state space"));
        };
        if factored.type_probs.len() != domain.blocks.len() {
            return Err(Error::validation(
                loc,
                format!("expected {} opponent-type probabilities", domain.blocks.len()),
            ));
        }
        check_probability_vector(&factored.type_probs, Tolerances::default().mass).map_err(wrap)?;
        let mut flat = Vec::with_capacity(factored.q.len());
        for (i, nu) in factored.q.iter().enumerate() {
            if nu.len() != domain.blocks.len() {
                return Err(Error::validation(
                    format!("{loc}.q[{i}]"),
                    format!("expected one state distribution per opponent type profile ({})", domain.blocks.len()),
                ));
            }
            if nu.iter().any(|d| **d.grid() != **grid) {
                return Err(Error::validation(format!("{loc}.q[{i}]"), "distribution not on the state grid"));
            }
            let mut w = Vec::with_capacity(domain.states.len());
            for (p, d) in factored.type_probs.iter().zip(nu) {
                w.extend(d.weights().iter().map(|x| p * x));
            }
            flat.push(DiscreteDistribution::new(domain.grid.clone(), w).map_err(wrap)?);
        }
        Ok((flat, Some(factored)))
    }

    /// Spot-checks irreflexivity and transitivity of a custom comparator.
    fn sample_comparator(
        &self,
        n: usize,
        tn: usize,
        pref: &super::attitude::CustomPreference,
        loc: &str,
    ) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let grid = &self.utility_grids[n][tn];
        let k = self.local[n][tn].states.len();
        let sample = |rng: &mut ChaCha8Rng| {
            let entries = (0..k)
                .map(|_| {
                    let mut w: Vec<f64> = (0..grid.len()).map(|_| rng.gen::<f64>()).collect();
                    let s: f64 = w.iter().sum();
                    w.iter_mut().for_each(|x| *x /= s);
                    DiscreteDistribution::new(grid.clone(), w)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok::<_, Error>(PayoffDistVector::new((n, tn), entries))
        };
        for _ in 0..100 {
            let (a, b, c) = (sample(&mut rng)?, sample(&mut rng)?, sample(&mut rng)?);
            if pref.prefers(&a, &a) {
                return Err(Error::validation(loc, "custom preference is not irreflexive"));
            }
            if pref.prefers(&a, &b) && pref.prefers(&b, &c) && !pref.prefers(&a, &c) {
                return Err(Error::validation(loc, "custom preference is not transitive"));
            }
        }
        Ok(())
    }

    pub fn def(&self) -> &GameDef {
        &self.def
    }

    pub fn players(&self) -> usize {
        self.def.players
    }

    pub fn type_count(&self, n: usize) -> usize {
        self.def.type_counts[n]
    }

    pub fn type_counts(&self) -> &[usize] {
        &self.def.type_counts
    }

    pub fn action_grid(&self, n: usize, tn: usize) -> &Arc<SupportGrid> {
        &self.action_grids[n][tn]
    }

    pub fn action_count(&self, n: usize, tn: usize) -> usize {
        self.action_grids[n][tn].len()
    }

    pub fn states(&self) -> &StateSpace {
        &self.def.states
    }

    pub fn is_structured(&self) -> bool {
        matches!(self.def.states, StateSpace::Structured { .. })
    }

    pub fn tilde_grid(&self) -> Option<&Arc<SupportGrid>> {
        match &self.def.states {
            StateSpace::Structured { grid } => Some(grid),
            StateSpace::General { .. } => None,
        }
    }

    pub fn attitude(&self, n: usize, tn: usize) -> &AmbiguityAttitude {
        &self.def.attitudes[n][tn]
    }

    pub fn local(&self, n: usize, tn: usize) -> &LocalDomain {
        &self.local[n][tn]
    }

    /// Flat priors over `Ω_{n,t_n}` (empty for custom preferences).
    pub fn priors(&self, n: usize, tn: usize) -> &[DiscreteDistribution] {
        &self.priors[n][tn]
    }

    pub fn factored(&self, n: usize, tn: usize) -> Option<&FactoredPriors> {
        self.factored[n][tn].as_ref()
    }

    pub fn utility_grid(&self, n: usize, tn: usize) -> &Arc<SupportGrid> {
        &self.utility_grids[n][tn]
    }

    pub fn type_profiles(&self) -> &[Vec<usize>] {
        &self.type_profiles
    }

    pub fn type_profile_index(&self, types: &[usize]) -> usize {
        types
            .iter()
            .zip(strides_for(&self.def.type_counts))
            .map(|(t, s)| t * s)
            .sum()
    }

    pub fn omega_t(&self, profile: usize) -> &[usize] {
        &self.omega_t[profile]
    }

    pub fn action_strides(&self, profile: usize) -> &[usize] {
        &self.action_strides[profile]
    }

    pub fn action_profile_count(&self, profile: usize) -> usize {
        self.action_profile_counts[profile]
    }

    /// `ũ_{n,t}(a, ω)` with `a` the flat action-profile index of `Ω_t`'s
    /// type profile and `omega_pos` the position inside `Ω_t`.
    #[inline]
    pub fn payoff(&self, n: usize, profile: usize, action_profile: usize, omega_pos: usize) -> f64 {
        self.def.payoff[n][profile][action_profile * self.omega_t[profile].len() + omega_pos]
    }

    pub fn opponent_type_counts(&self, n: usize) -> Vec<usize> {
        (0..self.players())
            .filter(|&m| m != n)
            .map(|m| self.type_count(m))
            .collect()
    }

    /// Agents are `(player, type)` pairs in lexicographic order.
    pub fn agents(&self) -> Vec<(usize, usize)> {
        (0..self.players())
            .flat_map(|n| (0..self.type_count(n)).map(move |t| (n, t)))
            .collect()
    }

    pub fn agent_index(&self, n: usize, tn: usize) -> usize {
        self.def.type_counts[..n].iter().sum::<usize>() + tn
    }

    pub fn all_kinds(&self, kind: AttitudeKind) -> bool {
        self.def
            .attitudes
            .iter()
            .flatten()
            .all(|a| a.kind() == kind)
    }

    /// Re-encode a structured game as a general one with states `T × Ω̃`
    /// and flat priors.
    pub fn to_general(&self) -> Result<GameSpec> {
        let mut def = self.def.clone();
        let StateSpace::Structured { grid } = &self.def.states else {
            return Ok(self.clone());
        };
        def.states = StateSpace::General {
            count: self.type_profiles.len() * grid.len(),
            partition: self.omega_t.clone(),
        };
        for n in 0..self.players() {
            for tn in 0..self.type_count(n) {
                let flat = self.priors[n][tn].iter().map(|d| d.weights().to_vec()).collect();
                def.attitudes[n][tn] = match &self.def.attitudes[n][tn] {
                    AmbiguityAttitude::Traditional(_) => AmbiguityAttitude::Traditional(PriorSet::Flat(flat)),
                    AmbiguityAttitude::Alarmist(_) => AmbiguityAttitude::Alarmist(PriorSet::Flat(flat)),
                    AmbiguityAttitude::Enterprising(_) => AmbiguityAttitude::Enterprising(PriorSet::Flat(flat)),
                    custom @ AmbiguityAttitude::Custom(_) => custom.clone(),
                };
            }
        }
        def.build()
    }

    /// Same game with every attitude replaced by `f(n, t_n, attitude)`.
    pub fn with_attitudes<F>(&self, mut f: F) -> Result<GameSpec>
    where
        F: FnMut(usize, usize, &AmbiguityAttitude) -> AmbiguityAttitude,
    {
        let mut def = self.def.clone();
        for n in 0..self.players() {
            for tn in 0..self.type_count(n) {
                def.attitudes[n][tn] = f(n, tn, &self.def.attitudes[n][tn]);
            }
        }
        def.build()
    }
}
