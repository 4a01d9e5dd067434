use std::fmt;
use std::sync::Arc;

use crate::dist::DiscreteDistribution;
use crate::payoffvec::PayoffDistVector;

/// Strict-preference oracle `(π, π') -> π ≻ π'`.
pub type Comparator = dyn Fn(&PayoffDistVector, &PayoffDistVector) -> bool + Send + Sync;

/// A user-supplied strict preference. Only irreflexivity and transitivity
/// are spot-checked, on sampled inputs, when the game is built.
#[derive(Clone)]
pub struct CustomPreference {
    name: String,
    cmp: Arc<Comparator>,
}

impl CustomPreference {
    pub fn new<F>(name: impl Into<String>, cmp: F) -> Self
    where
        F: Fn(&PayoffDistVector, &PayoffDistVector) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            cmp: Arc::new(cmp),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prefers(&self, a: &PayoffDistVector, b: &PayoffDistVector) -> bool {
        (self.cmp)(a, b)
    }
}

impl fmt::Debug for CustomPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPreference").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Finite prior set of a player-type.
#[derive(Debug, Clone)]
pub enum PriorSet {
    /// Weight vectors over `Ω_{n,t_n}` in local state order.
    Flat(Vec<Vec<f64>>),
    /// Structured games: opponent-type probabilities (lexicographic `t_{-n}`)
    /// and a list of vectors `ν = (ν_{t_{-n}})` of state distributions.
    Factored {
        type_probs: Vec<f64>,
        q: Vec<Vec<DiscreteDistribution>>,
    },
    /// Structured games: one candidate set per opponent type profile; the
    /// vectors are the selections monotone in `t_{-n}`.
    ScenarioA {
        type_probs: Vec<f64>,
        per_opponent: Vec<Vec<DiscreteDistribution>>,
    },
    /// Structured games: one set shared by every opponent type profile.
    ScenarioB {
        type_probs: Vec<f64>,
        set: Vec<DiscreteDistribution>,
    },
}

impl PriorSet {
    pub fn is_empty(&self) -> bool {
        match self {
            PriorSet::Flat(v) => v.is_empty(),
            PriorSet::Factored { q, .. } => q.is_empty(),
            PriorSet::ScenarioA { per_opponent, .. } => {
                per_opponent.is_empty() || per_opponent.iter().any(Vec::is_empty)
            }
            PriorSet::ScenarioB { set, .. } => set.is_empty(),
        }
    }

    /// A single flat prior.
    pub fn single(weights: Vec<f64>) -> Self {
        PriorSet::Flat(vec![weights])
    }
}

/// Factored form `(p, 𝒬)` resolved for a structured player-type.
#[derive(Debug, Clone)]
pub struct FactoredPriors {
    pub type_probs: Vec<f64>,
    pub q: Vec<Vec<DiscreteDistribution>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttitudeKind {
    Traditional,
    Alarmist,
    Enterprising,
    Custom,
}

#[derive(Debug, Clone)]
pub enum AmbiguityAttitude {
    Traditional(PriorSet),
    Alarmist(PriorSet),
    Enterprising(PriorSet),
    Custom(CustomPreference),
}

impl AmbiguityAttitude {
    pub fn kind(&self) -> AttitudeKind {
        match self {
            AmbiguityAttitude::Traditional(_) => AttitudeKind::Traditional,
            AmbiguityAttitude::Alarmist(_) => AttitudeKind::Alarmist,
            AmbiguityAttitude::Enterprising(_) => AttitudeKind::Enterprising,
            AmbiguityAttitude::Custom(_) => AttitudeKind::Custom,
        }
    }

    pub fn prior_set(&self) -> Option<&PriorSet> {
        match self {
            AmbiguityAttitude::Traditional(p)
            | AmbiguityAttitude::Alarmist(p)
            | AmbiguityAttitude::Enterprising(p) => Some(p),
            AmbiguityAttitude::Custom(_) => None,
        }
    }

    /// Same kind with a different prior set; custom preferences are returned unchanged.
    pub fn with_priors(&self, priors: PriorSet) -> Self {
        match self {
            AmbiguityAttitude::Traditional(_) => AmbiguityAttitude::Traditional(priors),
            AmbiguityAttitude::Alarmist(_) => AmbiguityAttitude::Alarmist(priors),
            AmbiguityAttitude::Enterprising(_) => AmbiguityAttitude::Enterprising(priors),
            AmbiguityAttitude::Custom(c) => AmbiguityAttitude::Custom(c.clone()),
        }
    }
}
