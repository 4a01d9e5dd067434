//! JSON game files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::attitude::{AmbiguityAttitude, AttitudeKind, PriorSet};
use super::spec::{lexicographic, GameDef, GameSpec, StateSpace};
use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::models::{FamilySpec, ModelSpec};

pub const GAME_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub players: usize,
    pub types: Vec<usize>,
    /// `[n][t_n]` action levels.
    pub actions: Vec<Vec<Vec<f64>>>,
    pub states: StatesFile,
    /// `[n][t][a][ω]`: type profile and action profile lexicographic.
    pub payoff_utility: Vec<Vec<Vec<Vec<f64>>>>,
    pub attitudes: Vec<Vec<AttitudeFile>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StatesFile {
    Structured { grid: Vec<Vec<f64>> },
    General { count: usize, partition: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttitudeFile {
    pub kind: AttitudeKind,
    pub priors: PriorsFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorsFile {
    Flat(Vec<Vec<f64>>),
    Factored {
        type_probs: Vec<f64>,
        q: Vec<Vec<Vec<f64>>>,
    },
    ScenarioA {
        type_probs: Vec<f64>,
        per_opponent: Vec<Vec<Vec<f64>>>,
    },
    ScenarioB {
        type_probs: Vec<f64>,
        set: Vec<Vec<f64>>,
    },
}

/// Anything a game file may hold.
#[derive(Debug, Clone)]
pub enum Document {
    Game(Box<GameSpec>),
    Family(FamilySpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    family: FamilySpec,
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let has = |key: &str| value.as_object().is_some_and(|o| o.contains_key(key));
    if has("family") {
        let file: FamilyFile = serde_json::from_value(value)?;
        return Ok(Document::Family(file.family));
    }
    if has("model") {
        let model: ModelSpec = serde_json::from_value(value)?;
        return Ok(Document::Game(Box::new(model.build()?)));
    }
    let file: GameFile = serde_json::from_value(value)?;
    Ok(Document::Game(Box::new(file.into_game()?)))
}

pub fn parse_game(text: &str) -> Result<GameSpec> {
    match parse_document(text)? {
        Document::Game(g) => Ok(*g),
        Document::Family(_) => Err(Error::validation("family", "expected a single game, found a family")),
    }
}

pub fn load_document(path: impl AsRef<Path>) -> Result<Document> {
    parse_document(&std::fs::read_to_string(path)?)
}

pub fn load_game(path: impl AsRef<Path>) -> Result<GameSpec> {
    parse_game(&std::fs::read_to_string(path)?)
}

pub fn save_game(game: &GameSpec, path: impl AsRef<Path>) -> Result<()> {
    let file = GameFile::from_game(game)?;
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn weights_on(grid: &Arc<SupportGrid>, w: &[f64], loc: &str) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(grid.clone(), w.to_vec()).map_err(|e| Error::validation(loc, e.to_string()))
}

impl GameFile {
    pub fn into_game(self) -> Result<GameSpec> {
        self.to_def()?.build()
    }

    pub fn to_def(&self) -> Result<GameDef> {
        if let Some(v) = self.schema_version {
            if v != GAME_SCHEMA_VERSION {
                return Err(Error::validation("schema_version", format!("unsupported version {v}")));
            }
        }
        let states = match &self.states {
            StatesFile::Structured { grid } => StateSpace::Structured {
                grid: Arc::new(
                    SupportGrid::new(grid.clone())
                        .map_err(|e| Error::validation("states.structured.grid", e.to_string()))?,
                ),
            },
            StatesFile::General { count, partition } => StateSpace::General {
                count: *count,
                partition: partition.clone(),
            },
        };
        let tilde = match &states {
            StateSpace::Structured { grid } => Some(grid.clone()),
            StateSpace::General { .. } => None,
        };

        if self.types.len() != self.players {
            return Err(Error::validation("types", format!("expected {} entries", self.players)));
        }
        let type_profiles = lexicographic(&self.types);
        let mut payoff = Vec::with_capacity(self.payoff_utility.len());
        for (n, per_profile) in self.payoff_utility.iter().enumerate() {
            let mut tables = Vec::with_capacity(per_profile.len());
            for (t, rows) in per_profile.iter().enumerate() {
                let Some(types) = type_profiles.get(t) else {
                    return Err(Error::validation(
                        format!("payoff_utility[{n}]"),
                        format!("more type-profile entries than the {} profiles", type_profiles.len()),
                    ));
                };
                let radices: Vec<usize> = types
                    .iter()
                    .enumerate()
                    .map(|(m, &tm)| self.actions.get(m).and_then(|a| a.get(tm)).map_or(0, Vec::len))
                    .collect();
                let action_profiles = lexicographic(&radices);
                let states_here = match &self.states {
                    StatesFile::Structured { grid } => grid.iter().map(Vec::len).product(),
                    StatesFile::General { partition, .. } => partition.get(t).map_or(0, Vec::len),
                };
                if rows.len() != action_profiles.len() {
                    let a = action_profiles.get(rows.len()).cloned().unwrap_or_default();
                    return Err(Error::validation(
                        format!("payoff_utility[{n}][{t}]"),
                        format!(
                            "missing payoff entry for (n={n}, t={types:?}, a={a:?}, ω=0): expected {} action profiles, found {}",
                            action_profiles.len(),
                            rows.len()
                        ),
                    ));
                }
                let mut flat = Vec::with_capacity(rows.len() * states_here);
                for (a, row) in rows.iter().enumerate() {
                    if row.len() != states_here {
                        return Err(Error::validation(
                            format!("payoff_utility[{n}][{t}][{a}]"),
                            format!(
                                "missing payoff entry for (n={n}, t={types:?}, a={:?}, ω={}): expected {states_here} states, found {}",
                                action_profiles[a],
                                row.len().min(states_here),
                                row.len()
                            ),
                        ));
                    }
                    flat.extend_from_slice(row);
                }
                tables.push(flat);
            }
            payoff.push(tables);
        }

        let mut attitudes = Vec::with_capacity(self.attitudes.len());
        for (n, row) in self.attitudes.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (t, att) in row.iter().enumerate() {
                let loc = format!("attitudes[{n}][{t}]");
                let priors = match &att.priors {
                    PriorsFile::Flat(list) => PriorSet::Flat(list.clone()),
                    other => {
                        let Some(grid) = &tilde else {
                            return Err(Error::validation(loc, "factored prior sets need a structured state space"));
                        };
                        match other {
                            PriorsFile::Factored { type_probs, q } => PriorSet::Factored {
                                type_probs: type_probs.clone(),
                                q: q.iter()
                                    .map(|nu| nu.iter().map(|w| weights_on(grid, w, &loc)).collect())
                                    .collect::<Result<_>>()?,
                            },
                            PriorsFile::ScenarioA { type_probs, per_opponent } => PriorSet::ScenarioA {
                                type_probs: type_probs.clone(),
                                per_opponent: per_opponent
                                    .iter()
                                    .map(|set| set.iter().map(|w| weights_on(grid, w, &loc)).collect())
                                    .collect::<Result<_>>()?,
                            },
                            PriorsFile::ScenarioB { type_probs, set } => PriorSet::ScenarioB {
                                type_probs: type_probs.clone(),
                                set: set.iter().map(|w| weights_on(grid, w, &loc)).collect::<Result<_>>()?,
                            },
                            PriorsFile::Flat(_) => unreachable!(),
                        }
                    }
                };
                out.push(match att.kind {
                    AttitudeKind::Traditional => AmbiguityAttitude::Traditional(priors),
                    AttitudeKind::Alarmist => AmbiguityAttitude::Alarmist(priors),
                    AttitudeKind::Enterprising => AmbiguityAttitude::Enterprising(priors),
                    AttitudeKind::Custom => {
                        return Err(Error::validation(loc, "custom preferences cannot be loaded from a file"))
                    }
                });
            }
            attitudes.push(out);
        }

        Ok(GameDef {
            players: self.players,
            type_counts: self.types.clone(),
            action_levels: self.actions.clone(),
            states,
            payoff,
            attitudes,
        })
    }

    pub fn from_game(game: &GameSpec) -> Result<Self> {
        let def = game.def();
        let states = match &def.states {
            StateSpace::Structured { grid } => StatesFile::Structured {
                grid: grid.dims().to_vec(),
            },
            StateSpace::General { count, partition } => StatesFile::General {
                count: *count,
                partition: partition.clone(),
            },
        };
        let payoff_utility = (0..game.players())
            .map(|n| {
                (0..game.type_profiles().len())
                    .map(|t| {
                        let k = game.omega_t(t).len();
                        if k == 0 {
                            return vec![Vec::new(); game.action_profile_count(t)];
                        }
                        def.payoff[n][t].chunks(k).map(<[f64]>::to_vec).collect()
                    })
                    .collect()
            })
            .collect();
        let weights = |list: &[DiscreteDistribution]| list.iter().map(|d| d.weights().to_vec()).collect::<Vec<_>>();
        let mut attitudes = Vec::new();
        for (n, row) in def.attitudes.iter().enumerate() {
            let mut out = Vec::new();
            for (t, att) in row.iter().enumerate() {
                let Some(set) = att.prior_set() else {
                    return Err(Error::Unsupported(format!(
                        "attitudes[{n}][{t}]: custom preferences cannot be saved"
                    )));
                };
                let priors = match set {
                    PriorSet::Flat(list) => PriorsFile::Flat(list.clone()),
                    PriorSet::Factored { type_probs, q } => PriorsFile::Factored {
                        type_probs: type_probs.clone(),
                        q: q.iter().map(|nu| weights(nu)).collect(),
                    },
                    PriorSet::ScenarioA { type_probs, per_opponent } => PriorsFile::ScenarioA {
                        type_probs: type_probs.clone(),
                        per_opponent: per_opponent.iter().map(|s| weights(s)).collect(),
                    },
                    PriorSet::ScenarioB { type_probs, set } => PriorsFile::ScenarioB {
                        type_probs: type_probs.clone(),
                        set: weights(set),
                    },
                };
                out.push(AttitudeFile { kind: att.kind(), priors });
            }
            attitudes.push(out);
        }
        Ok(Self {
            schema_version: Some(GAME_SCHEMA_VERSION),
            players: def.players,
            types: def.type_counts.clone(),
            actions: def.action_levels.clone(),
            states,
            payoff_utility,
            attitudes,
        })
    }
}
