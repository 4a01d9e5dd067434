use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::game::{lexicographic, AmbiguityAttitude, AttitudeKind, GameDef, GameSpec, PriorSet, StateSpace};

fn default_enterprising() -> AttitudeKind {
    AttitudeKind::Enterprising
}

/// Price competition with demand
/// `b - c·a_n + Σ d_nm·a_m + e·t + f·ω + g·t·ω` and unit cost `cost`.
/// Type `t_n` (0-based index) enters as the level `t_n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricingSpec {
    pub firms: usize,
    pub types: usize,
    pub cost: Vec<f64>,
    /// Price grid per firm.
    pub prices: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// `d[n][m]`; the diagonal is ignored.
    pub d: Vec<Vec<f64>>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    /// Levels of the common demand shock.
    pub states: Vec<f64>,
    /// `[n]` probabilities over opponent type profiles, shared by all types.
    pub type_probs: Vec<Vec<f64>>,
    /// `[n][t_n][t_{-n}]` candidate distributions over `states`.
    pub priors: Vec<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(default = "default_enterprising")]
    pub attitude: AttitudeKind,
}

impl PricingSpec {
    /// Profit of firm `n` with type index `tn`.
    pub fn profit(&self, n: usize, tn: usize, prices: &[f64], omega: f64) -> f64 {
        let t = (tn + 1) as f64;
        let cross: f64 = (0..self.firms).filter(|&m| m != n).map(|m| self.d[n][m] * prices[m]).sum();
        let demand = self.b[n] - self.c[n] * prices[n] + cross + self.e[n] * t + self.f[n] * omega + self.g[n] * t * omega;
        (prices[n] - self.cost[n]) * demand
    }

    /// Unconstrained maximizer of expected profit given opponents' prices
    /// and the mean demand shock.
    pub fn interior_best_response(&self, n: usize, tn: usize, prices: &[f64], mean_omega: f64) -> f64 {
        let t = (tn + 1) as f64;
        let cross: f64 = (0..self.firms).filter(|&m| m != n).map(|m| self.d[n][m] * prices[m]).sum();
        (self.cost[n] * self.c[n] + self.b[n] + cross + self.e[n] * t + self.f[n] * mean_omega + self.g[n] * t * mean_omega)
            / (2.0 * self.c[n])
    }

    fn check_shapes(&self) -> Result<()> {
        let nf = self.firms;
        let per_firm = [
            ("cost", self.cost.len()),
            ("prices", self.prices.len()),
            ("b", self.b.len()),
            ("c", self.c.len()),
            ("d", self.d.len()),
            ("e", self.e.len()),
            ("f", self.f.len()),
            ("g", self.g.len()),
            ("type_probs", self.type_probs.len()),
            ("priors", self.priors.len()),
        ];
        for (name, len) in per_firm {
            if len != nf {
                return Err(Error::validation(format!("pricing.{name}"), format!("expected {nf} entries, found {len}")));
            }
        }
        if let Some(n) = self.d.iter().position(|row| row.len() != nf) {
            return Err(Error::validation(format!("pricing.d[{n}]"), format!("expected {nf} entries")));
        }
        Ok(())
    }

    fn check_positive(&self) -> Result<()> {
        let scalars = [("b", &self.b), ("c", &self.c), ("e", &self.e), ("f", &self.f), ("g", &self.g)];
        for (name, v) in scalars {
            if let Some(n) = v.iter().position(|x| !(*x > 0.0)) {
                return Err(Error::validation(format!("pricing.{name}[{n}]"), "constant must be strictly positive"));
            }
        }
        for (n, row) in self.d.iter().enumerate() {
            for (m, x) in row.iter().enumerate() {
                if m != n && !(*x > 0.0) {
                    return Err(Error::validation(format!("pricing.d[{n}][{m}]"), "constant must be strictly positive"));
                }
            }
        }
        Ok(())
    }
}

/// Pricing game with strictly positive demand constants.
pub fn build_pricing_game(spec: &PricingSpec) -> Result<GameSpec> {
    spec.check_shapes()?;
    spec.check_positive()?;
    build_pricing_game_unchecked(spec)
}

/// Pricing game without the sign checks on the demand constants.
pub fn build_pricing_game_unchecked(spec: &PricingSpec) -> Result<GameSpec> {
    spec.check_shapes()?;
    let nf = spec.firms;
    if nf == 0 || spec.types == 0 {
        return Err(Error::validation("pricing", "need at least one firm and one type"));
    }
    let tilde = Arc::new(
        SupportGrid::line(spec.states.clone()).map_err(|e| Error::validation("pricing.states", e.to_string()))?,
    );
    let type_counts = vec![spec.types; nf];
    let type_profiles = lexicographic(&type_counts);
    let price_profiles = lexicographic(&spec.prices.iter().map(Vec::len).collect::<Vec<_>>());
    let payoff = (0..nf)
        .map(|n| {
            type_profiles
                .iter()
                .map(|types| {
                    let mut table = Vec::with_capacity(price_profiles.len() * tilde.len());
                    for pp in &price_profiles {
                        let prices: Vec<f64> = pp.iter().enumerate().map(|(m, &i)| spec.prices[m][i]).collect();
                        for &omega in &spec.states {
                            table.push(spec.profit(n, types[n], &prices, omega));
                        }
                    }
                    table
                })
                .collect()
        })
        .collect();
    let mut attitudes = Vec::with_capacity(nf);
    for n in 0..nf {
        if spec.priors[n].len() != spec.types {
            return Err(Error::validation(format!("pricing.priors[{n}]"), format!("expected {} types", spec.types)));
        }
        let mut row = Vec::new();
        for tn in 0..spec.types {
            let loc = format!("pricing.priors[{n}][{tn}]");
            let per_opponent = spec.priors[n][tn]
                .iter()
                .map(|set| {
                    set.iter()
                        .map(|w| {
                            DiscreteDistribution::new(tilde.clone(), w.clone())
                                .map_err(|e| Error::validation(&loc, e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let priors = PriorSet::ScenarioA {
                type_probs: spec.type_probs[n].clone(),
                per_opponent,
            };
            row.push(match spec.attitude {
                AttitudeKind::Traditional => AmbiguityAttitude::Traditional(priors),
                AttitudeKind::Alarmist => AmbiguityAttitude::Alarmist(priors),
                AttitudeKind::Enterprising => AmbiguityAttitude::Enterprising(priors),
                AttitudeKind::Custom => {
                    return Err(Error::validation("pricing.attitude", "builders take scalar attitudes only"))
                }
            });
        }
        attitudes.push(row);
    }
    GameDef {
        players: nf,
        type_counts,
        action_levels: (0..nf).map(|n| vec![spec.prices[n].clone(); spec.types]).collect(),
        states: StateSpace::Structured { grid: tilde },
        payoff,
        attitudes,
    }
    .build()
}
