use serde::{Deserialize, Serialize};

use super::pricing::{build_pricing_game_unchecked, PricingSpec};
use crate::equilibrium::ParametricFamily;
use crate::error::Result;
use crate::game::GameFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PricingField {
    B,
    D,
    E,
    F,
    G,
}

fn one() -> f64 {
    1.0
}

/// Multiplies a pricing constant by `λ^power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleRule {
    pub field: PricingField,
    #[serde(default = "one")]
    pub power: f64,
}

/// Parameter families a file can describe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    PricingScale {
        base: PricingSpec,
        lambdas: Vec<f64>,
        #[serde(default)]
        scale: Vec<ScaleRule>,
    },
    Games {
        lambdas: Vec<f64>,
        games: Vec<GameFile>,
    },
}

impl FamilySpec {
    pub fn lambdas(&self) -> &[f64] {
        match self {
            FamilySpec::PricingScale { lambdas, .. } | FamilySpec::Games { lambdas, .. } => lambdas,
        }
    }

    /// Replaces the parameter list (pricing families only; explicit game
    /// lists keep theirs).
    pub fn with_lambdas(mut self, list: Vec<f64>) -> Self {
        if let FamilySpec::PricingScale { lambdas, .. } = &mut self {
            *lambdas = list;
        }
        self
    }

    pub fn build(&self) -> Result<ParametricFamily> {
        match self {
            FamilySpec::PricingScale { base, lambdas, scale } => {
                ParametricFamily::new(lambdas.clone(), |lambda| build_pricing_game_unchecked(&scaled(base, scale, lambda)))
            }
            FamilySpec::Games { lambdas, games } => {
                let mut iter = games.iter();
                ParametricFamily::new(lambdas.clone(), |_| {
                    iter.next()
                        .ok_or_else(|| crate::error::Error::validation("family.games", "fewer games than parameters"))?
                        .clone()
                        .into_game()
                })
            }
        }
    }
}

/// The pricing spec at parameter `lambda`.
pub fn scaled(base: &PricingSpec, rules: &[ScaleRule], lambda: f64) -> PricingSpec {
    let mut spec = base.clone();
    for rule in rules {
        let k = lambda.powf(rule.power);
        let field = match rule.field {
            PricingField::B => &mut spec.b,
            PricingField::E => &mut spec.e,
            PricingField::F => &mut spec.f,
            PricingField::G => &mut spec.g,
            PricingField::D => {
                spec.d.iter_mut().flatten().for_each(|x| *x *= k);
                continue;
            }
        };
        field.iter_mut().for_each(|x| *x *= k);
    }
    spec
}
