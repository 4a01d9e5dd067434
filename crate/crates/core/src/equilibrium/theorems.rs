use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{decode_pure, enumerate_pure_equilibria_capped, pure_profile_count};
use super::verify::verify_profile;
use crate::bestresponse::Mode;
use crate::error::Result;
use crate::fixtures::random_simplex;
use crate::game::{AttitudeKind, GameSpec, PureProfile, StrategyProfile};

/// Cross-mode relations between action-based and distribution-based
/// equilibria on one game.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub action_equilibria: Vec<PureProfile>,
    pub distribution_equilibria: Vec<PureProfile>,
    /// Pure distribution-based equilibria are action-based.
    pub inclusion: bool,
    /// The two pure sets coincide (checked when every player-type is enterprising).
    pub equality: Option<bool>,
    /// Profiles whose two verdicts were compared (every player-type traditional).
    pub agreement_checked: Option<usize>,
    pub agreement_failures: Vec<StrategyRecord>,
    /// Sampled profiles passing distribution mode but failing action mode
    /// (every player-type enterprising).
    pub direction_checked: Option<usize>,
    pub direction_failures: Vec<StrategyRecord>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrategyRecord {
    pub weights: Vec<Vec<Vec<f64>>>,
}

/// A profile with every strategy drawn at random.
pub fn random_profile(game: &GameSpec, rng: &mut ChaCha8Rng) -> StrategyProfile {
    let weights: Vec<Vec<Vec<f64>>> = (0..game.players())
        .map(|n| {
            (0..game.type_count(n))
                .map(|t| random_simplex(rng, game.action_count(n, t)))
                .collect()
        })
        .collect();
    StrategyProfile::from_weights(game, &weights).expect("random simplex weights")
}

/// Pure-set inclusion always; pure-set equality for enterprising games;
/// verdict agreement on every pure and `samples` random profiles for
/// traditional games; the distribution-to-action direction on `samples`
/// random profiles for enterprising games.
pub fn theorem_suite(game: &GameSpec, eps: f64, samples: usize, seed: u64, cap: u128) -> Result<TheoremReport> {
    let action = enumerate_pure_equilibria_capped(game, Mode::Action, eps, cap)?;
    let distribution = enumerate_pure_equilibria_capped(game, Mode::Distribution, eps, cap)?;
    let inclusion = distribution.iter().all(|p| action.contains(p));
    let enterprising = game.all_kinds(AttitudeKind::Enterprising);
    let traditional = game.all_kinds(AttitudeKind::Traditional);
    let equality = enterprising.then(|| action == distribution);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut agreement_checked = None;
    let mut agreement_failures = Vec::new();
    if traditional {
        let mut profiles: Vec<StrategyProfile> = (0..pure_profile_count(game))
            .map(|i| StrategyProfile::pure(game, &decode_pure(game, i)))
            .collect();
        profiles.extend((0..samples).map(|_| random_profile(game, &mut rng)));
        for delta in &profiles {
            let a = verify_profile(game, delta, Mode::Action, eps)?.verdict;
            let d = verify_profile(game, delta, Mode::Distribution, eps)?.verdict;
            if a != d {
                agreement_failures.push(StrategyRecord { weights: delta.weights() });
            }
        }
        agreement_checked = Some(profiles.len());
    }

    let mut direction_checked = None;
    let mut direction_failures = Vec::new();
    if enterprising {
        for _ in 0..samples {
            let delta = random_profile(game, &mut rng);
            if verify_profile(game, &delta, Mode::Distribution, eps)?.verdict
                && !verify_profile(game, &delta, Mode::Action, eps)?.verdict
            {
                direction_failures.push(StrategyRecord { weights: delta.weights() });
            }
        }
        direction_checked = Some(samples);
    }

    let passed = inclusion && equality != Some(false) && agreement_failures.is_empty() && direction_failures.is_empty();
    Ok(TheoremReport {
        action_equilibria: action,
        distribution_equilibria: distribution,
        inclusion,
        equality,
        agreement_checked,
        agreement_failures,
        direction_checked,
        direction_failures,
        passed,
    })
}
