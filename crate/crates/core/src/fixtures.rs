//! Small named games, the pricing and auction setups used in the examples,
//! and seeded random game generators.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::Result;
use crate::game::{lexicographic, AmbiguityAttitude, AttitudeKind, GameDef, GameSpec, PriorSet, StateSpace};
use crate::models::{
    build_auction, build_pricing_game, AuctionPrior, AuctionSpec, FamilySpec, PriceRule, PricingField, PricingSpec,
    ScaleRule,
};

fn attitude(kind: AttitudeKind, priors: PriorSet) -> AmbiguityAttitude {
    match kind {
        AttitudeKind::Traditional => AmbiguityAttitude::Traditional(priors),
        AttitudeKind::Alarmist => AmbiguityAttitude::Alarmist(priors),
        AttitudeKind::Enterprising => AmbiguityAttitude::Enterprising(priors),
        AttitudeKind::Custom => panic!("custom preferences carry no prior set"),
    }
}

/// One type per player, states `0..states` shared by everyone.
fn complete_info(
    actions: &[usize],
    states: usize,
    payoff: impl Fn(usize, &[usize], usize) -> f64,
    attitudes: Vec<AmbiguityAttitude>,
) -> Result<GameSpec> {
    let players = actions.len();
    let mut table = vec![Vec::new(); players];
    for profile in lexicographic(actions) {
        for (n, row) in table.iter_mut().enumerate() {
            for w in 0..states {
                row.push(payoff(n, &profile, w));
            }
        }
    }
    GameDef {
        players,
        type_counts: vec![1; players],
        action_levels: actions.iter().map(|&k| vec![(0..k).map(|a| a as f64).collect()]).collect(),
        states: StateSpace::General {
            count: states,
            partition: vec![(0..states).collect()],
        },
        payoff: table.into_iter().map(|row| vec![row]).collect(),
        attitudes: attitudes.into_iter().map(|a| vec![a]).collect(),
    }
    .build()
}

fn single_state(kind: AttitudeKind) -> AmbiguityAttitude {
    attitude(kind, PriorSet::single(vec![1.0]))
}

/// Cooperate = 0, defect = 1.
pub fn prisoners_dilemma() -> GameSpec {
    const U: [[(f64, f64); 2]; 2] = [[(3.0, 3.0), (0.0, 5.0)], [(5.0, 0.0), (1.0, 1.0)]];
    complete_info(
        &[2, 2],
        1,
        |n, a, _| if n == 0 { U[a[0]][a[1]].0 } else { U[a[0]][a[1]].1 },
        vec![single_state(AttitudeKind::Traditional); 2],
    )
    .expect("valid fixture")
}

/// Heads = 0, tails = 1; player 0 wins on a match.
pub fn matching_pennies() -> GameSpec {
    complete_info(
        &[2, 2],
        1,
        |n, a, _| {
            let matched = a[0] == a[1];
            if matched == (n == 0) {
                1.0
            } else {
                -1.0
            }
        },
        vec![single_state(AttitudeKind::Traditional); 2],
    )
    .expect("valid fixture")
}

/// Uneven matching pennies: damped best replies with full steps cycle.
pub fn cyclic_game() -> GameSpec {
    complete_info(
        &[2, 2],
        1,
        |n, a, _| match (n, a[0], a[1]) {
            (0, 0, 0) => 2.0,
            (0, 1, 1) => 1.0,
            (1, x, y) if x != y => 1.0,
            _ => 0.0,
        },
        vec![single_state(AttitudeKind::Traditional); 2],
    )
    .expect("valid fixture")
}

/// One alarmist player betting on a coin (heads = 0, tails = 1) whose
/// heads probability is 0.4 or 0.6. A correct bet pays 1.
pub fn ambiguous_coin() -> GameSpec {
    complete_info(
        &[2],
        2,
        |_, a, w| if a[0] == w { 1.0 } else { 0.0 },
        vec![attitude(AttitudeKind::Alarmist, PriorSet::Flat(vec![vec![0.4, 0.6], vec![0.6, 0.4]]))],
    )
    .expect("valid fixture")
}

/// Prisoner's dilemma whose payoffs shift with an ambiguous common state;
/// defection stays dominant in every state.
pub fn ambiguous_prisoners_dilemma(kind: AttitudeKind) -> GameSpec {
    const U: [[(f64, f64); 2]; 2] = [[(3.0, 3.0), (0.0, 5.0)], [(5.0, 0.0), (1.0, 1.0)]];
    let priors = PriorSet::Flat(vec![vec![0.3, 0.7], vec![0.7, 0.3]]);
    complete_info(
        &[2, 2],
        2,
        |n, a, w| {
            let base = if n == 0 { U[a[0]][a[1]].0 } else { U[a[0]][a[1]].1 };
            base + 0.5 * w as f64
        },
        vec![attitude(kind, priors.clone()), attitude(kind, priors)],
    )
    .expect("valid fixture")
}

/// One alarmist player sure of state 0. Action 0 pays 1 there and 0 in
/// state 1; action 1 pays 0.97 in both. A uniform perturbation of weight
/// above 0.06 flips the best action.
pub fn robustness_threshold() -> GameSpec {
    complete_info(
        &[2],
        2,
        |_, a, w| match (a[0], w) {
            (0, 0) => 1.0,
            (0, _) => 0.0,
            _ => 0.97,
        },
        vec![attitude(AttitudeKind::Alarmist, PriorSet::single(vec![1.0, 0.0]))],
    )
    .expect("valid fixture")
}

/// A player with one type and one action.
pub fn trivial_game() -> GameSpec {
    let grid = Arc::new(SupportGrid::line(vec![0.0]).expect("grid"));
    let sure = DiscreteDistribution::dirac_at(grid.clone(), 0);
    GameDef {
        players: 1,
        type_counts: vec![1],
        action_levels: vec![vec![vec![0.0]]],
        states: StateSpace::Structured { grid },
        payoff: vec![vec![vec![0.0]]],
        attitudes: vec![vec![AmbiguityAttitude::Enterprising(PriorSet::ScenarioB {
            type_probs: vec![1.0],
            set: vec![sure],
        })]],
    }
    .build()
    .expect("valid fixture")
}

/// Evenly spaced grid of `points` levels on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Two firms with two types each, unit cost 1, prices on `[1, 6]`, demand
/// shock on `{0, 0.5, 1}`. The low type expects a low shock, the high
/// type a high one.
pub fn pricing_spec(price_points: usize) -> PricingSpec {
    let low = vec![0.5, 0.3, 0.2];
    let high = vec![0.2, 0.3, 0.5];
    let per_type = |w: &Vec<f64>| vec![vec![w.clone()]; 2];
    PricingSpec {
        firms: 2,
        types: 2,
        cost: vec![1.0; 2],
        prices: vec![linspace(1.0, 6.0, price_points); 2],
        b: vec![2.0; 2],
        c: vec![1.0; 2],
        d: vec![vec![0.0, 0.5], vec![0.5, 0.0]],
        e: vec![0.5; 2],
        f: vec![0.5; 2],
        g: vec![0.25; 2],
        states: vec![0.0, 0.5, 1.0],
        type_probs: vec![vec![0.5, 0.5]; 2],
        priors: vec![vec![per_type(&low), per_type(&high)]; 2],
        attitude: AttitudeKind::Enterprising,
    }
}

pub fn pricing_game(price_points: usize) -> GameSpec {
    build_pricing_game(&pricing_spec(price_points)).expect("valid fixture")
}

/// The pricing setup with the demand intercept scaled by `λ`.
pub fn pricing_family_spec(price_points: usize, lambdas: Vec<f64>) -> FamilySpec {
    FamilySpec::PricingScale {
        base: pricing_spec(price_points),
        lambdas,
        scale: vec![ScaleRule {
            field: PricingField::B,
            power: 1.0,
        }],
    }
}

/// Two bidders with known worths 1.0 and 0.4, bids `0, 0.2, ..., 1.0`.
pub fn auction_spec(rule: PriceRule) -> AuctionSpec {
    let sure = AuctionPrior {
        type_probs: vec![1.0],
        worths: vec![vec![1.0]],
    };
    AuctionSpec {
        bidders: 2,
        types: 1,
        bids: linspace(0.0, 1.0, 6),
        worths: vec![vec![1.0], vec![0.4]],
        rule,
        all_pay: false,
        attitude: AttitudeKind::Traditional,
        priors: vec![vec![vec![sure.clone()]], vec![vec![sure]]],
    }
}

pub fn auction_game(rule: PriceRule) -> GameSpec {
    build_auction(&auction_spec(rule)).expect("valid fixture")
}

/// Size ranges for random games.
#[derive(Debug, Clone)]
pub struct RandomGameConfig {
    pub players: RangeInclusive<usize>,
    pub types: RangeInclusive<usize>,
    pub actions: RangeInclusive<usize>,
    /// States per type profile (general) or grid points (structured).
    pub states: RangeInclusive<usize>,
    pub priors: RangeInclusive<usize>,
    /// Each player-type draws its attitude from this list.
    pub kinds: Vec<AttitudeKind>,
    pub structured: bool,
}

impl RandomGameConfig {
    pub fn new(kinds: Vec<AttitudeKind>) -> Self {
        Self {
            players: 2..=3,
            types: 1..=2,
            actions: 2..=4,
            states: 2..=4,
            priors: 1..=3,
            kinds,
            structured: false,
        }
    }
}

/// Probability vector with a few exact zeros now and then.
pub fn random_simplex(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len)
        .map(|_| if len > 1 && rng.gen_bool(0.15) { 0.0 } else { -rng.gen::<f64>().max(1e-12).ln() })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.gen_range(0..len)] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    // exact unit mass
    let last = w.iter().rposition(|&x| x > 0.0).expect("nonzero");
    let rest: f64 = w.iter().enumerate().filter(|&(i, _)| i != last).map(|(_, x)| x).sum();
    w[last] = 1.0 - rest;
    w
}

/// A random game with utilities uniform on `[0, 1]`.
pub fn random_game(rng: &mut impl Rng, cfg: &RandomGameConfig) -> GameSpec {
    let players = rng.gen_range(cfg.players.clone());
    let type_counts: Vec<usize> = (0..players).map(|_| rng.gen_range(cfg.types.clone())).collect();
    let action_levels: Vec<Vec<Vec<f64>>> = type_counts
        .iter()
        .map(|&k| {
            (0..k)
                .map(|_| (0..rng.gen_range(cfg.actions.clone())).map(|a| a as f64).collect())
                .collect()
        })
        .collect();
    let profiles = lexicographic(&type_counts);
    let (states, state_counts) = if cfg.structured {
        let k = rng.gen_range(cfg.states.clone());
        let grid = Arc::new(SupportGrid::line((0..k).map(|w| w as f64).collect()).expect("grid"));
        (StateSpace::Structured { grid }, vec![k; profiles.len()])
    } else {
        let counts: Vec<usize> = profiles.iter().map(|_| rng.gen_range(cfg.states.clone())).collect();
        let mut next = 0;
        let partition = counts
            .iter()
            .map(|&c| {
                let block: Vec<usize> = (next..next + c).collect();
                next += c;
                block
            })
            .collect();
        (StateSpace::General { count: next, partition }, counts)
    };
    let payoff: Vec<Vec<Vec<f64>>> = (0..players)
        .map(|_| {
            profiles
                .iter()
                .zip(&state_counts)
                .map(|(types, &k)| {
                    let actions: usize = types.iter().enumerate().map(|(m, &t)| action_levels[m][t].len()).product();
                    (0..actions * k).map(|_| rng.gen::<f64>()).collect()
                })
                .collect()
        })
        .collect();
    let attitudes = (0..players)
        .map(|n| {
            (0..type_counts[n])
                .map(|tn| {
                    let kind = cfg.kinds[rng.gen_range(0..cfg.kinds.len())];
                    let count = if kind == AttitudeKind::Traditional {
                        1
                    } else {
                        rng.gen_range(cfg.priors.clone())
                    };
                    let opponent_profiles: Vec<usize> = profiles
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| t[n] == tn)
                        .map(|(i, _)| i)
                        .collect();
                    let priors = if let StateSpace::Structured { grid } = &states {
                        let type_probs = random_simplex(rng, opponent_profiles.len());
                        let q = (0..count)
                            .map(|_| {
                                opponent_profiles
                                    .iter()
                                    .map(|_| DiscreteDistribution::new(grid.clone(), random_simplex(rng, grid.len())).expect("simplex"))
                                    .collect()
                            })
                            .collect();
                        PriorSet::Factored { type_probs, q }
                    } else {
                        let local: usize = opponent_profiles.iter().map(|&i| state_counts[i]).sum();
                        PriorSet::Flat((0..count).map(|_| random_simplex(rng, local)).collect())
                    };
                    attitude(kind, priors)
                })
                .collect()
        })
        .collect();
    GameDef {
        players,
        type_counts,
        action_levels,
        states,
        payoff,
        attitudes,
    }
    .build()
    .expect("random games are valid")
}

/// `count` random games from one seed.
pub fn random_games(seed: u64, count: usize, cfg: &RandomGameConfig) -> Vec<GameSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_game(&mut rng, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_fixtures_build() {
        for g in [
            prisoners_dilemma(),
            matching_pennies(),
            cyclic_game(),
            ambiguous_coin(),
            ambiguous_prisoners_dilemma(AttitudeKind::Alarmist),
            robustness_threshold(),
            trivial_game(),
            pricing_game(5),
            auction_game(PriceRule::First),
        ] {
            assert!(g.players() >= 1);
        }
    }

    #[test]
    fn linspace_hits_both_ends() {
        let g = linspace(1.0, 6.0, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[20], 6.0);
        assert!((g[1] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn random_simplex_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in 1..6 {
            let w = random_simplex(&mut rng, len);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn random_games_are_reproducible() {
        let cfg = RandomGameConfig::new(vec![AttitudeKind::Enterprising]);
        let a = random_games(9, 3, &cfg);
        let b = random_games(9, 3, &cfg);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.def().payoff, y.def().payoff);
        }
        let mut s = cfg.clone();
        s.structured = true;
        for g in random_games(10, 5, &s) {
            assert!(g.is_structured());
        }
    }
}
