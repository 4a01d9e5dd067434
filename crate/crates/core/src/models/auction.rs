use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_PROFILE_CAP;
use crate::dist::SupportGrid;
use crate::error::{Error, Result};
use crate::game::{lexicographic, AmbiguityAttitude, AttitudeKind, GameDef, GameSpec, PriorSet, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceRule {
    /// The winner pays its own bid.
    First,
    /// The winner pays the highest opposing bid.
    Second,
}

/// One `(p, ν)` pair: opponent-type probabilities and, per opponent type
/// profile, a distribution over worth profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuctionPrior {
    pub type_probs: Vec<f64>,
    pub worths: Vec<Vec<f64>>,
}

fn default_types() -> usize {
    1
}

fn default_alarmist() -> AttitudeKind {
    AttitudeKind::Alarmist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuctionSpec {
    pub bidders: usize,
    #[serde(default = "default_types")]
    pub types: usize,
    pub bids: Vec<f64>,
    /// Worth levels per bidder; worth profiles are their product.
    pub worths: Vec<Vec<f64>>,
    pub rule: PriceRule,
    /// Losers pay their own bid.
    #[serde(default)]
    pub all_pay: bool,
    #[serde(default = "default_alarmist")]
    pub attitude: AttitudeKind,
    /// `[n][t_n]` list of `(p, ν)` pairs.
    pub priors: Vec<Vec<Vec<AuctionPrior>>>,
}

/// Tie share and payment of bidder `n` at bid profile `bids`.
pub(crate) fn auction_outcome(bids: &[f64], n: usize, rule: PriceRule, all_pay: bool) -> (f64, f64) {
    let top = bids.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let winners = bids.iter().filter(|&&b| b == top).count();
    let share = if bids[n] == top { 1.0 / winners as f64 } else { 0.0 };
    let price = match rule {
        PriceRule::First => bids[n],
        PriceRule::Second => bids
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != n)
            .map(|(_, &b)| b)
            .fold(0.0f64, f64::max),
    };
    let loser_payment = if all_pay { bids[n] } else { 0.0 };
    (share, price * share + loser_payment * (1.0 - share))
}

fn attitude_of(kind: AttitudeKind, priors: PriorSet) -> Result<AmbiguityAttitude> {
    Ok(match kind {
        AttitudeKind::Traditional => AmbiguityAttitude::Traditional(priors),
        AttitudeKind::Alarmist => AmbiguityAttitude::Alarmist(priors),
        AttitudeKind::Enterprising => AmbiguityAttitude::Enterprising(priors),
        AttitudeKind::Custom => return Err(Error::validation("attitude", "builders take scalar attitudes only")),
    })
}

fn check_cap(count: u128) -> Result<()> {
    if count > DEFAULT_PROFILE_CAP {
        return Err(Error::CapExceeded {
            count,
            cap: DEFAULT_PROFILE_CAP,
        });
    }
    Ok(())
}

pub fn build_auction(spec: &AuctionSpec) -> Result<GameSpec> {
    let n_bidders = spec.bidders;
    if n_bidders == 0 || spec.types == 0 {
        return Err(Error::validation("auction", "need at least one bidder and one type"));
    }
    if spec.worths.len() != n_bidders {
        return Err(Error::validation("auction.worths", format!("expected {n_bidders} worth grids")));
    }
    let tilde = Arc::new(
        SupportGrid::new(spec.worths.clone()).map_err(|e| Error::validation("auction.worths", e.to_string()))?,
    );
    let type_counts = vec![spec.types; n_bidders];
    let profiles = lexicographic(&type_counts).len();
    let bid_profiles = lexicographic(&vec![spec.bids.len(); n_bidders]);
    check_cap(profiles as u128 * tilde.len() as u128 * bid_profiles.len() as u128)?;

    let mut base = Vec::with_capacity(n_bidders);
    for n in 0..n_bidders {
        let mut table = Vec::with_capacity(bid_profiles.len() * tilde.len());
        for bp in &bid_profiles {
            let bids: Vec<f64> = bp.iter().map(|&i| spec.bids[i]).collect();
            let (share, pay) = auction_outcome(&bids, n, spec.rule, spec.all_pay);
            for k in 0..tilde.len() {
                let worth = tilde.point(k)[n];
                table.push(share * worth - pay);
            }
        }
        base.push(table);
    }
    let payoff = base.iter().map(|t| vec![t.clone(); profiles]).collect();

    if spec.priors.len() != n_bidders {
        return Err(Error::validation("auction.priors", format!("expected {n_bidders} bidders")));
    }
    let mut attitudes = Vec::with_capacity(n_bidders);
    for (n, per_type) in spec.priors.iter().enumerate() {
        if per_type.len() != spec.types {
            return Err(Error::validation(format!("auction.priors[{n}]"), format!("expected {} types", spec.types)));
        }
        let mut row = Vec::new();
        for (t, pairs) in per_type.iter().enumerate() {
            let loc = format!("auction.priors[{n}][{t}]");
            if pairs.is_empty() {
                return Err(Error::validation(loc, "empty prior set"));
            }
            let shared_p = pairs.iter().all(|p| p.type_probs == pairs[0].type_probs);
            let priors = if shared_p {
                let q = pairs
                    .iter()
                    .map(|pair| {
                        pair.worths
                            .iter()
                            .map(|w| {
                                crate::dist::DiscreteDistribution::new(tilde.clone(), w.clone())
                                    .map_err(|e| Error::validation(&loc, e.to_string()))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                PriorSet::Factored {
                    type_probs: pairs[0].type_probs.clone(),
                    q,
                }
            } else {
                let flat = pairs
                    .iter()
                    .map(|pair| {
                        if pair.worths.len() != pair.type_probs.len() {
                            return Err(Error::validation(&loc, "one worth distribution per opponent type profile"));
                        }
                        Ok(pair
                            .type_probs
                            .iter()
                            .zip(&pair.worths)
                            .flat_map(|(p, w)| w.iter().map(move |x| p * x))
                            .collect())
                    })
                    .collect::<Result<Vec<Vec<f64>>>>()?;
                PriorSet::Flat(flat)
            };
            row.push(attitude_of(spec.attitude, priors)?);
        }
        attitudes.push(row);
    }

    GameDef {
        players: n_bidders,
        type_counts,
        action_levels: vec![vec![spec.bids.clone(); spec.types]; n_bidders],
        states: StateSpace::Structured { grid: tilde },
        payoff,
        attitudes,
    }
    .build()
}

/// Bidders whose types are their own worths. Each `priors[n]` is a list of
/// distributions over opponents' worth profiles (lexicographic), shared by
/// all of `n`'s types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoAuctionSpec {
    pub bidders: usize,
    pub worths: Vec<f64>,
    pub bids: Vec<f64>,
    pub rule: PriceRule,
    #[serde(default = "default_alarmist")]
    pub attitude: AttitudeKind,
    pub priors: Vec<Vec<Vec<f64>>>,
}

pub fn build_lo_auction(spec: &LoAuctionSpec) -> Result<GameSpec> {
    let n_bidders = spec.bidders;
    if n_bidders == 0 {
        return Err(Error::validation("lo_auction", "need at least one bidder"));
    }
    let levels = spec.worths.len();
    let type_counts = vec![levels; n_bidders];
    let type_profiles = lexicographic(&type_counts);
    let bid_profiles = lexicographic(&vec![spec.bids.len(); n_bidders]);
    check_cap(type_profiles.len() as u128 * bid_profiles.len() as u128)?;
    let payoff = (0..n_bidders)
        .map(|n| {
            type_profiles
                .iter()
                .map(|types| {
                    bid_profiles
                        .iter()
                        .map(|bp| {
                            let bids: Vec<f64> = bp.iter().map(|&i| spec.bids[i]).collect();
                            let (share, pay) = auction_outcome(&bids, n, spec.rule, false);
                            share * spec.worths[types[n]] - pay
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    if spec.priors.len() != n_bidders {
        return Err(Error::validation("lo_auction.priors", format!("expected {n_bidders} bidders")));
    }
    let attitudes = spec
        .priors
        .iter()
        .map(|set| {
            (0..levels)
                .map(|_| attitude_of(spec.attitude, PriorSet::Flat(set.clone())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GameDef {
        players: n_bidders,
        type_counts,
        action_levels: vec![vec![spec.bids.clone(); levels]; n_bidders],
        states: StateSpace::Structured {
            grid: Arc::new(SupportGrid::line(vec![0.0])?),
        },
        payoff,
        attitudes,
    }
    .build()
}
