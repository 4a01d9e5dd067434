use serde::Serialize;

use crate::bestresponse::{action_best_set, best_response, Mode};
use crate::error::{Error, Result};
use crate::game::{AttitudeKind, GameSpec, StrategyProfile};

/// A better reply found for a failing player-type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub player: usize,
    #[serde(rename = "type")]
    pub ty: usize,
    /// Strategy weights over the player-type's actions.
    pub better: Vec<f64>,
    /// Satisfaction of `better`, when the preference has one.
    pub better_value: Option<f64>,
    pub achieved: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub mode: Mode,
    pub epsilon: f64,
    pub verdict: bool,
    /// `[n][t_n]`, nonnegative.
    pub regrets: Vec<Vec<f64>>,
    /// `[n][t_n]` mass outside the best set (zero in distribution mode).
    pub off_support_mass: Vec<Vec<f64>>,
    pub witnesses: Vec<Witness>,
}

impl EquilibriumReport {
    pub fn max_regret(&self) -> f64 {
        self.regrets.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Action mode: every supported action (weight above 1e-12) is within `eps`
/// of the best pure action, so the regret is best minus worst supported
/// value. Distribution mode: regret is the best value over all action
/// distributions minus the achieved one. Custom preferences are checked in
/// action mode only, through the maximal action set.
pub fn verify_profile(game: &GameSpec, delta: &StrategyProfile, mode: Mode, eps: f64) -> Result<EquilibriumReport> {
    let mut regrets = Vec::with_capacity(game.players());
    let mut off = Vec::with_capacity(game.players());
    let mut witnesses = Vec::new();
    let mut verdict = true;
    for n in 0..game.players() {
        let mut r_row = Vec::new();
        let mut o_row = Vec::new();
        for tn in 0..game.type_count(n) {
            let own = delta.get(n, tn);
            let k = game.action_count(n, tn);
            if game.attitude(n, tn).kind() == AttitudeKind::Custom {
                if mode == Mode::Distribution {
                    return Err(Error::Unsupported(
                        "distribution-mode verification needs a satisfaction attitude".into(),
                    ));
                }
                let best = action_best_set(game, n, tn, delta, eps)?;
                let mass: f64 = own.support().filter(|a| !best.contains(a)).map(|a| own.weight(a)).sum();
                let ok = mass <= 1e-12;
                if !ok {
                    let mut better = vec![0.0; k];
                    better[best[0]] = 1.0;
                    witnesses.push(Witness {
                        player: n,
                        ty: tn,
                        better,
                        better_value: None,
                        achieved: None,
                    });
                }
                verdict &= ok;
                r_row.push(0.0);
                o_row.push(mass);
                continue;
            }
            let br = best_response(game, n, tn, delta, mode, eps)?;
            let (regret, mass, ok) = match mode {
                Mode::Action => {
                    let pure: Vec<f64> = (0..k)
                        .map(|a| {
                            let mut e = vec![0.0; k];
                            e[a] = 1.0;
                            crate::bestresponse::mixed_value(game.attitude(n, tn).kind(), br.matrix(), &e)
                        })
                        .collect::<Result<_>>()?;
                    let mass: f64 = own
                        .support()
                        .filter(|a| !br.maximal_actions.contains(a))
                        .map(|a| own.weight(a))
                        .sum();
                    let worst = own
                        .support()
                        .filter(|&a| own.weight(a) > 1e-12)
                        .map(|a| pure[a])
                        .fold(f64::INFINITY, f64::min);
                    let regret = (br.pure_value - worst).max(0.0);
                    (regret, mass, mass <= 1e-12 && regret <= eps)
                }
                Mode::Distribution => {
                    let regret = br.regret_of(own)?.max(0.0);
                    (regret, 0.0, regret <= eps)
                }
            };
            if !ok {
                let achieved = br.value - br.regret_of(own)?;
                witnesses.push(Witness {
                    player: n,
                    ty: tn,
                    better: br.optimal_dist.weights().to_vec(),
                    better_value: Some(br.value),
                    achieved: Some(achieved),
                });
            }
            verdict &= ok;
            r_row.push(regret);
            o_row.push(mass);
        }
        regrets.push(r_row);
        off.push(o_row);
    }
    Ok(EquilibriumReport {
        mode,
        epsilon: eps,
        verdict,
        regrets,
        off_support_mass: off,
        witnesses,
    })
}
