use rayon::prelude::*;

use super::verify::verify_profile;
use crate::bestresponse::{agent_form_capped, best_response, AgentFormPath, Mode};
use crate::config::DEFAULT_PROFILE_CAP;
use crate::error::{Error, Result};
use crate::game::{AttitudeKind, GameSpec, PureProfile, StrategyProfile};

/// Number of pure profiles (one action per player-type).
pub fn pure_profile_count(game: &GameSpec) -> u128 {
    game.agents()
        .iter()
        .map(|&(n, t)| game.action_count(n, t) as u128)
        .product()
}

/// The `index`-th pure profile, agents in lexicographic order with the last
/// agent varying fastest.
pub fn decode_pure(game: &GameSpec, mut index: u128) -> PureProfile {
    let mut out: PureProfile = (0..game.players()).map(|n| vec![0; game.type_count(n)]).collect();
    for (n, t) in game.agents().into_iter().rev() {
        let k = game.action_count(n, t) as u128;
        out[n][t] = (index % k) as usize;
        index /= k;
    }
    out
}

pub fn enumerate_pure_equilibria(game: &GameSpec, mode: Mode, eps: f64) -> Result<Vec<PureProfile>> {
    enumerate_pure_equilibria_capped(game, mode, eps, DEFAULT_PROFILE_CAP)
}

/// Every pure profile passing verification, in enumeration order. Each
/// hit is re-checked with [`verify_profile`].
pub fn enumerate_pure_equilibria_capped(game: &GameSpec, mode: Mode, eps: f64, cap: u128) -> Result<Vec<PureProfile>> {
    let count = pure_profile_count(game);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let agents = game.agents();
    let scalar = agents.iter().all(|&(n, t)| game.attitude(n, t).kind() != AttitudeKind::Custom);
    let form = if scalar {
        Some(agent_form_capped(game, Some(AgentFormPath::General), cap)?)
    } else {
        None
    };

    let check = |index: u128| -> Result<Option<PureProfile>> {
        let pure = decode_pure(game, index);
        let Some(form) = &form else {
            let delta = StrategyProfile::pure(game, &pure);
            return Ok(verify_profile(game, &delta, mode, eps)?.verdict.then_some(pure));
        };
        for &(n, t) in &agents {
            let table = form.table(n, t);
            let k = table.opponent_index(&pure);
            let stride = table.opponent_profiles();
            let own = table.values[pure[n][t] * stride + k];
            let best = (0..table.own_actions)
                .map(|a| table.values[a * stride + k])
                .fold(f64::NEG_INFINITY, f64::max);
            if own < best - eps {
                return Ok(None);
            }
        }
        if mode == Mode::Distribution {
            let delta = StrategyProfile::pure(game, &pure);
            for &(n, t) in &agents {
                if game.attitude(n, t).kind() == AttitudeKind::Alarmist {
                    let br = best_response(game, n, t, &delta, Mode::Distribution, eps)?;
                    if br.regret_of(delta.get(n, t))? > eps {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(pure))
    };

    let hits: Vec<PureProfile> = (0..count as u64)
        .into_par_iter()
        .map(|i| check(i as u128))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for pure in &hits {
        let report = verify_profile(game, &StrategyProfile::pure(game, pure), mode, eps)?;
        if !report.verdict {
            return Err(Error::Internal(format!(
                "enumerated profile {pure:?} failed verification (max regret {})",
                report.max_regret()
            )));
        }
    }
    Ok(hits)
}
