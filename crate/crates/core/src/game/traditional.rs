use super::attitude::AttitudeKind;
use super::profile::StrategyProfile;
use super::spec::{lexicographic, GameSpec};
use crate::error::{Error, Result};

/// Conditional form of a traditional player-type: opponent-type
/// probabilities `p(t_{-n})` and conditional expected utilities
/// `v_{t_{-n}}(a_n, a_{-n})`.
#[derive(Debug, Clone)]
pub struct ReducedBlock {
    pub types: Vec<usize>,
    pub p: f64,
    /// Number of opponent action profiles (lexicographic over `m != n`).
    pub opponent_actions: usize,
    /// `v[a_n * opponent_actions + a_{-n}]`.
    pub v: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TraditionalReduction {
    agents: Vec<Vec<Vec<ReducedBlock>>>,
}

impl TraditionalReduction {
    pub fn blocks(&self, n: usize, tn: usize) -> &[ReducedBlock] {
        &self.agents[n][tn]
    }

    /// `Σ_{t_{-n}} p · ∫ v(a, ·) dδ_{-n}`.
    pub fn expected_value(&self, game: &GameSpec, n: usize, tn: usize, a: usize, delta: &StrategyProfile) -> f64 {
        let mut total = 0.0;
        for block in &self.agents[n][tn] {
            let opp: Vec<usize> = (0..game.players()).filter(|&m| m != n).collect();
            let radices: Vec<usize> = opp.iter().map(|&m| game.action_count(m, block.types[m])).collect();
            let mut inner = 0.0;
            for (k, actions) in lexicographic(&radices).into_iter().enumerate() {
                let w: f64 = opp
                    .iter()
                    .zip(&actions)
                    .map(|(&m, &am)| delta.get(m, block.types[m]).weight(am))
                    .product();
                if w > 0.0 {
                    inner += w * block.v[a * block.opponent_actions + k];
                }
            }
            total += block.p * inner;
        }
        total
    }
}

pub fn reduce_traditional(game: &GameSpec) -> Result<TraditionalReduction> {
    if !game.all_kinds(AttitudeKind::Traditional) {
        return Err(Error::Unsupported("traditional reduction needs every attitude to be traditional".into()));
    }
    let mut agents = Vec::with_capacity(game.players());
    for n in 0..game.players() {
        let mut per_type = Vec::new();
        for tn in 0..game.type_count(n) {
            let rho = &game.priors(n, tn)[0];
            let domain = game.local(n, tn);
            let mut blocks = Vec::with_capacity(domain.blocks.len());
            for block in &domain.blocks {
                let p: f64 = block.range.clone().map(|l| rho.weight(l)).sum();
                if p <= 0.0 {
                    let opp: Vec<usize> = (0..game.players())
                        .filter(|&m| m != n)
                        .map(|m| block.types[m])
                        .collect();
                    return Err(Error::ZeroProbability {
                        player: n,
                        ty: tn,
                        profile: opp,
                    });
                }
                let opp: Vec<usize> = (0..game.players()).filter(|&m| m != n).collect();
                let radices: Vec<usize> = opp.iter().map(|&m| game.action_count(m, block.types[m])).collect();
                let opp_profiles = lexicographic(&radices);
                let strides = game.action_strides(block.profile);
                let own = game.action_count(n, tn);
                let mut v = Vec::with_capacity(own * opp_profiles.len());
                for a in 0..own {
                    for actions in &opp_profiles {
                        let idx = a * strides[n]
                            + opp.iter().zip(actions).map(|(&m, &am)| am * strides[m]).sum::<usize>();
                        let mut acc = 0.0;
                        for l in block.range.clone() {
                            let w = rho.weight(l);
                            if w > 0.0 {
                                let st = domain.states[l];
                                acc += w * game.payoff(n, block.profile, idx, st.omega_pos);
                            }
                        }
                        v.push(acc / p);
                    }
                }
                blocks.push(ReducedBlock {
                    types: block.types.clone(),
                    p,
                    opponent_actions: opp_profiles.len(),
                    v,
                });
            }
            per_type.push(blocks);
        }
        agents.push(per_type);
    }
    Ok(TraditionalReduction { agents })
}
