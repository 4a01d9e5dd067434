use std::sync::Arc;

use serde::Serialize;

use crate::config::Tolerances;
use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::game::{lexicographic, AttitudeKind, GameSpec, PriorSet};

/// Most violations kept per check; the count covers all of them.
const VIOLATION_LIMIT: usize = 200;

/// A failing quadruple `f(x2,y2) - f(x1,y2) < f(x2,y1) - f(x1,y1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdWitness {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
    /// `f(x2,y2) - f(x1,y2)`.
    pub upper: f64,
    /// `f(x2,y1) - f(x1,y1)`.
    pub lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdResult {
    pub holds: bool,
    pub violations: usize,
    pub witnesses: Vec<IdWitness>,
}

/// Increasing differences of `f` over grids with the given shapes
/// (componentwise order). Checked on adjacent steps in one coordinate of
/// `x` and one of `y`, which covers all ordered pairs by telescoping.
pub fn increasing_differences<F>(x_shape: &[usize], y_shape: &[usize], f: F, tol: f64, limit: usize) -> IdResult
where
    F: Fn(&[usize], &[usize]) -> f64,
{
    let mut result = IdResult {
        holds: true,
        violations: 0,
        witnesses: Vec::new(),
    };
    let xs = lexicographic(x_shape);
    let ys = lexicographic(y_shape);
    for x1 in &xs {
        for i in 0..x1.len() {
            if x1[i] + 1 >= x_shape[i] {
                continue;
            }
            let mut x2 = x1.clone();
            x2[i] += 1;
            for y1 in &ys {
                for j in 0..y1.len() {
                    if y1[j] + 1 >= y_shape[j] {
                        continue;
                    }
                    let mut y2 = y1.clone();
                    y2[j] += 1;
                    let upper = f(&x2, &y2) - f(x1, &y2);
                    let lower = f(&x2, y1) - f(x1, y1);
                    if upper < lower - tol {
                        result.holds = false;
                        result.violations += 1;
                        if result.witnesses.len() < limit {
                            result.witnesses.push(IdWitness {
                                x1: x1.clone(),
                                x2: x2.clone(),
                                y1: y1.clone(),
                                y2,
                                upper,
                                lower,
                            });
                        }
                    }
                }
            }
        }
    }
    result
}

/// Increasing differences with the first witness on failure.
pub fn check_increasing_differences<F>(x_shape: &[usize], y_shape: &[usize], f: F) -> (bool, Option<IdWitness>)
where
    F: Fn(&[usize], &[usize]) -> f64,
{
    let r = increasing_differences(x_shape, y_shape, f, Tolerances::default().order, 1);
    (r.holds, r.witnesses.into_iter().next())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A lattice construction failed, so the check could not be decided.
    Undecidable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub violations: usize,
    pub details: Vec<String>,
}

impl AssumptionCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            status: CheckStatus::Pass,
            violations: 0,
            details: Vec::new(),
        }
    }

    fn fail(&mut self, detail: impl FnOnce() -> String) {
        if self.status != CheckStatus::Undecidable {
            self.status = CheckStatus::Fail;
        }
        self.violations += 1;
        if self.details.len() < VIOLATION_LIMIT {
            self.details.push(detail());
        }
    }

    fn undecidable(&mut self, detail: String) {
        self.status = CheckStatus::Undecidable;
        if self.details.len() < VIOLATION_LIMIT {
            self.details.push(detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub checks: Vec<AssumptionCheck>,
    pub all_pass: bool,
}

impl MonotoneReport {
    pub fn check(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn finish(checks: Vec<AssumptionCheck>) -> Self {
        let all_pass = checks.iter().all(AssumptionCheck::passed);
        Self { checks, all_pass }
    }
}

/// Per-opponent-profile prior sets `P̃_{n,t_n,t_{-n}}` of a structured game.
fn per_opponent_sets(game: &GameSpec, n: usize, tn: usize) -> Option<Vec<Vec<DiscreteDistribution>>> {
    match game.attitude(n, tn).prior_set()? {
        PriorSet::ScenarioA { per_opponent, .. } => Some(per_opponent.clone()),
        PriorSet::ScenarioB { set, .. } => Some(vec![set.clone(); game.local(n, tn).blocks.len()]),
        PriorSet::Factored { .. } => {
            let fac = game.factored(n, tn)?;
            let blocks = game.local(n, tn).blocks.len();
            Some(
                (0..blocks)
                    .map(|b| {
                        let mut set: Vec<DiscreteDistribution> = Vec::new();
                        for nu in &fac.q {
                            if !set.iter().any(|d| d.approx_eq(&nu[b], 0.0)) {
                                set.push(nu[b].clone());
                            }
                        }
                        set
                    })
                    .collect(),
            )
        }
        PriorSet::Flat(_) => None,
    }
}

fn contains(set: &[DiscreteDistribution], d: &DiscreteDistribution, tol: f64) -> bool {
    set.iter().any(|x| x.approx_eq(d, tol))
}

/// Induced set order `lower <= upper`: meets land in `lower`, joins in `upper`.
/// `Ok(None)` when it holds, `Ok(Some(reason))` otherwise.
fn induced_set_leq(lower: &[DiscreteDistribution], upper: &[DiscreteDistribution], tol: f64) -> Result<Option<String>> {
    for (i, a) in lower.iter().enumerate() {
        for (j, b) in upper.iter().enumerate() {
            if !contains(lower, &a.lattice_meet(b)?, tol) {
                return Ok(Some(format!("meet of members {i} and {j} leaves the lower set")));
            }
            if !contains(upper, &a.lattice_join(b)?, tol) {
                return Ok(Some(format!("join of members {i} and {j} leaves the upper set")));
            }
        }
    }
    Ok(None)
}

fn opponent_type_grid(game: &GameSpec, n: usize) -> Result<Arc<SupportGrid>> {
    let dims: Vec<Vec<f64>> = game
        .opponent_type_counts(n)
        .iter()
        .map(|&k| (0..k).map(|t| t as f64).collect())
        .collect();
    if dims.is_empty() {
        return Ok(Arc::new(SupportGrid::line(vec![0.0])?));
    }
    Ok(Arc::new(SupportGrid::new(dims)?))
}

fn require_structured(game: &GameSpec) -> Result<&Arc<SupportGrid>> {
    game.tilde_grid()
        .ok_or_else(|| Error::Unsupported("monotone checks need a structured state space".into()))
}

fn grids_type_free(game: &GameSpec) -> Option<String> {
    for n in 0..game.players() {
        for t in 1..game.type_count(n) {
            if **game.action_grid(n, t) != **game.action_grid(n, 0) {
                return Some(format!("player {n}: action grid of type {t} differs from type 0"));
            }
        }
    }
    None
}

/// Utility as a function of `(a_n)` and `(t, a_{-n}, ω̃)` multi-indices.
struct UtilityView<'a> {
    game: &'a GameSpec,
    n: usize,
    opponents: Vec<usize>,
}

impl<'a> UtilityView<'a> {
    fn new(game: &'a GameSpec, n: usize) -> Self {
        Self {
            game,
            n,
            opponents: (0..game.players()).filter(|&m| m != n).collect(),
        }
    }

    /// `[t_0..t_N, a_m for m != n]`.
    fn env_shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.game.type_counts().to_vec();
        s.extend(self.opponents.iter().map(|&m| self.game.action_count(m, 0)));
        s
    }

    fn value(&self, own: usize, env: &[usize], omega: &[usize]) -> f64 {
        let players = self.game.players();
        let types = &env[..players];
        let profile = self.game.type_profile_index(types);
        let strides = self.game.action_strides(profile);
        let mut idx = own * strides[self.n];
        for (k, &m) in self.opponents.iter().enumerate() {
            idx += env[players + k] * strides[m];
        }
        let tilde = self.game.tilde_grid().expect("structured");
        self.game.payoff(self.n, profile, idx, tilde.flat_index(omega))
    }

    fn scale(&self) -> f64 {
        let mut m: f64 = 1.0;
        for t in 0..self.game.type_profiles().len() {
            for a in 0..self.game.action_profile_count(t) {
                for k in 0..self.game.omega_t(t).len() {
                    m = m.max(self.game.payoff(self.n, t, a, k).abs());
                }
            }
        }
        m
    }
}

/// The five monotonicity assumptions behind monotone pure equilibria:
/// utility increasing in the state; increasing differences between own
/// action and (types, opponents' actions, state) and between (types,
/// opponents' actions) and the state; opponent-type probabilities
/// increasing in own type; prior sets closed under join and meet; prior
/// sets increasing in own type.
pub fn check_monotone_assumptions(game: &GameSpec) -> Result<MonotoneReport> {
    let tilde = require_structured(game)?.clone();
    let tol_order = Tolerances::default().order;
    let mut c1 = AssumptionCheck::new("increasing_in_state");
    let mut c2 = AssumptionCheck::new("increasing_differences");
    let mut c3 = AssumptionCheck::new("type_probabilities_monotone");
    let mut c4 = AssumptionCheck::new("prior_sets_sublattice");
    let mut c5 = AssumptionCheck::new("prior_sets_increasing");

    if let Some(msg) = grids_type_free(game) {
        c2.fail(|| msg);
    }
    let tilde_shape = tilde.shape();
    if c2.violations == 0 {
        for n in 0..game.players() {
            let view = UtilityView::new(game, n);
            let tol = tol_order * view.scale();
            let env_shape = view.env_shape();
            let own = game.action_count(n, 0);
            // utility increasing in the state
            for env in lexicographic(&env_shape) {
                for a in 0..own {
                    for w in lexicographic(&tilde_shape) {
                        for k in 0..w.len() {
                            if w[k] + 1 >= tilde_shape[k] {
                                continue;
                            }
                            let mut up = w.clone();
                            up[k] += 1;
                            let lo = view.value(a, &env, &w);
                            let hi = view.value(a, &env, &up);
                            if hi < lo - tol {
                                c1.fail(|| {
                                    format!("player {n}, env {env:?}, action {a}: utility drops from {lo} to {hi} between states {w:?} and {up:?}")
                                });
                            }
                        }
                    }
                }
            }
            // own action vs (types, opponents' actions, state)
            let mut y_shape = env_shape.clone();
            y_shape.extend(&tilde_shape);
            let split = env_shape.len();
            let r = increasing_differences(
                &[own],
                &y_shape,
                |x, y| view.value(x[0], &y[..split], &y[split..]),
                tol,
                VIOLATION_LIMIT,
            );
            for w in &r.witnesses {
                c2.fail(|| format!("player {n}: own action {:?}->{:?} vs environment {:?}->{:?}: {} < {}", w.x1, w.x2, w.y1, w.y2, w.upper, w.lower));
            }
            c2.violations += r.violations - r.witnesses.len();
            // (types, opponents' actions) vs state, own action fixed
            for a in 0..own {
                let r = increasing_differences(
                    &tilde_shape,
                    &env_shape,
                    |x, y| view.value(a, y, x),
                    tol,
                    VIOLATION_LIMIT,
                );
                for w in &r.witnesses {
                    c2.fail(|| format!("player {n}, action {a}: state {:?}->{:?} vs environment {:?}->{:?}: {} < {}", w.x1, w.x2, w.y1, w.y2, w.upper, w.lower));
                }
                c2.violations += r.violations - r.witnesses.len();
            }
        }
    }

    for n in 0..game.players() {
        let opp_grid = opponent_type_grid(game, n)?;
        let mut previous: Option<DiscreteDistribution> = None;
        let mut previous_sets: Option<Vec<Vec<DiscreteDistribution>>> = None;
        for tn in 0..game.type_count(n) {
            let kind = game.attitude(n, tn).kind();
            if kind == AttitudeKind::Custom {
                c3.fail(|| format!("player {n} type {tn}: custom preference has no prior structure"));
                continue;
            }
            let Some(fac) = game.factored(n, tn) else {
                c3.fail(|| format!("player {n} type {tn}: priors are not factored over opponent types"));
                c4.fail(|| format!("player {n} type {tn}: priors are not factored over opponent types"));
                c5.fail(|| format!("player {n} type {tn}: priors are not factored over opponent types"));
                continue;
            };
            let p = DiscreteDistribution::new(opp_grid.clone(), fac.type_probs.clone())?;
            if let Some(prev) = &previous {
                match prev.stochastic_leq(&p) {
                    Ok(true) => {}
                    Ok(false) => c3.fail(|| format!("player {n}: opponent-type probabilities of type {} not below those of type {tn}", tn - 1)),
                    Err(e) => c3.undecidable(format!("player {n} type {tn}: {e}")),
                }
            }
            previous = Some(p);

            let sets = per_opponent_sets(game, n, tn).expect("factored priors");
            for (b, set) in sets.iter().enumerate() {
                match induced_set_leq(set, set, tol_order) {
                    Ok(None) => {}
                    Ok(Some(why)) => c4.fail(|| format!("player {n} type {tn} opponent profile {b}: {why}")),
                    Err(e) => c4.undecidable(format!("player {n} type {tn} opponent profile {b}: {e}")),
                }
            }
            if let Some(prev) = &previous_sets {
                for (b, (lo, hi)) in prev.iter().zip(&sets).enumerate() {
                    match induced_set_leq(lo, hi, tol_order) {
                        Ok(None) => {}
                        Ok(Some(why)) => c5.fail(|| format!("player {n} types {}->{tn} opponent profile {b}: {why}", tn - 1)),
                        Err(e) => c5.undecidable(format!("player {n} types {}->{tn} opponent profile {b}: {e}", tn - 1)),
                    }
                }
            }
            previous_sets = Some(sets);
        }
    }
    Ok(MonotoneReport::finish(vec![c1, c2, c3, c4, c5]))
}

/// Parametric assumptions between two consecutive members `lo <= hi` of a
/// family: increasing differences between (own action, state) and the
/// parameter; opponent-type probabilities increasing in the parameter;
/// prior sets increasing in the parameter.
pub fn check_parametric_assumptions(lo: &GameSpec, hi: &GameSpec) -> Result<MonotoneReport> {
    let tilde = require_structured(lo)?.clone();
    if hi.tilde_grid().map(|g| **g != *tilde).unwrap_or(true)
        || lo.type_counts() != hi.type_counts()
        || lo.players() != hi.players()
    {
        return Err(Error::Unsupported("family members must share players, types and states".into()));
    }
    let tol_order = Tolerances::default().order;
    let mut c1 = AssumptionCheck::new("parameter_increasing_differences");
    let mut c2 = AssumptionCheck::new("parameter_type_probabilities");
    let mut c3 = AssumptionCheck::new("parameter_prior_sets");
    let tilde_shape = tilde.shape();

    if let Some(msg) = grids_type_free(lo).or_else(|| grids_type_free(hi)) {
        c1.fail(|| msg);
    } else {
        for n in 0..lo.players() {
            let (vl, vh) = (UtilityView::new(lo, n), UtilityView::new(hi, n));
            let tol = tol_order * vl.scale().max(vh.scale());
            let env_shape = vl.env_shape();
            let own = lo.action_count(n, 0);
            for env in lexicographic(&env_shape) {
                for a in 0..own {
                    for w in lexicographic(&tilde_shape) {
                        // step in own action, then in each state coordinate
                        let mut steps: Vec<(usize, Vec<usize>)> = Vec::new();
                        if a + 1 < own {
                            steps.push((a + 1, w.clone()));
                        }
                        for k in 0..w.len() {
                            if w[k] + 1 < tilde_shape[k] {
                                let mut up = w.clone();
                                up[k] += 1;
                                steps.push((a, up));
                            }
                        }
                        for (a2, w2) in steps {
                            let d_lo = vl.value(a2, &env, &w2) - vl.value(a, &env, &w);
                            let d_hi = vh.value(a2, &env, &w2) - vh.value(a, &env, &w);
                            if d_hi < d_lo - tol {
                                c1.fail(|| format!(
                                    "player {n}, env {env:?}: step ({a},{w:?})->({a2},{w2:?}) gains {d_hi} at the higher parameter vs {d_lo}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    for n in 0..lo.players() {
        let opp_grid = opponent_type_grid(lo, n)?;
        for tn in 0..lo.type_count(n) {
            let (Some(fl), Some(fh)) = (lo.factored(n, tn), hi.factored(n, tn)) else {
                c2.fail(|| format!("player {n} type {tn}: priors are not factored over opponent types"));
                c3.fail(|| format!("player {n} type {tn}: priors are not factored over opponent types"));
                continue;
            };
            let pl = DiscreteDistribution::new(opp_grid.clone(), fl.type_probs.clone())?;
            let ph = DiscreteDistribution::new(opp_grid.clone(), fh.type_probs.clone())?;
            match pl.stochastic_leq(&ph) {
                Ok(true) => {}
                Ok(false) => c2.fail(|| format!("player {n} type {tn}: opponent-type probabilities decrease")),
                Err(e) => c2.undecidable(format!("player {n} type {tn}: {e}")),
            }
            let sl = per_opponent_sets(lo, n, tn).expect("factored priors");
            let sh = per_opponent_sets(hi, n, tn).expect("factored priors");
            for (b, (a, c)) in sl.iter().zip(&sh).enumerate() {
                match induced_set_leq(a, c, tol_order) {
                    Ok(None) => {}
                    Ok(Some(why)) => c3.fail(|| format!("player {n} type {tn} opponent profile {b}: {why}")),
                    Err(e) => c3.undecidable(format!("player {n} type {tn} opponent profile {b}: {e}")),
                }
            }
        }
    }
    Ok(MonotoneReport::finish(vec![c1, c2, c3]))
}
