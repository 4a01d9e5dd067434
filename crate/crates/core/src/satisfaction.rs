//! Satisfaction values of payoff-distribution vectors and sampled shape checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::{DiscreteDistribution, SupportGrid};
use crate::error::{Error, Result};
use crate::game::{AmbiguityAttitude, AttitudeKind, GameSpec};
use crate::payoffvec::{integrate_kernel, FiniteKernel, PayoffDistVector};

pub const DEFAULT_SHAPE_SAMPLES: usize = 1000;

/// Expected utility of `pi` under the prior `rho` over the owner's states.
pub fn s0(pi: &PayoffDistVector, rho: &DiscreteDistribution) -> Result<f64> {
    if rho.weights().len() != pi.len() {
        return Err(Error::GridMismatch);
    }
    Ok(prior_value(rho, &pi.means()))
}

/// `Σ_l ρ(l) · means[l]`.
pub fn prior_value(rho: &DiscreteDistribution, means: &[f64]) -> f64 {
    rho.weights().iter().zip(means).map(|(w, m)| w * m).sum()
}

/// Folds per-prior values: the single value, the minimum or the maximum.
pub fn aggregate(kind: AttitudeKind, values: &[f64]) -> Result<f64> {
    match kind {
        AttitudeKind::Traditional => values.first().copied().ok_or(Error::Empty("prior set")),
        AttitudeKind::Alarmist => values
            .iter()
            .copied()
            .reduce(f64::min)
            .ok_or(Error::Empty("prior set")),
        AttitudeKind::Enterprising => values
            .iter()
            .copied()
            .reduce(f64::max)
            .ok_or(Error::Empty("prior set")),
        AttitudeKind::Custom => Err(Error::NoScalarSatisfaction),
    }
}

/// Satisfaction of `pi` for an attitude kind over explicit priors.
pub fn evaluate(kind: AttitudeKind, priors: &[DiscreteDistribution], pi: &PayoffDistVector) -> Result<f64> {
    if kind == AttitudeKind::Custom {
        return Err(Error::NoScalarSatisfaction);
    }
    let means = pi.means();
    if priors.iter().any(|p| p.weights().len() != means.len()) {
        return Err(Error::GridMismatch);
    }
    let values: Vec<f64> = priors.iter().map(|p| prior_value(p, &means)).collect();
    aggregate(kind, &values)
}

/// Satisfaction of `pi` for its owner in `game`.
pub fn satisfaction(game: &GameSpec, pi: &PayoffDistVector) -> Result<f64> {
    let (n, tn) = pi.owner();
    evaluate(game.attitude(n, tn).kind(), game.priors(n, tn), pi)
}

/// Strict preference `pi ≻ other` of their common owner.
pub fn prefers(game: &GameSpec, pi: &PayoffDistVector, other: &PayoffDistVector) -> Result<bool> {
    if pi.owner() != other.owner() {
        return Err(Error::GridMismatch);
    }
    let (n, tn) = pi.owner();
    match game.attitude(n, tn) {
        AmbiguityAttitude::Custom(c) => Ok(c.prefers(pi, other)),
        _ => Ok(satisfaction(game, pi)? > satisfaction(game, other)?),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeCounterexample {
    pub property: &'static str,
    /// Value that should have been at least `rhs` (or at most, for convexity).
    pub lhs: f64,
    pub rhs: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeReport {
    pub samples: usize,
    pub seed: u64,
    pub concave: bool,
    pub convex: bool,
    pub quasi_concave: bool,
    pub strongly_concave: bool,
    pub strongly_convex: bool,
    pub counterexamples: Vec<ShapeCounterexample>,
}

fn random_vector(rng: &mut ChaCha8Rng, owner: (usize, usize), states: usize, grid: &Arc<SupportGrid>) -> PayoffDistVector {
    let entries = (0..states)
        .map(|_| {
            // sparse draws reach the simplex faces more often
            let mut w: Vec<f64> = (0..grid.len())
                .map(|_| if rng.gen_bool(0.5) { rng.gen::<f64>() } else { 0.0 })
                .collect();
            if w.iter().all(|x| *x == 0.0) {
                w[rng.gen_range(0..grid.len())] = 1.0;
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            DiscreteDistribution::from_parts_unchecked(grid.clone(), w)
        })
        .collect();
    PayoffDistVector::new(owner, entries)
}

/// Vectors paying the top utility on one state and the bottom elsewhere.
fn vertex_vectors(owner: (usize, usize), states: usize, grid: &Arc<SupportGrid>) -> Vec<PayoffDistVector> {
    let top = grid.len() - 1;
    (0..states)
        .map(|hit| {
            let entries = (0..states)
                .map(|l| DiscreteDistribution::dirac_at(grid.clone(), if l == hit { top } else { 0 }))
                .collect();
            PayoffDistVector::new(owner, entries)
        })
        .collect()
}

/// Sampled concavity-type checks of the satisfaction function of `(n, t_n)`.
/// A passing verdict means no counterexample among the samples.
pub fn check_shape(game: &GameSpec, n: usize, tn: usize, samples: usize, seed: u64) -> Result<ShapeReport> {
    let kind = game.attitude(n, tn).kind();
    if kind == AttitudeKind::Custom {
        return Err(Error::NoScalarSatisfaction);
    }
    let priors = game.priors(n, tn);
    let states = game.local(n, tn).states.len();
    let mut levels = game.utility_grid(n, tn).dims()[0].clone();
    if levels.len() == 1 {
        levels.push(levels[0] + 1.0);
    }
    let scale = levels.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    let grid = Arc::new(SupportGrid::line(levels)?);
    let owner = (n, tn);
    let s = |pi: &PayoffDistVector| evaluate(kind, priors, pi);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ShapeReport {
        samples,
        seed,
        concave: true,
        convex: true,
        quasi_concave: true,
        strongly_concave: true,
        strongly_convex: true,
        counterexamples: Vec::new(),
    };
    let record = |report: &mut ShapeReport, property: &'static str, lhs: f64, rhs: f64, detail: String| {
        let flag = match property {
            "concave" => &mut report.concave,
            "convex" => &mut report.convex,
            "quasi_concave" => &mut report.quasi_concave,
            "strongly_concave" => &mut report.strongly_concave,
            _ => &mut report.strongly_convex,
        };
        if *flag {
            *flag = false;
            report.counterexamples.push(ShapeCounterexample { property, lhs, rhs, detail });
        }
    };

    let vertices = vertex_vectors(owner, states, &grid);
    let mut pairs: Vec<(PayoffDistVector, PayoffDistVector, f64)> = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            pairs.push((vertices[i].clone(), vertices[j].clone(), 0.5));
        }
    }
    for _ in 0..samples {
        let a = random_vector(&mut rng, owner, states, &grid);
        let b = random_vector(&mut rng, owner, states, &grid);
        pairs.push((a, b, rng.gen::<f64>()));
    }
    for (p0, p1, alpha) in &pairs {
        let mixed = PayoffDistVector::mix(&[(1.0 - alpha, p0), (*alpha, p1)])?;
        let (v0, v1, vm) = (s(p0)?, s(p1)?, s(&mixed)?);
        let chord = (1.0 - alpha) * v0 + alpha * v1;
        let detail = || format!("means {:?} and {:?}, alpha {alpha}", p0.means(), p1.means());
        if vm < chord - tol {
            record(&mut report, "concave", vm, chord, detail());
        }
        if vm > chord + tol {
            record(&mut report, "convex", vm, chord, detail());
        }
        if vm < v0.min(v1) - tol {
            record(&mut report, "quasi_concave", vm, v0.min(v1), detail());
        }
    }

    let actions_max = 4;
    let mut kernels: Vec<(Vec<PayoffDistVector>, Vec<f64>)> = Vec::new();
    if vertices.len() >= 2 {
        kernels.push((vertices.clone(), vec![1.0 / vertices.len() as f64; vertices.len()]));
    }
    for _ in 0..samples {
        let k = rng.gen_range(2..=actions_max);
        let rows: Vec<PayoffDistVector> = (0..k).map(|_| random_vector(&mut rng, owner, states, &grid)).collect();
        let mut w: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        let t: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= t);
        kernels.push((rows, w));
    }
    for (rows, w) in kernels {
        let actions = Arc::new(SupportGrid::indices(rows.len())?);
        let kernel = FiniteKernel::new(owner, actions.clone(), rows)?;
        let delta = DiscreteDistribution::new(actions, w)?;
        let lhs = s(&integrate_kernel(&kernel, &delta)?)?;
        let rhs: f64 = kernel
            .rows()
            .iter()
            .zip(delta.weights())
            .map(|(r, p)| s(r).map(|v| v * p))
            .sum::<Result<f64>>()?;
        let detail = || format!("kernel means {:?}, weights {:?}", kernel.rows().iter().map(|r| r.means()).collect::<Vec<_>>(), delta.weights());
        if lhs < rhs - tol {
            record(&mut report, "strongly_concave", lhs, rhs, detail());
        }
        if lhs > rhs + tol {
            record(&mut report, "strongly_convex", lhs, rhs, detail());
        }
    }
    Ok(report)
}
