//! Acceptance suite. Prints one line per criterion and exits nonzero when
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use ambigame::bestresponse::{
    action_values, agent_form_with, best_response, dist_best_response, dist_best_response_grid, AgentFormPath, Mode,
};
use ambigame::dist::{DiscreteDistribution, SupportGrid};
use ambigame::equilibrium::{
    check_monotone_assumptions, comparative_statics_sweep, decode_pure, enumerate_pure_equilibria,
    is_monotone_profile, pure_profile_count, random_profile, tarski_iterate, verify_profile, Direction,
};
use ambigame::error::Error;
use ambigame::fixtures::{
    ambiguous_coin, linspace, pricing_family_spec, pricing_game, random_game, random_simplex, RandomGameConfig,
};
use ambigame::game::{AttitudeKind, GameSpec, PureProfile, StrategyProfile};
use ambigame::models::{build_pricing_game, PricingSpec};
use ambigame::payoffvec::action_payoff_vector;
use ambigame::satisfaction::satisfaction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Pure equilibria by verifying every profile directly, without the
/// agent-form tables the enumerator uses.
fn brute_force(game: &GameSpec, mode: Mode) -> Vec<PureProfile> {
    (0..pure_profile_count(game))
        .map(|i| decode_pure(game, i))
        .filter(|p| verify_profile(game, &StrategyProfile::pure(game, p), mode, EPS).unwrap().verdict)
        .collect()
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.2} s of {} s", t.as_secs_f64(), limit.as_secs()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = RandomGameConfig::new(vec![AttitudeKind::Enterprising]);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut mismatches = 0;
    let mut nonempty = 0;
    let mut oracle_checked = 0;
    for i in 0..200 {
        let g = random_game(&mut rng, &cfg);
        let a = enumerate_pure_equilibria(&g, Mode::Action, EPS).unwrap();
        let d = enumerate_pure_equilibria(&g, Mode::Distribution, EPS).unwrap();
        if a != d {
            mismatches += 1;
        }
        nonempty += usize::from(!a.is_empty());
        // direct verification of every profile on a subset
        if i % 10 == 0 {
            oracle_checked += 1;
            if brute_force(&g, Mode::Action) != a || brute_force(&g, Mode::Distribution) != d {
                mismatches += 1;
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(
        mismatches == 0 && fast,
        format!("200 games, {nonempty} with pure equilibria, {mismatches} mismatches, {oracle_checked} cross-checked by direct verification, {time}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cfg = RandomGameConfig::new(vec![AttitudeKind::Traditional, AttitudeKind::Alarmist, AttitudeKind::Enterprising]);
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut violations = 0;
    let mut strict = 0;
    let mut oracle_checked = 0;
    for i in 0..200 {
        let g = random_game(&mut rng, &cfg);
        let a = enumerate_pure_equilibria(&g, Mode::Action, EPS).unwrap();
        let d = enumerate_pure_equilibria(&g, Mode::Distribution, EPS).unwrap();
        if !d.iter().all(|p| a.contains(p)) {
            violations += 1;
        }
        strict += usize::from(d.len() < a.len());
        if i % 10 == 0 {
            oracle_checked += 1;
            if brute_force(&g, Mode::Action) != a || brute_force(&g, Mode::Distribution) != d {
                violations += 1;
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(
        violations == 0 && fast,
        format!("200 games, {strict} with a strictly smaller distribution set, {violations} violations, {oracle_checked} cross-checked, {time}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cfg = RandomGameConfig::new(vec![AttitudeKind::Traditional]);
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut disagreements = 0;
    let mut profiles = 0usize;
    let mut passing = 0usize;
    for _ in 0..100 {
        let g = random_game(&mut rng, &cfg);
        let mut candidates: Vec<StrategyProfile> = (0..pure_profile_count(&g))
            .map(|i| StrategyProfile::pure(&g, &decode_pure(&g, i)))
            .collect();
        candidates.extend((0..50).map(|_| random_profile(&g, &mut rng)));
        for delta in &candidates {
            let a = verify_profile(&g, delta, Mode::Action, EPS).unwrap().verdict;
            let d = verify_profile(&g, delta, Mode::Distribution, EPS).unwrap().verdict;
            disagreements += usize::from(a != d);
            passing += usize::from(a);
        }
        profiles += candidates.len();
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    outcome(
        disagreements == 0 && fast,
        format!("{profiles} profiles on 100 games ({passing} equilibria), {disagreements} disagreements, {time}"),
    )
}

fn criterion_4() -> Outcome {
    let g = ambiguous_coin();
    let heads = StrategyProfile::pure(&g, &[vec![0]]);
    let br = dist_best_response(&g, 0, 0, &heads).unwrap();
    // independent oracle: scan the mixing weight on a fine grid
    let scan = (0..=1000)
        .map(|i| {
            let w = i as f64 / 1000.0;
            (0.4 * w + 0.6 * (1.0 - w)).min(0.6 * w + 0.4 * (1.0 - w))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let gap = br.value - br.pure_value;
    let action = verify_profile(&g, &heads, Mode::Action, EPS).unwrap().verdict;
    let dist = verify_profile(&g, &heads, Mode::Distribution, EPS).unwrap();
    let pass = (br.value - 0.5).abs() <= 1e-9
        && (br.pure_value - 0.4).abs() <= 1e-9
        && (gap - 0.1).abs() <= 1e-9
        && (scan - br.value).abs() <= 1e-9
        && action
        && !dist.verdict
        && (dist.regrets[0][0] - 0.1).abs() <= 1e-9;
    outcome(
        pass,
        format!(
            "mixed value {:.12}, pure value {:.12}, gap {:.12}; heads: action {action}, distribution {}",
            br.value, br.pure_value, gap, dist.verdict
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = RandomGameConfig::new(vec![AttitudeKind::Enterprising]);
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let h = 0.01;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut failures = 0;
    for _ in 0..100 {
        let g = random_game(&mut rng, &cfg);
        let delta = random_profile(&g, &mut rng);
        let agents = g.agents();
        let (n, t) = agents[rng.gen_range(0..agents.len())];
        let pure_max = action_values(&g, n, t, &delta).unwrap().into_iter().fold(f64::NEG_INFINITY, f64::max);
        let grid = dist_best_response_grid(&g, n, t, &delta, h).unwrap();
        let utilities = g.utility_grid(n, t).dims()[0].clone();
        let range = utilities.last().unwrap() - utilities.first().unwrap();
        let excess = grid.value.unwrap() - pure_max;
        worst_excess = worst_excess.max(excess / range.max(f64::MIN_POSITIVE));
        if excess > range * h {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "100 instances, {failures} exceed L·h, worst excess {:.3e}·L, {:.2} s",
            worst_excess,
            start.elapsed().as_secs_f64()
        ),
    )
}

/// Join and meet from the survival functions, computed here directly.
fn survival_oracle(a: &[f64], b: &[f64], pick: fn(f64, f64) -> f64) -> Vec<f64> {
    let k = a.len();
    let tail = |w: &[f64], i: usize| w[i..].iter().sum::<f64>();
    let s: Vec<f64> = (0..k).map(|i| pick(tail(a, i), tail(b, i))).collect();
    (0..k).map(|i| s[i] - if i + 1 < k { s[i + 1] } else { 0.0 }).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst_identity: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut bound_failures = 0;
    for _ in 0..500 {
        let k = rng.gen_range(2..=8);
        let mut levels: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let grid = Arc::new(SupportGrid::line(levels.clone()).unwrap());
        let a = DiscreteDistribution::new(grid.clone(), random_simplex(&mut rng, grid.len())).unwrap();
        let b = DiscreteDistribution::new(grid.clone(), random_simplex(&mut rng, grid.len())).unwrap();
        let join = a.lattice_join(&b).unwrap();
        let meet = a.lattice_meet(&b).unwrap();
        for _ in 0..5 {
            let mut f: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-10.0..10.0)).collect();
            f.sort_by(f64::total_cmp);
            let e = |d: &DiscreteDistribution| d.weights().iter().zip(&f).map(|(w, v)| w * v).sum::<f64>();
            worst_identity = worst_identity.max((e(&join) + e(&meet) - e(&a) - e(&b)).abs());
        }
        for (got, want) in [
            (&join, survival_oracle(a.weights(), b.weights(), f64::max)),
            (&meet, survival_oracle(a.weights(), b.weights(), f64::min)),
        ] {
            for (x, y) in got.weights().iter().zip(&want) {
                worst_oracle = worst_oracle.max((x - y).abs());
            }
        }
        let bounds = a.stochastic_leq(&join).unwrap()
            && b.stochastic_leq(&join).unwrap()
            && meet.stochastic_leq(&a).unwrap()
            && meet.stochastic_leq(&b).unwrap();
        bound_failures += usize::from(!bounds);
    }
    let square = Arc::new(SupportGrid::new(vec![vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap());
    let x = DiscreteDistribution::dirac(square.clone(), &[1.0, 0.0]).unwrap();
    let y = DiscreteDistribution::dirac(square, &[0.0, 1.0]).unwrap();
    let counterexample = matches!(x.lattice_join(&y), Err(Error::ConstructionFailed { .. }));
    outcome(
        worst_identity <= 1e-10 && worst_oracle <= 1e-10 && bound_failures == 0 && counterexample,
        format!(
            "500 pairs, identity error {worst_identity:.2e}, survival-oracle error {worst_oracle:.2e}, {bound_failures} bound failures, 2-D counterexample rejected: {counterexample}"
        ),
    )
}

/// Componentwise min and max over the monotone profiles of `all`.
fn monotone_extremes(game: &GameSpec, all: &[PureProfile]) -> Option<(PureProfile, PureProfile)> {
    let monotone: Vec<&PureProfile> = all.iter().filter(|p| is_monotone_profile(game, p)).collect();
    let first = monotone.first()?;
    let mut lo = (*first).clone();
    let mut hi = (*first).clone();
    for p in &monotone {
        for n in 0..p.len() {
            for t in 0..p[n].len() {
                lo[n][t] = lo[n][t].min(p[n][t]);
                hi[n][t] = hi[n][t].max(p[n][t]);
            }
        }
    }
    Some((lo, hi))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    let fine = pricing_game(21);
    let checks = check_monotone_assumptions(&fine).unwrap();
    let passed = checks.checks.iter().filter(|c| c.passed()).count();
    pass &= checks.all_pass && checks.checks.len() == 5;
    notes.push(format!("{passed}/5 assumption checks pass"));
    for (label, game) in [("21-point", &fine), ("5-point", &pricing_game(5))] {
        let bottom = tarski_iterate(game, Direction::Bottom, false).unwrap();
        let top = tarski_iterate(game, Direction::Top, false).unwrap();
        pass &= bottom.sweeps <= 50 && top.sweeps <= 50;
        pass &= is_monotone_profile(game, &bottom.profile) && is_monotone_profile(game, &top.profile);
        for r in [&bottom, &top] {
            let delta = StrategyProfile::pure(game, &r.profile);
            pass &= verify_profile(game, &delta, Mode::Action, EPS).unwrap().verdict;
            pass &= verify_profile(game, &delta, Mode::Distribution, EPS).unwrap().verdict;
        }
        notes.push(format!("{label}: sweeps {}/{}", bottom.sweeps, top.sweeps));
        if label == "5-point" {
            let all = enumerate_pure_equilibria(game, Mode::Action, EPS).unwrap();
            let extremes = monotone_extremes(game, &all);
            let confirmed = extremes == Some((bottom.profile.clone(), top.profile.clone()));
            pass &= confirmed;
            notes.push(format!("{} pure equilibria enumerated, extremal match {confirmed}", all.len()));
        }
    }
    let (fast, time) = within(Duration::from_secs(30), start);
    notes.push(time);
    outcome(pass && fast, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let lambdas = vec![1.0, 1.5, 2.0, 2.5];
    let family = pricing_family_spec(21, lambdas.clone()).build().unwrap();
    let report = comparative_statics_sweep(&family).unwrap();
    let mut exact = true;
    for (game, point) in family.games().iter().zip(&report.points) {
        let all = enumerate_pure_equilibria(game, Mode::Action, EPS).unwrap();
        let (lo, hi) = monotone_extremes(game, &all).expect("monotone equilibria exist");
        let levels = |p: &PureProfile| ambigame::equilibrium::pure_levels(game, p);
        exact &= levels(&lo) == point.bottom && levels(&hi) == point.top;
    }
    let tops: Vec<String> = report.points.iter().map(|p| format!("{:?}", p.top)).collect();
    outcome(
        report.increasing && exact,
        format!(
            "lambdas {lambdas:?}, increasing {}, enumeration agrees {exact}, assumptions hold {}; top profiles {}",
            report.increasing,
            report.assumptions_hold,
            tops.join(" ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..20 {
        let cost = rng.gen_range(0.5..2.0);
        let c = rng.gen_range(0.5..2.0);
        let draw = |rng: &mut ChaCha8Rng| rng.gen_range(0.1..1.0);
        let (b, d, e, f, g) = (rng.gen_range(4.0..8.0), draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng));
        // wide enough that the maximizer is interior
        let prices = linspace(cost, cost + 30.0, 601);
        let step = prices[1] - prices[0];
        let states = vec![0.0, 0.5, 1.0];
        let prior = random_simplex(&mut rng, 3);
        let spec = PricingSpec {
            firms: 2,
            types: 1,
            cost: vec![cost; 2],
            prices: vec![prices.clone(); 2],
            b: vec![b; 2],
            c: vec![c; 2],
            d: vec![vec![0.0, d], vec![d, 0.0]],
            e: vec![e; 2],
            f: vec![f; 2],
            g: vec![g; 2],
            states: states.clone(),
            type_probs: vec![vec![1.0]; 2],
            priors: vec![vec![vec![vec![prior.clone()]]]; 2],
            attitude: AttitudeKind::Enterprising,
        };
        let game = build_pricing_game(&spec).unwrap();
        let rival = rng.gen_range(0..121);
        let delta = StrategyProfile::pure(&game, &[vec![0], vec![rival]]);
        let br = best_response(&game, 0, 0, &delta, Mode::Action, 0.0).unwrap();
        let grid_best = prices[*br.maximal_actions.iter().max().unwrap()];
        let mean: f64 = prior.iter().zip(&states).map(|(w, s)| w * s).sum();
        let closed = spec.interior_best_response(0, 0, &[grid_best, prices[rival]], mean);
        let err = (grid_best - closed).abs() / step;
        worst = worst.max(err);
        failures += usize::from(err > 1.0);
    }
    outcome(failures == 0, format!("20 parameterizations, worst gap {worst:.3} grid steps"))
}

fn criterion_10() -> Outcome {
    let mut cfg = RandomGameConfig::new(vec![AttitudeKind::Traditional, AttitudeKind::Alarmist, AttitudeKind::Enterprising]);
    cfg.structured = true;
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst_pipeline: f64 = 0.0;
    let mut worst_general: f64 = 0.0;
    let mut compared = 0usize;
    for _ in 0..50 {
        let g = random_game(&mut rng, &cfg);
        let general = g.to_general().unwrap();
        let structured_form = agent_form_with(&g, Some(AgentFormPath::Structured)).unwrap();
        let flat_form = agent_form_with(&g, Some(AgentFormPath::General)).unwrap();
        let general_form = agent_form_with(&general, Some(AgentFormPath::General)).unwrap();
        let count = pure_profile_count(&g);
        for _ in 0..10 {
            let pure = decode_pure(&g, rng.gen_range(0..count));
            let delta = StrategyProfile::pure(&g, &pure);
            for (n, t) in g.agents() {
                for a in 0..g.action_count(n, t) {
                    let s = structured_form.value(n, t, a, &pure);
                    let pipeline = satisfaction(&g, &action_payoff_vector(&g, n, t, a, &delta)).unwrap();
                    worst_pipeline = worst_pipeline.max((s - pipeline).abs());
                    worst_general = worst_general
                        .max((s - flat_form.value(n, t, a, &pure)).abs())
                        .max((s - general_form.value(n, t, a, &pure)).abs());
                    compared += 1;
                }
            }
        }
    }
    outcome(
        worst_pipeline <= 1e-12 && worst_general <= 1e-12,
        format!("{compared} values on 50 games, pipeline gap {worst_pipeline:.2e}, general re-encoding gap {worst_general:.2e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("enterprising pure sets coincide across modes", criterion_1),
        ("pure distribution-based set inside action-based set", criterion_2),
        ("traditional verdicts agree across modes", criterion_3),
        ("hedging separates the modes on the ambiguous coin", criterion_4),
        ("simplex grid never beats pure actions by more than L·h", criterion_5),
        ("one-dimensional stochastic-order lattice", criterion_6),
        ("monotone pricing pipeline", criterion_7),
        ("comparative statics in the demand intercept", criterion_8),
        ("interior pricing best response", criterion_9),
        ("agent form matches the satisfaction pipeline", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {:>2} {} {}: {}",
            i + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
