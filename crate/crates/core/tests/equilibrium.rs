use ambigame::bestresponse::{best_response, dist_best_response, Mode};
use ambigame::equilibrium::*;
use ambigame::error::Error;
use ambigame::fixtures::*;
use ambigame::game::{AttitudeKind, StrategyProfile};
use ambigame::models::PriceRule;

const EPS: f64 = 1e-9;

#[test]
fn prisoners_dilemma_has_only_mutual_defection() {
    let g = prisoners_dilemma();
    for mode in [Mode::Action, Mode::Distribution] {
        assert_eq!(enumerate_pure_equilibria(&g, mode, EPS).unwrap(), vec![vec![vec![1], vec![1]]]);
    }
    for a in 0..2 {
        for b in 0..2 {
            let r = verify_profile(&g, &StrategyProfile::pure(&g, &[vec![a], vec![b]]), Mode::Action, EPS).unwrap();
            assert_eq!(r.verdict, a == 1 && b == 1);
            if !r.verdict {
                assert!(r.max_regret() > 0.0);
                assert!(!r.witnesses.is_empty());
            }
        }
    }
}

#[test]
fn matching_pennies_mixes_evenly() {
    let g = matching_pennies();
    for mode in [Mode::Action, Mode::Distribution] {
        assert!(enumerate_pure_equilibria(&g, mode, EPS).unwrap().is_empty());
        let r = verify_profile(&g, &StrategyProfile::uniform(&g), mode, EPS).unwrap();
        assert!(r.verdict);
        assert_eq!(r.max_regret(), 0.0);
    }
}

#[test]
fn ambiguous_coin_separates_the_modes() {
    let g = ambiguous_coin();
    let heads = StrategyProfile::pure(&g, &[vec![0]]);
    let br = dist_best_response(&g, 0, 0, &heads).unwrap();
    assert!((br.value - 0.5).abs() < 1e-9);
    assert!((br.pure_value - 0.4).abs() < 1e-9);
    assert!(verify_profile(&g, &heads, Mode::Action, EPS).unwrap().verdict);
    let d = verify_profile(&g, &heads, Mode::Distribution, EPS).unwrap();
    assert!(!d.verdict);
    assert!((d.regrets[0][0] - 0.1).abs() < 1e-9);
    let ab = best_response(&g, 0, 0, &heads, Mode::Action, EPS).unwrap();
    assert_eq!(ab.maximal_actions, vec![0, 1]);
}

#[test]
fn dominant_strategies_converge_fast() {
    let g = prisoners_dilemma();
    let init = StrategyProfile::pure(&g, &[vec![0], vec![0]]);
    let out = best_response_iteration(&g, Mode::Action, &init, 1.0, 10, 1e-10).unwrap();
    match out {
        IterationOutcome::Converged { profile, iterations, .. } => {
            assert!(iterations <= 2);
            assert_eq!(profile.as_pure().unwrap(), vec![vec![1], vec![1]]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn damped_iteration_finds_the_pennies_mix() {
    let g = matching_pennies();
    let out = best_response_iteration(&g, Mode::Action, &StrategyProfile::uniform(&g), 0.5, 1000, 1e-7).unwrap();
    let IterationOutcome::Converged { profile, report, .. } = out else {
        panic!("no convergence")
    };
    assert!(report.verdict);
    for w in profile.weights().iter().flatten() {
        assert!((w[0] - 0.5).abs() < 1e-6);
    }
}

#[test]
fn full_steps_cycle_without_false_positive() {
    let g = cyclic_game();
    let init = StrategyProfile::pure(&g, &[vec![0], vec![0]]);
    let out = best_response_iteration(&g, Mode::Action, &init, 1.0, 200, 1e-10).unwrap();
    match out {
        IterationOutcome::NoConvergence { iterations, tail, .. } => {
            assert_eq!(iterations, 200);
            assert!(tail.iter().all(|&c| c > 0.0));
        }
        IterationOutcome::Converged { .. } => panic!("cycle reported as converged"),
    }
}

#[test]
fn bad_damping_is_rejected() {
    let g = matching_pennies();
    let init = StrategyProfile::uniform(&g);
    assert!(best_response_iteration(&g, Mode::Action, &init, 0.0, 10, 1e-9).is_err());
    assert!(best_response_iteration(&g, Mode::Action, &init, 1.5, 10, 1e-9).is_err());
}

#[test]
fn trivial_game_tarski() {
    let g = trivial_game();
    for d in [Direction::Bottom, Direction::Top] {
        let r = tarski_iterate(&g, d, false).unwrap();
        assert_eq!(r.profile, vec![vec![0]]);
    }
}

#[test]
fn pricing_extremal_equilibria() {
    let g = pricing_game(21);
    let report = check_monotone_assumptions(&g).unwrap();
    assert!(report.all_pass, "{report:#?}");
    let bottom = tarski_iterate(&g, Direction::Bottom, false).unwrap();
    let top = tarski_iterate(&g, Direction::Top, false).unwrap();
    assert!(bottom.sweeps <= 50 && top.sweeps <= 50);
    assert!(is_monotone_profile(&g, &bottom.profile));
    assert!(is_monotone_profile(&g, &top.profile));
    for (lo, hi) in bottom.profile.iter().flatten().zip(top.profile.iter().flatten()) {
        assert!(lo <= hi);
    }
    // both types strictly separate on the fine grid
    for row in bottom.levels(&g) {
        assert!(row[0] < row[1], "{row:?}");
    }
}

#[test]
fn pricing_extremality_against_enumeration() {
    let g = pricing_game(5);
    let bottom = tarski_iterate(&g, Direction::Bottom, false).unwrap();
    let top = tarski_iterate(&g, Direction::Top, false).unwrap();
    let all = enumerate_pure_equilibria(&g, Mode::Action, EPS).unwrap();
    assert!(all.contains(&bottom.profile));
    assert!(all.contains(&top.profile));
    for p in all.iter().filter(|p| is_monotone_profile(&g, p)) {
        for ((lo, x), hi) in bottom.profile.iter().flatten().zip(p.iter().flatten()).zip(top.profile.iter().flatten()) {
            assert!(lo <= x && x <= hi);
        }
    }
    let d = enumerate_pure_equilibria(&g, Mode::Distribution, EPS).unwrap();
    assert_eq!(all, d);
}

#[test]
fn negated_shock_breaks_state_monotonicity() {
    let mut spec = pricing_spec(5);
    spec.f = vec![-0.5; 2];
    spec.g = vec![0.0; 2];
    let g = ambigame::models::build_pricing_game_unchecked(&spec).unwrap();
    let r = check_monotone_assumptions(&g).unwrap();
    let c = r.check("increasing_in_state").unwrap();
    assert_eq!(c.status, CheckStatus::Fail);
    assert!(c.violations > 0 && !c.details.is_empty());
    assert!(r.check("prior_sets_sublattice").unwrap().passed());
    assert!(tarski_iterate(&g, Direction::Bottom, false).is_err());
}

#[test]
fn increasing_differences_checker() {
    let (ok, w) = check_increasing_differences(&[2], &[2], |x, y| (x[0] * y[0]) as f64);
    assert!(ok && w.is_none());
    let (ok, w) = check_increasing_differences(&[2], &[2], |x, y| -((x[0] * y[0]) as f64));
    assert!(!ok);
    let w = w.unwrap();
    assert_eq!((w.x1.clone(), w.x2.clone()), (vec![0], vec![1]));
    assert_eq!((w.y1.clone(), w.y2.clone()), (vec![0], vec![1]));
    // a separable function has zero cross differences everywhere
    let (ok, _) = check_increasing_differences(&[3, 2], &[4], |x, y| (x[0] + 2 * x[1]) as f64 + (y[0] * y[0]) as f64);
    assert!(ok);
}

#[test]
fn auction_has_the_low_winning_bid() {
    let g = auction_game(PriceRule::First);
    let eq = enumerate_pure_equilibria(&g, Mode::Action, EPS).unwrap();
    // bids 0.4 (index 2) and 0.2 (index 1)
    assert!(eq.contains(&vec![vec![2], vec![1]]), "{eq:?}");
}

#[test]
fn robustness_of_the_ambiguous_dilemma() {
    let g = ambiguous_prisoners_dilemma(AttitudeKind::Alarmist);
    let r = robustness_probe(&g, &[0.1, 0.01], Mode::Action, EPS, 1_000_000).unwrap();
    assert_eq!(r.base, vec![vec![vec![1], vec![1]]]);
    for p in &r.points {
        assert_eq!(p.distance, Some(0.0));
    }
    assert!(r.non_increasing);
}

#[test]
fn robustness_threshold_distances() {
    let g = robustness_threshold();
    let r = robustness_probe(&g, &[0.01, 0.1, 0.0], Mode::Action, EPS, 1_000_000).unwrap();
    let eta: Vec<f64> = r.points.iter().map(|p| p.eta).collect();
    assert_eq!(eta, vec![0.1, 0.01, 0.0]);
    let d: Vec<Option<f64>> = r.points.iter().map(|p| p.distance).collect();
    assert_eq!(d, vec![Some(1.0), Some(0.0), Some(0.0)]);
    assert_eq!(r.points[2].equilibria, r.base);
    assert!(r.non_increasing);
}

#[test]
fn robustness_rejects_traditional_games() {
    assert!(matches!(
        robustness_probe(&prisoners_dilemma(), &[0.1], Mode::Action, EPS, 100),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn enumeration_cap_is_enforced() {
    let g = pricing_game(21);
    assert!(matches!(
        enumerate_pure_equilibria_capped(&g, Mode::Action, EPS, 1000),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn comparative_statics_on_intercept() {
    let family = pricing_family_spec(21, vec![1.0, 1.5, 2.0, 2.5]).build().unwrap();
    let r = comparative_statics_sweep(&family).unwrap();
    assert!(r.increasing, "{:#?}", r.points);
    assert!(r.assumptions_hold);
    assert!(r.points.first().unwrap().top < r.points.last().unwrap().top);
}

#[test]
fn constant_family_gives_constant_equilibria() {
    let family = pricing_family_spec(11, vec![1.0, 2.0, 3.0]).build().unwrap();
    let spec = ambigame::models::FamilySpec::PricingScale {
        base: pricing_spec(11),
        lambdas: vec![1.0, 2.0, 3.0],
        scale: vec![],
    };
    let constant = spec.build().unwrap();
    let r = comparative_statics_sweep(&constant).unwrap();
    assert!(r.increasing);
    assert!(r.points.windows(2).all(|w| w[0].bottom == w[1].bottom && w[0].top == w[1].top));
    assert_eq!(family.lambdas(), constant.lambdas());
}

#[test]
fn decreasing_intercept_is_flagged() {
    let spec = ambigame::models::FamilySpec::PricingScale {
        base: pricing_spec(21),
        lambdas: vec![1.0, 2.0],
        scale: vec![ambigame::models::ScaleRule {
            field: ambigame::models::PricingField::B,
            power: -1.0,
        }],
    };
    let r = comparative_statics_sweep(&spec.build().unwrap()).unwrap();
    assert!(!r.increasing);
    assert!(!r.assumptions_hold);
    assert!(!r.pairs[0].assumptions.check("parameter_increasing_differences").unwrap().passed());
}

#[test]
fn family_parameters_must_increase() {
    assert!(pricing_family_spec(5, vec![2.0, 1.0]).build().is_err());
    assert!(pricing_family_spec(5, vec![]).build().is_err());
}
