use std::path::PathBuf;
use std::process::Command;

use ambigame::cli;
use ambigame::fixtures::*;
use ambigame::game::{load_document, load_game, AttitudeKind, Document, GameFile};
use ambigame::models::{FamilySpec, ModelSpec, PriceRule, PricingField, ScaleRule};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Runs the binary; returns exit code, stdout and stderr.
fn ambigame(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ambigame"))
        .args(args)
        .env_remove("AMBIGAME_JOBS")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Runs in process with the JSON report written to a temporary file.
fn run_to_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full = vec!["ambigame", "--output", path.to_str().unwrap()];
    full.extend_from_slice(args);
    let code = cli::run(full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| "null".into());
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn shipped_fixtures_match_the_builders() {
    let same = |name: &str, game: ambigame::game::GameSpec| {
        let loaded = load_game(fixture(name)).unwrap();
        assert_eq!(GameFile::from_game(&loaded).unwrap(), GameFile::from_game(&game).unwrap(), "{name}");
    };
    same("prisoners_dilemma.json", prisoners_dilemma());
    same("matching_pennies.json", matching_pennies());
    same("ambiguous_coin.json", ambiguous_coin());
    same("enterprising_dilemma.json", ambiguous_prisoners_dilemma(AttitudeKind::Enterprising));

    let model = |name: &str| -> ModelSpec { serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap() };
    assert_eq!(model("pricing.json"), ModelSpec::Pricing(pricing_spec(21)));
    assert_eq!(model("auction.json"), ModelSpec::Auction(auction_spec(PriceRule::First)));

    let family = |name: &str| match load_document(fixture(name)).unwrap() {
        Document::Family(f) => f,
        Document::Game(_) => panic!("{name} is not a family"),
    };
    assert_eq!(family("pricing_family.json"), pricing_family_spec(21, vec![1.0, 1.5, 2.0, 2.5]));
    assert_eq!(
        family("pricing_family_constant.json"),
        FamilySpec::PricingScale {
            base: pricing_spec(11),
            lambdas: vec![1.0, 2.0, 3.0],
            scale: vec![],
        }
    );
    assert_eq!(
        family("pricing_family_decreasing.json"),
        FamilySpec::PricingScale {
            base: pricing_spec(21),
            lambdas: vec![1.0, 2.0],
            scale: vec![ScaleRule {
                field: PricingField::B,
                power: -1.0,
            }],
        }
    );
}

#[test]
fn validate_exit_codes() {
    for name in ["prisoners_dilemma.json", "pricing.json", "auction.json", "pricing_family.json"] {
        let (code, _, _) = ambigame(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
    }
    let (code, _, err) = ambigame(&["validate", fixture("broken_partition.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("partition") && err.contains("overlap"), "{err}");
    let (code, _, err) = ambigame(&["validate", fixture("unknown_key.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("colour"), "{err}");
    let (code, _, _) = ambigame(&["validate", "/nonexistent/game.json"]);
    assert_ne!(code, 0);
    let (code, _, _) = ambigame(&["frobnicate"]);
    assert_ne!(code, 0);
}

#[test]
fn validate_report() {
    let (code, v) = run_to_json(&["validate", fixture("pricing_family.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["family_size"], 4);
}

#[test]
fn solve_the_dilemma() {
    for mode in ["action", "distribution"] {
        let (code, v) = run_to_json(&["solve", fixture("prisoners_dilemma.json").to_str().unwrap(), "--mode", mode]);
        assert_eq!(code, 0);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["status"], "found");
        let eq = v["equilibria"].as_array().unwrap();
        assert_eq!(eq.len(), 1);
        // defection is the action level 1.0
        assert_eq!(eq[0]["profile"], serde_json::json!([[1.0], [1.0]]));
        assert_eq!(eq[0]["verification"]["verdict"], true);
        assert!(eq[0]["verification"]["regrets"].is_array());
    }
}

#[test]
fn matching_pennies_has_no_pure_equilibrium() {
    let (code, out, err) = ambigame(&["solve", fixture("matching_pennies.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "none");
    assert!(v["equilibria"].as_array().unwrap().is_empty());
    assert!(err.contains("none found"));
}

#[test]
fn damped_iteration_from_the_command_line() {
    let path = fixture("matching_pennies.json");
    let (code, v) = run_to_json(&["solve", path.to_str().unwrap(), "--method", "iterate", "--alpha", "0.5"]);
    assert_eq!(code, 0);
    let w = &v["equilibria"][0]["profile"];
    assert_eq!(w[0][0][0].as_f64().unwrap(), 0.5);
    let (code, _) = run_to_json(&["solve", path.to_str().unwrap(), "--method", "iterate", "--alpha", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn tarski_reports_both_extremal_profiles() {
    let (code, v) = run_to_json(&["solve", fixture("pricing.json").to_str().unwrap(), "--method", "tarski"]);
    assert_eq!(code, 0);
    let eq = v["equilibria"].as_array().unwrap();
    let labels: Vec<&str> = eq.iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["bottom", "top"]);
    for e in eq {
        assert_eq!(e["verification"]["verdict"], true);
        let levels = e["levels"].as_array().unwrap();
        for row in levels {
            let row: Vec<f64> = row.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
    }
    // the assumptions fail on a traditional game unless forced
    let (code, _) = run_to_json(&["solve", fixture("prisoners_dilemma.json").to_str().unwrap(), "--method", "tarski"]);
    assert_ne!(code, 0);
}

#[test]
fn check_suites() {
    let (code, v) = run_to_json(&["check", fixture("pricing.json").to_str().unwrap(), "--suite", "monotone"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["monotone"]["checks"].as_array().unwrap().len(), 5);

    let (code, v) = run_to_json(&["check", fixture("enterprising_dilemma.json").to_str().unwrap(), "--suite", "theorems"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["theorems"]["equality"], true);

    let (code, v) = run_to_json(&["check", fixture("ambiguous_coin.json").to_str().unwrap(), "--suite", "shape", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 7);
    let shape = &v["result"]["shape"][0]["report"];
    assert_eq!(shape["concave"], true);
    assert_eq!(shape["convex"], false);

    let (code, v) = run_to_json(&["check", fixture("pricing_family_decreasing.json").to_str().unwrap(), "--suite", "parametric"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn sweep_verdicts() {
    let (code, v) = run_to_json(&["sweep", fixture("pricing_family_constant.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let points = v["statics"]["points"].as_array().unwrap();
    assert!(points.windows(2).all(|w| w[0]["bottom"] == w[1]["bottom"] && w[0]["top"] == w[1]["top"]));

    let (code, v) = run_to_json(&["sweep", fixture("pricing_family.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["increasing"], true);
    assert_eq!(v["lambdas"], serde_json::json!([1.0, 1.5, 2.0, 2.5]));

    let (code, v) = run_to_json(&["sweep", fixture("pricing_family.json").to_str().unwrap(), "--param-list", "1,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["lambdas"], serde_json::json!([1.0, 3.0]));

    let (code, v) = run_to_json(&["sweep", fixture("pricing_family_decreasing.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["increasing"], false);
    assert_eq!(v["assumptions_hold"], false);
    let flagged = &v["statics"]["pairs"][0]["assumptions"]["checks"];
    assert!(flagged
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "parameter_increasing_differences" && c["status"] == "fail"));

    let (code, _) = run_to_json(&["sweep", fixture("pricing.json").to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn reports_are_byte_identical_across_runs_and_job_counts() {
    let runs = [
        vec!["--jobs", "1", "check", "fixtures/enterprising_dilemma.json", "--suite", "theorems", "--seed", "3"],
        vec!["--jobs", "4", "check", "fixtures/enterprising_dilemma.json", "--suite", "theorems", "--seed", "3"],
    ];
    let dir = env!("CARGO_MANIFEST_DIR");
    let outputs: Vec<String> = runs
        .iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_ambigame")).current_dir(dir).args(args).output().unwrap();
            assert!(out.status.success());
            String::from_utf8(out.stdout).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let sweep = |jobs: &str| ambigame(&["--jobs", jobs, "sweep", fixture("pricing_family.json").to_str().unwrap()]).1;
    assert_eq!(sweep("1"), sweep("3"));
    assert_eq!(sweep("2"), sweep("2"));
}

#[test]
fn output_flag_moves_json_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let (code, out, _) = ambigame(&[
        "--output",
        path.to_str().unwrap(),
        "solve",
        fixture("prisoners_dilemma.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("1 equilibria"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "solve");
}

#[test]
fn job_count_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ambigame"))
        .args(["solve", fixture("prisoners_dilemma.json").to_str().unwrap()])
        .env("AMBIGAME_JOBS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_ambigame"))
        .args(["solve", fixture("prisoners_dilemma.json").to_str().unwrap()])
        .env("AMBIGAME_JOBS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}
