use std::path::PathBuf;
use std::process::{Command as Proc, Output};

use charsum_cli::{presets, run, CliError, Command, ExperimentConfig, RunOptions, CSV_COLUMNS};

fn charsum(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_charsum")).args(args).output().unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("charsum-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn config_file(name: &str, json: &str) -> PathBuf {
    let path = temp(name).join("config.json");
    std::fs::write(&path, json).unwrap();
    path
}

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

#[test]
fn bound_example_reports_sqrt_two() {
    let out = charsum(&["bound", "--preset", "bound-example"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rec = &v["records"][0];
    assert_eq!(rec["bound_name"], "thm44");
    let b = rec["bound_report"]["thm44"]["value"].as_f64().unwrap();
    assert!((b - std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!(String::from_utf8_lossy(&out.stdout).contains("1.41421356"));
}

#[test]
fn composite_characteristic_is_invalid_input() {
    let path = config_file(
        "p4",
        r#"{"spec":{"p":4,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t"}]}}"#,
    );
    let out = charsum(&["bound", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be prime"));
    let sweep = config_file("p4sweep", r#"{"sweep":{"groups":[{"fields":[[4,1,2]]}]}}"#);
    let out = charsum(&["sweep", "--config", sweep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be prime"));
}

#[test]
fn malformed_input_exits_two() {
    let path = config_file("bad", "{ not json");
    assert_eq!(charsum(&["bound", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(charsum(&["bound", "--preset", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(charsum(&["bound"]).status.code(), Some(2));
    assert_eq!(charsum(&["frobnicate", "--preset", "groups"]).status.code(), Some(2));
    let zero_den = config_file(
        "zero-den",
        r#"{"spec":{"p":3,"q_exp":1,"d":2,"as":{"b":"1","num":"t","den":"0"}}}"#,
    );
    assert_eq!(charsum(&["sum", "--config", zero_den.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn empty_range_gives_empty_report() {
    let path = config_file("empty", r#"{"sweep":{"groups":[{"fields":[],"k":[1]}]}}"#);
    let out = charsum(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["cases"], 0);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn budget_is_checked_before_running() {
    let out = charsum(&["verify", "--preset", "thm44-sweep", "--max-evals", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("estimated cost"), "{err}");
    assert!(out.stdout.is_empty());
    let e = run(
        Command::Sweep,
        &config(presets::get("thm45-small").unwrap()),
        &RunOptions { seed: 0, max_evals: Some(10) },
    )
    .unwrap_err();
    assert!(matches!(e, CliError::Budget { budget: 10, .. }));
}

#[test]
fn sweep_presets_have_nonnegative_margins() {
    for name in ["thm44-small", "thm45-small"] {
        let r = run(Command::Sweep, &config(presets::get(name).unwrap()), &RunOptions::default()).unwrap();
        assert!(r.summary.cases > 0);
        assert_eq!(r.summary.violations, 0, "{name}");
        assert!(r.summary.worst_margin.unwrap() >= 0.0, "{name}");
        for rec in r.records.iter().filter(|x| x.hypothesis == Some(true)) {
            assert!(rec.margin.unwrap() >= 0.0, "{name}: {:?}", rec.spec);
        }
    }
}

/// The small Kummer preset contains genuine counterexamples to the
/// sufficiency of the coprime / non-power hypothesis; every violation
/// `verify` reports there is of that kind, never a bound or identity.
#[test]
fn verify_violations_are_sufficiency_counterexamples() {
    let r = run(Command::Verify, &config(presets::get("thm44-small").unwrap()), &RunOptions::default()).unwrap();
    for (name, t) in &r.summary.checks {
        if *name != "hypothesis_sufficiency" {
            assert_eq!(t.failed, 0, "{name}");
        }
    }
    for rec in r.records.iter().filter(|x| !x.pass) {
        assert_eq!(rec.checks.get("hypothesis_sufficiency"), Some(&false));
        assert_eq!(rec.spec.as_ref().unwrap().kummer.len(), 2);
    }
    let out = charsum(&["verify", "--preset", "thm45-small"]);
    assert_eq!(out.status.code(), Some(0));
}

/// Each record's spec, run alone, reproduces the record.
#[test]
fn records_rerun_in_isolation() {
    let cfg = config(presets::get("thm45-small").unwrap());
    let full = run(Command::Verify, &cfg, &RunOptions { seed: 5, max_evals: None }).unwrap();
    for rec in full.records.iter().step_by(997) {
        let single = ExperimentConfig {
            spec: rec.spec.clone(),
            sweep: None,
            ..cfg.clone()
        };
        let again = run(Command::Verify, &single, &RunOptions::default()).unwrap();
        let mut r = again.records[0].clone();
        r.case = rec.case;
        r.label = rec.label.clone();
        assert_eq!(&r, rec);
    }
}

#[test]
fn outputs_and_csv_columns() {
    let dir = temp("out");
    let out = charsum(&[
        "verify",
        "--preset",
        "thm45-small",
        "--seed",
        "3",
        "--format",
        "both",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, CSV_COLUMNS.join(","));
    assert_eq!(
        header,
        "case,spec_hash,p,q,d,degrees,hyp44,hyp45,hypothesis,abs_sum,bound_name,bound,margin,pass"
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["seed"], 3);
    assert_eq!(csv.lines().count() as u64 - 1, json["summary"]["cases"].as_u64().unwrap());
    assert!(dir.join("timing.json").exists());
    assert!(!std::fs::read_to_string(dir.join("report.json")).unwrap().contains("seconds"));
}

#[test]
fn group_and_lpoly_commands() {
    let r = run(Command::Group, &config(presets::get("groups").unwrap()), &RunOptions::default()).unwrap();
    assert_eq!(r.summary.violations, 0);
    assert!(r.records.iter().all(|x| x.transfer_laws.is_some()));
    let r = run(
        Command::Lpoly,
        &config(r#"{"spec":{"p":2,"q_exp":2,"d":1,"kummer":[{"k_idx":1,"poly":"t*(t+1)"}]}}"#),
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(r.records[0].lpoly.as_ref().unwrap().betti, 1);
    let r = run(
        Command::Sum,
        &config(r#"{"m":2,"spec":{"p":2,"q_exp":1,"d":2,"kummer":[{"k_idx":1,"poly":"t+g"}]}}"#),
        &RunOptions::default(),
    )
    .unwrap();
    let rec = &r.records[0];
    assert_eq!(rec.sum.as_ref().unwrap().exact, vec!["0:-1".to_string()]);
    // F_16 minus the two roots of (t+g)(t+g^2)
    assert_eq!(rec.complete_sum.as_ref().unwrap().count, 14);
    assert!(rec.pass);
}

#[test]
fn every_preset_parses() {
    for name in presets::names() {
        let cfg = config(presets::get(name).unwrap());
        assert_eq!(cfg.name.as_deref(), Some(name));
        assert!(cfg.command.is_some());
    }
}
