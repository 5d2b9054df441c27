use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use robsel::generator::{generate, GenParams};
use robsel::model::parse_instance;
use robsel::robust_discrete::{evaluate_fixed_x, parse_lp};
use robsel::{BudgetModel, Problem, Rational, SelectionSolution};
use robsel_cli::{verify_cases, Case, CliResult, VerifyReport};
use serde_json::Value;

const AREC_N2: &str = r#"{"n":2,"p":1,"k":1,"gamma":5,"budget_model":"continuous","first_stage_cost":[0,0],"nominal_cost":[0,0],"deviation":[10,10]}"#;
const RREC_N3: &str = r#"{"n":3,"p":2,"k":1,"gamma":2,"budget_model":"continuous","first_stage_cost":[1,1,4],"nominal_cost":[1,2,1],"deviation":[3,3,0]}"#;
const DISC_N3: &str = r#"{"n":3,"p":2,"k":1,"gamma":1,"budget_model":"discrete","first_stage_cost":[1,0,2],"nominal_cost":[2,3,1],"deviation":[5,0,4]}"#;

fn robsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robsel")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json_line(o: &Output) -> Value {
    let s = String::from_utf8_lossy(&o.stdout);
    serde_json::from_str(s.lines().next().expect("one line")).expect("json")
}

#[test]
fn solve_adversarial_levels() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.json", AREC_N2);
    let o = robsel(&["solve", "--problem", "arec", "--algorithm", "levels", "--instance", f.to_str().unwrap(), "--x", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_line(&o);
    assert_eq!(v["value"], "5/2");
    assert_eq!(v["value_decimal"], "2.5");
    assert_eq!(v["problem"], "arec");
    assert!(v["worst_scenario"].is_array());
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn solve_robust_dispatch_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "r.json", RREC_N3);
    let path = f.to_str().unwrap();
    let o = robsel(&["solve", "--problem", "rrec", "--instance", path]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_line(&o);
    assert_eq!(v["value"], "11/2");
    assert_eq!(v["method"], "cells");
    assert_eq!(v["witness"], serde_json::json!([1, 2]));
    let o = robsel(&["solve", "--problem", "rrec", "--algorithm", "levels", "--instance", path]);
    assert_eq!(o.status.code(), Some(2));
    let o = robsel(&["solve", "--problem", "rrec", "--algorithm", "approx", "--instance", path]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", &AREC_N2.replace("\"p\":1", "\"p\":3"));
    let o = robsel(&["solve", "--problem", "arec", "--instance", f.to_str().unwrap(), "--x", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p exceeds n"));
    let good = write(dir.path(), "a.json", AREC_N2);
    let o = robsel(&["solve", "--problem", "arec", "--instance", good.to_str().unwrap(), "--x", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = robsel(&["solve", "--problem", "nope", "--instance", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = robsel(&["gen", "--n", "10", "--p", "5", "--k", "2", "--seed", "7", "--output", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let inst = parse_instance(std::str::from_utf8(&bytes).unwrap()).unwrap();
    assert_eq!((inst.n, inst.p, inst.k), (10, 5, 2));
    assert_eq!(inst.gamma, Rational::from_integer(3.into()));
    let o = robsel(&["gen", "--n", "4", "--p", "2", "--k", "1", "--nominal-range", "5:1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn export_lp_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.json", DISC_N3);
    let path = f.to_str().unwrap();
    let o = robsel(&["export", "--problem", "rrec", "--instance", path]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(text.contains("Binary\n x_1 x_2 x_3\n"));
    assert_eq!(robsel(&["export", "--problem", "rrec", "--instance", path]).stdout, o.stdout);
    let inst = parse_instance(DISC_N3).unwrap();
    let m = parse_lp(&text).unwrap();
    for items in [[0, 1], [0, 2], [1, 2]] {
        let x = SelectionSolution::from_items(&items, &inst.first_stage_cost);
        let (_, want) = robsel_cli::solve_with(&inst, Problem::Arec, robsel_cli::Algorithm::Auto, Some(&x), None, None)
            .map(|o| ((), &x.value + o.value))
            .unwrap();
        assert_eq!(evaluate_fixed_x(&m, &x).unwrap(), want);
    }
    let o = robsel(&["export", "--problem", "r2st", "--instance", path]);
    let m = parse_lp(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(m.blocks.len() <= 2 * 3 + 1);
    let c = write(dir.path(), "c.json", RREC_N3);
    assert_eq!(robsel(&["export", "--problem", "rrec", "--instance", c.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_against_oracles() {
    let o = robsel(&["verify", "--problem", "arec", "--algorithm", "intervals", "--budget-model", "continuous", "--n", "6", "--count", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json_line(&o)["status"], "EQUAL");
    let o = robsel(&["verify", "--problem", "rrec", "--algorithm", "enum", "--n", "5", "--count", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_line(&o)["status"], "EQUAL");
    let o = robsel(&["verify", "--problem", "r2st", "--budget-model", "continuous", "--n", "5", "--count", "20"]);
    assert_eq!(json_line(&o)["status"], "EQUAL");
}

#[test]
fn verify_respects_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_robsel"))
        .args(["verify", "--problem", "rrec", "--n", "5", "--count", "2"])
        .env("ROBSEL_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capped"));
}

#[test]
fn injected_fault_is_caught() {
    let cases: Vec<Case> = (0..10)
        .map(|seed| Case { seed, instance: generate(&GenParams::new(5, 2, 1, BudgetModel::Discrete, seed)).unwrap() })
        .collect();
    let faulty = |inst: &robsel::Instance, x: Option<&SelectionSolution>, _: &robsel::Scenario| -> CliResult<Rational> {
        let x = x.unwrap();
        let v = robsel::adversary_discrete::arec_discrete(inst, x)?.0;
        // Off by one whenever the first item is chosen.
        Ok(if x.contains(0) { v + Rational::from_integer(1.into()) } else { v })
    };
    let r = verify_cases(&cases, Problem::Arec, &faulty).unwrap();
    match &r {
        VerifyReport::Counterexample { x, algorithm, oracle, .. } => {
            assert!(x.as_ref().unwrap().contains(0));
            assert_ne!(algorithm, oracle);
        }
        other => panic!("fault not detected: {other:?}"),
    }
    let dump = r.to_json();
    assert_eq!(dump["status"], "COUNTEREXAMPLE");
    assert!(dump["instance"]["nominal_cost"].is_array());
}
