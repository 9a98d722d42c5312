//! Sweep driver behaviour through the library API.

use frac_hh::inequalities::TheoremId;
use frac_hh::report::{emit_csv, exit, exit_code, parse_csv, run_sweep, Status, SweepConfig};
use frac_hh::Error;

fn config(text: &str) -> SweepConfig {
    SweepConfig::from_toml(text).unwrap()
}

fn csv_bytes(cfg: &SweepConfig) -> Vec<u8> {
    let mut out = Vec::new();
    emit_csv(&run_sweep(cfg).unwrap().rows, &mut out).unwrap();
    out
}

#[test]
fn constant_function_is_tight_in_mr1() {
    let cfg = config(
        r#"
        functions = ["const(1)"]
        etas = ["diff"]
        alphas = [1.0]
        ks = [1.0]
        rs = [0.0]
        intervals = [[0.5, 1.5]]
        theorems = ["mr1"]
        "#,
    );
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.rows.len(), 1);
    let row = &out.rows[0];
    assert_eq!(row.status, Status::Holds);
    assert!((row.lhs.unwrap() - 1.0).abs() < 1e-12);
    assert!((row.rhs.unwrap() - 1.0).abs() < 1e-12);
    assert!(row.margin.unwrap().abs() < 1e-12);
    assert_eq!(exit_code(&out.rows), exit::OK);
}

#[test]
fn every_theorem_meets_every_valid_scenario() {
    let cfg = config(
        r#"
        functions = ["sq", "exp"]
        etas = ["diff", "diff_plus(0.5)"]
        alphas = [0.5, 2.0]
        ks = [1.0]
        rs = [0.0, -1.0]
        intervals = [[0.2, 1.2]]
        theorems = ["hh1", "mr1", "mr2", "lemma1"]
        "#,
    );
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.scenarios_total, 16);
    assert_eq!(out.scenarios_skipped, 8);
    assert_eq!(out.rows.len(), 8 * 4);
    for id in [TheoremId::Hh1, TheoremId::Mr1, TheoremId::Mr2, TheoremId::Lemma1] {
        assert_eq!(out.rows.iter().filter(|r| r.theorem == id).count(), 8);
    }
    assert_eq!(out.count(Status::Holds), out.rows.len());
    assert!(out.log.iter().any(|l| l.contains("r = −1 excluded")));
}

#[test]
fn output_is_reproducible() {
    let cfg = config(
        r#"
        functions = ["quartic"]
        etas = ["diff"]
        alphas = [0.7]
        ks = [1.5]
        rs = [0.5]
        intervals = [[0.1, 0.9]]
        random_scenarios = 6
        seed = 99
        "#,
    );
    let first = csv_bytes(&cfg);
    assert_eq!(first, csv_bytes(&cfg));
    let rows = parse_csv(first.as_slice()).unwrap();
    assert_eq!(rows.len(), 7 * TheoremId::ALL.len());
    let mut other = cfg.clone();
    other.seed = 100;
    assert_ne!(first, csv_bytes(&other));
}

#[test]
fn informational_violations_do_not_fail_the_run() {
    let cfg = config(
        r#"
        functions = ["sq"]
        etas = ["diff"]
        alphas = [1.0]
        ks = [1.0]
        rs = [0.0]
        intervals = [[0.0, 1.0]]
        theorems = ["ds", "hh1"]
        "#,
    );
    let mut rows = run_sweep(&cfg).unwrap().rows;
    let ds = rows.iter().find(|r| r.theorem == TheoremId::Ds).unwrap();
    assert_eq!(ds.status, Status::Violated);
    assert_eq!(exit_code(&rows), exit::OK);

    let hh1 = rows.iter_mut().find(|r| r.theorem == TheoremId::Hh1).unwrap();
    hh1.status = Status::Nonconverged;
    assert_eq!(exit_code(&rows), exit::NONCONVERGED);
    rows.iter_mut().find(|r| r.theorem == TheoremId::Hh1).unwrap().status = Status::Violated;
    assert_eq!(exit_code(&rows), exit::VIOLATED);
}

#[test]
fn no_valid_scenario_is_a_config_error() {
    let cfg = config(
        r#"
        functions = ["sq"]
        etas = ["diff"]
        alphas = [1.0]
        ks = [1.0]
        rs = [-1.0]
        intervals = [[0.2, 1.0]]
        "#,
    );
    assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
}

#[test]
fn unknown_labels_are_rejected_up_front() {
    let cfg = config(
        r#"
        functions = ["sq", "nope(3)"]
        etas = ["diff"]
        alphas = [1.0]
        ks = [1.0]
        rs = [0.0]
        intervals = [[0.2, 1.0]]
        "#,
    );
    match run_sweep(&cfg) {
        Err(Error::Config(m)) => assert!(m.contains("nope(3)"), "{m}"),
        other => panic!("expected config error, got {other:?}"),
    }
}
