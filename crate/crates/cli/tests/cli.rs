use std::process::{Command, Output};

fn invmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invmean"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_arithmetic() {
    let o = invmean(&["eval", "--mean", "arithmetic", "--x", "1", "--y", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn eval_self_complementary_base_is_stolarsky() {
    let a = invmean(&[
        "eval",
        "--mean",
        "mt:logarithmic:0.5",
        "--x",
        "2",
        "--y",
        "9",
    ]);
    let b = invmean(&["eval", "--mean", "stolarsky:1:0.5", "--x", "2", "--y", "9"]);
    let a: f64 = stdout(&a).trim().parse().unwrap();
    let b: f64 = stdout(&b).trim().parse().unwrap();
    assert!((a - b).abs() <= 1e-12 * b);
}

#[test]
fn invariance_of_general_pair_passes() {
    let o = invmean(&[
        "check",
        "--what",
        "invariance",
        "--pair",
        "pair:arithmetic:arithmetic:harmonic:0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("seed 0"), "{s}");
    assert!(s.contains("PASS invariance"));
}

#[test]
fn failing_mean_check_exits_one_with_witness() {
    let o = invmean(&[
        "check",
        "--what",
        "mean",
        "--mean",
        "nt:arithmetic:arithmetic:harmonic:0.5",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["seed"], 0);
    let w = v["witness"].as_array().unwrap();
    let (x, y) = (w[0].as_f64().unwrap(), w[1].as_f64().unwrap());
    assert!(x.max(y) / x.min(y) >= 1e4);
    assert!(v["worst_violation"].as_f64().unwrap() > 1e-11);
    assert!(v["samples"].as_u64().unwrap() > 0);
}

#[test]
fn pair_mean_check_covers_both_components() {
    let o = invmean(&[
        "check",
        "--what",
        "mean",
        "--pair",
        "pair:geometric:min:max:0.25",
        "--json",
        "--grid",
        "1e-3:1e3:16",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("\"target\":\"k:(pair:geometric:min:max:0.25)\""));
}

#[test]
fn trace_and_monotone_checks() {
    let o = invmean(&["check", "--what", "trace", "--mean", "stolarsky:3:1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = invmean(&["check", "--what", "monotone", "--mean", "logarithmic"]);
    assert_eq!(o.status.code(), Some(0));
    let o = invmean(&[
        "check",
        "--what",
        "monotone",
        "--mean",
        "l:(xy:arithmetic:0.5:full)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    // trace check needs a homogeneous function
    let o = invmean(&["check", "--what", "trace", "--mean", "proj:mixed"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_check() {
    let o = invmean(&["check", "--what", "flags", "--mean", "arithmetic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("detail symmetric,homogeneous,monotone,strict"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        &["eval", "--mean", "stolarsky:1:1", "--x", "1", "--y", "2"][..],
        &["eval", "--mean", "quadratic", "--x", "1", "--y", "2"],
        &["eval", "--mean", "arithmetic", "--x", "0", "--y", "2"],
        &["check", "--what", "invariance", "--mean", "arithmetic"],
        &[
            "check",
            "--what",
            "mean",
            "--mean",
            "arithmetic",
            "--grid",
            "1:0:16",
        ],
        &[
            "check",
            "--what",
            "mean",
            "--mean",
            "arithmetic",
            "--grid",
            "nonsense",
        ],
        &[
            "complement",
            "--mean",
            "arithmetic",
            "--cone",
            "full",
            "--t",
            "1",
        ],
        &["counterexample", "--n", "2", "--t", "0.5", "--x", "10"],
        &["frobnicate"],
    ] {
        let o = invmean(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = invmean(&[
        "eval",
        "--mean",
        "mt:(logarithmic:0.5",
        "--x",
        "1",
        "--y",
        "2",
    ]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}

#[test]
fn complement_csv() {
    let o = invmean(&[
        "complement",
        "--mean",
        "arithmetic",
        "--c",
        "arithmetic",
        "--d",
        "harmonic",
        "--t",
        "0.5",
        "--emit",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "x,y,K,L,M(K;L),M(x;y),residual");
    let mut rows = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(v.len(), 7);
        // K + L = x + y for the arithmetic target
        assert!((v[2] + v[3] - v[0] - v[1]).abs() <= 1e-14 * (v[0] + v[1]));
        assert!(v[6] <= 1e-14);
        rows += 1;
    }
    assert_eq!(rows, 25);
    // description goes to stderr
    assert!(String::from_utf8_lossy(&o.stderr).contains("N_t"));
}

#[test]
fn complement_with_negative_t_on_cone() {
    let o = invmean(&[
        "complement",
        "--mean",
        "arithmetic",
        "--cone",
        "full",
        "--t",
        "-0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("xy:arithmetic:-0.5:full"));
}

#[test]
fn iterate_pythagorean_csv() {
    let o = invmean(&[
        "iterate",
        "--pair",
        "pairof:arithmetic:harmonic:geometric",
        "--x0",
        "1",
        "--y0",
        "4",
        "--emit",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<Vec<f64>> = s
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() <= 11);
    let last = rows.last().unwrap();
    assert!((last[1] - 2.0).abs() < 1e-13 && (last[2] - 2.0).abs() < 1e-13);
    for r in &rows {
        assert!((r[4] - 2.0).abs() < 1e-14);
    }
}

#[test]
fn iterate_projections_do_not_converge() {
    let o = invmean(&[
        "iterate",
        "--pair",
        "pairof:proj1:proj2:arithmetic",
        "--x0",
        "1",
        "--y0",
        "4",
        "--max-iter",
        "20",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["trace"]["converged"], false);
    assert_eq!(v["trace"]["iterations"], 20);
}

#[test]
fn counterexample_prints_ratio_and_limit() {
    let o = invmean(&[
        "counterexample",
        "--n",
        "3",
        "--t",
        "0.5",
        "--x",
        "1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["ratio"].as_f64().unwrap(), 1.0);
    assert_eq!(v["limit"].as_f64().unwrap(), 2.0);
    let o = invmean(&["counterexample", "--n", "4", "--t", "0.5", "--x", "1e12"]);
    let s = stdout(&o);
    let ratio: f64 = s
        .lines()
        .next()
        .unwrap()
        .strip_prefix("ratio ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(ratio > 1.0);
    assert!(s.contains("limit 3"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "check",
        "--what",
        "mean",
        "--mean",
        "nt:arithmetic:arithmetic:harmonic:0.25",
        "--seed",
        "42",
        "--json",
    ];
    let a = invmean(&args);
    let b = invmean(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\":42"));
}
