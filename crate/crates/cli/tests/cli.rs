use std::fs;
use std::process::{Command, Output};

use ctxfrac::notation::{parse_scenario, parse_state};
use ctxfrac::{born_model, contextual_fraction, EmpiricalModel};

fn ctxfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxfrac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixtures_then_cf() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(ctxfrac(&["fixtures", "--out", d]).status.success());
    for (name, cf) in [
        ("table1a", "CF = 0\n"),
        ("table1b", "CF = 1\n"),
        ("table1c", "CF = 0.5\n"),
    ] {
        let path = dir.path().join(format!("{name}.json"));
        let o = ctxfrac(&["cf", "--model", path.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(stdout(&o).starts_with(cf), "{name}: {}", stdout(&o));
    }
}

#[test]
fn born_then_cf_matches_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let summary = dir.path().join("cf.json");
    let (state, scenario) = ("diag:pi/3,pi/5", "bell:pi8,5pi8;x,bloch:pi/3,pi/7");
    let o = ctxfrac(&[
        "born",
        "--state",
        state,
        "--scenario",
        scenario,
        "--out",
        model.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ctxfrac(&[
        "cf",
        "--model",
        model.to_str().unwrap(),
        "--out",
        summary.to_str().unwrap(),
    ]);
    assert!(o.status.success());

    let psi = parse_state(state).unwrap();
    let direct = born_model(&psi, &parse_scenario(scenario, 2).unwrap()).unwrap();
    let from_file = EmpiricalModel::from_json(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(direct, from_file);
    let want = contextual_fraction(&direct).unwrap().cf;
    let got: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(got["cf"].as_f64().unwrap().to_bits(), want.to_bits());
}

#[test]
fn witness_file_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ctxfrac(&["fixtures", "--out", d]);
    let model = dir.path().join("table1c.json");
    let witness = dir.path().join("w.json");
    let o = ctxfrac(&[
        "cf",
        "--model",
        model.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let w: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w["weights"].as_array().unwrap().len(), 8);
    assert!((w["total_mass"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn printed_values() {
    let o = ctxfrac(&["distinguished-cf", "--state", "ghz:2"]);
    assert_eq!(
        stdout(&o),
        "theta = 1.570796\nS_ent = 1.000000\nCF = 0.414214\n"
    );
    assert_eq!(stdout(&ctxfrac(&["threshold"])), "0.600876\n");
    let o = ctxfrac(&["entropy", "--state", "ghz:2"]);
    assert!(stdout(&o).starts_with("S_ent = 1\n"));
}

#[test]
fn csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = out.to_str().unwrap();
    let header = |args: &[&str]| {
        assert!(ctxfrac(args).status.success());
        fs::read_to_string(&out)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_owned()
    };
    assert_eq!(
        header(&["sweep-equatorial", "--grid", "8", "--out", o]),
        "phi1,phi2,cf"
    );
    assert_eq!(
        header(&["sweep-diagonal", "--grid", "8", "--out", o]),
        "theta,phi,entropy,cf"
    );
    assert_eq!(
        header(&["curve-theta", "--points", "9", "--out", o]),
        "theta,entropy,cf"
    );
    assert_eq!(
        header(&["monotonicity", "--samples", "5", "--out", o]),
        "seed,samples,violations"
    );
}

#[test]
fn mirrored_curve_covers_zero_to_pi() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    ctxfrac(&[
        "curve-theta",
        "--points",
        "5",
        "--mirror",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    let last: f64 = rows[8].split(',').next().unwrap().parse().unwrap();
    assert!((last - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(ctxfrac(&["--help"]).status.code(), Some(0));
    assert_eq!(ctxfrac(&["--version"]).status.code(), Some(0));
    assert_eq!(ctxfrac(&[]).status.code(), Some(1));
    assert_eq!(ctxfrac(&["threshold", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        ctxfrac(&["entropy", "--state", "ghz:3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ctxfrac(&["cf", "--model", "/nonexistent/m.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ctxfrac(&["sweep-diagonal", "--grid", "0"]).status.code(),
        Some(1)
    );

    // 21 binary measurements exceed the global-assignment guard
    let dir = tempfile::tempdir().unwrap();
    let labels: Vec<String> = (0..21).map(|i| format!("m{i}")).collect();
    let doc = serde_json::json!({
        "measurements": labels,
        "outcome_arity": 2,
        "contexts": labels.iter().map(|l| vec![l]).collect::<Vec<_>>(),
        "rows": vec![vec![0.5, 0.5]; 21],
    });
    let path = dir.path().join("big.json");
    fs::write(&path, doc.to_string()).unwrap();
    let o = ctxfrac(&["cf", "--model", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn invalid_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"measurements":["a","b"],"outcome_arity":2,"contexts":[["a","b"]],"rows":[[0.5,0.5,0.5,0.5]]}"#,
    )
    .unwrap();
    let o = ctxfrac(&["cf", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn in_process_run_matches_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ctxfrac_cli::run(
        ["ctxfrac", "schmidt", "--state", "ghz:2"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(out, ctxfrac(&["schmidt", "--state", "ghz:2"]).stdout);
}

#[test]
fn value_formatting() {
    use ctxfrac_cli::fmt_value;
    assert_eq!(fmt_value(0.5), "0.5");
    assert_eq!(fmt_value(1.0), "1");
    assert_eq!(fmt_value(-1e-12), "0");
    assert_eq!(fmt_value(0.41421356237), "0.414213562");
}
