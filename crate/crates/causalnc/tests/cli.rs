use std::process::{Command, Output};

use causalnc_core::oracle::lemma_b_element;
use causalnc_core::states::DiracData;
use serde_json::Value;

fn causalnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalnc"))
        .args(args)
        .env_remove("CAUSALNC_TOL")
        .output()
        .expect("binary runs")
}

fn with_tol_env(args: &[&str], tol: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalnc"))
        .args(args)
        .env("CAUSALNC_TOL", tol)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn equator_pair(t: f64) -> String {
    format!(
        r#"{{"p": [0, 0], "q": [{t}, 0], "xi": {{"xi": [[1, 0], [1, 0]]}}, "phi": {{"xi": [[1, 0], [0, 1]]}}, "dirac": {{"d1": 1, "d2": 0}}}}"#
    )
}

#[test]
fn check_pure_exit_codes() {
    let ok = causalnc(&["check-pure", "--json", &equator_pair(2.0)]);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["schema"], "causalnc/1");
    assert_eq!(v["related"], true);
    assert!((v["bound_required"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let no = causalnc(&["check-pure", "--json", &equator_pair(1.0)]);
    assert_eq!(code(&no), 1);
    assert_eq!(json(&no)["reason"], "SPEED_BOUND");

    let missing = causalnc(&[
        "check-pure",
        "--json",
        r#"{"p": [0, 0], "q": [2, 0], "xi": {"bloch": [1, 0, 0]}, "phi": {"bloch": [0, 1, 0]}}"#,
    ]);
    assert_eq!(code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("dirac"));

    assert_eq!(code(&causalnc(&["check-pure", "--json", "{not json"])), 2);
    assert_eq!(code(&causalnc(&["check-pure"])), 2);
}

#[test]
fn input_file_and_atomic_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.json");
    let output = dir.path().join("verdict.json");
    std::fs::write(&input, equator_pair(2.0)).unwrap();
    let o = causalnc(&["check-pure", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["related"], true);

    let both = causalnc(&["check-pure", "--input", input.to_str().unwrap(), "--json", "{}"]);
    assert_eq!(code(&both), 2);
    let absent = causalnc(&["check-pure", "--input", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(code(&absent), 2);
}

#[test]
fn check_mixed_examples() {
    let mixed = |q: &str, sigma: &str| {
        format!(
            r#"{{"p": [0, 0], "q": {q}, "rho": {{"bloch": [0, 0, 0]}}, "sigma": {{"bloch": {sigma}}}, "dirac": {{"d1": 1, "d2": 0}}}}"#
        )
    };
    assert_eq!(code(&causalnc(&["check-mixed", "--json", &mixed("[1, 0.3]", "[0, 0, 0]")])), 0);
    assert_eq!(code(&causalnc(&["check-mixed", "--json", &mixed("[2, 0]", "[1, 0, 0]")])), 0);
    let no = causalnc(&["check-mixed", "--json", &mixed("[1, 0]", "[1, 0, 0]")]);
    assert_eq!(code(&no), 1);
    assert_eq!(json(&no)["reason"], "SPEED_BOUND");
    assert_eq!(code(&causalnc(&["check-mixed", "--json", &mixed("[1, 0]", "[1, 1, 0]")])), 2);
}

fn element(a: &str, b: &str, re: &str, im: &str) -> String {
    serde_json::json!({
        "element": {"a": a, "b": b, "c": {"re": re, "im": im}},
        "dirac": {"d1": 1, "d2": 0}
    })
    .to_string()
}

#[test]
fn cone_check_examples() {
    let grid = "-1,1,-1,1,11,11";
    let t = causalnc(&["cone-check", "--json", &element("t", "t", "0", "0"), "--grid", grid]);
    assert_eq!(code(&t), 0);
    assert_eq!(json(&t)["nodes_checked"], 121);

    let x = causalnc(&["cone-check", "--json", &element("x", "x", "0", "0"), "--grid", grid]);
    assert_eq!(code(&x), 1);
    let v = json(&x);
    assert!(v["first_violation"]["t"].is_number());
    assert!(v["first_violation"]["min_eigenvalue"].as_f64().unwrap() < 0.0);

    let dirac = DiracData::new(1.0, 0.0).unwrap();
    let lb = lemma_b_element(1.0, 2.0, 0.3, 0.5, dirac);
    let input = element(&lb.a.to_string(), &lb.b.to_string(), &lb.c_re.to_string(), &lb.c_im.to_string());
    let o = causalnc(&["cone-check", "--json", &input, "--grid", "-3,3,-3,3,31,31"]);
    assert_eq!(code(&o), 0, "{input}: {}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn cone_check_input_errors() {
    let el = element("t", "t", "0", "0");
    assert_eq!(code(&causalnc(&["cone-check", "--json", &el, "--grid", "0,1,0,1,3"])), 2);
    assert_eq!(code(&causalnc(&["cone-check", "--json", &element("t +", "t", "0", "0")])), 2);
    assert_eq!(code(&causalnc(&["cone-check", "--json", &element("log(x)", "t", "0", "0")])), 2);
    assert_eq!(code(&with_tol_env(&["cone-check", "--json", &el], "garbage")), 2);
    assert_eq!(code(&causalnc(&["cone-check", "--json", &el, "--tol", "-1"])), 2);
    // a huge tolerance accepts an indefinite element
    let loose = causalnc(&["cone-check", "--json", &element("x", "x", "0", "0"), "--tol", "10"]);
    assert_eq!(code(&loose), 0);
}

#[test]
fn witness_certificate() {
    let o = causalnc(&["witness", "--json", &equator_pair(1.0)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["valid"], true);
    assert!((v["epsilon"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert!(v["margin"].as_f64().unwrap() > 0.0);
    let samples = v["psd_samples"].as_array().unwrap();
    assert_eq!(samples.len(), 64);
    for key in ["s", "c1", "c2", "c3", "c4"] {
        assert!(samples[0][key].is_number(), "{key}");
    }
    let few = causalnc(&["witness", "--json", &equator_pair(1.0), "--n", "8"]);
    assert_eq!(json(&few)["psd_samples"].as_array().unwrap().len(), 8);

    // related pairs have no witness
    assert_eq!(code(&causalnc(&["witness", "--json", &equator_pair(2.0)])), 2);
}

#[test]
fn mixed_witness_certificate() {
    let input = r#"{"p": [0, 0], "q": [1, 0], "rho": {"bloch": [0.2, 0, 0]}, "sigma": {"bloch": [0, 0.9, 0]}, "dirac": {"d1": 1, "d2": 0}}"#;
    let o = causalnc(&["witness", "--json", input]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&o)["margin"].as_f64().unwrap() > 0.0);
}

fn parse_csv(body: &[u8]) -> Vec<[f64; 5]> {
    let text = String::from_utf8(body.to_vec()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,t,x,theta,z"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|f| f.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .collect()
}

#[test]
fn plan_path_csv() {
    let rows = parse_csv(&causalnc(&["plan-path", "--json", &equator_pair(3.0), "--n", "100"]).stdout);
    assert_eq!(rows.len(), 101);
    let target = std::f64::consts::FRAC_PI_2;
    // ramps at unit rate until π/2, then plateaus
    for r in &rows {
        let expect = r[1].min(target);
        assert!((r[3] - expect).abs() < 1e-9, "{r:?}");
        assert!(r[4].abs() < 1e-12);
    }

    let still = r#"{"p": [0, 0], "q": [1, 0.5], "xi": {"bloch": [0, 0.6, 0.8]}, "phi": {"bloch": [0, 0.6, 0.8]}, "dirac": {"d1": 1, "d2": 0}}"#;
    let rows = parse_csv(&causalnc(&["plan-path", "--json", still, "--n", "10"]).stdout);
    assert!(rows.iter().all(|r| r[3] == rows[0][3]));

    // proper time exactly at the bound
    let exact = equator_pair(std::f64::consts::FRAC_PI_2);
    let rows = parse_csv(&causalnc(&["plan-path", "--json", &exact]).stdout);
    assert!((rows.last().unwrap()[3] - target).abs() < 1e-10);

    let no = causalnc(&["plan-path", "--json", &equator_pair(1.0)]);
    assert_eq!(code(&no), 1);
    assert_eq!(json(&no)["related"], false);
}

#[test]
fn selftest_quick_and_corrupted_tolerance() {
    let start = std::time::Instant::now();
    let o = causalnc(&["selftest", "--quick", "--seed", "3"]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);

    let bad = with_tol_env(&["selftest", "--quick"], "1e3");
    assert_eq!(code(&bad), 1);
    let failed: Vec<String> = json(&bad)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(failed.contains(&"cone-reference-elements".to_string()), "{failed:?}");
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cone-reference-elements"));

    let garbage = with_tol_env(&["selftest", "--quick"], "oops");
    assert_eq!(code(&garbage), 1);
    assert!(String::from_utf8_lossy(&garbage.stderr).contains("tolerance"));
}

#[test]
fn deterministic_output() {
    let a = causalnc(&["selftest", "--quick", "--seed", "9"]);
    let b = causalnc(&["selftest", "--quick", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}
