use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_eorient"));
    c.env_remove("EO_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen(name: &str, family: &str, params: &str) -> String {
    let path = tmp(name);
    let p = path.to_str().unwrap();
    stdout(&["gen", "--family", family, "--params", params, "-o", p]);
    p.to_string()
}

#[test]
fn count_output_is_exact_json() {
    let k5 = gen("k5_count.txt", "complete", "5");
    assert_eq!(
        stdout(&["count", &k5, "--method", "cycles"]),
        "{\"value\":\"24\",\"method\":\"cycle_space\"}\n"
    );
    for method in ["brute", "dp"] {
        let v: Value = serde_json::from_str(&stdout(&["count", &k5, "--method", method])).unwrap();
        assert_eq!(v["value"], "24");
    }
    let timed: Value = serde_json::from_str(&stdout(&["count", &k5, "--timing"])).unwrap();
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn poly_matches_golden_coefficients() {
    let k5 = gen("k5_poly.txt", "complete", "5");
    let v: Value = serde_json::from_str(&stdout(&["poly", &k5])).unwrap();
    assert_eq!(v["degree"], 20);
    let coeffs = v["coeffs"].as_object().unwrap();
    let expected = [
        ("0", "243/32"),
        ("6", "45/16"),
        ("8", "45/32"),
        ("10", "3/8"),
        ("12", "45/32"),
        ("14", "45/16"),
        ("20", "243/32"),
    ];
    assert_eq!(coeffs.len(), expected.len());
    for (k, c) in expected {
        assert_eq!(coeffs[k], c);
    }
}

#[test]
fn roots_moments_entropy() {
    let k5 = gen("k5_misc.txt", "complete", "5");
    let csv = stdout(&["roots", &k5]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,abs"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| (r[2] - 1.0).abs() < 1e-9));

    let m: Value = serde_json::from_str(&stdout(&["moments", &k5, "-k", "6"])).unwrap();
    assert_eq!(m["moments"]["6"], "-1/9");
    assert_eq!(m["moments"]["3"], "0");

    let e: Value = serde_json::from_str(&stdout(&["entropy", &k5])).unwrap();
    assert_eq!(e["count"], "24");
    assert!((e["entropy"].as_f64().unwrap() - 24f64.ln() / 5.0).abs() < 1e-14);

    let curve = stdout(&["pcurve", &k5, "--u", "1/2,1,2"]);
    let values: Vec<f64> = curve
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn local_statistics() {
    let t = gen("torus44.txt", "torus", "4,4");
    let t6 = gen("torus66.txt", "torus", "6,6");
    assert_eq!(stdout(&["tv", &t, &t, "-r", "2"]), "\"0\"\n");
    assert_eq!(stdout(&["tv", &t, &t6, "-r", "1"]), "\"0\"\n");
    let ad = gen("ad2.txt", "aztec", "2");
    assert_eq!(stdout(&["tv", &ad, &t, "-r", "1"]), "\"2/3\"\n");
    let p: Value = serde_json::from_str(&stdout(&["local", &t, "-r", "2"])).unwrap();
    let profile = p["profile"].as_object().unwrap();
    assert_eq!(profile.len(), 1);
    assert_eq!(profile.values().next().unwrap(), "1");
}

#[test]
fn nfg_certificate_passes() {
    let k5 = gen("k5_nfg.txt", "complete", "5");
    let v: Value = serde_json::from_str(&stdout(&["nfg", "verify", &k5])).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["z"], "24");
    assert_eq!(v["z_gauged"], "24");
    assert_eq!(v["count"], "24");
}

#[test]
fn sequence_tables() {
    let v: Value = serde_json::from_str(&stdout(&[
        "sequence", "--family", "cycle", "--sizes", "4,8,16",
    ]))
    .unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(v["reference_constant"]["value"], 0.0);
    let csv = stdout(&[
        "sequence", "--family", "torus", "--sizes", "3,4", "-o", "csv",
    ]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().contains(",148,"));
}

#[test]
fn outputs_are_deterministic() {
    let g = tmp("random.txt");
    let g = g.to_str().unwrap();
    stdout(&[
        "gen",
        "--family",
        "random_even",
        "--params",
        "9,3,5",
        "--seed",
        "5",
        "-o",
        g,
    ]);
    let first = std::fs::read_to_string(g).unwrap();
    stdout(&[
        "gen",
        "--family",
        "random_even",
        "--params",
        "9,3,5",
        "--seed",
        "5",
        "-o",
        g,
    ]);
    assert_eq!(std::fs::read_to_string(g).unwrap(), first);
    for args in [
        vec!["roots", g],
        vec!["poly", g],
        vec!["entropy", g],
        vec!["local", g, "-r", "2"],
        vec![
            "sequence", "--family", "aztec", "--sizes", "1,2,3", "--curve", "1/2:2:4", "-r", "1",
        ],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{args:?}");
    }
}

#[test]
fn generated_files_round_trip() {
    for (family, params) in [
        ("torus", "3,4"),
        ("aztec", "2"),
        ("cycle", "6"),
        ("circulant", "7,1,2"),
    ] {
        let text = gen(&format!("rt_{family}.txt"), family, params);
        let json_path = tmp(&format!("rt_{family}.json"));
        let json_text = stdout(&["gen", "--family", family, "--params", params, "--json"]);
        std::fs::write(&json_path, json_text).unwrap();
        let j = json_path.to_str().unwrap();
        for cmd in [
            vec!["count"],
            vec!["poly"],
            vec!["entropy"],
            vec!["local", "-r", "1"],
        ] {
            let mut a = cmd.clone();
            a.insert(1, &text);
            let mut b = cmd.clone();
            b.insert(1, j);
            let (x, y) = (stdout(&a), stdout(&b));
            if cmd[0] == "entropy" {
                // only the graph id (the file name) differs
                let (mut x, mut y): (Value, Value) = (
                    serde_json::from_str(&x).unwrap(),
                    serde_json::from_str(&y).unwrap(),
                );
                x["graph"] = Value::Null;
                y["graph"] = Value::Null;
                assert_eq!(x, y);
            } else {
                assert_eq!(x, y, "{cmd:?} on {family}");
            }
        }
    }
}

#[test]
fn errors_and_exit_codes() {
    let k6 = gen("k6.txt", "complete", "6");
    let out = run(&["count", &k6]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "EulerError");

    let out = run(&["count", &k6, "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--frobnicate"));
    assert_eq!(run(&["explode"]).status.code(), Some(2));

    let bad = tmp("loop.txt");
    std::fs::write(&bad, "2 1\n0 0\n").unwrap();
    let out = run(&["count", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "LoopError");

    let k5 = gen("k5_err.txt", "complete", "5");
    let out = bin()
        .args(["count", &k5, "--method", "brute"])
        .env("EO_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "CapExceeded");
    let out = run(&["tv", &k5, &k5, "-r", "1", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
