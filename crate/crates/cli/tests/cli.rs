use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcd")).args(args).output().unwrap()
}

fn pcd_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcd")).args(args).env("PCD_THREADS", threads).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = pcd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn err_json(args: &[&str], code: i32) -> Value {
    let out = pcd(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    let text = String::from_utf8(out.stderr).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "{text}");
    serde_json::from_str(&text).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn pr_values_and_errors() {
    let v = ok_json(&["pr", "--r", "1.5"]);
    assert!((v["p_r"].as_f64().unwrap() - 0.7413).abs() < 1e-4);
    let e = err_json(&["pr", "--r", "1.0"], 2);
    assert_eq!(e["error"], "usage");
    assert!(e["message"].as_str().unwrap().contains("exceed 1"));
    let a = ok_json(&["pr", "--r", "1.25"])["p_r"].as_f64().unwrap();
    let b = ok_json(&["pr", "--r", "1.25", "--tol", "1e-8"])["p_r"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-6);
    err_json(&["pr", "--r", "2"], 2);
    err_json(&["pr", "--r", "abc"], 2);
}

#[test]
fn pr_curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let v = ok_json(&["pr", "--curve", path.to_str().unwrap()]);
    assert_eq!(v["curve"].as_array().unwrap().len(), 10);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(dir.path().join("curve.csv.manifest.json").exists());
}

#[test]
fn gamma_examples() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.csv", "x,y\n0.5,0.3\n");
    let v = ok_json(&["gamma", "--points", &one, "--r", "1.5"]);
    assert_eq!(v["gamma"], 1);
    assert_eq!(v["n"], 1);
    // points hugging the three vertices of the equilateral triangle
    let three = write(dir.path(), "three.csv", "0.01,0.005\n0.99,0.005\n0.5,0.85\n");
    let v = ok_json(&["gamma", "--points", &three, "--r", "1"]);
    assert_eq!(v["gamma"], 3);
    assert_eq!(v["arcs"], 0);
    assert_eq!(ok_json(&["gamma", "--points", &three, "--r", "1", "--bruteforce"])["gamma"], 3);
    assert_eq!(ok_json(&["gamma", "--points", &three, "--r", "inf"])["gamma"], 1);
    let params = write(dir.path(), "p.json", r#"{"r": "inf", "M_special": "centroid"}"#);
    assert_eq!(ok_json(&["gamma", "--points", &three, "--params", &params])["gamma"], 1);
    let right = write(dir.path(), "right.csv", "0.1,0.1\n");
    let v = ok_json(&["gamma", "--points", &right, "--r", "2", "--triangle", "0,0,1,0,0,1"]);
    assert_eq!(v["gamma"], 1);
}

#[test]
fn gamma_errors() {
    let dir = tempfile::tempdir().unwrap();
    let outside = write(dir.path(), "o.csv", "5,5\n");
    err_json(&["gamma", "--points", &outside, "--r", "2"], 2);
    let bad = write(dir.path(), "b.csv", "0.5,zz\n");
    assert_eq!(err_json(&["gamma", "--points", &bad, "--r", "2"], 4)["error"], "io");
    let pts = write(dir.path(), "p.csv", "0.5,0.3\n");
    err_json(&["gamma", "--points", &pts, "--r", "2", "--triangle", "0,0,1,1,2,2"], 3);
    err_json(&["gamma", "--points", &pts, "--r", "2", "--M", "t1"], 2);
    err_json(&["gamma", "--points", &pts], 2);
    // no partial output on failure
    let out = dir.path().join("res.json");
    err_json(&["gamma", "--points", &outside, "--r", "2", "--out", out.to_str().unwrap()], 2);
    assert!(!out.exists());
}

#[test]
fn law_examples() {
    let v = ok_json(&["law", "--r", "2", "--M", "centroid"]);
    assert_eq!(v["law"]["law"], "degenerate");
    assert_eq!(v["law"]["value"], 1);
    let v = ok_json(&["law", "--r", "1.25", "--M", "t2"]);
    assert_eq!(v["law"]["law"], "two_plus_bernoulli");
    assert!((v["law"]["q"].as_f64().unwrap() - 0.3486).abs() < 1e-3);
    let v = ok_json(&["law", "--r", "1.25", "--M", "centroid", "--Jm", "5"]);
    assert_eq!(v["law"]["law"], "degenerate");
    assert_eq!(v["law"]["value"], 15);
    let v = ok_json(&["law", "--r", "5/4", "--M", "bary:3/10,1/2,1/5"]);
    assert_eq!(v["law"]["value"], 3);
    let v = ok_json(&["law", "--r", "5/4", "--M", "point:0.6,0.17320508075688773"]);
    assert_eq!(v["law"]["value"], 3);
    let v = ok_json(&["law", "--r", "3/2", "--M", "centroid"]);
    assert!((v["mean"].as_f64().unwrap() - 2.2587).abs() < 1e-3);
}

#[test]
fn tr_vertices() {
    let v = ok_json(&["tr", "--r", "5/4"]);
    let t2 = &v["vertices"][1];
    assert!((t2[0].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!((t2[1].as_f64().unwrap() - 3f64.sqrt() / 10.0).abs() < 1e-12);
    assert_eq!(ok_json(&["tr", "--r", "2"])["empty"], true);
    assert_eq!(ok_json(&["tr", "--r", "3/2"])["degenerate"], true);
}

#[test]
fn simulate_table_one_left() {
    let v = ok_json(&["simulate", "--r", "2", "--M", "centroid", "--n", "20", "--replicates", "1000", "--seed", "5"]);
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["k"], 1);
    assert_eq!(rows[0]["count"], 1000);
    assert!(v.get("wall_time_s").is_none());
}

#[test]
fn simulate_files_manifest_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = out.to_str().unwrap();
    let args = ["simulate", "--r", "5/4", "--M", "t2", "--n", "10,50", "--replicates", "200", "--seed", "9", "--out", o];
    assert!(pcd(&args).status.success());
    let first = fs::read(&out).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,k,count,phat,stderr");
    assert_eq!(text.lines().count(), 1 + 2 * 3);

    let manifest = dir.path().join("t.csv.manifest.json");
    let m: Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "simulate");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["config"]["r"], "5/4");

    let saved = dir.path().join("saved.json");
    fs::copy(&manifest, &saved).unwrap();
    let again = dir.path().join("again.csv");
    let o2 = again.to_str().unwrap();
    assert!(pcd(&["simulate", "--config", saved.to_str().unwrap(), "--out", o2]).status.success());
    assert_eq!(fs::read(&again).unwrap(), first);

    let cfg = write(dir.path(), "cfg.json", r#"{"r": "5/4", "M": "t2", "n": [10, 50], "replicates": 200, "seed": 9}"#);
    let third = dir.path().join("third.csv");
    assert!(pcd(&["simulate", "--config", &cfg, "--out", third.to_str().unwrap()]).status.success());
    assert_eq!(fs::read(&third).unwrap(), first);
}

#[test]
fn simulate_thread_count_is_irrelevant() {
    let args = ["simulate", "--r", "3/2", "--n", "50,300", "--replicates", "150", "--seed", "77"];
    let a = pcd_env(&args, "1").stdout;
    assert!(!a.is_empty());
    assert_eq!(a, pcd_env(&args, "4").stdout);
    assert_eq!(a, pcd_env(&args, "16").stdout);
    let bad = pcd_env(&args, "zero");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn simulate_d3_and_multi() {
    let v = ok_json(&["simulate", "--r", "4/3", "--d", "3", "--n", "30", "--replicates", "50", "--seed", "1"]);
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), 4);
    err_json(&["simulate", "--r", "4/3", "--d", "3", "--M", "t1", "--n", "30"], 2);
    let v = ok_json(&["simulate", "--r", "3/2", "--anchors", "6", "--n", "40", "--replicates", "20", "--seed", "2"]);
    let total: u64 = v["tables"][0]["rows"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 20);
    let dir = tempfile::tempdir().unwrap();
    let ex = dir.path().join("ex.csv");
    ok_json(&["simulate", "--r", "3/2", "--n", "1,2,100", "--replicates", "100", "--seed", "3", "--extrema-out", ex.to_str().unwrap()]);
    let text = fs::read_to_string(&ex).unwrap();
    let fr: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(&fr[..2], &[0.0, 0.0]);
    err_json(&["simulate", "--r", "3/2", "--n", "0"], 2);
    err_json(&["simulate", "--r", "3/2"], 2);
    err_json(&["simulate", "--config", "/missing/cfg.json"], 4);
}

#[test]
fn multi_examples() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.csv", "0,0\n1,0\n0.5,0.8660254037844386\n");
    let data = write(dir.path(), "data.csv", "0.5,0.3\n0.2,0.1\n0.7,0.2\n0.5,0.6\n");
    let single = ok_json(&["gamma", "--points", &data, "--r", "1.2"]);
    let multi = ok_json(&["multi", "--anchors", &tri, "--data", &data, "--r", "1.2"]);
    assert_eq!(multi["total_gamma"], single["gamma"]);

    let far = write(dir.path(), "far.csv", "5,5\n6,6\n-1,3\n");
    let v = ok_json(&["multi", "--anchors", &tri, "--data", &far, "--r", "1.2"]);
    assert_eq!(v["total_gamma"], 0);
    assert_eq!(v["discarded"], 3);

    // seeded 10 anchors / 200 data in the unit square
    let mut s: u64 = 12345;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    let anchors: String = (0..10).map(|_| format!("{},{}\n", next(), next())).collect();
    let pts: String = (0..200).map(|_| format!("{},{}\n", next(), next())).collect();
    let a = write(dir.path(), "a.csv", &anchors);
    let d = write(dir.path(), "d.csv", &pts);
    let out = dir.path().join("m.json");
    let tri_out = dir.path().join("dt.json");
    let st = pcd(&[
        "multi", "--anchors", &a, "--data", &d, "--r", "3/2", "--out", out.to_str().unwrap(),
        "--triangulation-out", tri_out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["kept"].as_u64().unwrap() + v["discarded"].as_u64().unwrap(), 200);
    let sum: u64 = v["cells"].as_array().unwrap().iter().map(|c| c["gamma"].as_u64().unwrap()).sum();
    assert_eq!(v["total_gamma"].as_u64().unwrap(), sum);
    let dt: Value = serde_json::from_str(&fs::read_to_string(&tri_out).unwrap()).unwrap();
    assert_eq!(dt["points"].as_array().unwrap().len(), 10);
    assert!(dir.path().join("m.json.manifest.json").exists());

    let line = write(dir.path(), "line.csv", "0,0\n1,1\n2,2\n");
    err_json(&["multi", "--anchors", &line, "--data", &data, "--r", "1.2"], 3);
}

#[test]
fn usage_errors_are_single_line_json() {
    let e = err_json(&["bogus"], 2);
    assert_eq!(e["error"], "usage");
    err_json(&["pr", "--r", "1.5", "--tol", "-1"], 2);
    err_json(&["law", "--M", "t9", "--r", "1.2"], 2);
    let v = ok_json(&["version"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}
