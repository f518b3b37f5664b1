use std::process::{Command, Output};

use serde_json::Value;

fn apseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apseq"))
        .args(args)
        .env_remove("APSEQ_CACHE_DIR")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = apseq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_cyclic_twelve() {
    let v = json(&["count", "--set", "cyclic:12", "--k", "3", "--json"]);
    assert_eq!(v["command"], "count");
    assert_eq!(v["result"]["exact"], 120);
    assert_eq!(v["result"]["set"], "cyclic:12");
    assert_eq!(v["params"]["method"], "closed");
    assert!(v["tool_version"].is_string());
    assert!(v.get("seed").is_none());
}

#[test]
fn count_methods_agree() {
    let closed = json(&["count", "--set", "abelian:2x4", "--k", "3", "--json"]);
    let brute = json(&[
        "count",
        "--set",
        "abelian:2x4",
        "--k",
        "3",
        "--method",
        "brute",
        "--json",
    ]);
    assert_eq!(closed["result"]["exact"], 32);
    assert_eq!(brute["result"]["exact"], 32);
    let bounds = json(&[
        "count",
        "--set",
        "interval:7",
        "--k",
        "4",
        "--method",
        "bounds",
        "--json",
    ]);
    assert!(bounds["result"].get("exact").is_none());
    assert_eq!(bounds["result"]["lower"], 7);
    assert_eq!(bounds["result"]["upper"], 11);
    let plain = apseq(&["count", "--set", "interval:7", "--k", "4"]);
    assert_eq!(stdout(&plain), "10\n");
}

#[test]
fn las_examples() {
    let out = apseq(&["las", "--set", "interval:7", "--sequence", "2,7,1,6,3,4,5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "4\n");

    let v = json(&[
        "las",
        "--set",
        "cyclic:7",
        "--sequence",
        "0,2,6,1,3,5,4",
        "--witness",
        "--json",
    ]);
    assert_eq!(v["result"]["length"], 4);
    assert_eq!(
        v["result"]["witness"]["progression"]["base"],
        serde_json::json!([0])
    );
    assert_eq!(
        v["result"]["witness"]["progression"]["step"],
        serde_json::json!([6])
    );
    assert_eq!(
        v["result"]["witness"]["positions"],
        serde_json::json!([0, 2, 5, 6])
    );

    let v = json(&[
        "las",
        "--set",
        "cyclic:7",
        "--sequence",
        "0,2,6,1,3,5,4",
        "--json",
    ]);
    assert!(v["result"].get("witness").is_none());
}

#[test]
fn las_coordinates_and_indices_agree() {
    let by_coords = json(&[
        "las",
        "--set",
        "interval:2,2",
        "--coords",
        "1,1;2,2;1,2;2,1",
        "--json",
    ]);
    let by_index = json(&[
        "las",
        "--set",
        "interval:2,2",
        "--sequence",
        "0,3,1,2",
        "--json",
    ]);
    assert_eq!(by_coords["result"], by_index["result"]);
    assert_eq!(by_coords["result"]["length"], 2);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["count", "--set", "cyclic:12"],
        &["count", "--set", "torus:5", "--k", "3"],
        &["count", "--set", "cyclic:5", "--k", "1x"],
        &["las", "--set", "cyclic:3", "--sequence", "0,1,1"],
        &["las", "--set", "cyclic:3"],
        &["simulate", "--set", "cyclic:5", "--samples", "10"],
        &[
            "simulate",
            "--set",
            "cyclic:5",
            "--seed",
            "1",
            "--k",
            "3",
            "--coverage",
        ],
        &["predict", "--set", "abelian:2x4"],
        &["nonabelian", "--group", "quaternion:2", "--k", "3"],
        &["tables", "--family", "cyclic", "--max-n", "0"],
    ] {
        let out = apseq(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
        assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
}

#[test]
fn budget_errors_exit_two() {
    for args in [
        &[
            "count",
            "--set",
            "interval:100",
            "--k",
            "3",
            "--method",
            "brute",
        ][..],
        &["enumerate", "--set", "cyclic:11"],
        &["tables", "--family", "interval", "--max-n", "13"],
        &["nonabelian", "--group", "dihedral:101", "--k", "3"],
        &["count", "--set", "cyclic:100000000000", "--k", "3"],
    ] {
        let out = apseq(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let out = apseq(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("enumerate"));
}

#[test]
fn enumerate_csv_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("row.csv");
    let out = apseq(&[
        "enumerate",
        "--set",
        "cyclic:7",
        "--csv",
        csv_path.to_str().unwrap(),
        "--cache",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let expected = "n,k1,k2,k3,k4,k5,k6,k7\n7,0,0,462,3150,1176,210,42\n";
    assert_eq!(stdout(&out), expected);
    assert_eq!(std::fs::read_to_string(&csv_path).unwrap(), expected);
    let cached: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
        .collect();
    assert_eq!(cached.len(), 1);
    let file: Value =
        serde_json::from_str(&std::fs::read_to_string(cached[0].path()).unwrap()).unwrap();
    for key in ["spec", "counts", "tool_version", "checksum"] {
        assert!(file.get(key).is_some(), "cache file lacks {key}");
    }

    let via_env = Command::new(env!("CARGO_BIN_EXE_apseq"))
        .args(["enumerate", "--set", "cyclic:7", "--json"])
        .env("APSEQ_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&via_env.stdout).unwrap();
    assert_eq!(
        v["result"]["counts"],
        serde_json::json!([0, 0, 462, 3150, 1176, 210, 42])
    );
    assert_eq!(v["result"]["total"], 5040);
}

#[test]
fn enumerate_engines_agree() {
    let a = json(&["enumerate", "--set", "interval:7", "--json"]);
    let b = json(&[
        "enumerate",
        "--set",
        "interval:7",
        "--engine",
        "direct",
        "--no-symmetry",
        "--json",
    ]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(
        a["result"]["counts"],
        serde_json::json!([0, 104, 3232, 1480, 198, 24, 2])
    );
}

#[test]
fn predict_reports_the_window() {
    let v = json(&["predict", "--set", "cyclic:3", "--json"]);
    let r = &v["result"];
    assert!((r["value"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    assert_eq!(r["window"], serde_json::json!([3, 3]));
    assert_eq!(r["boundary_clamped"], false);
    assert!(r["asymptotic"].is_number());
    assert!(r["residual"].is_number());

    let smooth = json(&[
        "predict",
        "--set",
        "interval:100",
        "--mode",
        "smooth",
        "--json",
    ]);
    assert_eq!(smooth["params"]["mode"], "smooth");
    let out = apseq(&["predict", "--set", "cyclic:100", "--mode", "smooth"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_outputs() {
    let v = json(&[
        "simulate",
        "--set",
        "cyclic:12",
        "--samples",
        "200",
        "--seed",
        "4",
        "--json",
    ]);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["params"]["seed"], 4);
    assert_eq!(v["result"]["samples"], 200);
    let total: u64 = v["result"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 200);

    let csv = apseq(&[
        "simulate",
        "--set",
        "interval:30",
        "--samples",
        "100",
        "--seed",
        "4",
        "--k",
        "3",
        "--csv",
    ]);
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,samples,mean,stderr,expected,z"));
    assert!(lines.next().unwrap().starts_with("3,100,"));

    let cov = json(&[
        "simulate",
        "--set",
        "cyclic:50",
        "--samples",
        "50",
        "--seed",
        "4",
        "--coverage",
        "--json",
    ]);
    assert!(cov["result"]["coverage"].as_f64().unwrap() <= 1.0);
    assert!(cov["result"]["threshold"]["window"].is_array());
}

#[test]
fn simulate_is_reproducible_from_its_echo() {
    let first = json(&[
        "simulate",
        "--set",
        "interval:40",
        "--samples",
        "300",
        "--seed",
        "17",
        "--k",
        "3",
        "--json",
    ]);
    let p = &first["params"];
    let samples = p["samples"].to_string();
    let seed = p["seed"].to_string();
    let k = p["k"].to_string();
    let again = json(&[
        "simulate",
        "--set",
        p["set"].as_str().unwrap(),
        "--samples",
        &samples,
        "--seed",
        &seed,
        "--k",
        &k,
        "--threads",
        "3",
        "--json",
    ]);
    assert_eq!(first, again);
}

#[test]
fn nonabelian_dihedral() {
    let v = json(&["nonabelian", "--group", "dihedral:5", "--k", "5", "--json"]);
    assert_eq!(v["result"]["left"], 40);
    assert_eq!(v["result"]["right"], 40);
    assert_eq!(v["result"]["inversion_bijection"], true);
    let v = json(&["nonabelian", "--group", "dihedral:4", "--k", "2", "--json"]);
    assert_eq!(v["result"]["left"], 56);
}

#[test]
fn tables_reproduce_golden_rows() {
    let out = apseq(&["tables", "--family", "interval", "--max-n", "8"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let golden = include_str!("../golden/table1.csv");
    for (got, want) in stdout(&out).lines().skip(1).zip(golden.lines().skip(1)) {
        let want: Vec<&str> = want.split(',').filter(|c| !c.is_empty()).collect();
        let got: Vec<&str> = got.split(',').filter(|c| !c.is_empty()).collect();
        assert_eq!(got, want);
    }
    assert_eq!(stdout(&out).lines().count(), 9);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t2.csv");
    let out = apseq(&[
        "tables",
        "--family",
        "cyclic",
        "--max-n",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn golden_files_match_checksums() {
    use sha2::{Digest, Sha256};
    let sums = include_str!("../golden/SHA256SUMS");
    for (name, body) in [
        ("table1.csv", include_str!("../golden/table1.csv")),
        ("table2.csv", include_str!("../golden/table2.csv")),
    ] {
        let line = sums.lines().find(|l| l.ends_with(name)).unwrap();
        assert_eq!(
            line.split_whitespace().next().unwrap(),
            hex::encode(Sha256::digest(body))
        );
    }
}
