use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;
use unimoment_cli::{run_with, CliError, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("unimoment").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unimoment"))
}

#[test]
fn family_gen_inversions_json() {
    let v = run_json(&["family", "gen", "inversions", "--n", "3", "--out", "json"]);
    assert_eq!(v["schema"], "unimoment/1");
    assert_eq!(v["coeffs"], serde_json::json!(["1", "2", "2", "1"]));
    assert_eq!(v["expected"]["variance"], "11/12");
    let v = run_json(&["family", "gen", "gegenbauer", "--n=2", "--alpha", "3/2"]);
    assert_eq!(v["params"]["alpha"], "3/2");
}

#[test]
fn family_gen_csv_and_list() {
    let (code, out, _) = run(&[
        "family",
        "gen",
        "turan_fejer",
        "--n",
        "4",
        "--k",
        "1",
        "--out",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,coefficient,decimal");
    assert_eq!(lines.len(), 5);
    let v = run_json(&["family", "list"]);
    assert_eq!(v["families"].as_array().unwrap().len(), 14);
}

#[test]
fn analyze_fair_coin() {
    let v = run_json(&["analyze", "--coeffs", "1,1", "--cumulants", "4"]);
    assert_eq!(v["mean"], "1/2");
    assert_eq!(v["variance"], "1/4");
    assert_eq!(v["m4"], "1");
    assert_eq!(v["cumulants"].as_array().unwrap().len(), 4);
    assert_eq!(v["limit_law"]["verdict"], "bernoulli");
}

#[test]
fn sweep_turan_fejer_gap_decreases() {
    let (code, out, err) = run(&[
        "sweep",
        "--family",
        "turan_fejer",
        "--schedule",
        "n=8,k=4;n=16,k=8;n=32,k=16",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "gap_to_3").unwrap();
    let gaps: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[col].parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn sweep_json_sidecar_and_failed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("sweep.json");
    let (code, out, _) = run(&[
        "sweep",
        "--family",
        "inversions",
        "--schedule",
        "n=1;n=4;n=8",
        "--angles",
        "--precision",
        "128",
        "--sidecar",
        side.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().nth(1).unwrap().ends_with("ZeroVariance"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&side).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["error"]["kind"], "ZeroVariance");
    assert_eq!(rows[1]["variance"], "13/6");
    assert!(rows[2]["top_jump"]["error_bound"].is_string());
}

#[test]
fn round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for (name, flags, params) in [
        ("reimer", vec!["--n", "7"], "n=7"),
        (
            "hypergeom_mixture",
            vec!["--n", "12", "--r", "3", "--p", "0:1:0"],
            "n=12,r=3,p=0:1:0",
        ),
        ("mahonian", vec!["--a", "3:2:2"], "a=3:2:2"),
    ] {
        let mut args = vec!["family", "gen", name];
        args.extend(flags.iter().copied());
        let (code, gen, _) = run(&args);
        assert_eq!(code, EXIT_OK);
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &gen).unwrap();
        let from_file = run_json(&[
            "analyze",
            "--file",
            path.to_str().unwrap(),
            "--cumulants",
            "6",
        ]);
        let direct = run_json(&[
            "analyze",
            "--family",
            name,
            "--params",
            params,
            "--cumulants",
            "6",
        ]);
        for key in ["mean", "variance", "m4", "cumulants", "total"] {
            assert_eq!(from_file[key], direct[key], "{name} {key}");
        }
        // a bare array and a comma-separated line give the same answer
        let g: Value = serde_json::from_str(&gen).unwrap();
        let arr = dir.path().join("arr.json");
        std::fs::write(&arr, serde_json::to_string(&g["coeffs"]).unwrap()).unwrap();
        let line = dir.path().join("line.csv");
        let joined: Vec<&str> = g["coeffs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap())
            .collect();
        std::fs::write(&line, joined.join(",") + "\n").unwrap();
        for p in [&arr, &line] {
            let v = run_json(&["analyze", "--file", p.to_str().unwrap(), "--cumulants", "6"]);
            assert_eq!(v["cumulants"], direct["cumulants"]);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "analyze",
        "--family",
        "chung_feller",
        "--params",
        "n=9",
        "--roots",
        "--precision",
        "160",
    ];
    let a = without_timing(run_json(&args));
    let b = without_timing(run_json(&args));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let args = [
        "limit",
        "--family",
        "turan_fejer",
        "--params",
        "n=20,k=1",
        "--topk",
        "4",
    ];
    assert_eq!(
        without_timing(run_json(&args)),
        without_timing(run_json(&args))
    );
}

#[test]
fn roots_report_for_a_family() {
    let v = run_json(&[
        "analyze",
        "--family",
        "turan_fejer",
        "--params",
        "n=10,k=2",
        "--roots",
        "--precision",
        "128",
    ]);
    let r = &v["roots"];
    assert_eq!(r["verdict"], "numerically verified");
    assert_eq!(r["claimed"], true);
    assert_eq!(r["precision_bits"], 128);
    assert_eq!(r["angles"].as_array().unwrap().len(), 4);
    let id = &r["identities"];
    let d: f64 = id["variance_discrepancy"]["value"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    let e: f64 = id["variance_discrepancy"]["error_bound"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(d <= e && e < 1e-20);
    assert_eq!(v["family"]["closed_forms_match"], true);
}

#[test]
fn mixture_roots_checked_after_removing_the_valuation() {
    let v = run_json(&[
        "analyze",
        "--family",
        "hypergeom_mixture",
        "--params",
        "n=20,r=9,p=0:0:0:3/14:4/7:3/14:0:0:0",
        "--roots",
    ]);
    assert_eq!(v["mean"], "19/2");
    assert_eq!(v["roots"]["valuation"], 3);
    assert_eq!(v["roots"]["claimed"], false);
    let verdict = v["roots"]["verdict"].as_str().unwrap();
    assert!(verdict == "numerically verified" || verdict == "falsified");
}

#[test]
fn user_polynomial_off_the_circle_is_reported_not_failed() {
    let v = run_json(&["analyze", "--coeffs", "1,3,1", "--roots"]);
    assert_eq!(v["roots"]["verdict"], "falsified");
    assert_eq!(v["roots"]["failure"]["kind"], "RootsOffCircle");
}

#[test]
fn pmf_overlay() {
    let (code, out, _) = run(&[
        "pmf",
        "--family",
        "inversions",
        "--params",
        "n=6",
        "--overlay",
        "normal",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["k", "pmf", "normal_density"]);
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 16);
    let (p, n): (f64, f64) = rows.iter().fold((0.0, 0.0), |a, r| (a.0 + r.0, a.1 + r.1));
    assert!((p - 1.0).abs() < 1e-15 && (n - 1.0).abs() < 5e-3);
    let v = run_json(&["pmf", "--coeffs", "1,2,1", "--out", "json"]);
    assert_eq!(v["rows"][1]["pmf"], "1/2");
    assert!(v["rows"][1]["normal_density"].is_null());
}

#[test]
fn limit_report_for_euler_cosh() {
    let v = run_json(&[
        "limit",
        "--family",
        "euler_cosh",
        "--params",
        "n=30",
        "--topk",
        "3",
        "--precision",
        "128",
    ]);
    assert_eq!(v["top_jumps"].as_array().unwrap().len(), 3);
    assert_eq!(v["reference_q"]["law"], "uniform_centered");
    let m = v["limit_moments"].as_array().unwrap();
    assert_eq!(m.len(), 6);
    assert_eq!(m[0]["limit"], "1/2");
    assert_eq!(m[0]["finite"], "1/2");
}

#[test]
fn exit_codes_and_error_objects() {
    for args in [
        vec!["bogus"],
        vec!["analyze", "--coeffs", "1,x"],
        vec!["analyze", "--family", "turan_fejer", "--params", "n=2,k=5"],
        vec!["analyze", "--coeffs", "1,-1"],
        vec!["analyze", "--coeffs", "1,1", "--family", "inversions"],
        vec!["family", "gen", "inversions", "3"],
        vec!["sweep", "--family", "inversions", "--schedule", "m=3"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty());
        let e: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(e["exit_code"], EXIT_USAGE);
        assert!(e["error"]["kind"].is_string());
    }
    let (code, _, err) = run(&["analyze", "--family", "reimer", "--params", "n=4,m=2"]);
    assert_eq!(code, EXIT_COMPUTE);
    assert!(err.contains("NotImplemented"));
    let (code, _, err) = run(&["pmf", "--coeffs", "0,1", "--overlay", "normal"]);
    assert_eq!(code, EXIT_COMPUTE);
    assert!(err.contains("ZeroVariance"));
    let v = CliError::Verification {
        kind: "RootUnitarityFailed",
        message: String::new(),
    };
    assert_eq!(v.exit_code(), EXIT_VERIFY);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("analyze"));
}

#[test]
fn precision_from_the_environment() {
    let out = bin()
        .args(["analyze", "--coeffs", "1,1,1", "--roots"])
        .env("UNIMOMENT_PRECISION_BITS", "96")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["roots"]["precision_bits"], 96);
    let out = bin()
        .args([
            "analyze",
            "--coeffs",
            "1,1,1",
            "--roots",
            "--precision",
            "128",
        ])
        .env("UNIMOMENT_PRECISION_BITS", "96")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["roots"]["precision_bits"], 128);
    let out = bin()
        .args(["analyze", "--coeffs", "1,1", "--roots"])
        .env("UNIMOMENT_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn piped_round_trip() {
    let gen = bin()
        .args(["family", "gen", "signed_rank", "--a", "1:2:3:4"])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let mut child = bin()
        .args(["analyze", "--file", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mean"], "5");
    assert_eq!(v["variance"], "15/2");
}
