use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genpers")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn interval_pair_distance_is_one() {
    let out = run(&["distance", "--modules", &corpus("interval_f.json"), &corpus("interval_g.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outputs"]["distance"]["exact"], "1");
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--seed", "3", "stability", "--family", &corpus("sublevel_family.json"), "--random", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!report(&a).as_object().unwrap().contains_key("timing_ms"));
    let c = run(&["--timing", "distance", "--modules", &corpus("interval_f.json"), &corpus("interval_g.json")]);
    assert!(report(&c)["timing_ms"].is_number());
}

#[test]
fn stability_chain_on_path_complex() {
    let out = run(&[
        "stability",
        "--family",
        &corpus("sublevel_family.json"),
        "--complex",
        &corpus("path_complex.json"),
        "--f",
        &corpus("path_f.json"),
        "--g",
        &corpus("path_g.json"),
        "--functor",
        "homology:0:2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let o = &report(&out)["outputs"];
    assert_eq!(o["dinfty"], "1");
    assert_eq!(o["d_modules"]["exact"], "1");
    assert_eq!(o["d_functor"]["exact"], "1");
    assert!(o.get("violations").is_none());
}

#[test]
fn random_stability_mode_runs_clean() {
    let out = run(&["--seed", "11", "stability", "--family", &corpus("sublevel_family.json"), "--random", "10", "--functor", "pi0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["outputs"]["instances"], 10);
}

#[test]
fn two_minimum_merge_tree() {
    let args = [
        "mergetree",
        "--complex",
        &corpus("path_complex.json"),
        "--function",
        &corpus("two_minima.json"),
        "--family",
        &corpus("sublevel_family.json"),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let o = &report(&out)["outputs"];
    assert_eq!(o["leaves"], 2);
    assert_eq!(o["merges"], 1);
    let mut dot_args = vec!["--format", "dot"];
    dot_args.extend_from_slice(&args);
    let dot = String::from_utf8(run(&dot_args).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn dset_csv_contains_norm_vector() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let f = corpus("rect_f.json");
    let g = corpus("rect_g.json");
    let out = run(&["--out-dir", d, "dset", "--modules", &f, &g]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("dset.csv")).unwrap();
    assert!(csv.starts_with("e0,e1,status\n"));
    // The shift between the two rectangles is 1/2 along the first axis.
    let dist = report(&run(&["distance", "--modules", &f, &g]));
    assert_eq!(dist["outputs"]["distance"]["exact"], "1/2");
    assert!(csv.lines().any(|l| l == "1/2,1/2,in"));
    assert!(csv.lines().any(|l| l == "0,3/2,out"));
}

#[test]
fn exported_certificate_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let f = corpus("rect_f.json");
    let g = corpus("rect_g.json");
    assert_eq!(run(&["--out-dir", d, "distance", "--modules", &f, &g]).status.code(), Some(0));
    let cert = dir.path().join("distance_certificate.json");
    let out = run(&["check", "--modules", &f, &g, "--certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["outputs"]["valid"], true);
}

#[test]
fn bad_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("zero.json");
    // Identity translations with zero maps: the triangles fail wherever F is nonzero.
    fs::write(
        &cert,
        r#"{"gamma": [0,1,2,3,4], "kappa": [0,1,2,3,4],
            "phi": [[[0]], [[0]], [], [], []], "psi": [[[0]], [[0]], [], [], []]}"#,
    )
    .unwrap();
    let f = corpus("interval_f.json");
    let out = run(&["check", "--modules", &f, &f, "--certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "violation");
}

#[test]
fn input_errors_exit_two() {
    let out = run(&["distance", "--modules", "/nonexistent/f.json", &corpus("interval_g.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["distance", "--modules", &corpus("interval_f.json"), &corpus("rect_g.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    // Six-dimensional constant modules: matching them needs far more candidates than a guard of 1 allows.
    let eye: Vec<Vec<u8>> = (0..6).map(|i| (0..6).map(|j| u8::from(i == j)).collect()).collect();
    let m = serde_json::json!({
        "proset": {"grid": [[0, 1]]},
        "target": {"tag": "finvect", "p": 2},
        "objects": [6, 6],
        "morphisms": {"0->1": eye},
    });
    fs::write(&path, m.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["--guard-size", "1", "distance", "--modules", p, p]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn barcode_and_bottleneck() {
    let out = run(&["barcode", "--module", &corpus("interval_f.json"), "--against", &corpus("interval_g.json")]);
    assert_eq!(out.status.code(), Some(0));
    let o = &report(&out)["outputs"];
    assert_eq!(o["bars"][0], "[0, 2)");
    assert_eq!(o["bottleneck"], "1");
    assert_eq!(o["bottleneck_on_grid"], "1");
}

#[test]
fn gen_is_seeded() {
    let a = run(&["--seed", "5", "gen", "module"]);
    let b = run(&["--seed", "5", "gen", "module"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    run(&["--seed", "5", "--out-dir", d, "gen", "module"]);
    let module = dir.path().join("module.json");
    let again = run(&["distance", "--family", "standard", "--modules", module.to_str().unwrap(), module.to_str().unwrap()]);
    // Random posets are generally not grids, so the standard family is an input error.
    assert!(matches!(again.status.code(), Some(0) | Some(2)));
}

#[test]
fn refined_multidim_norm_vector_is_in() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let base = [
        "dset",
        "--complex",
        &corpus("path_complex.json"),
        "--f",
        &corpus("refined_f.json"),
        "--g",
        &corpus("refined_g.json"),
        "--family",
        &corpus("quadrant_family.json"),
    ];
    let mut args = vec!["--out-dir", d];
    args.extend_from_slice(&base);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let o = &report(&out)["outputs"];
    assert_eq!(o["norm_vector"], serde_json::json!(["1/2", "0"]));
    assert_eq!(o["norm_vector_status"], "in");
    let csv = fs::read_to_string(dir.path().join("dset.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "1/2,0,in"));

    let mut h = base.to_vec();
    h.extend_from_slice(&["--functor", "homology:0:2"]);
    let oh = report(&run(&h));
    assert_eq!(oh["outputs"]["norm_vector_status"], "in");
    assert!(oh["outputs"]["in"].as_u64() >= o["in"].as_u64());
}
