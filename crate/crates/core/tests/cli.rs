use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;

use sepcert::cli::{run, EXIT_FOUND, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use sepcert::sweep::read_reports_csv;
use sepcert::{PointSet, SeparatedPair, VertexSet};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sepcert(args: &[&str]) -> Out {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("sepcert").chain(args.iter().copied());
    let code = run(argv, &mut stdout, &mut stderr);
    Out {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn json(out: &Out) -> Value {
    serde_json::from_str(out.stdout.trim()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn antipodal16(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("antipodal.json");
    let out = sepcert(&["generate", "--family", "antipodal", "--n", "16", "--d", "3", "--out", s(&path)]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    path
}

#[test]
fn generate_antipodal() {
    let dir = TempDir::new().unwrap();
    let path = antipodal16(&dir);
    let ps = PointSet::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((ps.len(), ps.dim()), (16, 3));
    assert_eq!(ps.point(0), &[1.0, 0.0, 0.0]);
    assert_eq!(ps.point(15), &[-1.0, 0.0, 0.0]);

    let out = sepcert(&["validate", "--in", s(&path)]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["status"], "ok");
    assert_eq!(json(&out)["average_squared_distance"], 2.0);
}

#[test]
fn validate_reports_planar_violation() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let path = write(&dir, "planar.json", &format!(r#"{{"dim":2,"points":[[1,0],[{h},{h}],[0,1]]}}"#));
    let out = sepcert(&["validate", "--in", s(&path)]);
    assert_eq!(out.code, EXIT_FOUND);
    let v = json(&out);
    assert_eq!(v["status"], "triangle-violation");
    assert_eq!((v["i"].as_u64(), v["j"].as_u64(), v["k"].as_u64()), (Some(0), Some(1), Some(2)));
    assert!((v["slack"].as_f64().unwrap() - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
}

#[test]
fn validate_reports_off_sphere() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "big.json", r#"{"dim":1,"points":[[1],[2]]}"#);
    let out = sepcert(&["validate", "--in", s(&path)]);
    assert_eq!(out.code, EXIT_FOUND);
    assert_eq!(json(&out)["status"], "off-sphere");
    assert_eq!(json(&out)["index"], 1);
}

#[test]
fn certify_finds_a_clique_witness() {
    let dir = TempDir::new().unwrap();
    let path = antipodal16(&dir);
    let out = sepcert(&["certify", "--in", s(&path), "--epsilon", "1", "--alpha", "0.25", "--beta", "2"]);
    assert_eq!(out.code, EXIT_FOUND, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["verdict"], "not-expander");
    assert_eq!(v["method"], "exact");
    assert_eq!(v["window"], serde_json::json!([4, 4]));
    assert_eq!(v["witness"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn certify_needs_a_seed_above_the_exact_limit() {
    let dir = TempDir::new().unwrap();
    let path = antipodal16(&dir);
    let base = ["certify", "--in", s(&path), "--epsilon", "1", "--alpha", "0.25", "--beta", "2", "--exact-limit", "8"];
    let out = sepcert(&base);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("--seed"));

    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "3", "--budget", "50"]);
    let out = sepcert(&seeded);
    assert_eq!(out.code, EXIT_FOUND);
    assert_eq!(json(&out)["method"], "randomized");
}

#[test]
fn certify_unknown_without_witness() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ortho.json");
    sepcert(&["generate", "--family", "orthonormal", "--n", "12", "--out", s(&path)]);
    // ε=2 makes the complete graph, which expands
    let out = sepcert(&[
        "certify", "--in", s(&path), "--epsilon", "2", "--alpha", "0.1", "--beta", "1.5", "--exact-limit", "4", "--seed", "1",
        "--budget", "20",
    ]);
    assert_eq!(out.code, EXIT_UNKNOWN);
    assert_eq!(json(&out)["verdict"], "unknown");
}

#[test]
fn usage_errors() {
    assert_eq!(sepcert(&["certify"]).code, EXIT_USAGE);
    assert_eq!(sepcert(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(sepcert(&["generate", "--family", "antipodal", "--n", "5"]).code, EXIT_USAGE);
    assert_eq!(sepcert(&["validate", "--in", "/nonexistent/points.json"]).code, EXIT_USAGE);
    assert_eq!(sepcert(&["--help"]).code, EXIT_OK);
}

#[test]
fn graph_json_round_trip() {
    let dir = TempDir::new().unwrap();
    let cube = dir.path().join("cube.json");
    sepcert(&["generate", "--family", "hypercube", "--d", "2", "--out", s(&cube)]);
    let out = sepcert(&["graph", "--in", s(&cube), "--epsilon", "2"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["n"], 4);
    assert_eq!(v["epsilon"], 2.0);
    assert_eq!(v["edges"], serde_json::json!([[0, 1], [0, 2], [1, 3], [2, 3]]));
}

#[test]
fn separate_and_reduce_round_trip() {
    let dir = TempDir::new().unwrap();
    let cube = dir.path().join("cube.json");
    sepcert(&["generate", "--family", "hypercube", "--d", "3", "--out", s(&cube)]);
    let out = sepcert(&["separate", "--in", s(&cube), "--delta", "1.3333333333333333"]);
    assert_eq!(out.code, EXIT_OK);
    let pair = SeparatedPair::from_json(&out.stdout).unwrap();
    assert_eq!(pair.min_size(), 4);

    let too_far = sepcert(&["separate", "--in", s(&cube), "--delta", "5"]);
    assert_eq!((too_far.code, too_far.stdout.trim()), (EXIT_FOUND, "null"));

    // a small pair so the backward window is nonempty
    let small = SeparatedPair::measure(
        &PointSet::from_json(&fs::read_to_string(&cube).unwrap()).unwrap(),
        VertexSet::new(vec![0]),
        VertexSet::new(vec![7]),
    )
    .unwrap();
    let pair_path = write(&dir, "pair.json", &small.to_json());
    let out = sepcert(&[
        "reduce", "--in", s(&cube), "--direction", "backward", "--epsilon", "0.5", "--beta", "2", "--pair", s(&pair_path),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let w: VertexSet = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(w.len(), 1);

    let out = sepcert(&[
        "reduce", "--in", s(&cube), "--direction", "forward", "--epsilon", "0.5", "--alpha", "0.125", "--beta", "2",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let fwd = SeparatedPair::from_json(&out.stdout).unwrap();
    assert_eq!(fwd.s.as_slice(), &[0]);
    assert!(fwd.delta > 0.5);
}

#[test]
fn check_generalized_finds_a_far_pair() {
    let dir = TempDir::new().unwrap();
    let path = antipodal16(&dir);
    let graph = write(&dir, "g.json", r#"{"n":16,"edges":[[7,8]]}"#);
    let out = sepcert(&[
        "check-generalized", "--in", s(&path), "--graph", s(&graph), "--alpha", "0.25", "--beta", "2", "--gamma", "1", "--delta",
        "1",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!((v["u"].as_u64(), v["v"].as_u64(), v["hop"].as_u64()), (Some(7), Some(8), Some(1)));

    let out = sepcert(&[
        "check-generalized", "--in", s(&path), "--epsilon", "1", "--alpha", "0.25", "--beta", "2", "--gamma", "1", "--delta", "1",
    ]);
    assert_eq!((out.code, out.stdout.trim()), (EXIT_FOUND, "null"));
}

#[test]
fn sweep_rows_match_check_main() {
    let dir = TempDir::new().unwrap();
    let sweep = sepcert(&[
        "sweep", "--family", "antipodal", "--n", "8,12", "--d", "3", "--epsilon", "0.5:4.5:1", "--alpha", "0.125", "--beta", "2",
        "--seed", "1",
    ]);
    assert_eq!(sweep.code, EXIT_OK, "{}", sweep.stderr);
    let again = sepcert(&[
        "sweep", "--family", "antipodal", "--n", "8,12", "--d", "3", "--epsilon", "0.5:4.5:1", "--alpha", "0.125", "--beta", "2",
        "--seed", "1",
    ]);
    assert_eq!(sweep.stdout, again.stdout);

    let mut lines = vec![];
    for n in ["8", "12"] {
        let path = dir.path().join(format!("a{n}.json"));
        sepcert(&["generate", "--family", "antipodal", "--n", n, "--d", "3", "--out", s(&path)]);
        for eps in ["0.5", "1.5", "2.5", "3.5"] {
            let out = sepcert(&["check-main", "--in", s(&path), "--epsilon", eps, "--alpha", "0.125", "--beta", "2", "--seed", "1"]);
            assert!(out.code == EXIT_OK || out.code == EXIT_FOUND);
            let mut rows = out.stdout.lines();
            let header = rows.next().unwrap().to_string();
            if lines.is_empty() {
                lines.push(header);
            }
            lines.extend(rows.map(str::to_string));
        }
    }
    assert_eq!(sweep.stdout, lines.join("\n") + "\n");

    let reports = read_reports_csv(&sweep.stdout).unwrap();
    assert_eq!(reports.len(), 8);
    assert_eq!(reports[0].n, 8);
    assert_eq!(reports[7].epsilon, 3.5);
    assert_eq!(reports[7].verdict.as_str(), "not-expander");
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = sepcert(&["generate", "--family", "random-sphere", "--n", "30", "--d", "4", "--seed", "9", "--out", s(p)]);
        assert_eq!(out.code, EXIT_OK);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let run_sep = || sepcert(&["separate", "--in", s(&a), "--delta", "1.5", "--seed", "4", "--exact-limit", "10"]).stdout;
    assert_eq!(run_sep(), run_sep());
    let run_cert = || {
        sepcert(&["certify", "--in", s(&a), "--epsilon", "1", "--alpha", "0.1", "--beta", "1.5", "--seed", "2", "--budget", "40"])
            .stdout
    };
    assert_eq!(run_cert(), run_cert());
}
