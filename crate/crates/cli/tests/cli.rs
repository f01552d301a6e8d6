use std::path::Path;
use std::process::{Command, Output};

use qctree::MetricTree;
use qctree_cli::doc::{from_document, read_document, to_document};
use qctree_cli::suite::{Report, Witness};

fn qctree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qctree"))
        .args(args)
        .env_remove("QCTREE_TOL")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn empty_tag_list_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "r.json");
    let o = qctree(&["verify-lemma", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Report = read_document("report", Path::new(&out)).unwrap();
    assert!(r.suites.is_empty());
    assert!(r.passed);
}

#[test]
fn uniform_suite_passes_on_twenty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "r.json");
    let o = qctree(&[
        "verify-lemma", "uniform", "--trials", "20", "--max-n", "40", "--seed", "3", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Report = read_document("report", Path::new(&out)).unwrap();
    assert_eq!(r.suites[0].passed, 20);
}

#[test]
fn unknown_tag_is_an_input_error() {
    let o = qctree(&["verify-lemma", "nosuchlemma"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("known tags"), "{}", stderr(&o));
}

#[test]
fn corrupted_metric_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"points":["a","b","c"],"dist":[[0,1,5],[1,0,1],[5,1,0]]}"#,
    );
    for args in [
        vec!["analyze", "--space", &bad],
        vec!["quotient", "--space", &bad, "--collapse", "0"],
    ] {
        let o = qctree(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("triangle"), "{}", stderr(&o));
    }
}

#[test]
fn generated_tree_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "t.json");
    let o = qctree(&[
        "gen", "--n", "30", "--seed", "11", "--profile", "snowflake", "--snowflake-s", "0.5", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t: MetricTree = read_document("tree", Path::new(&out)).unwrap();
    let again: MetricTree = from_document("tree", &to_document("tree", &t), "mem").unwrap();
    assert_eq!(t, again);
    let direct = qctree::tree::gen_tree(30, 11, qctree::tree::Profile::Snowflake { s: 0.5 }).unwrap();
    assert_eq!(t, direct);
}

#[test]
fn report_records_version_seed_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"seed": 42, "trial_count": 3, "tags": ["doublequotient", "freegap"]}"#,
    );
    let out = path(dir.path(), "r.json");
    let o = qctree(&["report", "--config", &cfg, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let r: Report = from_document("report", &text, "r.json").unwrap();
    assert_eq!(r.seed, 42);
    assert_eq!(r.tool_version, env!("CARGO_PKG_VERSION"));
    assert_eq!(r.config_hash, r.config.hash());
    assert_eq!(r.config_hash.len(), 64);

    let again = path(dir.path(), "r2.json");
    qctree(&["report", "--config", &cfg, "--out", &again]);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());

    let o = qctree(&["report", "--input", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("seed 42"));
}

#[test]
fn malformed_file_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "m.json", "{\n  \"points\": [\"a\"],\n  \"dist\": [[0]\n");
    let o = qctree(&["analyze", "--space", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("m.json:4:"), "{msg}");
}

#[test]
fn schema_mismatch_names_both_versions() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "s.json",
        r#"{"schema":"qctree","schema_version":9,"kind":"space","data":{}}"#,
    );
    let o = qctree(&["analyze", "--space", &f]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("version 9") && msg.contains("version 1"), "{msg}");
}

#[test]
fn failing_witness_replays() {
    let dir = tempfile::tempdir().unwrap();
    let wdir = path(dir.path(), "w");
    // A negative isometry tolerance makes every deviation a failure.
    let o = qctree(&[
        "--tol=-1", "verify-lemma", "doublequotient", "--trials", "2", "--witness-dir", &wdir,
        "--out", &path(dir.path(), "r.json"),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let file = path(Path::new(&wdir), "doublequotient-1.json");
    let w: Witness = read_document("witness", Path::new(&file)).unwrap();
    assert!(!w.reasons.is_empty());
    assert!(w.instance.is_some());

    let o = qctree(&["replay", &file]);
    assert_eq!(o.status.code(), Some(1));
    let o = qctree(&["--tol", "1e-9", "replay", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn maps_and_norms_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let tree = path(dir.path(), "t.json");
    qctree(&["gen", "--n", "25", "--seed", "2", "--out", &tree]);
    let t: MetricTree = read_document("tree", Path::new(&tree)).unwrap();
    let leaves = t.leaves();
    let pair = format!("{},{}", leaves[0], leaves[1]);
    for args in [
        vec!["build-map", "--kind", "tree", "--tree", &tree],
        vec!["build-map", "--kind", "wreath", "--tree", &tree, "--leaves", &pair],
        vec!["build-map", "--kind", "quotient", "--tree", &tree, "--collapse", &pair],
    ] {
        let o = qctree(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["data"]["report"]["q_hat"].as_f64().unwrap().is_finite());
    }

    let line = qctree::FiniteMetricSpace::on_line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
    let path5 = MetricTree::new(line, (1..5).map(|i| (i - 1, i)).collect()).unwrap();
    let arc = write(dir.path(), "arc.json", &to_document("tree", &path5));
    let o = qctree(&["build-map", "--kind", "arc", "--tree", &arc, "--ends", "0", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["map"]["values"][4].as_f64(), Some(4.0));

    let space = write(
        dir.path(),
        "s.json",
        r#"{"points":["a","b","c"],"dist":[[0,3,4],[3,0,5],[4,5,0]],"basepoint":0}"#,
    );
    let mu = write(dir.path(), "mu.json", r#"{"support":[1,2],"coeffs":[1,-1]}"#);
    let o = qctree(&["freenorm", "--space", &space, "--mu", &mu]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["data"]["value"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    let o = qctree(&["freenorm", "--space", &space, "--mu", &mu, "--exact"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["rational"].as_str(), Some("5"));
    let o = qctree(&["freenorm", "--space", &space, "--mu", &mu, "--subset", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["data"]["value"].as_f64().unwrap() - 4.0).abs() < 1e-9);

    let o = qctree(&["quotient", "--sum", &space, &space]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["space"]["points"].as_array().unwrap().len(), 5);
}
