use std::path::Path;
use std::process::{Command, Output};

fn leafstrip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafstrip")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn generate_writes_n_minus_one_edges_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = leafstrip(&["generate", "--n", "5", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let edges = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
    assert_eq!(edges, 4);
}

#[test]
fn generate_rejects_zero_vertices() {
    let o = leafstrip(&["generate", "--n", "0", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn strip_path_and_star() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "path.txt", "# n=3\n1 2\n2 3\n");
    let o = leafstrip(&["strip", &path, "--rounds", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");

    let o = leafstrip(&["strip", &path, "--rounds", "0"]);
    assert_eq!(stdout(&o), "1\n2\n3\n");

    let star = write(dir.path(), "star.txt", "# n=4\n1 2\n1 3\n1 4\n");
    let o = leafstrip(&["strip", &star, "--rounds", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let o = leafstrip(&["strip", &star, "--rounds", "1", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), "[1]");
}

#[test]
fn strip_with_k_uses_round_budget() {
    let dir = tempfile::tempdir().unwrap();
    // m_3 = 3, so k = 2 strips one round
    let path = write(dir.path(), "path.txt", "# n=3\n1 2\n2 3\n");
    assert_eq!(stdout(&leafstrip(&["strip", &path, "--k", "2"])), "2\n");
    assert_eq!(stdout(&leafstrip(&["strip", &path, "--k", "9"])), "1\n2\n3\n");
}

#[test]
fn strip_argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "path.txt", "# n=3\n1 2\n2 3\n");
    assert_eq!(leafstrip(&["strip", &path]).status.code(), Some(1));
    assert_eq!(leafstrip(&["strip", &path, "--k", "1", "--rounds", "1"]).status.code(), Some(1));
    let bad = write(dir.path(), "bad.txt", "# n=3\n1 2\n2 x\n");
    assert_eq!(leafstrip(&["strip", &bad, "--rounds", "1"]).status.code(), Some(2));
    let cyclic = write(dir.path(), "cyc.txt", "# n=3\n1 2\n2 3\n3 1\n");
    assert_eq!(leafstrip(&["strip", &cyclic, "--rounds", "1"]).status.code(), Some(2));
}

#[test]
fn embed_and_flip() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.txt", "# n=3\n1 2\n1 3\n");
    let o = leafstrip(&["embed", &star]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().starts_with("3\t2\t"));

    let o = leafstrip(&["flip", &star, "--j", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let flipped = write(dir.path(), "flipped.txt", &stdout(&o));
    let back = leafstrip(&["flip", &flipped, "--j", "2"]);
    assert_eq!(
        leafstrip_parse(&stdout(&back)),
        leafstrip_parse(&std::fs::read_to_string(dir.path().join("star.txt")).unwrap())
    );
    assert_eq!(leafstrip(&["flip", &star, "--j", "1"]).status.code(), Some(1));
}

fn leafstrip_parse(text: &str) -> Vec<u32> {
    leafstrip::treegen::IncreasingTree::parse_edge_list(text).unwrap().parents().to_vec()
}

#[test]
fn experiment_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("det");
    let o = leafstrip(&[
        "experiment", "--kind", "detection", "--n", "500", "--k", "2:4", "--trials", "50", "--seed", "1", "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("det.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "trial,seed,captured,set_size,height,k,n");
    assert_eq!(csv.lines().count(), 1 + 50 * 3);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("det.json")).unwrap()).unwrap();
    assert_eq!(json["summary"]["per_k"].as_array().unwrap().len(), 3);
    assert_eq!(json["config"]["n"], 500);
}

#[test]
fn experiment_requires_trials() {
    let o = leafstrip(&["experiment", "--kind", "detection", "--n", "100", "--k", "2:4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--trials"));
}

#[test]
fn experiment_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.conf", "# height run\nkind = height\nn = 300\ntrials = 20\nseed = 4\n");
    let a = leafstrip(&["experiment", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = leafstrip(&["experiment", "--kind", "height", "--n", "300", "--trials", "20", "--seed", "4"]);
    assert_eq!(stdout(&a), stdout(&b));
    // flags override the file
    let c = leafstrip(&["experiment", "--config", &cfg, "--seed", "5"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn exhaustive_verify_passes() {
    let o = leafstrip(&["experiment", "--kind", "verify", "--n-max", "6", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["summary"]["passed"], true);
    let o = leafstrip(&["verify", "--exhaustive", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn help_lists_flags_and_unknown_flags_fail() {
    let o = leafstrip(&["experiment", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    for flag in [
        "--n", "--seed", "--k", "--trials", "--kind", "--algorithm", "--out", "--threads", "--epsilon-grid",
        "--exhaustive", "--n-max", "--config",
    ] {
        assert!(help.contains(flag), "missing {flag}");
    }
    assert!(stdout(&leafstrip(&["strip", "--help"])).contains("--rounds"));
    assert_eq!(leafstrip(&["generate", "--n", "3", "--bogus"]).status.code(), Some(1));
    assert_eq!(leafstrip(&[]).status.code(), Some(1));
}
