use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use consecutive_patterns::cluster::{cluster_counts, ClusterTotals};
use consecutive_patterns::collection::collection;
use consecutive_patterns::monotone::OdeSystem;
use consecutive_patterns::series::{avoidance_gf, BiSeries};
use tempfile::TempDir;

fn cpat(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cpat"));
    cmd.args(args).env_remove("CPAT_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("CPAT_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_avoiders_of_123() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "123\n");
    let o = cpat(&["count", "--patterns", s(&p), "--n", "8"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("n\talpha\n"));
    assert!(out.contains("\n3\t5\n"));
    assert!(out.contains("\n8\t13358\n"));
}

#[test]
fn count_by_occurrences_round_trips() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "# two patterns\n132\n1 2 3 4\n");
    let o = cpat(&["count", "-p", s(&p), "-n", "9", "--occurrences"], None);
    assert!(o.status.success());
    let parsed = BiSeries::from_alpha_tsv(&stdout(&o)).unwrap();
    assert_eq!(parsed, avoidance_gf(&collection(&["132", "1234"]), 9).unwrap());
}

#[test]
fn equivalent_pair_is_reported() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.txt", "143265987\n");
    let b = write(&d, "b.txt", "134265897\n");
    let o = cpat(&["equiv", s(&a), s(&b)], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "equivalent (overlap-set condition holds)\n");

    let c = write(&d, "c.txt", "123\n");
    let e = write(&d, "e.txt", "132\n");
    let o = cpat(&["equiv", s(&c), s(&e), "-n", "6"], None);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("not equivalent"));
}

#[test]
fn classify_s5_json() {
    let o = cpat(&["classify-s5", "--format", "json"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["orbits"].as_array().unwrap().len(), 32);
}

#[test]
fn graph_dot_is_deterministic() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "1576243\n13254\n");
    let a = stdout(&cpat(&["graph", "-p", s(&p)], None));
    let b = stdout(&cpat(&["graph", "-p", s(&p)], None));
    assert_eq!(a, b);
    assert!(a.starts_with("digraph overlap {\n"));
    assert_eq!(a.matches(" -> ").count(), 6);
    let j = cpat(&["graph", "-p", s(&p), "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["vertices"], serde_json::json!(["1", "132"]));
}

#[test]
fn clusters_and_gf_round_trip() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "12354\n132465\n");
    let o = cpat(&["clusters", "-p", s(&p), "-n", "12", "-q", "4"], None);
    let t = ClusterTotals::from_tsv(&stdout(&o)).unwrap();
    assert_eq!(t, cluster_counts(&collection(&["12354", "132465"]), 12, 4).totals());

    let o = cpat(&["gf", "-p", s(&p), "-n", "10", "--kind", "occurrence"], None);
    let g = BiSeries::from_coeff_tsv(&stdout(&o)).unwrap();
    assert_eq!(g, avoidance_gf(&collection(&["12354", "132465"]), 10).unwrap());
}

#[test]
fn monotone_then_verify() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "12354\n132465\n");
    let o = cpat(&["monotone", "-p", s(&p), "--format", "json"], None);
    assert!(o.status.success());
    let sys = write(&d, "sys.json", &stdout(&o));
    let o = cpat(&["verify-ode", "-p", s(&p), "--system", s(&sys), "-n", "20"], None);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches(": holds").count(), 2);

    // Break one term: verification must report the failure.
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sys).unwrap()).unwrap();
    let mut system: OdeSystem = serde_json::from_value(v["system"].clone()).unwrap();
    system.equations[1].rhs[0].c += 1;
    let bad = write(&d, "bad.json", &serde_json::to_string(&system).unwrap());
    let o = cpat(&["verify-ode", "-p", s(&p), "--system", s(&bad), "-n", "20"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails at"));
}

#[test]
fn non_monotone_collection_exits_1_with_witness() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "213\n");
    let o = cpat(&["monotone", "-p", s(&p)], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not monotone"));
}

#[test]
fn domain_errors_exit_1() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "145623\n13452\n");
    let o = cpat(&["clusters", "-p", s(&p), "-n", "8"], None);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not reduced"), "{err}");
    assert!(err.contains("1 3 4 5 2 divides 1 4 5 6 2 3"), "{err}");

    let p = write(&d, "q.txt", "123\n1 2 2\n");
    let o = cpat(&["clusters", "-p", s(&p), "-n", "8"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
}

#[test]
fn usage_errors_exit_2() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "123\n");
    assert_eq!(cpat(&["count", "-p", s(&p)], None).status.code(), Some(2));
    assert_eq!(cpat(&["count", "-p", s(&p), "-n", "0"], None).status.code(), Some(2));
    assert_eq!(cpat(&["frobnicate"], None).status.code(), Some(2));
    let o = cpat(&["oracle", "-p", s(&p), "-n", "12"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("--force"));
}

#[test]
fn oracle_agrees() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "1324\n2143\n");
    let o = cpat(&["oracle", "-p", s(&p), "-n", "8", "--threads", "2"], None);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("# agree\n"));
}

#[test]
fn cache_is_shared_by_isomorphic_graphs_and_sound() {
    let d = TempDir::new().unwrap();
    let cache = d.path().join("cache");
    let a = write(&d, "a.txt", "143265987\n");
    let b = write(&d, "b.txt", "134265897\n");
    let first = cpat(&["clusters", "-p", s(&a), "-n", "18", "-q", "4"], Some(&cache));
    assert!(first.status.success());
    let files: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);

    let second = cpat(&["clusters", "-p", s(&b), "-n", "18", "-q", "4"], Some(&cache));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(first.stdout, second.stdout);
    let fresh = cluster_counts(&collection(&["134265897"]), 18, 4).totals();
    assert_eq!(ClusterTotals::from_tsv(&stdout(&second)).unwrap(), fresh);

    // The flag overrides the environment; a different (N, Q) is a new entry.
    let other = d.path().join("other");
    let o = cpat(&["--cache-dir", s(&other), "count", "-p", s(&a), "-n", "10"], Some(&cache));
    assert!(o.status.success());
    assert_eq!(fs::read_dir(&other).unwrap().count(), 1);
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let uncached = cpat(&["count", "-p", s(&a), "-n", "10"], None);
    assert_eq!(o.stdout, uncached.stdout);
}
