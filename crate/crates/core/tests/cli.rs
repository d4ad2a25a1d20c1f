use std::path::Path;
use std::process::{Command, Output};

use quantum_queue::experiment::{list_scenarios, lookup, parse_config};

fn qqueue(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qqueue"));
    cmd.args(args).env_remove("QQUEUE_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn small(name: &str, extra: &str) -> String {
    let text = lookup(name).unwrap().text;
    format!("{text}\n{extra}")
}

const SMALL_POISSON: &str = "[scenario]\nname = tiny\nregime = quantum\nhorizon = 40\n\n\
    [arrival]\nkind = poisson\nrate = 1\n\n[capacity]\nkind = finite\nvalues = -1, 2\nprobs = 0.25, 0.75\n\n\
    [monte_carlo]\npaths = 500\nseed = 3\n\n[limits]\nenabled = false\n";

#[test]
fn list_shows_every_shipped_scenario() {
    let o = qqueue(&["list"], &[]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8(o.stdout).unwrap();
    for e in list_scenarios() {
        assert!(stdout.contains(e.name), "{} missing", e.name);
        parse_config(e.text).unwrap();
    }
}

#[test]
fn validate_accepts_names_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.conf");
    std::fs::write(&good, SMALL_POISSON).unwrap();
    assert_eq!(code(&qqueue(&["validate", "overload-delay"], &[])), 0);
    assert_eq!(code(&qqueue(&["validate", good.to_str().unwrap()], &[])), 0);

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, SMALL_POISSON.replace("rate = 1", "rate = -1")).unwrap();
    let o = qqueue(&["validate", bad.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 8"));
    assert_eq!(code(&qqueue(&["validate", "no-such-scenario"], &[])), 1);
}

#[test]
fn run_writes_artifacts_and_honours_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.conf");
    std::fs::write(&cfg, SMALL_POISSON).unwrap();
    let out = dir.path().join("out");
    let o = qqueue(
        &["run", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap(), "--seed", "9", "--paths", "300", "--grid", "x=-20:20:5", "--grid", "d=0:10:11"],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let bounds = std::fs::read_to_string(out.join("bounds.csv")).unwrap();
    let empirical = std::fs::read_to_string(out.join("empirical.csv")).unwrap();
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(bounds.starts_with("measure,side,argument,bound,theta,p,vacuous_flag\n"));
    assert!(empirical.starts_with("measure,argument,estimate,ci_halfwidth,n_paths\n"));
    assert!(!bounds.contains('\r'));
    // 5 backlog + 5 throughput + 11 delay arguments
    assert_eq!(empirical.lines().count(), 1 + 21);
    assert!(empirical.lines().skip(1).all(|l| l.ends_with(",300")));
    assert!(summary.contains("seed = 9"));
}

#[test]
fn env_var_sets_output_dir_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.conf");
    std::fs::write(&cfg, SMALL_POISSON).unwrap();
    let env_dir = dir.path().join("from-env");
    let o = qqueue(&["run", cfg.to_str().unwrap(), "--paths", "50"], &[("QQUEUE_OUT_DIR", &env_dir)]);
    assert_eq!(code(&o), 0);
    assert!(env_dir.join("bounds.csv").exists());

    let flag_dir = dir.path().join("from-flag");
    let o = qqueue(
        &["run", cfg.to_str().unwrap(), "--paths", "50", "--out-dir", flag_dir.to_str().unwrap()],
        &[("QQUEUE_OUT_DIR", &dir.path().join("unused"))],
    );
    assert_eq!(code(&o), 0);
    assert!(flag_dir.join("bounds.csv").exists());
    assert!(!dir.path().join("unused").exists());
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    // bad flag values are config errors
    assert_eq!(code(&qqueue(&["run", "critical-backlog", "--paths", "0", "--out-dir", out], &[])), 1);
    assert_eq!(code(&qqueue(&["run", "critical-backlog", "--grid", "d=0:5000:3", "--out-dir", out], &[])), 1);
    assert_eq!(code(&qqueue(&["run", "critical-backlog", "--grid", "x=3:1:3", "--out-dir", out], &[])), 1);

    // every θ on the grid overflows the moment generating function
    let overflow = dir.path().join("overflow.conf");
    std::fs::write(&overflow, format!("{SMALL_POISSON}\n[bounds]\ntheta_min = 800\ntheta_max = 1000\n")).unwrap();
    assert_eq!(code(&qqueue(&["run", overflow.to_str().unwrap(), "--out-dir", out], &[])), 2);

    // with 200 paths and near-zero confidence width the sampling noise alone
    // pushes the tight Lundberg curve outside the interval
    let strict = dir.path().join("strict.conf");
    let text = small("classical-poisson", "").replace("paths = 20000", "paths = 200\nz = 0.01");
    std::fs::write(&strict, text).unwrap();
    let o = qqueue(&["run", strict.to_str().unwrap(), "--out-dir", out], &[]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&qqueue(&["run", "classical-poisson", "--paths", "2000", "--out-dir", d.to_str().unwrap()], &[])), 0);
    }
    for f in ["bounds.csv", "empirical.csv", "summary.txt"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let c = dir.path().join("c");
    qqueue(&["run", "classical-poisson", "--paths", "2000", "--seed", "2", "--out-dir", c.to_str().unwrap()], &[]);
    assert_ne!(std::fs::read(a.join("empirical.csv")).unwrap(), std::fs::read(c.join("empirical.csv")).unwrap());
}
