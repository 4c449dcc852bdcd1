use std::path::Path;
use std::process::{Command, Output};

fn weakdep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakdep")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(code(&weakdep(&["--help"])), 0);
    assert_eq!(code(&weakdep(&[])), 1);
    assert_eq!(code(&weakdep(&["nonsense"])), 1);
    let bad = weakdep(&["simulate", "--n", "ten", "--out-dir", out]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`n`"));
    assert_eq!(code(&weakdep(&["bounds", "--eta", "2", "--out-dir", out])), 1);
    assert_eq!(code(&weakdep(&["depcheck", "--c", "3", "--a", "0.9", "--out-dir", out])), 1);
    let missing = tmp.path().join("absent.csv");
    assert_eq!(code(&weakdep(&["recession", "--data", missing.to_str().unwrap(), "--out-dir", out])), 2);
}

#[test]
fn outputs_stay_in_out_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("nested/run");
    let o = weakdep(&["simulate", "--n", "50", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["manifest.txt", "trajectory.csv"]);
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 1);
}

#[test]
fn manifest_is_versioned_and_flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "dgp = dgp1\nn = 30\nseed = 5\n").unwrap();
    let out = tmp.path().join("o");
    let o = weakdep(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--n", "40", "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("# manifest_version = 1"));
    assert!(manifest.contains("\nn = 40\n"));
    assert!(manifest.contains("\nseed = 5\n"));
    let rows = std::fs::read_to_string(out.join("trajectory.csv")).unwrap().lines().count();
    assert_eq!(rows, 41);
}

#[test]
fn bounds_prints_eps1() {
    let tmp = tempfile::tempdir().unwrap();
    let o = weakdep(&[
        "bounds", "--M", "1", "--mu", "2", "--alpha", "3", "--eta", "0.05", "--n", "100000", "--G", "0.1",
        "--L1", "1e-3", "--L2", "1e-5", "--L", "1", "--N", "1", "--S", "1",
        "--out-dir", tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("eps1"));
    assert!(Path::new(&tmp.path().join("bounds.csv")).exists());
}
