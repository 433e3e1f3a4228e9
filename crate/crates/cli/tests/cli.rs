use std::path::Path;
use std::process::{Command, Output};

fn btq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btq")).args(args).output().expect("btq runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn stab_at_the_origin() {
    let o = btq(&["stab", "0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("order: 6"), "{s}");
    assert!(s.contains("label: SplitQuaternionic"));
}

#[test]
fn stab_json_on_the_elliptic_curve() {
    let o = btq(&["--backend", "elliptic", "--q", "3", "--format", "json", "stab", "1", "1/pi"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["label"], "RationalAbelian");
}

#[test]
fn stab_of_a_takahashi_vertex_follows_the_root_count() {
    let dir = tempfile::tempdir().unwrap();
    // y² + 2xy + y = x³ + x² over F_3: λ = 1 has no root μ
    let cfg = dir.path().join("curve.toml");
    std::fs::write(&cfg, "kind = \"EllipticDelta1\"\nq = 3\nweierstrass = [2, 1, 1, 0, 0]\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = btq(&["--config", cfg, "--format", "json", "stab", "2", "1/pi+pi"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["label"], "CM");
    assert_eq!(v["order"], 8);
}

#[test]
fn malformed_spec_exits_with_usage_code() {
    assert_eq!(btq(&["stab", "1;(t"]).status.code(), Some(2));
    assert_eq!(btq(&["stab", "x", "t"]).status.code(), Some(2));
}

fn quotient_files(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    args.push("quotient");
    btq(&args)
}

#[test]
fn quotient_writes_all_formats_reproducibly() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = quotient_files(a.path(), &["--backend", "elliptic", "--seed", "5"]);
    let ob = quotient_files(b.path(), &["--backend", "elliptic", "--seed", "5"]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert!(stdout(&oa).contains("rays: 3"));
    assert!(stdout(&oa).contains("omega: 0"));
    for ext in ["dot", "json", "csv"] {
        let fa = std::fs::read(a.path().join(format!("quotient.{ext}"))).unwrap();
        let fb = std::fs::read(b.path().join(format!("quotient.{ext}"))).unwrap();
        assert_eq!(fa, fb, "{ext} differs");
    }
}

#[test]
fn rational_quotient_reports_one_isolated_vertex() {
    let d = tempfile::tempdir().unwrap();
    let o = quotient_files(d.path(), &["--format", "json"]);
    let s = stdout(&o);
    assert!(s.contains("rays: 1") && s.contains("isolated: [v(0;)]"), "{s}");
    assert!(!d.path().join("quotient.dot").exists());
}

#[test]
fn short_radius_exits_unresolved() {
    let d = tempfile::tempdir().unwrap();
    let o = quotient_files(d.path(), &["--backend", "elliptic", "--q", "3", "--radius", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("unresolved"));
}

#[test]
fn verify_suites_pass() {
    let o = btq(&["verify", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = btq(&["--backend", "elliptic", "--q", "3", "verify", "stabilizer"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = btq(&["--backend", "quadratic", "verify", "quotient"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(btq(&["verify", "nothing"]).status.code(), Some(2));
}

#[test]
fn freepart_reports() {
    let o = btq(&["freepart"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n: 0"));
    assert_eq!(btq(&["--backend", "quadratic", "freepart"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"backend": {"kind": "EllipticDelta1", "q": 3, "weierstrass": [2, 1, 1, 0, 0]}, "radius": 8}"#,
    )
    .unwrap();
    let o = btq(&["--config", cfg.to_str().unwrap(), "freepart"]);
    let s = stdout(&o);
    assert!(s.contains("n: 1") && s.contains("factor: Z/4Z"), "{s}");
    // every λ has a root on y² + xy = x³ + 1 over F_2
    let cfg = dir.path().join("roots.toml");
    std::fs::write(&cfg, "kind = \"EllipticDelta1\"\nq = 2\nweierstrass = [1, 0, 0, 0, 1]\n").unwrap();
    let o = btq(&["--config", cfg.to_str().unwrap(), "freepart"]);
    assert!(stdout(&o).contains("n: 0"), "{}", stdout(&o));
}

#[test]
fn freepart_scan_lists_single_cm_curves() {
    let o = btq(&["--backend", "elliptic", "--q", "3", "freepart", "--scan"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("y^2 + 2xy + 1y = x^3 + 1x^2 + 0x + 0 over F_3"));
}

#[test]
fn invalid_configuration_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "kind = \"EllipticDelta1\"\nq = 2\nweierstrass = [0, 0, 0, 0, 0]\n").unwrap();
    assert_eq!(btq(&["--config", cfg.to_str().unwrap(), "stab", "0", "0"]).status.code(), Some(2));
    let cfg = dir.path().join("reducible.toml");
    std::fs::write(&cfg, "kind = \"RationalDelta2\"\nq = 2\nquadratic = [0, 1, 1]\n").unwrap();
    assert_eq!(btq(&["--config", cfg.to_str().unwrap(), "stab", "0", "0"]).status.code(), Some(2));
}
