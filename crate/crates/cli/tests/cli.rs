use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn trap_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trap-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("TRAP_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tunneling_set1_channel_rate_in_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = trap_lab(&["tunneling", "--scenario", "preset:set1", "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("o/set1.tunneling.json"));
    let rate = report["channel_rate"].as_f64().unwrap();
    assert!((1.7e-7..=1.5e-6).contains(&rate), "{rate}");
    for key in ["scenario", "energy", "v_max", "v_min", "xi_d", "theta_bound", "hits_per_omega", "barrier_rate", "z_w"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["config_sha256"].as_str().unwrap().len(), 64);
    let cont = fs::read_to_string(dir.path().join("o/set1.continuum.csv")).unwrap();
    assert!(cont.lines().nth(1) == Some("z,v"));
}

#[test]
fn missing_alpha_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.json"), r#"{"id":"x","beta":1,"gamma":0.01,"kappa_z":0.9,"m":2}"#).unwrap();
    let out = trap_lab(&["potentials", "--scenario", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn syntax_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.json"), "{\n \"id\": \"x\",\n \"alpha\": ,\n}").unwrap();
    let out = trap_lab(&["potentials", "--scenario", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn numerical_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.json"), r#"{"id":"short","preset":"set1","grid":{"xi_max":1.0}}"#).unwrap();
    let out = trap_lab(&["tunneling", "--scenario", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_from_flags_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = trap_lab(&["potentials", "--scenario", "preset:set1", "--variant", "bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = trap_lab(&["potentials", "--scenario", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = trap_lab(&["classical", "--scenario", "preset:set1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_trap-lab"))
        .args(["potentials", "--scenario", "preset:set1"])
        .current_dir(dir.path())
        .env("TRAP_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn potentials_csv_layout_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = trap_lab(&["potentials", "--scenario", "preset:set2", "--grid-step", "0.01", "--variant", "paraxial"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("out/set2.potentials.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# scenario=set2 config_sha256="));
    assert_eq!(lines.next().unwrap(), "xi,theta,lambda,v_plus,v_minus,v_tilde_plus,v_tilde_minus,w0_mult,w0_deriv");
    assert_eq!(lines.count(), 6000);
}

#[test]
fn boundstate_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = trap_lab(&["boundstate", "--scenario", "preset:set1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("out/set1.boundstates.json"));
    let states = r["states"].as_array().unwrap();
    assert!(!states.is_empty());
    assert_eq!(states[0]["nodes"], 0);
    assert_eq!(states[0]["variant"], "full");
    let e = states[0]["energy"].as_f64().unwrap();
    assert!((0.5..=0.9).contains(&e));
    assert!(dir.path().join("out/set1.u0.csv").exists());
}

#[test]
fn classical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"id":"c","preset":"set2","beta":-0.01,"variant":"paraxial",
           "classical":{"initial":{"tuned_radius":2.0,"tuned_beta":0.0},"dt":0.01,"steps":500,"betas":[-0.01,-0.001]}}"#,
    )
    .unwrap();
    let out = trap_lab(&["classical", "--scenario", "c.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let traj = fs::read_to_string(dir.path().join("out/c.trajectory.csv")).unwrap();
    assert_eq!(traj.lines().nth(1), Some("tau,x,y,z,vx,vy,vz,sx,sy,sz"));
    assert_eq!(traj.lines().count(), 2 + 501);
    let sweep = json(&dir.path().join("out/c.sweep.json"));
    let data = sweep["data"].as_array().unwrap();
    assert_eq!(data.len(), 2);
    for key in ["beta", "radial_spread", "circularity", "escaped"] {
        assert!(data[0].get(key).is_some());
    }
}

#[test]
fn reproduce_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = trap_lab(&["reproduce", "--out", "a"], dir.path());
    let b = Command::new(env!("CARGO_BIN_EXE_trap-lab"))
        .args(["reproduce", "--out", "b"])
        .current_dir(dir.path())
        .env("TRAP_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    let ta = fs::read(dir.path().join("a/reproduction.csv")).unwrap();
    let tb = fs::read(dir.path().join("b/reproduction.csv")).unwrap();
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.contains("set1,channel_rate,"));
    assert!(text.lines().skip(2).all(|l| l.ends_with(",PASS") || l.ends_with(",FAIL")));
}
