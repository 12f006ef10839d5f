use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdi-selftest"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn seesaw_reaches_the_quantum_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "seesaw",
            "--witness",
            "builtin:rac2",
            "--dim",
            "2",
            "--restarts",
            "64",
            "--seed",
            "7",
        ],
    );
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5 * (1.0 + 0.5f64.sqrt())).abs() < 1e-6);
    assert!(dir.path().join("seesaw_strategy.json").exists());
    assert!(dir.path().join("seesaw.manifest.json").exists());
}

#[test]
fn classical_prints_three_quarters() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["classical", "--witness", "builtin:rac2", "--dim", "2"],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.75");
}

#[test]
fn verify_passes_for_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    for side in ["prep", "meas"] {
        let o = run(
            dir.path(),
            &["verify", "--ineq", side, "--s", "auto", "--grid", "721"],
        );
        assert!(o.status.success(), "{side}");
        assert!(stdout(&o).starts_with("PASS"), "{side}");
    }
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert_eq!(csv.lines().count(), 722);
    assert!(!csv.contains('\r'));
}

#[test]
fn slope_must_be_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--ineq", "prep", "--s", "steep"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["seesaw", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = run(dir.path(), &["classical", "--witness", "builtin:nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        dir.path(),
        &["--threads", "0", "classical", "--witness", "builtin:rac2"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "seesaw",
            "--witness",
            "builtin:rac3",
            "--restarts",
            "1",
            "--max-iters",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_table_for_the_ideal_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["bounds", "--strategy", "builtin:rac2", "--q", "0.5"],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("bound,value,parameters\n"));
    for name in ["prep_compat_2", "meas_compat_2", "biased"] {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{name},")))
            .unwrap();
        assert_eq!(line.split(',').nth(1), Some("0.853553390593"), "{name}");
    }
}

#[test]
fn curve_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["curve", "--which", "lower", "--points", "3"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(rows[0], "parameter,A2,F");
    assert_eq!(rows[1], "0.75,0.75,0.75");
    assert_eq!(rows[3], "0.853553390593,0.853553390593,1");
}

#[test]
fn manifest_replays_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["sweep", "--samples", "40", "--seed", "3", "--threads", "2"],
    );
    assert!(o.status.success());
    let manifest = dir.path().join("sweep.manifest.json");
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "sweep");
    assert_eq!(m["seed"], 3);
    assert_eq!(m["parameters"]["samples"], 40);
    let o = run(
        dir.path(),
        &["replay", "--manifest", manifest.to_str().unwrap()],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().last(), Some("REPLAY MATCH sweep"));
    let a = std::fs::read(dir.path().join("sweep.csv")).unwrap();
    let b = std::fs::read(dir.path().join("replay/sweep.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let one = tempfile::tempdir().unwrap();
    let four = tempfile::tempdir().unwrap();
    let args = ["sweep", "--samples", "30", "--seed", "11"];
    let mut a1 = vec!["--threads", "1"];
    a1.extend(args);
    let mut a4 = vec!["--threads", "4"];
    a4.extend(args);
    assert!(run(one.path(), &a1).status.success());
    assert!(run(four.path(), &a4).status.success());
    assert_eq!(
        std::fs::read(one.path().join("sweep.csv")).unwrap(),
        std::fs::read(four.path().join("sweep.csv")).unwrap()
    );
}

#[test]
fn sdp_fidelity_at_the_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "sdp-fidelity",
            "--witness",
            "builtin:rac2",
            "--a-star",
            "0.853553390593",
        ],
    );
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(f >= 0.999, "{row}");
}
