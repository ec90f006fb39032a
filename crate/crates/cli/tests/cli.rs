use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BENCHMARK_MODELS: &str = r#""vehicle": {"num": [1], "den": [0, 0, 1]},
    "controller": {"num": [3, 43, 110], "den": [1, 2.9, 1]}"#;

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn benchmark(dir: &TempDir, n: usize, eps: f64) -> PathBuf {
    write_config(
        dir,
        &format!("benchmark_{n}_{eps}.json"),
        &format!(r#"{{"n": {n}, "gains": 1, "asymmetries": {eps}, {BENCHMARK_MODELS}}}"#),
    )
}

fn run(args: &[&str], config: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_platoon-lab"));
    cmd.args(args).arg("--config").arg(config);
    if let Some(t) = threads {
        cmd.env("PLATOON_LAB_THREADS", t);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn spectrum_of_three_vehicles() {
    let dir = TempDir::new().unwrap();
    let o = run(&["spectrum"], &benchmark(&dir, 3, 0.5), None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ev: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((ev[0] - 0.5).abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    assert!((v["theorem1_lower"].as_f64().unwrap() - 0.25 / 3.0).abs() < 1e-15);
    assert!(v["dominance_certificate"]["lower_bound"].as_f64().unwrap() <= 0.5);
    for key in ["fiedler", "gershgorin_upper"] {
        assert!(v[key].is_number(), "{key}");
    }
}

#[test]
fn symmetric_platoon_has_no_uniform_bound() {
    let dir = TempDir::new().unwrap();
    let o = run(&["spectrum"], &benchmark(&dir, 6, 1.0), None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["theorem1_lower"].is_null());
    assert!(v["dominance_certificate"].is_null());
    assert!(stderr(&o).contains("notice"));
}

#[test]
fn missing_den_is_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bad.json",
        r#"{"n": 3, "gains": 1, "asymmetries": 0.5,
            "vehicle": {"num": [1], "den": [0, 0, 1]},
            "controller": {"num": [3, 43, 110]}}"#,
    );
    let o = run(&["spectrum"], &cfg, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("controller.den required"));
}

#[test]
fn unreadable_config_is_config_error() {
    let o = run(&["spectrum"], Path::new("/nonexistent/platoon.json"), None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn harmonic_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let verdict = |o: &Output| -> String {
        let v: Value = serde_json::from_str(&stdout(o)).unwrap();
        v["verdict"].as_str().unwrap().to_string()
    };
    let o = run(&["harmonic"], &benchmark(&dir, 20, 0.5), None);
    assert_eq!((o.status.code(), verdict(&o).as_str()), (Some(0), "harmonically-unstable"));
    let o = run(&["harmonic"], &benchmark(&dir, 20, 1.0), None);
    assert_eq!((o.status.code(), verdict(&o).as_str()), (Some(0), "test-inconclusive"));
    let unstable = write_config(
        &dir,
        "unstable.json",
        r#"{"n": 5, "gains": 1, "asymmetries": 0.5,
            "vehicle": {"num": [1], "den": [0, 0, 1]},
            "controller": {"num": [1], "den": [1]}}"#,
    );
    let o = run(&["harmonic"], &unstable, None);
    assert_eq!((o.status.code(), verdict(&o).as_str()), (Some(3), "unstable-blocks"));
}

#[test]
fn freqresp_csv_shape() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fr.csv");
    let o = run(&["freqresp", "--points", "50", "--out", out.to_str().unwrap()], &benchmark(&dir, 8, 0.5), None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega_rad_s,re,im,mag_db"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    let mantissa = c.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
                    assert_eq!(mantissa.len(), 17, "{c}");
                    c.parse().unwrap()
                })
                .collect()
        })
        .collect();
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][0], 1e-3);
    assert_eq!(rows[49][0], 1e3);
    assert!(rows[0][3].abs() < 1e-3, "low-frequency gain {} dB", rows[0][3]);
    for r in &rows {
        let db = 20.0 * (r[1] * r[1] + r[2] * r[2]).sqrt().log10();
        assert!((db - r[3]).abs() < 1e-9 * (1.0 + db.abs()));
    }
}

#[test]
fn gamma_sweep_rows() {
    let dir = TempDir::new().unwrap();
    let o = run(&["gamma", "--n-min", "5", "--n-max", "20", "--n-step", "5"], &benchmark(&dir, 5, 0.5), None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,gamma,gamma_root_n,zeta_min_lower"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.iter().map(|r| r[0] as usize).collect::<Vec<_>>(), vec![5, 10, 15, 20]);
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
    assert!(rows.iter().all(|r| r[1] >= r[3]));
}

#[test]
fn gamma_rejects_array_template() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "arr.json",
        &format!(r#"{{"n": 3, "gains": [1, 2], "asymmetries": 0.5, {BENCHMARK_MODELS}}}"#),
    );
    let o = run(&["gamma"], &cfg, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sweep requires scalar template"));
}

#[test]
fn step_output_and_limits() {
    let dir = TempDir::new().unwrap();
    let cfg = benchmark(&dir, 4, 0.5);
    let o = run(&["step", "--t-end", "1", "--dt", "0.01"], &cfg, None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t,pos_2,pos_3,pos_4"));
    assert_eq!(text.lines().count(), 102);

    let abs = run(&["step", "--t-end", "1", "--dt", "0.01", "--absolute"], &cfg, None);
    let first: Vec<f64> = stdout(&abs).lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, -1.0, -2.0, -3.0]);

    let o = run(&["step", "--dt", "0.5"], &cfg, None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("require dt <="));
}

#[test]
fn identities_pass_and_fail() {
    let dir = TempDir::new().unwrap();
    let o = run(&["identities"], &benchmark(&dir, 10, 0.5), None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["identities"], &benchmark(&dir, 6, 0.0), None);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("simple eigenvalues required"));

    let cfg = write_config(
        &dir,
        "mu2.json",
        &format!(r#"{{"n": 5, "gains": [2, 1, 1.5, 0.8], "asymmetries": [0.4, 0.7, 0.2, 0], {BENCHMARK_MODELS}}}"#),
    );
    let o = run(&["identities"], &cfg, None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("expected=5.0000000000000000e-1"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = benchmark(&dir, 12, 0.5);
    for args in [&["freqresp"][..], &["gamma", "--n-max", "20"][..], &["harmonic"][..]] {
        let a = run(args, &cfg, Some("1"));
        let b = run(args, &cfg, Some("4"));
        let c = run(args, &cfg, Some("0"));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}
