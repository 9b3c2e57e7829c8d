use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_decayrate"));
    c.env_remove("DECAYRATE_OUT_DIR");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn cavity_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["cavity", "--r", "0.9", "--k0d", "1e-3", "--out", "c.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = read_csv(&dir.path().join("c.csv"));
    assert_eq!(
        h,
        ["k0d", "r_mir", "ratio_quadrature", "ratio_series", "ratio_limit_2nd", "err_estimate", "status", "method", "d_over_lambda0"]
    );
    assert_eq!(rows.len(), 1);
    let q = col(&h, &rows, "ratio_quadrature")[0];
    assert!((q - 19.0).abs() < 0.01, "{q}");
}

#[test]
fn mirror_sweep_starts_near_zero_and_relaxes_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["mirror", "--r=-1", "--axis", "d-over-lambda", "--grid", "0.01:3:300"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = read_csv(&dir.path().join("mirror.csv"));
    assert_eq!(rows.len(), 300);
    let closed = col(&h, &rows, "ratio_closed");
    let diff = col(&h, &rows, "abs_diff");
    assert!(closed[0] < 0.01);
    assert!((closed[299] - 1.0).abs() < 0.01);
    assert!(diff.iter().all(|&d| d < 1e-6));
    assert!(rows.iter().all(|r| r.last().unwrap() == "ok"));
}

#[test]
fn invalid_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["mirror", "--grid", "3:1:10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("mirror.csv").exists());
    assert_eq!(run(&["mirror", "--method", "series"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["cavity", "--r", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["figure", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["mirror", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn nonconvergence_exits_3_with_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["cavity", "--r", "0.999999", "--axis", "k0d", "--grid", "0.1:500:2", "--method", "quadrature", "--tol", "1e-12"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let (h, rows) = read_csv(&dir.path().join("cavity.csv"));
    let q = col(&h, &rows, "ratio_quadrature");
    assert!(q[0].is_finite());
    assert!(q[1].is_nan());
    let status = h.iter().position(|x| x == "status").unwrap();
    assert_eq!(rows[0][status], "ok");
    assert!(rows[1][status].contains("did not converge"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let work = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["optical", "--r", "0.3", "--k0d", "70"])
        .env("DECAYRATE_OUT_DIR", dir.path())
        .current_dir(work.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("optical.csv").exists());
}

#[test]
fn lindblad_is_reproducible_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["lindblad", "--grid", "0:4:21", "--n-traj", "2000", "--seed", "17"];
    let a = run(&[&args[..], &["--out", "a.csv"]].concat(), dir.path());
    let b = run(&[&args[..], &["--out", "b.csv"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let (h, rows) = read_csv(&dir.path().join("a.csv"));
    assert_eq!(&h[..5], ["t", "pop_jc", "pop_single_rate", "pop_jump_mean", "pop_jump_stderr"]);
    assert!(col(&h, &rows, "seed").iter().all(|&s| s == 17.0));
    let exact = col(&h, &rows, "pop_single_rate");
    let mean = col(&h, &rows, "pop_jump_mean");
    let se = col(&h, &rows, "pop_jump_stderr");
    for i in 0..rows.len() {
        assert!((mean[i] - exact[i]).abs() <= 3.0 * se[i] + 1e-12);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "# dielectric mirror\nr = -0.5\nk0d = 3 # near field\n").unwrap();
    let out = run(&["mirror", "--config", "run.cfg", "--k0d", "2", "--dump-config"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("r = -0.5\n"));
    assert!(text.contains("k0d = 2\n"));
    std::fs::write(dir.path().join("dumped.cfg"), &text).unwrap();
    let again = run(&["mirror", "--config", "dumped.cfg", "--dump-config"], dir.path());
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn validate_quick_is_fast_and_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let out = run(&["validate", "--quick"], dir.path());
    assert!(started.elapsed().as_secs_f64() < 30.0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(lines.len() >= 15);
    let expected = if lines.iter().any(|l| l.starts_with("FAIL")) { 1 } else { 0 };
    assert_eq!(out.status.code(), Some(expected));
}

#[test]
fn perturbed_kernel_fails_oracle_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["validate", "--quick", "--perturb-kernel", "1e-3"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("mirror_oracle_equivalence")), "{text}");
    let clean = String::from_utf8(run(&["validate", "--quick"], dir.path()).stdout).unwrap();
    assert!(clean.lines().any(|l| l.starts_with("PASS") && l.contains("mirror_oracle_equivalence")));
}

#[test]
fn figure_writes_manifest_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figure", "subwl_plasmonic_vs_d", "--out", "fig"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = read_csv(&dir.path().join("fig/manifest.csv"));
    assert_eq!(rows.len(), 3);
    let file = h.iter().position(|x| x == "file").unwrap();
    for row in &rows {
        assert!(dir.path().join("fig").join(&row[file]).exists());
    }
}
