use std::path::Path;
use std::process::{Command, Output};

use mjd_bench::{read_csv, HEADER};
use mjd_core::{Route, SchemeKind};

fn bench(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mjd-bench"))
        .args(args)
        .current_dir(dir)
        .env_remove("MJD_BENCH_OUT_DIR")
        .output()
        .unwrap()
}

#[test]
fn single_point_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(
        &[
            "run", "--scheme", "ia", "--M", "4", "--K", "5", "--alpha", "0.5", "--gamma-db", "20", "--route", "both",
            "--iters", "200", "--out", "ia.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("ia.csv")).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    let rows = read_csv(&dir.path().join("ia.csv")).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.scheme == SchemeKind::IA && (r.m, r.k, r.n) == (4, 5, 6)));
    assert_eq!(rows[1].route, Route::MonteCarlo);
    assert_eq!(rows[1].iterations, Some(200));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn default_output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_mjd-bench"))
        .args(["run", "--scheme", "mjd", "--route", "analytic"])
        .current_dir(dir.path())
        .env("MJD_BENCH_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("point.csv").exists());
}

#[test]
fn compare_flags_a_corrupted_file() {
    let dir = tempfile::tempdir().unwrap();
    let run = bench(&["run", "--scheme", "mjd,ci", "--iters", "100", "--out", "p.csv"], dir.path());
    assert!(run.status.success());
    assert!(bench(&["compare", "--in", "p.csv"], dir.path()).status.success());

    let text = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mc = lines.iter().position(|l| l.starts_with("ci,mc,")).unwrap();
    let mut fields: Vec<String> = lines[mc].split(',').map(String::from).collect();
    fields[7] = "1.0".into();
    fields[8] = "1.0".into();
    lines[mc] = fields.join(",");
    std::fs::write(dir.path().join("bad.csv"), lines.join("\n") + "\n").unwrap();
    let out = bench(&["compare", "--in", "bad.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn compare_without_partner_rows_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bench(&["run", "--scheme", "rdma", "--route", "analytic", "--out", "a.csv"], dir.path()).status.success());
    let out = bench(&["compare", "--in", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no mc row"));
}

#[test]
fn dof_preset_and_gnuplot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(&["run", "--preset", "fig3", "--out", "dof.csv"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("dof.csv")).unwrap();
    assert_eq!(text.lines().count(), 33);
    assert!(text.contains("ci,3,5,6,2,3,"));

    let out = bench(
        &["run", "--preset", "fig4", "--route", "analytic", "--scheme", "mjd", "--gnuplot", "--out", "f4.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let gp = std::fs::read_to_string(dir.path().join("f4.gp")).unwrap();
    assert!(gp.contains("f4.csv"));
    assert_eq!(read_csv(&dir.path().join("f4.csv")).unwrap().len(), 10);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# reference point, one scheme\nscheme = mjd\nroute = mc\niters = 30\nseed = 5\nout = cfg.csv\n",
    )
    .unwrap();
    let out = bench(&["run", "--config", "run.cfg", "--seed", "6"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&dir.path().join("cfg.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].iterations, rows[0].seed), (Some(30), Some(6)));
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(&["run", "--preset", "fig9"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig9"));
    let out = bench(&["run", "--K", "5", "--M", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = bench(&["compare", "--in", "missing.csv"], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));
}

#[test]
fn runtime_column_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    bench(&["run", "--scheme", "ci", "--route", "analytic", "--out", "a.csv"], dir.path());
    bench(&["run", "--scheme", "ci", "--route", "analytic", "--record-runtime", "--out", "b.csv"], dir.path());
    assert_eq!(read_csv(&dir.path().join("a.csv")).unwrap()[0].runtime_ms, None);
    assert!(read_csv(&dir.path().join("b.csv")).unwrap()[0].runtime_ms.is_some());
}
