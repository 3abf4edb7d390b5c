use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pairsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scan(dir: &Path, extra: &[&str]) {
    let mut args = vec!["scan", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = pairsim(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

/// Header and rows of a CSV file.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h.starts_with(name)).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn value_in_row(report: &str, label: &str, col: usize) -> f64 {
    let line = report.lines().find(|l| l.starts_with(label)).unwrap_or_else(|| panic!("no row {label}"));
    line.split_whitespace().rev().nth(col).unwrap().parse().unwrap()
}

const SMALL: &[&str] = &["--omega", "8", "--g-points", "9", "--g-max", "40"];

#[test]
fn identical_config_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    scan(a.path(), SMALL);
    scan(b.path(), SMALL);
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn parallel_and_serial_scans_agree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    scan(a.path(), &[SMALL, &["--no-plots"]].concat());
    scan(b.path(), &[SMALL, &["--no-plots", "--serial"]].concat());
    for m in ["exact", "bcs", "pbcs"] {
        let f = format!("scan_{m}.csv");
        assert_eq!(fs::read(a.path().join(&f)).unwrap(), fs::read(b.path().join(&f)).unwrap());
    }
}

#[test]
fn full_size_scan_properties() {
    let dir = tempfile::tempdir().unwrap();
    scan(dir.path(), &["--methods", "exact,bcs", "--no-plots"]);
    let (eh, er) = read_csv(&dir.path().join("scan_exact.csv"));
    let (bh, br) = read_csv(&dir.path().join("scan_bcs.csv"));
    assert_eq!(er.len(), 61);

    // G = 0: every correlation column vanishes.
    let first = &er[0];
    assert_eq!(first[0], "0");
    for (h, v) in eh.iter().zip(first).skip(2) {
        if !h.starts_with("delta") {
            assert_eq!(v, "0", "{h}");
        }
    }

    // Right end of the grid, G = 10Ωε: scaled entropy and gap approach 1.
    let g = column(&eh, &er, "G/eps");
    assert!(*g.last().unwrap() >= 160.0);
    assert!((column(&eh, &er, "E_over_2Omega").last().unwrap() - 1.0).abs() < 1e-3);
    assert!((column(&bh, &br, "E_over_2Omega").last().unwrap() - 1.0).abs() < 1e-3);
    let gap = *column(&bh, &br, "delta_over_g").last().unwrap();
    assert!((gap - 1.0).abs() < 0.01, "Delta/g = {gap}");

    // Exact C(8,9) peaks inside the grid; the BCS column is identically 0.
    let c = column(&eh, &er, "C_8_9");
    let peak = (0..c.len()).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
    assert!(peak > 0 && peak + 1 < c.len() && c[peak] > 0.1);
    let i = bh.iter().position(|h| h.starts_with("C_8_9")).unwrap();
    assert!(br.iter().all(|r| r[i] == "0"));
}

#[test]
fn plots_are_svg() {
    let dir = tempfile::tempdir().unwrap();
    scan(dir.path(), SMALL);
    for name in [
        "one_body_entropy",
        "mode_entropy",
        "schmidt_entropy",
        "entanglement_of_formation",
        "mutual_information_discord",
        "projected_bcs",
    ] {
        let text = fs::read_to_string(dir.path().join(format!("{name}.svg"))).unwrap();
        assert!(text.starts_with("<svg") && text.contains("<polyline"), "{name}");
    }
}

#[test]
fn two_level_point_report() {
    let o = pairsim(&["point", "--omega", "2", "--g", "1"]);
    assert!(o.status.success());
    let r = stdout(&o);
    let line = r.lines().find(|l| l.starts_with("C(1,2)")).unwrap();
    assert_eq!(line.split_whitespace().nth(1), Some("0.707107"), "{line}");
}

#[test]
fn strong_coupling_point_report() {
    let o = pairsim(&["point", "--omega", "16", "--g", "1600", "--methods", "exact", "--pairs-of-levels", "8:9"]);
    assert!(o.status.success());
    let c = value_in_row(&stdout(&o), "C(8,9)", 0);
    assert!((c / (1.0 / 15.0) - 1.0).abs() < 0.01, "C = {c}");
}

#[test]
fn zero_coupling_point_report() {
    let o = pairsim(&["point", "--omega", "6", "--g", "0"]);
    assert!(o.status.success());
    let r = stdout(&o);
    for line in r.lines().skip(3).filter(|l| !l.starts_with("Delta")) {
        assert!(line.split_whitespace().rev().take(3).all(|v| v == "0.000000"), "{line}");
    }
}

#[test]
fn limits_table() {
    let o = pairsim(&["limits", "--omega", "8"]);
    assert!(o.status.success());
    let r = stdout(&o);
    assert!((value_in_row(&r, "C ", 2) - 1.0 / 7.0).abs() < 1e-6);
    assert!((value_in_row(&r, "C ", 0) - 1.0 / 7.0).abs() < 1e-4);
    assert!(!pairsim(&["limits", "--omega", "7"]).status.success());
}

#[test]
fn flags_beat_environment_beat_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "omega = 4\ng_points = 7\ng_max = 3\nmethods = exact\n").unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_pairsim"))
        .args(["scan", "--no-plots", "--config", conf.to_str().unwrap(), "--omega", "6"])
        .args(["--out", out.to_str().unwrap()])
        .env("PAIRSIM_G_POINTS", "4")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let resolved = fs::read_to_string(out.join("scan.conf")).unwrap();
    assert!(resolved.contains("omega = 6\n"));
    assert!(resolved.contains("g_points = 4\n"));
    assert!(resolved.contains("g_max = 3\n"));
    assert!(resolved.contains("methods = exact\n"));
    assert_eq!(read_csv(&out.join("scan_exact.csv")).1.len(), 4);
}

#[test]
fn bad_input_exits_nonzero() {
    let o = pairsim(&["scan", "--omega", "4", "--g-points", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pairsim(&["point", "--omega", "4", "--g", "1", "--pairs-of-levels", "2:2"]);
    assert_eq!(o.status.code(), Some(2));
    let file = tempfile::NamedTempFile::new().unwrap();
    let blocked = file.path().join("sub");
    let o = pairsim(&["scan", "--omega", "2", "--g-points", "2", "--out", blocked.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fast_verify_passes() {
    let o = pairsim(&["verify", "--level", "fast"]);
    let r = stdout(&o);
    assert!(o.status.success(), "{r}");
    assert_eq!(r.lines().filter(|l| l.starts_with("[PASS]")).count(), 8, "{r}");
    assert_eq!(r.lines().filter(|l| l.starts_with("[SKIP]")).count(), 2);
}

#[test]
fn corrupted_conjugation_fails_oracle_suite() {
    let o = pairsim(&["verify", "--level", "fast", "--corrupt-conjugation"]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<&str> = r.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(failed.len(), 1, "{r}");
    assert!(failed[0].contains("concurrence oracle"));
}
