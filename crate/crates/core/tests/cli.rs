//! End-to-end runs of the binary.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mic-kepler")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records().map(|r| r.unwrap().iter().map(str::to_owned).collect()).collect()
}

#[test]
fn spectrum_lists_hydrogen_levels() {
    let (code, out, _) = run(&["spectrum", "--n-max", "3", "--m", "0"]);
    assert_eq!(code, 0);
    let e: Vec<f64> = csv_rows(&out).iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(e, vec![-0.5, -0.125, -1.0 / 18.0]);
}

#[test]
fn spectrum_with_monopole_starts_at_half_integer_n() {
    let (code, out, _) = run(&["spectrum", "--s", "1/2", "--c1", "0.3", "--n-max", "3/2"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[0] == "1.5"), "{rows:?}");
}

#[test]
fn hydrogen_n2_w_is_a_rotation_by_45_degrees() {
    let (code, out, _) = run(&["coefficients", "--n", "2", "--m", "0", "--kind", "w"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    for r in &rows {
        for v in &r[1..] {
            let x: f64 = v.parse().unwrap();
            assert!((x.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
    }
    let prod: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap() * r[2].parse::<f64>().unwrap()).sum();
    assert!(prod.abs() < 1e-14);
}

#[test]
fn u_is_identity_at_zero_distance() {
    let (code, out, _) = run(&["coefficients", "--n", "3", "--m", "0", "--kind", "u", "--R", "0", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&out).unwrap();
    for (i, row) in rows.iter().enumerate() {
        for q in 0..rows.len() {
            let v = row[&format!("q={q}")].as_f64().unwrap();
            assert!((v - if q == i { 1.0 } else { 0.0 }).abs() < 1e-14);
        }
    }
}

#[test]
fn sweep_matches_two_by_two_closed_form() {
    let (code, out, _) = run(&["sweep", "--n", "2", "--m", "0", "--R-grid", "0,1,4"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    for r in rows {
        let (rr, q, l): (f64, usize, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        let disc = (1.0 + rr * rr / 4.0).sqrt();
        let want = if q == 0 { 1.0 - disc } else { 1.0 + disc };
        assert!((l - want).abs() < 1e-13, "R={rr} q={q}");
    }
}

#[test]
fn verify_single_system_writes_reports() {
    let path = std::env::temp_dir().join(format!("mic-kepler-cli-{}.csv", std::process::id()));
    let (code, _, _) = run(&["verify", "--s", "1", "--c1", "0.3", "--c2", "0.7", "--n-max", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(code, 0);
    let rows = csv_rows(&text);
    assert!(rows.len() > 20);
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    assert_eq!(run(&["sweep", "--n", "2", "--m", "0", "--R-grid", "3,1"]).0, 2);
    assert_eq!(run(&["coefficients", "--n", "2", "--m", "5", "--kind", "w"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}
