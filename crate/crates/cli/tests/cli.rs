use std::process::{Command, Output};

fn xylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xylab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const HEADER: &str = "scheme,n_r,n_t,M,eta_bpsHz,snr_db,beta,theta,bits,bit_errors,words,word_errors,ber,wep,ci95,seed";

#[test]
fn sweep_snr_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = xylab(&[
        "sweep-snr", "--scheme", "x-code", "--snr", "6:10:2", "--max-words", "4000", "--seed", "3",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("x-code,2,2,2,4,6,"));
    assert!(lines[3].ends_with(",3"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"scheme": "svd-uncoded", "m": 4, "snr_points": [5.0], "max_words": 2000, "seed": 11}"#,
    )
    .unwrap();
    let o = xylab(&["sweep-snr", "--config", cfg.to_str().unwrap(), "--seed", "12", "--snr", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("svd-uncoded,2,2,4,8,7,"), "{row}");
    assert!(row.ends_with(",12"));
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |w: &str| {
        let o = xylab(&["sweep-snr", "--scheme", "y-precoder", "--mod", "4", "--snr", "8,12", "--max-words", "5000", "--workers", w]);
        assert!(o.status.success());
        stdout(&o)
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn sweep_beta_rows_per_condition_number() {
    let o = xylab(&["sweep-beta", "--scheme", "x-precoder", "--snr", "20", "--beta", "1,4", "--max-words", "3000"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains(",20,1,,"));
    assert!(rows[1].contains(",20,4,,"));
}

#[test]
fn bound_and_angle_scan_modes() {
    let o = xylab(&["bound", "--snr", "10:20:10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("gamma_db,value,scheme,params\n"));
    assert_eq!(text.lines().count(), 3);

    let o = xylab(&["angle-scan", "--mode", "bound", "--theta", "0.2,0.4", "--snr", "15"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);

    let o = xylab(&["angle-scan", "--theta", "0.4636", "--snr", "10", "--max-words", "2000"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",0.4636,"));
}

#[test]
fn design_table_lists_every_kind() {
    let o = xylab(&["design", "--mod", "4", "--beta", "1,8", "--design-samples", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for kind in ["x-code,4", "y-code,4,1", "x-precoder,4,,8", "y-precoder,4,,1"] {
        assert!(text.contains(kind), "missing {kind} in\n{text}");
    }
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let cases: &[&[&str]] = &[
        &["sweep-snr", "--mod", "3", "--snr", "10"],
        &["sweep-snr"],
        &["sweep-snr", "--snr", "20:10:1"],
        &["sweep-beta", "--snr", "20"],
        &["sweep-snr", "--config", "/nonexistent/run.json", "--snr", "5"],
        &["bound", "--nr", "4", "--snr", "10"],
        &["sweep-snr", "--snr", "5", "--out", "/nonexistent/dir/out.csv", "--max-words", "10"],
    ];
    for args in cases {
        let o = xylab(args);
        assert!(!o.status.success(), "{args:?} should fail");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.starts_with("xylab: error:"), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
}

#[test]
fn unknown_config_field_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"snr": [1]}"#).unwrap();
    let o = xylab(&["sweep-snr", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field"));
}
