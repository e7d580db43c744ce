use std::process::{Command, Output};

fn aber(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aber")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const KMS: [&str; 16] = [
    "aber", "--model", "kappa-mu-shadowed", "--kappa", "2", "--mu", "2", "--m", "1", "--nt", "2", "--nr", "2", "--mod",
    "bpsk", "--a",
];

#[test]
fn flag_scenario_gives_sixteen_rows() {
    let mut args = KMS.to_vec();
    args.extend(["2", "--snr", "0:2:30"]);
    let o = aber(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,aber_closed");
    assert_eq!(lines.len(), 17);
    assert!(!text.contains('\r'));
    let values: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn output_is_byte_deterministic_across_thread_counts() {
    let mut args = KMS.to_vec();
    args.extend(["2", "--snr", "0:2:30", "--verify"]);
    let one = Command::new(env!("CARGO_BIN_EXE_aber")).args(&args).env("ABER_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_aber")).args(&args).env("ABER_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let text = stdout(&one);
    assert!(text.starts_with("snr_db,aber_closed,aber_oracle_approx,aber_oracle_exact,rel_dev\n"));
}

#[test]
fn malformed_snr_is_a_usage_error() {
    let mut args = KMS.to_vec();
    args.extend(["2", "--snr", "0:2"]);
    let o = aber(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("snr"));
}

#[test]
fn config_file_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"fading": {"model": "kappa-mu-shadowed", "mu": 2, "m": 1}, "noise": {"a": 2},
            "modulation": "bpsk", "snr_db": {"start": 0, "step": 5, "stop": 20}}"#,
    )
    .unwrap();
    let o = aber(&["aber", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fading.kappa"));

    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"fading": {"model": "rayleigh"}, "mimo": {"nt": 1, "nr": 1}, "noise": {"a": 2, "fit": "table"},
            "modulation": "bpsk", "snr_db": {"start": 0, "step": 5, "stop": 20}}"#,
    )
    .unwrap();
    let o = aber(&["aber", "--config", good.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["scenario"]["fading"]["model"], "rayleigh");
}

#[test]
fn presets_produce_multi_curve_csv() {
    for name in ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"] {
        let o = aber(&["aber", "--preset", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("snr_db,") && header.split(',').count() >= 4, "{header}");
        assert_eq!(text.lines().count(), 17);
    }
    let o = aber(&["aber", "--preset", "fig3", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["note"].as_str().unwrap().contains("representative"));
    assert!(doc["curves"].as_array().unwrap().iter().all(|c| c["scenario"]["mimo"]["nt"] == 2));
}

#[test]
fn verify_passes_and_detects_corrupted_fit() {
    let o = aber(&["verify", "--preset", "fig1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = aber(&["verify", "--model", "kappa-mu-shadowed", "--kappa", "0", "--mu", "2", "--m", "1", "--mod", "qpsk", "--a", "1", "--snr", "0:5:30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = aber(&["verify", "--preset", "fig1", "--p-scale", "1.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn qfit_rows() {
    let o = aber(&["qfit", "--a", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let row: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["a", "p", "q", "max_abs_dev", "source"]);
    assert_eq!(row["source"], "refit");

    let o = aber(&["qfit", "--table"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[3]["p"], serde_json::json!([0.099, 0.157, 0.124, 0.119]));
    let table_dev = rows[3]["max_abs_dev"].as_f64().unwrap();
    assert!(row["max_abs_dev"].as_f64().unwrap() <= 1.5 * table_dev);

    assert_eq!(aber(&["qfit", "--a", "0.1"]).status.code(), Some(2));
    assert_eq!(aber(&["qfit", "--a", "2", "--grid", "0,1,2"]).status.code(), Some(2));
}

#[test]
fn pdf_values_and_norm() {
    let o = aber(&["pdf", "--model", "eta-mu", "--eta", "1", "--mu", "0.5", "--mean-power", "1", "--gamma", "1", "--check-norm"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "gamma,pdf");
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 0.36787944117144233).abs() < 1e-7);
    let norm: f64 = lines[2].strip_prefix("norm,").unwrap().parse().unwrap();
    assert!((norm - 1.0).abs() < 1e-7);

    let o = aber(&["pdf", "--model", "kappa-mu-shadowed", "--kappa", "0", "--mu", "2", "--m", "1", "--gamma", "0"]);
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "0,0.00000000e0");

    assert_eq!(aber(&["pdf", "--model", "hoyt", "--q", "2", "--gamma", "1"]).status.code(), Some(2));
    assert_eq!(aber(&["pdf", "--model", "warp", "--gamma", "1"]).status.code(), Some(2));
}
