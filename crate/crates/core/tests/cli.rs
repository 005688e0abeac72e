use std::path::Path;
use std::process::{Command, Output};

fn subord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subord")).args(args).output().expect("spawn subord")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn koebe(dir: &Path, order: usize) -> std::path::PathBuf {
    let coeffs: Vec<[f64; 2]> = (1..=order + 1).map(|k| [k as f64, 0.0]).collect();
    let desc = serde_json::json!({ "family": "A", "n": 1, "b": 2.0, "coeffs": coeffs, "order": order + 1 });
    let path = dir.join("koebe.json");
    std::fs::write(&path, desc.to_string()).unwrap();
    path
}

#[test]
fn threshold_table() {
    let o = subord(&["threshold", "--alpha", "1", "--beta", "0", "--n", "1", "--mu", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = &v["rows"][0];
    assert_eq!(a["label"], "analytic");
    assert_eq!(
        [&a["delta1"], &a["delta2"], &a["delta3"], &a["delta4"]].map(|x| x.as_f64().unwrap()),
        [-0.5, -0.5, 0.0, 0.0]
    );
    assert_eq!(v["rows"][1]["delta1"], 0.5);
}

#[test]
fn threshold_from_fixed_coefficient() {
    // b = 1/2 with n = 1 gives mu = 1/2 for the starlike theorem
    let o = subord(&["threshold", "--alpha", "1", "--beta", "0", "--b", "0.5", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("T2_1,")).unwrap();
    assert_eq!(row, "T2_1,1,0.5,1.6,-0.8,-0.8,0,0");
}

#[test]
fn missing_beta_is_a_usage_error() {
    let o = subord(&["threshold", "--alpha", "1", "--n", "1", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta"));
}

#[test]
fn out_of_domain_exits_2() {
    let o = subord(&["threshold", "--beta", "0", "--mu", "2.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = subord(&["verify", "--result", "L2_9", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2), "--mu missing");
    let o = subord(&["verify", "--result", "X9", "--beta", "0", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn koebe_is_starlike() {
    let dir = tempfile::tempdir().unwrap();
    let path = koebe(dir.path(), 4000);
    let o = subord(&["check", "--member", path.to_str().unwrap(), "--starlike", "0", "--radii", "0.5,0.9,0.99"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["starlike"], true);
    let margin = v["margin"].as_f64().unwrap();
    assert!((margin - 0.01 / 1.99).abs() < 1e-6, "{margin}");
}

#[test]
fn check_against_a_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = koebe(dir.path(), 400);
    let o = subord(&[
        "check", "--member", path.to_str().unwrap(), "--result", "T2_1.1", "--alpha", "1", "--beta", "0", "--radii", "0.5,0.9",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"], -0.5);
    assert_eq!(v["conclusion"]["verdict"], "Holds");
    assert_eq!(v["violation"], false);
}

#[test]
fn admissibility_scan_csv() {
    let o = subord(&["admissibility", "--lemma", "L2_5", "--beta", "0", "--n", "1", "--mu", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,sigma,re_psi"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 401 * 5);
    let max = rows.iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max);
    assert!(max.abs() < 1e-12);
    assert!(rows.iter().any(|r| r[0] == 0.0 && r[2].abs() < 1e-12));
}

#[test]
fn admissibility_rejects_theorems() {
    let o = subord(&["admissibility", "--lemma", "T2_1.1", "--beta", "0", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_writes_reports_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "verify".to_string(), "--result".into(), "L2_9".into(), "--alpha".into(), "0.5".into(), "--beta".into(), "0.25".into(),
            "--gamma".into(), "0.5".into(), "--n".into(), "2".into(), "--mu".into(), "0.5".into(), "--trials".into(), "40".into(),
            "--out".into(), out.into(),
        ]
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        std::fs::create_dir_all(d).unwrap();
        let argv = args(d.to_str().unwrap());
        let o = subord(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["verify_report.json", "verify_summary.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = std::fs::read_to_string(a.join("verify_summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(subord::harness::CSV_HEADER));
    assert!(lines.next().unwrap().starts_with("L2_9,0.5,0.25,0.5,2,0.5,40,"));
    assert!(!a.join("verify_report.json.partial").exists());
}

#[test]
fn hunt_finds_the_extremal_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = subord(&[
        "hunt", "--result", "L2_5", "--beta", "0", "--n", "1", "--mu", "2", "--epsilon", "0.6", "--budget", "1", "--out", out,
    ]);
    // a witness is a violation: exit 1
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let w: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("witness_0.json")).unwrap()).unwrap();
    assert_eq!(w["family"], "H");
    assert_eq!(w["coeffs"][1][0], 2.0);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("hunt_report.json")).unwrap()).unwrap();
    assert_eq!(r["weakened_abscissa"], -1.1);
    let found = &r["witnesses"][0];
    assert!(found["premise_margin"].as_f64().unwrap() > 1e-9);
    assert!(found["conclusion_margin"].as_f64().unwrap() < -1e-9);
}

#[test]
fn negative_epsilon_is_rejected() {
    let o = subord(&["hunt", "--result", "L2_5", "--beta", "0", "--mu", "1", "--epsilon=-0.1"]);
    assert_eq!(o.status.code(), Some(2));
}
