use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pendulum-topology"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn analyze_reports_regimes_and_table() {
    let out = run(&["analyze", "--m1", "1", "--m2", "1", "--l1", "1", "--l2", "1", "--g", "1", "--energy", "0", "--energy", "-4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["slope"], 2.0);
    assert_eq!(r["regimes"][0]["tag"], "M2");
    assert_eq!(r["regimes"][0]["betti"], serde_json::json!([1, 0, 1, 0, 0, 1, 0, 1]));
    assert_eq!(r["regimes"][1]["tag"], "Empty");
    assert!(r["regimes"][1]["betti"].is_null());
    let cps = r["critical_points"].as_array().unwrap();
    let indices: Vec<_> = cps.iter().map(|c| c["index"].as_u64().unwrap()).collect();
    assert_eq!(indices, vec![0, 2, 2, 4]);
    for key in ["label", "z1", "z2", "value", "index"] {
        assert!(cps[0].get(key).is_some(), "{key}");
    }
    assert_eq!(r["table"][3]["integer_homology"][3]["torsion"], serde_json::json!([4]));
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(run(&["analyze", "--l2", "2", "--energy", "0"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--l2", "2"]).status.code(), Some(0));
    assert_eq!(run(&["analyze", "--g", "0"]).status.code(), Some(2));
}

#[test]
fn verify_coarse_mesh_and_shifted_levels() {
    let out = run(&["verify", "--subdivision", "0", "--energy-offsets", "0,0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let rows = r["verify"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        for key in ["band", "oracle_pair_ranks", "pipeline_betti", "table_row", "pass"] {
            assert!(row.get(key).is_some(), "{key}");
        }
        assert_eq!(row["pass"], true);
    }
    for i in 0..4 {
        assert_eq!(rows[i]["oracle_pair_ranks"], rows[i + 4]["oracle_pair_ranks"]);
    }
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("coarse mesh")));
}

#[test]
fn obstructions_report() {
    let r = json(&run(&["obstructions"]));
    let items = r["obstructions"].as_array().unwrap();
    let find = |surface: &str, criterion: &str| {
        items
            .iter()
            .find(|o| o["surface"] == surface && o["criterion"] == criterion)
            .unwrap()
            .clone()
    };
    let m3 = find("M3", "geodesic_flow");
    assert_eq!((m3["lhs"].as_i64(), m3["rhs"].as_i64()), (Some(4), Some(1)));
    assert_eq!(m3["verdict"], "ObstructionFound");
    assert_eq!(find("M4", "geodesic_flow")["verdict"], "NotApplicable");
    let q = find("Q", "integrability");
    assert_eq!(q["verdict"], "NoObstruction");
    assert_eq!(q["conditions"].as_array().unwrap().len(), 5);
}

#[test]
fn simulate_is_deterministic_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "simulate".to_string(),
            "--energy".into(),
            "0".into(),
            "--dt".into(),
            "1e-3".into(),
            "--steps".into(),
            "2000".into(),
            "--seed".into(),
            "42".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let run_owned = |v: Vec<String>| run(&v.iter().map(String::as_str).collect::<Vec<_>>());
    let first = run_owned(args(&a));
    let second = run_owned(args(&b));
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["diagnostics"], json(&second)["diagnostics"]);
    let csv_a = std::fs::read(&a).unwrap();
    assert_eq!(csv_a, std::fs::read(&b).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.starts_with("t,q1x,"));
    assert_eq!(text.lines().count(), 2002);
    let r = json(&first);
    let d = &r["diagnostics"];
    assert!(d["max_residual"].as_f64().unwrap() <= 1e-9);
    assert!(d["potential_excess"].as_f64().unwrap() <= 1e-6);
    assert!(d["energy_drift"].as_f64().is_some());
}

#[test]
fn simulate_rejects_empty_levels() {
    assert_eq!(run(&["simulate", "--energy", "-5"]).status.code(), Some(4));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# unit pendulum\nm1 = 1\nm2 = 1\nl1 = 1\nl2 = 2\nenergy = 0\nformat = text\n").unwrap();
    // l2 = 2 makes the slope degenerate; the flag restores l2 = 1
    let cfg_str = cfg.display().to_string();
    assert_eq!(run(&["analyze", "--config", &cfg_str]).status.code(), Some(3));
    let out = run(&["analyze", "--config", &cfg_str, "--l2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h=0 -> M2"), "{text}");
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["obstructions", "--out", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "obstructions");
}
