use std::process::{Command, Output};

fn gqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqs")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn para_bose_case_passes() {
    let o = gqs(&["verify-case", "--family", "B0", "--n", "2", "--case", "B0.table.i=2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["algebra"]["name"], "B(0|2)");
    let checks = doc["checks"].as_array().unwrap();
    let variant = checks.iter().find(|c| c["name"] == "B0.table.i=2.relations.para_bose_variant").unwrap();
    assert!(variant["details"].as_str().unwrap().contains("R-PB-swapped holds"));
    assert!(checks.iter().all(|c| ["pass", "fail", "skipped"].contains(&c["verdict"].as_str().unwrap())));
}

#[test]
fn tables_render_d31_row() {
    let o = gqs(&["tables", "--family", "D", "--m", "3", "--n", "1", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("| D.table.(3,1) | sl(3\\|1) | 3 | 7 |"), "{text}");
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["verify-case", "--family", "B0", "--m", "1", "--n", "2", "--case", "B0.table.i=2"][..],
        &["build", "--family", "A", "--m", "1", "--n", "1"],
        &["build", "--family", "D", "--m", "1", "--n", "1"],
        &["build", "--family", "C", "--m", "2", "--n", "3"],
        &["build", "--family", "B", "--n", "3"],
        &["verify-case", "--family", "B", "--m", "1", "--n", "1", "--case", "B.table.(9,9)"],
        &["enumerate", "--family", "C", "--n", "2", "--bound", "0"],
        &["build", "--family", "E", "--m", "1", "--n", "1"],
        &["build", "--family", "B", "--m", "1", "--n", "1", "--jobs", "0"],
    ] {
        assert_eq!(gqs(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn guard_violation_exits_3() {
    let o = gqs(&["enumerate", "--family", "B", "--m", "4", "--n", "4", "--bound", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn enumerate_c2_reconciles() {
    let o = gqs(&["enumerate", "--family", "C", "--n", "2", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"reconcile.C.table.(1,0)") && names.contains(&"reconcile.C.table.(1,1)"));
    assert!(doc.get("timing").is_none());
}

#[test]
fn report_dir_resolves_relative_out() {
    let dir = std::env::temp_dir().join(format!("gqs-report-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_gqs"))
        .args(["build", "--family", "B", "--m", "1", "--n", "1", "--out", "sub/build.md", "--format", "markdown"])
        .env("GQS_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.join("sub/build.md")).unwrap();
    assert!(text.starts_with("# gqs build"));
    assert!(text.contains("| dimension | pass |"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let o = gqs(&["build", "--family", "B", "--m", "0", "--n", "1", "--timing"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn extract_dumps_coefficients() {
    let o = gqs(&["extract", "--family", "B", "--m", "1", "--n", "1", "--case", "B.table.(1,1)", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("## Triple brackets"));
    assert!(text.contains("table_agreement.R-MIX | pass"));
}
