use std::process::{Command, Output};

fn trilat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trilat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn braid_reports_length_and_center() {
    let o = trilat(&["braid", "S", "sigma4bar", "3", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=4"), "{}", stdout(&o));
}

#[test]
fn classify_finds_a_complex_reflection() {
    let o = trilat(&["--json", "classify", "S", "sigma1", "6", "(23)^3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"]["kind"], "complex_reflection", "{v}");
    assert_eq!(v["class"]["order"], "2");
}

#[test]
fn catalog_lists_every_parameter() {
    let o = trilat(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn sigma1_tables_reproduce_without_failures() {
    let dir = std::env::temp_dir().join(format!("trilat-cli-{}", std::process::id()));
    let o = trilat(&["reproduce-tables", "--family", "S", "--param", "sigma1", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(dir.join("S-sigma1.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ids: std::collections::BTreeSet<String> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["check_id"].as_str()?.split('/').next().map(str::to_owned))
        .filter(|b| b.starts_with("s1-") && !b.ends_with("-cycle"))
        .collect();
    assert_eq!(ids.len(), 3, "{ids:?}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn failing_checks_exit_with_one() {
    let o = trilat(&["stabilizer", "verify", "T", "H2", "2", "--table", "H2-R1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("H2-R1/p2/chi"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["classify", "S", "sigma1", "6", "(23"][..],
        &["classify", "T", "E2", "3", "J"],
        &["classify", "S", "nope", "3", "1"],
        &["braid", "S", "sigma1", "5", "1", "2"],
        &["no-such-command"],
    ] {
        let o = trilat(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn data_directory_override_is_validated() {
    let dir = std::env::temp_dir().join(format!("trilat-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_trilat"))
        .env("TRILAT_DATA_DIR", &dir)
        .args(["catalog", "list"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}
