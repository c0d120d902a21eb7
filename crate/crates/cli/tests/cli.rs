use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn equivol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equivol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn multiplicity_from_corpus_name() {
    let o = equivol(&["multiplicity", "--scenario", "p2_circle", "--k", "4", "--mu", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k,mu,dim,multiplicity\n4,0,3,3\n");
}

#[test]
fn volume_csv_is_deterministic() {
    let args = ["volume", "--scenario", "p2_circle", "--mu-range", "-2..2"];
    let a = equivol(&args);
    let b = equivol(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let lines: Vec<_> = stdout(&a).lines().map(str::to_string).collect();
    assert_eq!(lines[0], "mu,value,status,residue,period");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.contains(",1/2,exact,")));
}

#[test]
fn json_output_to_file() {
    let path = scratch("p1_volume.json");
    let o = equivol(&[
        "volume", "--scenario", "p1_circle", "--mu", "3", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows[0]["mu"], "3");
    assert_eq!(rows[0]["value"], "1");
}

#[test]
fn scenario_file_with_missing_field_exits_2() {
    let path = scratch("missing_degrees.json");
    fs::write(
        &path,
        r#"{
  "group": "circle_power",
  "g": 1,
  "factors": [{"dim": 1, "weights": [1, -1]}],
  "bundle": {"twist": [0]}
}"#,
    )
    .unwrap();
    let o = equivol(&["volume", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("degrees"), "{err}");
}

#[test]
fn unknown_scenario_and_bad_weight_exit_2() {
    assert_eq!(equivol(&["volume", "--scenario", "no_such_thing"]).status.code(), Some(2));
    let o = equivol(&["volume", "--scenario", "p1xp1_torus", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_text_and_json() {
    let o = equivol(&["classify", "--scenario", "su2_p1_unstable"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("class: unstable_everywhere\n"));

    let o = equivol(&["classify", "--scenario", "p2_torus", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["class"], "regular");
}

#[test]
fn verify_single_suite() {
    let o = equivol(&["verify", "--suite", "oracle", "--scenario", "p1_circle", "--k-max", "4"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("PASS oracle: 5/5"));
}

#[test]
fn predict_and_exponent() {
    let o = equivol(&["predict", "--scenario", "su2_p5", "--mu-range", "0..3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));

    let o = equivol(&["exponent", "--scenario", "p1_circle", "--p-max", "4"]);
    assert!(o.status.success());
    let rows: Vec<_> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    assert_eq!(rows, ["2", "1", "2", "1"]);
}
