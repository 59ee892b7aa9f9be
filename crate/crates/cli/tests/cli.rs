use std::path::PathBuf;
use std::process::{Command, Output};

use selfsim_cli::report::{AnalysisFile, ReportFile};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn decide(name: &str, extra: &[&str]) -> (Output, Option<ReportFile>) {
    let path = data(name);
    let mut args = vec!["decide", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = selfsim(&args);
    let r = ReportFile::from_json_str(&stdout(&o)).ok();
    (o, r)
}

#[test]
fn decided_files_exit_zero() {
    let (o, r) = decide("unit_n2.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = r.unwrap();
    assert_eq!(r.verdict, "SelfSimilar");
    assert_eq!(r.branch.as_deref(), Some("direct"));
    let AnalysisFile::Graph(g) = &r.direct.analysis else { panic!() };
    assert_eq!(g.vertices, ["001", "002", "220", "221"]);
    assert_eq!(g.edge_count, 0);

    let (o, r) = decide("cycle_n2.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = r.unwrap();
    assert_eq!(r.verdict, "NotSelfSimilar");
    let AnalysisFile::Graph(g) = &r.direct.analysis else { panic!() };
    assert!(g.cycle.as_ref().unwrap().contains(&"111".to_string()));
    assert_eq!(r.bn.relation, Some(vec![1, -3, -1]));
}

#[test]
fn unknown_exits_two_and_assertion_resolves_it() {
    let (o, r) = decide("cycle_n2_shallow.json", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(r.unwrap().verdict, "Unknown");
    let (o, r) = decide("cycle_n2_shallow.json", &["--assert-in-bn", "false"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(r.unwrap().verdict, "SelfSimilar");
}

#[test]
fn errors_exit_one_with_diagnostics() {
    let (o, _) = decide("half.json", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 < beta < 1/(N+1)"));
    let (o, _) = decide("malformed.json", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    let (o, _) = decide("missing.json", &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (o, _) = decide("quarter_two_shifts.json", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let r = ReportFile::from_json_str(&text).unwrap();
    assert_eq!(r.verdict, "SelfSimilar");
    assert_eq!(r.branch.as_deref(), Some("conjugate"));
    assert_eq!(r.direct.values, ["0", "36", "51"]);
    assert_eq!(ReportFile::from_json_str(&r.to_json_string()).unwrap(), r);
}

#[test]
fn theta_prints_relation() {
    let o = selfsim(&["theta", data("cycle_n2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("NotInBN") && s.contains("(1,-3,-1)") && s.contains("vartheta: 2"), "{s}");
}

#[test]
fn sweep_csv_rows() {
    let o = selfsim(&["sweep", "--n", "1", "--beta", "1/4", "--tau-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    let yes: Vec<&str> = rows
        .iter()
        .filter(|r| r.split(',').nth(1) == Some("SelfSimilar"))
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(yes, ["3", "12", "48"]);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == r.split(',').nth(6)));

    let o = selfsim(&["sweep", "--n", "1", "--beta", "1/4", "--tau-max", "0"]);
    assert_eq!(stdout(&o).lines().count(), 1);

    let o = selfsim(&[
        "sweep", "--n", "2", "--poly", "-1,3,1", "--interval", "0,1/3", "--tau-max", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn oracle_and_witness() {
    let o = selfsim(&["oracle", data("cycle_n2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("NotAdmissibleUpTo") && !s.contains("MISMATCH"), "{s}");

    let o = selfsim(&["witness", data("unit_n2.json").to_str().unwrap(), "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("verify_witness depth=6") && s.trim_end().ends_with("true"), "{s}");
}

#[test]
fn render_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let svg = dir.path().join("g.svg");
    let wcsv = dir.path().join("w.csv");
    let o = selfsim(&[
        "render",
        data("quarter_three.json").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--witness-csv",
        wcsv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("level,left,right"));
    assert_eq!(text.lines().count(), 17);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(&wcsv).unwrap().lines().count() > 1);
}
