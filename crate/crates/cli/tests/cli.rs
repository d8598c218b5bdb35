use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn count(text: &str, prefix: &str) -> usize {
    text.lines().filter(|l| l.starts_with(prefix)).count()
}

#[test]
fn find_fig1_yes() {
    let o = pcf(&["find", &fixture("fig1.ecg"), "--verify"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("yes\n"));
    assert_eq!(count(&out, "edge "), 3);
    assert!(out.contains("verified"));
}

#[test]
fn find_star_no_with_replayable_certificate() {
    let o = pcf(&["find", &fixture("star.ecg"), "--json", "--verify"]);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["x_size"], 0);
    assert_eq!(v["odd_count"], 1);
    assert_eq!(v["verified"], true);
    assert!(v["replay"].as_str().unwrap().starts_with("pcf certify"));

    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let o = pcf(&["certify", &fixture("star.ecg"), "--check", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let mut bad = v.clone();
    bad["odd_count"] = 2.into();
    std::fs::write(&cert, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = pcf(&["certify", &fixture("star.ecg"), "--check", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn certify_uses_witness_route() {
    let o = pcf(&["certify", &fixture("star.ecg")]);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "no");
    let o = pcf(&["certify", &fixture("fig1.ecg")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(code(&pcf(&["find", "does-not-exist.ecg"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ecg");
    std::fs::write(&bad, "colours 2\nvertex a\nvertex b\nedge a b red\n").unwrap();
    let o = pcf(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(code(&pcf(&["equiv", "--n", "many"])), 2);
    assert_eq!(code(&pcf(&["solve", &fixture("fig1.ecg"), "--mode", "rc"])), 2);
}

#[test]
fn check_reports_colour_degrees() {
    let o = pcf(&["check", &fixture("fig1.ecg")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("5 vertices, 8 edges, 3 colours"));
    assert!(out.contains("x0 f=2 degree=4 colour-degree=2"));
    assert!(out.contains("x1 f=1 degree=3 colour-degree=3"));
}

#[test]
fn gadget_outputs() {
    let o = pcf(&["gadget", &fixture("fig1.ecg"), "--coloured"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!((count(&out, "vertex "), count(&out, "edge ")), (22, 32));

    let o = pcf(&["gadget", &fixture("k2.ecg"), "--plain"]);
    let out = stdout(&o);
    assert_eq!((count(&out, "vertex "), count(&out, "edge ")), (2, 1));

    let o = pcf(&["gadget", &fixture("fig1.ecg"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
    let o = pcf(&["gadget", &fixture("fig1.ecg"), "--format", "dot"]);
    assert!(stdout(&o).starts_with("graph gadget {"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("inf.ecg");
    std::fs::write(&bad, "colours 1\nvertex a f=2\nvertex b f=1\nedge a b 1\n").unwrap();
    let o = pcf(&["gadget", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
}

#[test]
fn rc_reduction_round() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rc.ecg");
    let o = pcf(&["reduce", &fixture("k43.hg"), "--target", "rc", "--r", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("colours 3\n"));
    assert_eq!(count(&text, "vertex "), 40);
    std::fs::write(&out, &text).unwrap();
    let o = pcf(&["solve", out.to_str().unwrap(), "--mode", "rc", "--r", "2"]);
    assert_eq!((code(&o), stdout(&o)), (3, "no\n".to_string()));

    let o = pcf(&["reduce", &fixture("positive9.hg"), "--target", "rc", "--r", "2"]);
    std::fs::write(&out, stdout(&o)).unwrap();
    let o = pcf(&["solve", out.to_str().unwrap(), "--mode", "rc", "--r", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "yes");
    // 2-regular on 9·9 + 9 vertices
    assert_eq!(v["factor"].as_array().unwrap().len(), 90);

    assert_eq!(code(&pcf(&["reduce", &fixture("k43.hg"), "--target", "rc", "--r", "3"])), 2);
}

#[test]
fn d2c_reduction_round() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d2c.ecg");
    let o = pcf(&["reduce", &fixture("k43.hg"), "--target", "d2c", "--r", "2"]);
    let text = stdout(&o);
    assert_eq!(count(&text, "vertex "), 76);
    std::fs::write(&out, &text).unwrap();
    let o = pcf(&["solve", out.to_str().unwrap(), "--mode", "d2c", "--r", "2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn search_cap_is_a_distinct_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rc.ecg");
    let o = pcf(&["reduce", &fixture("k43.hg"), "--target", "rc", "--r", "2"]);
    std::fs::write(&out, stdout(&o)).unwrap();
    let o = pcf(&["solve", out.to_str().unwrap(), "--mode", "rc", "--r", "2", "--max-nodes", "1"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn kneser_and_petersen_fixture() {
    let o = pcf(&["kneser", "--n", "5", "--k", "2", "--summary"]);
    let out = stdout(&o);
    assert!(out.contains("vertices 10") && out.contains("edges 15") && out.contains("girth 5"));
    let o = pcf(&["kneser", "--r", "3"]);
    let fixture_text = std::fs::read_to_string(fixture("petersen-canonical.ecg")).unwrap();
    assert_eq!(stdout(&o), fixture_text);
    let o = pcf(&["solve", &fixture("petersen-canonical.ecg"), "--mode", "d2c", "--r", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(count(&stdout(&o), "edge "), 15);
}

#[test]
fn tutte_on_fixtures() {
    let o = pcf(&["tutte", &fixture("fig1.ecg")]);
    assert_eq!(code(&o), 0);
    // f sums to 5 on the star, so no f-factor even without colours
    let o = pcf(&["tutte", &fixture("star.ecg")]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("deficiency form: fails"));
    let o = pcf(&["tutte", &fixture("k2.ecg"), "--variant", "as-printed"]);
    assert!(matches!(code(&o), 0 | 3));
}

#[test]
fn equiv_small_sweep() {
    let o = pcf(&["equiv", "--n", "3", "--k", "2", "--fmax", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("suite a (matching vs palettes): checked"));
    assert!(out.contains("hard divergences 0"));
    let again = pcf(&["equiv", "--n", "3", "--k", "2", "--fmax", "2", "--jobs", "1"]);
    assert_eq!(out, stdout(&again));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        vec!["find", "FIX:star.ecg", "--json"],
        vec!["gadget", "FIX:fig1.ecg", "--format", "dot"],
        vec!["reduce", "FIX:k43.hg", "--target", "d2c", "--r", "2"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("FIX:").map_or(a.to_string(), fixture))
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(pcf(&args).stdout, pcf(&args).stdout);
    }
}
