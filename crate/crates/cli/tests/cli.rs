use std::path::Path;
use std::process::{Command, Output};

use leonard_trio::trio::w00_closed;
use leonard_trio::{ParameterSet, Scalar};
use tempfile::TempDir;

fn ltrio(args: &[&str], report_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ltrio"));
    cmd.args(args).env_remove("REPORT_DIR");
    if let Some(dir) = report_dir {
        cmd.env("REPORT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_SET: &str =
    r#"{"q": "3/5", "alpha": "1/3", "beta": "1/7", "delta": "2", "s": "2/3", "N": 3}"#;

fn config(sets: &str, suites: &str, extra: &str) -> String {
    format!(r#"{{"parameters": {{"sets": [{sets}]}}, "suites": [{suites}]{extra}}}"#)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

#[test]
fn explicit_set_passes_and_reports_every_suite() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        &config(SMALL_SET, r#""qaskey", "r1", "h1", "trio-axioms""#, ""),
    );
    let out = ltrio(&["verify", "--config", &cfg], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["failures"], 0);
    let names: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["qaskey", "trio-axioms", "r1", "h1"]);
    assert!(v["suites"][0]["instances"][0]["records"][0]["elapsed_ms"] == 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let seeded = r#"{"mode": "float:128", "parameters": {"seeded": {"seed": 5, "count": 3, "q_choices": ["3/5", "-2/7"], "n_choices": [2, 3], "height": 9}}, "suites": ["wilson", "reduced", "limit-ladders"]}"#;
    let cfg = write(&dir, "c.json", seeded);
    let a = ltrio(&["verify", "--config", &cfg], None);
    let b = ltrio(&["verify", "--config", &cfg], None);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn planted_pole_is_named_and_resampled() {
    // beta delta s = q makes the R1 lower parameter beta delta s q^{1-x} hit 1 at x = 2.
    let dir = TempDir::new().unwrap();
    let plant =
        r#"{"q": "3/5", "alpha": "1/3", "beta": "1/7", "delta": "2", "s": "21/10", "N": 3}"#;
    let cfg = write(&dir, "c.json", &config(plant, r#""r1""#, r#", "seed": 4"#));
    let out = ltrio(&["verify", "--config", &cfg], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("beta delta s - q^(x-1)"), "{stderr}");
    let v = json(&out);
    assert!(v["resampled"][0]
        .as_str()
        .unwrap()
        .contains("beta delta s - q^(x-1)"));
    let params = &v["suites"][0]["instances"][0]["records"][0]["params"];
    assert_eq!(params["q"], "3/5");
    assert_ne!(params["s"], "21/10");
}

#[test]
fn exhausted_resampling_exits_three() {
    let dir = TempDir::new().unwrap();
    let bad = r#"{"q": "1", "alpha": "1/3", "beta": "1/7", "delta": "2", "s": "2/3", "N": 2}"#;
    let cfg = write(
        &dir,
        "c.json",
        &config(bad, r#""qaskey""#, r#", "max_attempts": 3"#),
    );
    let out = ltrio(&["verify", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("after 3 attempts"));
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", &config(SMALL_SET, "", ""));
    assert_eq!(
        ltrio(&["verify", "--config", &empty], None).status.code(),
        Some(2)
    );

    let ladders = write(
        &dir,
        "ladders.json",
        &config(SMALL_SET, r#""limit-ladders""#, ""),
    );
    let out = ltrio(&["verify", "--config", &ladders, "--mode", "exact"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("float mode"));

    let malformed = SMALL_SET.replace("\"2/3\"", "\"2/x\"");
    let bad = write(&dir, "bad.json", &config(&malformed, r#""qaskey""#, ""));
    assert_eq!(
        ltrio(&["verify", "--config", &bad], None).status.code(),
        Some(2)
    );

    let unknown = write(&dir, "unknown.json", &config(SMALL_SET, r#""nope""#, ""));
    assert_eq!(
        ltrio(&["verify", "--config", &unknown], None).status.code(),
        Some(2)
    );

    let cfg = write(&dir, "ok.json", &config(SMALL_SET, r#""qaskey""#, ""));
    assert_eq!(
        ltrio(&["verify", "--config", &cfg, "--mode", "float:3"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ltrio(&["verify", "--config", &cfg, "--format", "xml"], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failing_ladder_exits_one() {
    // At 16 bits rounding swamps the 10^-6 rung, so convergence cannot be shown.
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &config(SMALL_SET, r#""limit-ladders""#, ""));
    let out = ltrio(&["verify", "--config", &cfg, "--mode", "float:16"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["failures"].as_u64().unwrap() > 0);
}

#[test]
fn csv_and_markdown_formats() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &config(SMALL_SET, r#""h1""#, ""));
    let csv_path = dir.path().join("r.csv");
    let out = ltrio(
        &[
            "verify",
            "--config",
            &cfg,
            "--out",
            csv_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with(
        "suite,instance,identity,anchor,params,N,status,max_residual,elapsed_ms,detail\n"
    ));
    assert!(csv.contains("h1,0,h1.recurrence,"));

    let out = ltrio(&["verify", "--config", &cfg, "--format", "md"], None);
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("## h1 (pass)"));
    assert!(md.contains("| 0 | h1.recurrence | 3 | pass |  |"));
}

#[test]
fn report_dir_receives_default_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &config(SMALL_SET, r#""r3""#, ""));
    let reports = dir.path().join("reports");
    let out = ltrio(&["verify", "--config", &cfg], Some(&reports));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(reports.join("ltrio-report.json")).unwrap();
    assert!(text.contains("r3.two-routes"));
}

fn table(dir: &TempDir, function: &str) -> Vec<(usize, usize, String)> {
    let params = write(dir, "p.json", SMALL_SET);
    let out = ltrio(&["table", "--fn", function, "--params", &params], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,x,value"));
    lines
        .map(|l| {
            let mut f = l.splitn(3, ',');
            (
                f.next().unwrap().parse().unwrap(),
                f.next().unwrap().parse().unwrap(),
                f.next().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn tables() {
    let dir = TempDir::new().unwrap();
    let qr = table(&dir, "qracah");
    assert_eq!(qr.len(), 16);
    assert!(qr
        .iter()
        .filter(|(n, _, _)| *n == 0)
        .all(|(_, _, v)| v == "1"));

    let ps = ParameterSet::new(
        Scalar::ratio(3, 5),
        Scalar::ratio(1, 3),
        Scalar::ratio(1, 7),
        Scalar::int(2),
        Scalar::ratio(2, 3),
        3,
    )
    .unwrap();
    let w = table(&dir, "w");
    assert_eq!(w[0].2, w00_closed(&ps).to_string());

    assert_eq!(table(&dir, "r1"), table(&dir, "r1-sum"));
    for f in ["wilson", "w-partner", "h1", "r3"] {
        assert_eq!(table(&dir, f).len(), 16);
    }

    let params = write(&dir, "p.json", SMALL_SET);
    let out = ltrio(&["table", "--fn", "bogus", "--params", &params], None);
    assert_eq!(out.status.code(), Some(2));
    let out = ltrio(
        &[
            "table", "--fn", "qracah", "--params", &params, "--mode", "float:64",
        ],
        None,
    );
    assert!(String::from_utf8(out.stdout).unwrap().contains("@64"));
}

#[test]
fn bundled_default_passes() {
    let out = ltrio(&["verify"], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&out)["passed"], true);
}
