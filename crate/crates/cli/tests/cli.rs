use std::path::PathBuf;
use std::process::{Command, Output};

use nomcorr::{chi_square, reconstruct_records, samples, summarize_classes, tabulate_records};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn nomcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nomcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn table(name: &str) -> Vec<String> {
    vec![
        "--input".into(),
        data(name),
        "--format".into(),
        "contingency".into(),
    ]
}

fn run(sub: &str, input: Vec<String>, extra: &[&str]) -> Output {
    let mut args = vec![sub.to_string()];
    args.extend(input);
    args.extend(extra.iter().map(|s| s.to_string()));
    nomcorr(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn records(name: &str) -> Vec<String> {
    vec!["--input".into(), data(name)]
}

#[test]
fn chi2_report() {
    let o = run("chi2", table("three_by_two.csv"), &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "chi2 = 4.950",
        "df = 2",
        "p = 0.084",
        "V^2 = 0.550",
        "reject H0 at alpha = 0.1",
    ] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    assert!(text.contains("A  1.667  1.333"));
    assert!(stderr(&o).contains("warning: expected frequency 0.889 < 5 in cell (C, Y)"));
}

#[test]
fn chi2_from_records_matches_table() {
    let a = stdout(&run("chi2", table("three_by_two.csv"), &["--out", "json"]));
    let b = stdout(&run(
        "chi2",
        records("three_by_two_records.csv"),
        &["--out", "json"],
    ));
    assert_eq!(a, b);
}

#[test]
fn chi2_independence_fails_to_reject() {
    let o = run("chi2", table("independent.csv"), &["--decimals", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chi2 = 0.0000"));
    assert!(stdout(&o).contains("fail to reject H0 at alpha = 0.1"));
}

#[test]
fn json_round_trips_exactly() {
    let o = run("chi2", table("three_by_two.csv"), &["--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = chi_square(&samples::three_by_two()).unwrap();
    assert_eq!(v["chi2"].as_f64().unwrap().to_bits(), report.chi2.to_bits());
    assert_eq!(
        v["p_value"].as_f64().unwrap().to_bits(),
        report.p_value.to_bits()
    );
    assert_eq!(v["df"].as_u64(), Some(2));
    assert_eq!(v["reject_h0"], Value::Bool(true));

    let o = run("corr", table("three_tied.csv"), &["--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sweep = nomcorr::sweep_correlation(
        &reconstruct_records(&samples::three_tied_plus_one()),
        Default::default(),
    )
    .unwrap();
    for (c, (_, r)) in v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .zip(&sweep.coefficients)
    {
        let z = c["value"].as_array().unwrap();
        assert_eq!(z[0].as_f64().unwrap().to_bits(), r.value.re.to_bits());
        assert_eq!(z[1].as_f64().unwrap().to_bits(), r.value.im.to_bits());
    }
}

#[test]
fn output_is_deterministic() {
    for (sub, input, extra) in [
        ("corr", table("five_tied.csv"), vec!["--out", "json"]),
        (
            "model",
            table("four_tied.csv"),
            vec!["--out", "json", "--degree", "2"],
        ),
        ("code", table("three_tied.csv"), vec!["--all-permutations"]),
        ("fix-ties", table("five_tied.csv"), vec!["--out", "csv"]),
    ] {
        let a = run(sub, input.clone(), &extra);
        let b = run(sub, input, &extra);
        assert_eq!(a.status.code(), Some(0), "{sub}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{sub}");
    }
}

#[test]
fn code_real_columns() {
    let o = run("code", records("three_by_two_records.csv"), &[]);
    let lines: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(lines[0], "1 A 2.000 X 3.000");
    assert_eq!(lines[5], "6 B 2.500 Y 2.500");
    assert_eq!(lines[8], "9 C 1.500 Y 2.500");
}

#[test]
fn code_all_permutations() {
    let o = run(
        "code",
        records("two_tied_records.csv"),
        &["--all-permutations", "--out", "csv"],
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#,v1,V11,V12,v2,V2"));
    assert_eq!(lines.next(), Some("1,A,2.500,-2.500,X,3.000"));
    assert_eq!(text.lines().last(), Some("8,B,-2.500,2.500,Y,2.000"));
}

#[test]
fn code_complex_json_pairs() {
    let o = run("code", table("three_tied.csv"), &["--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["v1"]["is_real"], Value::Bool(false));
    let codes = v["v1"]["codes"][0]["values"].as_array().unwrap();
    assert_eq!(codes.len(), 18);
    assert_eq!(codes[0], serde_json::json!([3.0, 0.0]));
    let d = codes.last().unwrap().as_array().unwrap();
    assert_eq!((d[0].as_f64().unwrap(), d[1].as_f64().unwrap()), (2.0, 0.0));
}

#[test]
fn code_single_class_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    std::fs::write(&path, "v1,v2\nA,X\nA,Y\nA,Y\n").unwrap();
    let o = nomcorr(&["code", "--input", path.to_str().unwrap(), "--out", "csv"]);
    let v1: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(v1, ["2.000", "2.000", "2.000"]);
}

#[test]
fn corr_real_case() {
    let o = run("corr", records("three_by_two_records.csv"), &[]);
    assert_eq!(stdout(&o), "R(V1,V2) = 0.253\n");
}

#[test]
fn corr_sweeps_and_plot() {
    let o = run("corr", table("five_tied.csv"), &[]);
    let text = stdout(&o);
    assert!(text.starts_with("assignments: 120\n"));
    assert!(text.ends_with("center: 0.000+0.000i\n"));

    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let o = run(
        "corr",
        table("four_tied.csv"),
        &["--emit-plot", plot.to_str().unwrap()],
    );
    assert!(stdout(&o).ends_with("center: 0.542+0.000i\n"));
    let csv = std::fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "point,re,im");
    let center: Vec<f64> = lines[25]
        .split(',')
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((center[0] - 0.542).abs() < 5e-4 && center[1].abs() < 1e-9);
}

#[test]
fn corr_heap_order_lists_published_rows() {
    let o = run(
        "corr",
        table("three_tied.csv"),
        &["--order", "heap", "--out", "csv"],
    );
    let rows: Vec<String> = csv::Reader::from_reader(o.stdout.as_slice())
        .records()
        .take(6)
        .map(|r| {
            let r = r.unwrap();
            format!("{},{}", &r[2], &r[3])
        })
        .collect();
    assert_eq!(
        rows,
        [
            "0.194,0.104",
            "0.013,0.209",
            "0.013,-0.209",
            "0.194,-0.104",
            "-0.167,0.104",
            "-0.167,-0.104"
        ]
    );
}

#[test]
fn corr_needs_real_second_variable() {
    let o = run("corr", table("two_tied.csv"), &["--swap"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fix-ties"));
}

#[test]
fn model_cubic_is_invariant() {
    let o = run("model", table("three_tied.csv"), &["--order", "heap"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("degree: 3\n"));
    assert!(text.contains(
        "(5.074+0.036i) + (0.067-0.038i)·V1 + (0.022+0.013i)·V1^2 + (0.005-0.001i)·V1^3"
    ));
    assert!(text.ends_with("invariant: 0.310\n"));
}

#[test]
fn model_linear_is_not_invariant() {
    let o = run(
        "model",
        table("three_tied.csv"),
        &["--degree", "1", "--out", "json"],
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariant"], Value::Bool(false));
    let mut moduli: Vec<f64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["model_correlation"]["modulus"].as_f64().unwrap())
        .collect();
    moduli.sort_by(f64::total_cmp);
    let want = [0.197, 0.197, 0.209, 0.209, 0.220, 0.220];
    for (m, w) in moduli.iter().zip(want) {
        assert!((m - w).abs() < 5e-4);
    }
}

#[test]
fn model_without_ties_is_trivially_invariant() {
    let o = run("model", table("three_by_two.csv"), &["--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
    assert_eq!(v["invariant"], Value::Bool(true));
    assert_eq!(v["spread"].as_f64(), Some(0.0));
}

#[test]
fn fix_ties_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fixed.csv");
    let log = dir.path().join("log.txt");
    let o = run(
        "fix-ties",
        records("two_tied_records.csv"),
        &[
            "--output",
            out.to_str().unwrap(),
            "--log",
            log.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let fixed = nomcorr_cli::input::parse_records(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(fixed.len(), 7);
    let t = tabulate_records(&fixed).unwrap();
    assert_eq!(t.row_sums(), [4, 3]);
    let log = std::fs::read_to_string(&log).unwrap();
    assert!(log.contains("removed record 8: B,Y"));
    assert!(log.contains("policy: artifact-defined"));
}

#[test]
fn fix_ties_clears_all_groups() {
    let o = run("fix-ties", table("three_tied.csv"), &[]);
    let fixed = nomcorr_cli::input::parse_records(o.stdout.as_slice()).unwrap();
    let s = summarize_classes(&fixed.column(1).unwrap()).unwrap();
    assert!(s.iter().all(|c| c.group_id.is_none()));

    let o = run("fix-ties", table("three_tied.csv"), &["--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["policy"], "artifact-defined");
    assert_eq!(v["removed"].as_array().unwrap().len(), 4);
}

#[test]
fn fix_ties_without_ties_fails() {
    let o = run("fix-ties", table("three_by_two.csv"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, ",X,Y\nA,3,0\nB,2,two\n").unwrap();
    let o = nomcorr(&[
        "chi2",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "contingency",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    std::fs::write(&path, "v1,v2\nA,X\nB\n").unwrap();
    let o = nomcorr(&["code", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));

    let o = nomcorr(&["chi2", "--input", "/nonexistent/file.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("row.csv");
    std::fs::write(&path, ",X,Y\nA,3,2\n").unwrap();
    let o = nomcorr(&[
        "chi2",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "contingency",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    std::fs::write(&path, "v1,v2\nA,X\nB,X\nC,X\n").unwrap();
    let o = nomcorr(&["corr", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_1() {
    let input = data("three_by_two.csv");
    for args in [
        vec!["chi2"],
        vec!["chi2", "--input", &input, "--alpha", "1.5"],
        vec!["chi2", "--input", &input, "--decimals", "13"],
        vec!["model", "--input", &input, "--degree", "0"],
        vec!["corr", "--input", &input, "--out", "xml"],
        vec!["frobnicate"],
    ] {
        assert_eq!(nomcorr(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(nomcorr(&["--help"]).status.code(), Some(0));
    assert_eq!(nomcorr(&["--version"]).status.code(), Some(0));
}

#[test]
fn swap_transposes_roles() {
    let a = stdout(&run(
        "chi2",
        table("three_by_two.csv"),
        &["--swap", "--out", "json"],
    ));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["row_labels"], serde_json::json!(["X", "Y"]));
    let t = nomcorr::tabulate_records(&reconstruct_records(&samples::three_by_two()).swapped())
        .unwrap();
    assert_eq!(
        v["chi2"].as_f64().unwrap().to_bits(),
        chi_square(&t).unwrap().chi2.to_bits()
    );
}
