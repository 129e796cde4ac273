use std::process::{Command, Output};

use steadyqfi::output::ROW_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steadyqfi")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_header_and_one_row() {
    let out = run(&["eval", "--r", "14", "--gamma", "0.5", "--g", "2.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec![ROW_HEADER, lines[1]]);
    assert!(lines[1].starts_with("14,0.5,2.5,1.00225507,"));
}

#[test]
fn eval_routes_agree_in_print() {
    let base = ["eval", "--r", "1", "--gamma", "0.5", "--g", "2.5", "--method"];
    let rows: Vec<String> = ["closed-form", "nullspace", "integrate"]
        .iter()
        .map(|m| {
            let mut args = base.to_vec();
            args.push(m);
            let out = run(&args);
            assert!(out.status.success());
            stdout(&out)
        })
        .collect();
    // 9 significant digits hide the ~1e-12 differences between routes
    let parse = |s: &str| -> Vec<f64> { s.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect() };
    let reference = parse(&rows[0]);
    for other in &rows[1..] {
        for (a, b) in reference.iter().zip(parse(other)) {
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-6), "{a} vs {b}");
        }
    }
}

#[test]
fn json_output_is_an_array_of_rows() {
    let out = run(&["eval", "--r", "1", "--gamma", "0.01", "--g", "0.05", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v.as_array().unwrap()[0];
    assert!((row["mean_qfi"].as_f64().unwrap() - 1.02124).abs() < 5e-5);
    assert!((row["negativity"].as_f64().unwrap() - 0.0183813).abs() < 5e-7);
}

#[test]
fn sweep_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = run(&[
        "sweep", "--vary", "gamma", "--from", "0.01", "--to", "3", "--steps", "300", "--r", "1", "--g-ratio", "5",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 301);
    assert!(text.lines().nth(1).unwrap().starts_with("1,0.01,0.05,1.0212446"));
}

#[test]
fn critical_subcommand() {
    let out = run(&["critical", "--vary", "r", "--lo", "0.1", "--hi", "20", "--gamma", "0.5", "--g", "2.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vary,value,bracket_width"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[0], "r");
    let value: f64 = fields[1].parse().unwrap();
    assert!((value - 2.3).abs() < 0.1);
}

#[test]
fn exit_codes() {
    // flag errors
    assert_eq!(run(&["eval", "--r", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--r", "x", "--gamma", "1", "--g", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--r", "-1", "--gamma", "1", "--g", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--r", "1", "--gamma", "1", "--g", "1", "--method", "euler"]).status.code(), Some(2));
    let sweep = ["sweep", "--vary", "r", "--from", "0", "--to", "0", "--steps", "3", "--gamma", "0.5", "--g", "2.5"];
    assert_eq!(run(&sweep).status.code(), Some(2));
    let both = ["sweep", "--vary", "r", "--from", "0", "--to", "1", "--steps", "3", "--gamma", "0.5", "--g", "2.5", "--g-ratio", "5"];
    assert_eq!(run(&both).status.code(), Some(2));
    let wrong_fixed = ["sweep", "--vary", "r", "--from", "0", "--to", "1", "--steps", "3", "--r", "0.5", "--g", "2.5"];
    assert_eq!(run(&wrong_fixed).status.code(), Some(2));

    // solver errors
    let degenerate =
        ["sweep", "--vary", "r", "--from", "0", "--to", "1", "--steps", "3", "--gamma", "0.5", "--g", "2.5", "--method", "nullspace"];
    let out = run(&degenerate);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r = 0"));
    let no_cross = ["critical", "--vary", "r", "--lo", "0.5", "--hi", "2", "--gamma", "0.5", "--g", "2.5"];
    assert_eq!(run(&no_cross).status.code(), Some(3));
    assert_eq!(run(&["eval", "--r", "0", "--gamma", "0", "--g", "0"]).status.code(), Some(3));

    // I/O errors
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let io = ["eval", "--r", "1", "--gamma", "0.5", "--g", "2.5", "--out", bad.to_str().unwrap()];
    let out = run(&io);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out.csv"));
}
