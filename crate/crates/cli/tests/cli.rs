//! End-to-end tests of the hlb binary: documented invocations, output
//! formats, config handling, and exit codes.

use serde_json::Value;
use std::process::{Command, Output};

fn hlb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlb"))
        .args(args)
        .env_remove("HLB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json_rows(out: &Output) -> Vec<Value> {
    let doc: Value = serde_json::from_str(&stdout(out)).expect("valid json");
    doc["rows"].as_array().expect("rows array").clone()
}

fn num(row: &Value, key: &str) -> f64 {
    row[key]
        .as_f64()
        .unwrap_or_else(|| panic!("number at {key}"))
}

#[test]
fn norm_reports_the_documented_value() {
    let out = hlb(&[
        "norm",
        "--family",
        "P5",
        "--params",
        "0.19462,0.66008,0.97833",
        "--p",
        "10",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows = json_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0], "sup_norm") - 0.286160496407654).abs() < 1e-12);
    assert!(num(&rows[0], "est_error") < 1e-10);
    let x = num(&rows[0], "argmax_x");
    let y = num(&rows[0], "argmax_y");
    assert!((x.abs().powi(10) + y.abs().powi(10) - 1.0).abs() < 1e-9);
}

#[test]
fn bound_reports_the_documented_value() {
    let out = hlb(&[
        "bound",
        "--family",
        "P8",
        "--params",
        "0.210344,0.896551",
        "--p",
        "16",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let row = &json_rows(&out)[0];
    let lb = num(row, "lower_bound");
    assert!(((lb - 31.727174) / 31.727174).abs() < 1e-5);
    assert!((num(row, "q") - 2.0).abs() < 1e-15);
    assert!((num(row, "coeff_norm") / num(row, "sup_norm") - lb).abs() < 1e-12 * lb);
    assert!((num(row, "per_degree_root").powi(8) - lb).abs() < 1e-10 * lb);
}

#[test]
fn hyper_reports_the_documented_value() {
    let out = hlb(&[
        "hyper",
        "--family",
        "P6",
        "--params",
        "1,-2.2654",
        "--power",
        "100",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let row = &json_rows(&out)[0];
    assert_eq!(row["m_total"].as_i64().unwrap(), 600);
    assert_eq!(row["p"].as_i64().unwrap(), 1200);
    assert!((num(row, "h_estimate") - 1.584313).abs() < 1e-4);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes[0].as_str().unwrap().contains("finite-degree"));
}

#[test]
fn optimize_recovers_the_cubic_ratio() {
    let out = hlb(&["optimize", "--family", "P3", "--p", "6", "--format", "json"]);
    assert!(out.status.success());
    let row = &json_rows(&out)[0];
    assert_eq!(row["mode"].as_str().unwrap(), "grid-simplex");
    let params = row["params"].as_array().unwrap();
    let ratio = params[1].as_f64().unwrap() / params[0].as_f64().unwrap();
    assert!((ratio + 2.0).abs() < 0.01);
    assert!(num(row, "lower_bound") >= 5f64.sqrt() - 1e-6);
}

#[test]
fn sweep_covers_the_range_endpoints() {
    let out = hlb(&[
        "sweep", "--family", "P3", "--p", "6", "--lambda", "-2:0:1", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows = json_rows(&out);
    assert_eq!(rows.len(), 3);
    assert!((num(&rows[0], "lambda") + 2.0).abs() < 1e-12);
    assert!((num(&rows[0], "lower_bound") - 5f64.sqrt()).abs() < 1e-6);
    assert!((num(&rows[2], "lambda")).abs() < 1e-12);
    assert!((num(&rows[2], "lower_bound") - 1.0).abs() < 1e-9);
}

#[test]
fn reproduce_passes_with_annotations_reported() {
    let out = hlb(&["reproduce", "--table", "s3", "--format", "md"]);
    assert!(out.status.success(), "annotated rows must not fail the run");
    let text = stdout(&out);
    assert!(text.contains("| ok |"));
    assert!(text.contains("| annotated |"));
    assert!(!text.contains("| FAIL |"));
    assert!(text.contains("note: s3/P5/bound:"));
}

#[test]
fn reproduce_rejects_unknown_tables() {
    let out = hlb(&["reproduce", "--table", "s9"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown table"));
}

#[test]
fn config_file_applies_and_flags_win() {
    let path = std::env::temp_dir().join(format!("hlb-cli-test-{}.conf", std::process::id()));
    std::fs::write(&path, "# test config\ngrid=1001\ntol=1e-10\nseed=3\n").unwrap();
    let out = hlb(&[
        "norm",
        "--family",
        "P2",
        "--params",
        "0.5",
        "--p",
        "4",
        "--config",
        path.to_str().unwrap(),
        "--grid",
        "2001",
        "--format",
        "json",
    ]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let config = &doc["meta"]["config"];
    assert_eq!(config["grid"].as_i64().unwrap(), 2001);
    assert_eq!(config["tol"].as_f64().unwrap(), 1e-10);
    assert_eq!(config["seed"].as_i64().unwrap(), 3);
}

#[test]
fn thread_cap_env_is_honored_and_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_hlb"))
        .args(["norm", "--family", "P2", "--params", "0.5", "--p", "4"])
        .env("HLB_THREADS", "1")
        .output()
        .unwrap();
    assert!(ok.status.success());

    let bad = Command::new(env!("CARGO_BIN_EXE_hlb"))
        .args(["norm", "--family", "P2", "--params", "0.5", "--p", "4"])
        .env("HLB_THREADS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("HLB_THREADS"));
}

#[test]
fn csv_has_config_comments_header_and_quoted_params() {
    let out = hlb(&[
        "norm", "--family", "P3", "--params", "1,-2", "--p", "6", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# grid="));
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        lines[header],
        "family,params,p,sup_norm,argmax_x,argmax_y,est_error"
    );
    assert!(lines[header + 1].starts_with("P3,\"1,-2\",6,"));
}

#[test]
fn markdown_has_config_line_and_table() {
    let out = hlb(&["norm", "--family", "P2", "--params", "0.5", "--p", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("config: grid="));
    assert!(text.contains("| family | params | p | sup_norm |"));
}

/// Canonical re-rendering of a parsed JSON document; mirrors the emitter's
/// rules (insertion-ordered keys, fmt15 for non-integer numbers).
fn render_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&hlb::render::fmt15(n.as_f64().unwrap()));
            }
        }
        Value::String(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    '\t' => out.push_str("\\t"),
                    c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_value(&Value::String(k.clone()), out);
                out.push(':');
                render_value(item, out);
            }
            out.push('}');
        }
    }
}

#[test]
fn json_reports_reparse_and_rerender_byte_identically() {
    for args in [
        vec![
            "bound",
            "--family",
            "P5",
            "--params",
            "0.19462,0.66008,0.97833",
            "--p",
            "10",
        ],
        vec![
            "hyper",
            "--family",
            "P8",
            "--params",
            "0.15258,0.64697",
            "--power",
            "75",
        ],
        vec![
            "sweep",
            "--family",
            "P6",
            "--p",
            "12",
            "--lambda",
            "-3:-1:0.5",
        ],
    ] {
        let mut argv = args.clone();
        argv.extend(["--format", "json"]);
        let out = hlb(&argv);
        assert!(out.status.success());
        let text = stdout(&out);
        let doc: Value = serde_json::from_str(&text).expect("valid json");
        let mut rendered = String::new();
        render_value(&doc, &mut rendered);
        assert_eq!(rendered, text.trim_end(), "round-trip drift for {args:?}");
    }
}

#[test]
fn errors_exit_nonzero_with_messages() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["norm", "--family", "P4", "--params", "1", "--p", "8"],
            "family",
        ),
        (
            &["bound", "--family", "P3", "--params", "1,-2", "--p", "2"],
            "exponent regime",
        ),
        (
            &["norm", "--family", "P3", "--params", "1", "--p", "6"],
            "parameter",
        ),
        (
            &[
                "sweep", "--family", "P5", "--p", "10", "--lambda", "-1:0:0.5",
            ],
            "two-parameter",
        ),
        (
            &["norm", "--family", "P3", "--params", "1,-2", "--p", "six"],
            "p",
        ),
    ];
    for (argv, needle) in cases {
        let out = hlb(argv);
        assert!(!out.status.success(), "{argv:?} should fail");
        let err = stderr(&out);
        assert!(
            err.contains(needle),
            "{argv:?}: missing '{needle}' in: {err}"
        );
    }
}
