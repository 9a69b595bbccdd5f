//! Report rendering: markdown tables, CSV, and canonical JSON.
//!
//! Every number is printed with fmt15, which rounds to 15 significant digits
//! and trims trailing zeros. Parsing such a string back to f64 and printing
//! it again reproduces the same bytes, so JSON reports round-trip exactly.
//! The JSON emitter is hand rolled to keep key order and number formatting
//! under our control; no timestamps or other run-varying fields are emitted.

/// One table cell. Lists hold parameter vectors; they render comma joined in
/// text formats and as arrays in JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    Num(f64),
    List(Vec<f64>),
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt15(*x),
            Cell::List(v) => v.iter().map(|x| fmt15(*x)).collect::<Vec<_>>().join(","),
        }
    }

    fn write_json(&self, out: &mut String) {
        match self {
            Cell::Str(s) => write_json_string(s, out),
            Cell::Int(i) => out.push_str(&i.to_string()),
            Cell::Num(x) => {
                if x.is_finite() {
                    out.push_str(&fmt15(*x));
                } else {
                    // JSON has no infinities; the only non-finite value we
                    // emit is p = inf, which stays a string.
                    write_json_string(&fmt15(*x), out);
                }
            }
            Cell::List(v) => {
                out.push('[');
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&fmt15(*x));
                }
                out.push(']');
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Md,
    Csv,
    Json,
}

/// One rendered report: an effective-config header, a column set, data rows,
/// and free-form note lines (annotations, semantic remarks).
#[derive(Debug, Clone)]
pub struct Report {
    pub config: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Md => render_md(report),
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}

/// 15 significant digits, trailing zeros trimmed. Fixed notation while the
/// exponent stays in a readable range, scientific outside it.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent value");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let n = digits.len() as i32;
    let body = if (0..=16).contains(&exp) {
        if n <= exp + 1 {
            format!("{digits}{}", "0".repeat((exp + 1 - n) as usize))
        } else {
            format!(
                "{}.{}",
                &digits[..(exp + 1) as usize],
                &digits[(exp + 1) as usize..]
            )
        }
    } else if (-4..0).contains(&exp) {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if n == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{exp}", &digits[..1], &digits[1..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn render_md(report: &Report) -> String {
    let mut out = String::new();
    let config_line = report
        .config
        .iter()
        .map(|(k, v)| format!("{k}={}", v.text()))
        .collect::<Vec<_>>()
        .join(" ");
    out.push_str(&format!("config: {config_line}\n\n"));
    out.push_str(&format!("| {} |\n", report.columns.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(report.columns.len())));
    for row in &report.rows {
        let cells = row.iter().map(Cell::text).collect::<Vec<_>>().join(" | ");
        out.push_str(&format!("| {cells} |\n"));
    }
    for note in &report.notes {
        out.push_str(&format!("\nnote: {note}"));
    }
    if !report.notes.is_empty() {
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    for (k, v) in &report.config {
        out.push_str(&format!("# {k}={}\n", v.text()));
    }
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for row in &report.rows {
        let cells = row
            .iter()
            .map(|c| csv_field(&c.text()))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&cells);
        out.push('\n');
    }
    for note in &report.notes {
        out.push_str(&format!("# note: {note}\n"));
    }
    out
}

fn write_json_string(s: &str, out: &mut String) {
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

fn render_json(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("{\"meta\":{\"version\":");
    write_json_string(env!("CARGO_PKG_VERSION"), &mut out);
    out.push_str(",\"config\":{");
    for (i, (k, v)) in report.config.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_json_string(k, &mut out);
        out.push(':');
        v.write_json(&mut out);
    }
    out.push_str("}},\"rows\":[");
    for (i, row) in report.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('{');
        for (j, (col, cell)) in report.columns.iter().zip(row).enumerate() {
            if j > 0 {
                out.push(',');
            }
            write_json_string(col, &mut out);
            out.push(':');
            cell.write_json(&mut out);
        }
        out.push('}');
    }
    out.push_str("],\"notes\":[");
    for (i, note) in report.notes.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_json_string(note, &mut out);
    }
    out.push_str("]}");
    out.push('\n');
    out
}
