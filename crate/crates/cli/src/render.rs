use std::fmt::Write;

use clap::ValueEnum;
use gw_core::CongruenceRecord;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "base,k,expected,observed,saturated,type";

fn record_json(r: &CongruenceRecord) -> Value {
    let observed = if r.saturated { json!(r.observed_display()) } else { json!(r.observed) };
    json!({
        "base": r.base,
        "k": r.k,
        "expected": r.expected,
        "observed": observed,
        "saturated": r.saturated,
        "type": r.classification.as_str(),
    })
}

/// Renders records in the given order. Output is a pure function of the input.
pub fn render_records(records: &[CongruenceRecord], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.base,
                    r.k,
                    r.expected,
                    r.observed_display(),
                    r.saturated,
                    r.classification
                )
                .unwrap();
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = records.iter().map(record_json).collect();
            out.push_str(&serde_json::to_string_pretty(&rows).expect("json"));
            out.push('\n');
        }
        OutputFormat::Table => {
            writeln!(out, "{:>6} {:>3} {:>8} {:>8} {:>9}  type", "base", "k", "expected", "observed", "saturated")
                .unwrap();
            for r in records {
                writeln!(
                    out,
                    "{:>6} {:>3} {:>8} {:>8} {:>9}  {}",
                    r.base,
                    r.k,
                    format!("p^{}", r.expected),
                    if r.observed == 0 && !r.saturated { "-".to_string() } else { format!("p^{}", r.observed_display()) },
                    r.saturated,
                    r.classification
                )
                .unwrap();
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Generic rows for the non-record reports. JSON callers serialize the
/// report itself instead, so only table and CSV are handled here.
pub fn render_rows(headers: &[&str], rows: &[Vec<String>], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv | OutputFormat::Json => {
            let line: Vec<String> = headers.iter().map(|h| csv_field(h)).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
            for row in rows {
                let line: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
                writeln!(out, "{}", line.join(",")).unwrap();
            }
        }
        OutputFormat::Table => {
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for row in rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let fmt_line = |cells: Vec<&str>| {
                let last = cells.len().saturating_sub(1);
                let parts: Vec<String> = cells
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j == last { c.to_string() } else { format!("{:<w$}", c, w = widths[j]) })
                    .collect();
                parts.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", fmt_line(headers.to_vec())).unwrap();
            for row in rows {
                writeln!(out, "{}", fmt_line(row.iter().map(String::as_str).collect())).unwrap();
            }
        }
    }
    out
}

/// A single report: pretty JSON, or one `field,value` row per top-level key.
pub fn render_value(value: &Value, format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        return serde_json::to_string_pretty(value).expect("json") + "\n";
    }
    let rows: Vec<Vec<String>> = match value.as_object() {
        Some(map) => map.iter().map(|(k, v)| vec![k.clone(), scalar_text(v)]).collect(),
        None => vec![vec!["value".into(), scalar_text(value)]],
    };
    render_rows(&["field", "value"], &rows, format)
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
