//! Fixed-width text rendering of a JSON report.

use serde_json::{Map, Value};

use crate::report::Report;

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    for line in report.summary() {
        out.push_str(&line);
        out.push('\n');
    }
    let value = serde_json::to_value(report).expect("reports serialize");
    let Value::Object(top) = value else { unreachable!("reports are objects") };
    for (key, v) in &top {
        match v {
            Value::Object(fields) => {
                out.push_str(&format!("\n[{key}]\n"));
                render_fields(&mut out, fields);
            }
            Value::Array(items) if key == "notes" => {
                out.push('\n');
                for item in items {
                    out.push_str(&format!("note: {}\n", cell(item)));
                }
            }
            Value::Array(items) if items.iter().all(Value::is_object) => {
                out.push_str(&format!("\n[{key}]\n"));
                out.push_str(&table(items, ""));
            }
            other => out.push_str(&format!("{key}: {}\n", cell(other))),
        }
    }
    out
}

fn render_fields(out: &mut String, fields: &Map<String, Value>) {
    for (key, v) in fields {
        match v {
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                out.push_str(&format!("{key}:\n"));
                out.push_str(&table(items, "  "));
            }
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_array) => {
                out.push_str(&format!("{key}:\n"));
                for item in items {
                    out.push_str(&format!("  {}\n", cell(item)));
                }
            }
            other => out.push_str(&format!("{key}: {}\n", cell(other))),
        }
    }
}

fn table(rows: &[Value], indent: &str) -> String {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        for key in row.as_object().into_iter().flat_map(Map::keys) {
            if !columns.contains(key) {
                columns.push(key.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| columns.iter().map(|c| row.get(c).map_or_else(|| "-".to_string(), cell)).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(k, c)| cells.iter().map(|r| r[k].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        let padded: Vec<String> =
            items.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&columns);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::Array(items) if items.iter().all(Value::is_string) => {
            format!("({})", items.iter().map(cell).collect::<Vec<_>>().join(", "))
        }
        Value::Array(items) if items.iter().all(Value::is_number) => {
            items.iter().map(cell).collect::<Vec<_>>().join(",")
        }
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        Value::Object(fields) => fields.values().map(cell).collect::<Vec<_>>().join(""),
    }
}
