//! Plain-text rendering of output documents for `--format table`.

use serde_json::Value;

/// One cell: symbolic objects show their `text` field, coordinate arrays are
/// bracketed, anything else falls back to compact JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(cell).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => match m.get("text") {
            Some(t) => cell(t),
            None if m.contains_key("re") => {
                format!("{}+{}i", m.get("re").map_or("0".into(), cell), m.get("im").map_or("0".into(), cell))
            }
            None => v.to_string(),
        },
    }
}

fn is_record_list(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty()
        && items.iter().all(|x| x.is_object() && !x.as_object().unwrap().contains_key("text")))
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn record_table(items: &[Value]) -> String {
    let mut header: Vec<String> = Vec::new();
    for it in items {
        for k in it.as_object().unwrap().keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut rows = vec![header.clone()];
    for it in items {
        rows.push(header.iter().map(|k| it.get(k).map_or_else(String::new, cell)).collect());
    }
    grid(&rows)
}

pub fn render(doc: &Value) -> String {
    let Value::Object(m) = doc else {
        return if is_record_list(doc) { record_table(doc.as_array().unwrap()) } else { format!("{}\n", cell(doc)) };
    };
    if m.contains_key("text") {
        return format!("{}\n", cell(doc));
    }
    let mut scalars = Vec::new();
    let mut tables = String::new();
    for (k, v) in m {
        if is_record_list(v) {
            tables.push_str(&format!("\n{k}:\n{}", record_table(v.as_array().unwrap())));
        } else {
            scalars.push(vec![format!("{k}:"), cell(v)]);
        }
    }
    grid(&scalars) + &tables
}
