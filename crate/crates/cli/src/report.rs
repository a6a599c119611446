use dual_braid::linalg::Q;
use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

/// Integers stay numbers; anything else becomes an exact `"p/q"` string.
pub fn q_json(q: &Q) -> Value {
    let s = q.to_string();
    match s.parse::<i64>() {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(s),
    }
}

pub fn q_list(qs: &[Q]) -> Value {
    Value::Array(qs.iter().map(q_json).collect())
}

/// Wraps a command payload with the schema header.
pub fn envelope(command: &str, group: Option<String>, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("command".into(), command.into());
    if let Some(g) = group {
        m.insert("group".into(), g.into());
    }
    match body {
        Value::Object(b) => m.extend(b),
        other => {
            m.insert("result".into(), other);
        }
    }
    Value::Object(m)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// One `key  value` line per leaf, keys padded to a common width.
pub fn pretty(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, x) in rows {
        if x.contains('\n') {
            s.push_str(&format!("{k}:\n{x}\n"));
        } else {
            s.push_str(&format!("{k:width$}  {x}\n"));
        }
    }
    s
}
