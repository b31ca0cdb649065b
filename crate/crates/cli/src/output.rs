use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::args::Format;

/// A rendered result: rows of flat JSON objects, plus an optional
/// hand-written CSV for record types that have one.
pub struct Output {
    pub rows: Vec<Value>,
    pub csv: Option<String>,
    /// Render a lone row as an object rather than a one-element array.
    pub single: bool,
}

impl Output {
    pub fn rows<T: serde::Serialize>(items: &[T]) -> Self {
        Self {
            rows: items.iter().map(|x| serde_json::to_value(x).expect("serializable")).collect(),
            csv: None,
            single: false,
        }
    }

    pub fn one<T: serde::Serialize>(item: &T) -> Self {
        Self {
            single: true,
            ..Self::rows(std::slice::from_ref(item))
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = if self.single && self.rows.len() == 1 {
                    self.rows[0].clone()
                } else {
                    Value::Array(self.rows.clone())
                };
                let mut s = serde_json::to_string_pretty(&v).expect("json");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone().unwrap_or_else(|| generic_csv(&self.rows)),
            Format::Table => aligned(&self.rows),
        }
    }
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(_)) | Some(Value::Object(_)) => v.map(|x| x.to_string()).unwrap_or_default(),
        Some(x) => x.to_string(),
    }
}

fn generic_csv(rows: &[Value]) -> String {
    let cols = columns(rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&cols).expect("csv header");
    for r in rows {
        w.write_record(cols.iter().map(|c| cell(r.get(c)))).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

fn aligned(rows: &[Value]) -> String {
    let cols = columns(rows);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| cell(r.get(c))).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut push = |line: Vec<&str>| {
        let parts: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    push(cols.iter().map(String::as_str).collect());
    for r in &cells {
        push(r.iter().map(String::as_str).collect());
    }
    out
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_each_format() {
        let o = Output {
            rows: vec![json!({"n": 3, "detail": "a, b"}), json!({"n": 10, "detail": null})],
            csv: None,
            single: false,
        };
        assert_eq!(o.render(Format::Csv), "n,detail\n3,\"a, b\"\n10,\n");
        assert_eq!(o.render(Format::Table), "n   detail\n3   a, b\n10\n");
        assert!(o.render(Format::Json).starts_with('['));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
