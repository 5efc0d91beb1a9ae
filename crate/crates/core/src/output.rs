//! Deterministic CSV/JSON writers. Numbers carry 15 significant digits and
//! every file names its scenario and the hash of the input config.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Provenance stamped on every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meta {
    pub scenario: String,
    pub config_sha256: String,
}

/// Rounds to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Shortest text that reads back as `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    format!("{:?}", round_sig(x))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Writes `bytes` to a sibling temp file, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| io_err(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}

/// CSV text: a `#` provenance line, the column header, then rows.
pub fn csv_string(meta: &Meta, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = format!("# scenario={} config_sha256={}\n{}\n", meta.scenario, meta.config_sha256, columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let cells: Vec<String> = row.into_iter().map(fmt_num).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, meta: &Meta, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    write_atomic(path, csv_string(meta, columns, rows).as_bytes())
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded numbers. Objects get `scenario` and
/// `config_sha256` keys; anything else is wrapped as `{..., "data": value}`.
pub fn json_string<T: Serialize>(meta: &Meta, value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Domain { what: "json output", reason: e.to_string() })?;
    let mut obj = Map::new();
    obj.insert("scenario".into(), Value::String(meta.scenario.clone()));
    obj.insert("config_sha256".into(), Value::String(meta.config_sha256.clone()));
    match round_value(v) {
        Value::Object(o) => {
            for (k, v) in o {
                if k != "scenario" {
                    obj.insert(k, v);
                }
            }
        }
        other => {
            obj.insert("data".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj))
        .map_err(|e| Error::Domain { what: "json output", reason: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, meta: &Meta, value: &T) -> Result<()> {
    write_atomic(path, json_string(meta, value)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Meta {
        Meta { scenario: "t".into(), config_sha256: "00".into() }
    }

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_num(-2.5e-40), "-2.5e-40");
        assert_eq!(fmt_num(0.0), "0.0");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&meta(), &["a", "b"], vec![vec![1.0, 2.0]]);
        assert_eq!(s, "# scenario=t config_sha256=00\na,b\n1.0,2.0\n");
    }

    #[test]
    fn json_layout() {
        #[derive(Serialize)]
        struct R {
            x: f64,
        }
        let s = json_string(&meta(), &R { x: 2.0 / 3.0 }).unwrap();
        assert!(s.contains("\"x\": 0.666666666666667"), "{s}");
        assert!(s.contains("\"scenario\": \"t\"") && s.contains("\"config_sha256\": \"00\""));
        let s = json_string(&meta(), &vec![1.0]).unwrap();
        assert!(s.contains("\"data\""));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("trap-lab-out-{}", std::process::id()));
        let p = dir.join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
