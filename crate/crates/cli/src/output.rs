use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Number, Value};

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn fix_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) => num(x)
                .parse::<Number>()
                .map(Value::Number)
                .unwrap_or(Value::Number(n)),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(fix_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fix_floats(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float printed to 17 significant digits.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).context("serializing output")?;
    let mut s = serde_json::to_string_pretty(&fix_floats(v))?;
    s.push('\n');
    Ok(s)
}

/// As [`to_json`], then inserts `echo` untouched under the key `config` so an
/// input document comes back exactly as it was read.
pub fn to_json_with_echo<T: Serialize>(value: &T, echo: Option<&Value>) -> Result<String> {
    let mut v = fix_floats(serde_json::to_value(value).context("serializing output")?);
    if let (Some(e), Value::Object(map)) = (echo, &mut v) {
        map.insert("config".into(), e.clone());
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(headers: &[&str]) -> Self {
        let mut out = headers.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        let _ = writeln!(self.out, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub enum Cell {
    F(f64),
    OptF(Option<f64>),
    U(u64),
    B(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => num(*x),
            Cell::OptF(Some(x)) => num(*x),
            Cell::OptF(None) => String::new(),
            Cell::U(u) => u.to_string(),
            Cell::B(b) => b.to_string(),
        }
    }
}

/// Where artifacts go. Without `--out` nothing is written besides stdout.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)
                .with_context(|| format!("creating output directory {}", d.display()))?;
            // fail early when the directory is not writable
            let probe = d.join(".edes-write-probe");
            fs::write(&probe, b"")
                .with_context(|| format!("output directory {} is not writable", d.display()))?;
            let _ = fs::remove_file(probe);
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.786_300_134_5, 1e-300, -7.25e12] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn json_floats_rewritten_integers_kept() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            n: u32,
            nan: f64,
        }
        let s = to_json(&S {
            a: 0.5,
            n: 3,
            nan: f64::NAN,
        })
        .unwrap();
        assert!(s.contains("5.0000000000000000e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("\"nan\": null"));
    }
}
