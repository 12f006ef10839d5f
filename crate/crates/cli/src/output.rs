use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// 12 significant digits, shortest round-trip form, no trailing zeros.
/// Magnitudes below 1e-4 use exponent notation.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let s = if rounded.abs() < 1e-4 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Header plus rows, comma separated with LF line endings.
#[derive(Clone, Debug, Default)]
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}",
                r.iter().map(|f| quote(f)).collect::<Vec<_>>().join(",")
            );
        }
        out
    }
}

fn quote(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// Record of one invocation, written next to its outputs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Arguments after the subcommand name; replaying them reproduces the outputs.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub wall_ms: u128,
    pub outputs: Vec<String>,
}

pub struct OutDir {
    pub dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl OutDir {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let p = self.dir.join(name);
        fs::write(&p, contents)?;
        self.written.push(p.clone());
        Ok(p)
    }
}

/// Compares two CSV texts, skipping the columns named in `ignore`.
pub fn csv_equal_except(a: &str, b: &str, ignore: &[&str]) -> bool {
    let keep = |text: &str| -> Vec<Vec<String>> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
        let mask: Vec<bool> = header.iter().map(|h| !ignore.contains(h)).collect();
        std::iter::once(header.join(","))
            .chain(lines.map(str::to_string))
            .map(|l| {
                l.split(',')
                    .zip(&mask)
                    .filter(|(_, k)| **k)
                    .map(|(f, _)| f.to_string())
                    .collect()
            })
            .collect()
    };
    keep(a) == keep(b)
}
