//! Deterministic text output helpers.
//!
//! All CSV exports format floats with 17 significant digits so that the same
//! artifact always serializes to byte-identical files and values round-trip
//! exactly through `f64` parsing.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Format a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a fixed header, written with [`fmt_f64`] formatting.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                let _ = write!(out, "{}", fmt_f64(*v));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[
            0.0,
            1.0,
            -1.5e-300,
            std::f64::consts::PI,
            9.81,
            1.0 / 3.0,
            -2.2250738585072014e-308,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = CsvTable::new(vec!["t", "x"]);
        assert_eq!(t.to_string(), "t,x\n");
    }
}
