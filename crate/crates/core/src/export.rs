//! CSV and JSON output helpers shared by every artifact writer.
//!
//! Floats in CSV are printed with 17 significant digits so that a value read
//! back parses to the identical `f64`. JSON objects are emitted with sorted keys.

use std::io::{self, Write};

use serde::Serialize;

/// Formats `v` with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table with a header row; rows are written in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.header.len(), "CSV row width mismatch");
        self.rows.push(row.iter().map(|&v| fmt_f64(v)).collect());
    }

    /// Row where the leading column is an integer index.
    pub fn push_indexed(&mut self, index: i64, rest: &[f64]) {
        assert_eq!(rest.len() + 1, self.header.len(), "CSV row width mismatch");
        let mut row = vec![index.to_string()];
        row.extend(rest.iter().map(|&v| fmt_f64(v)));
        self.rows.push(row);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Pretty JSON with lexicographically sorted object keys.
pub fn to_sorted_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // serde_json's default map is a BTreeMap, so a round trip through Value sorts keys.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, std::f64::consts::PI, -1e-300, 123456789.123456789] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(&["n", "value"]);
        t.push_indexed(1, &[0.5]);
        assert_eq!(t.to_string_lossy(), "n,value\n1,5.0000000000000000e-1\n");
    }

    #[test]
    fn json_keys_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: f64,
        }
        let s = to_sorted_json(&S { zeta: 1.0, alpha: 2.0 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }
}
