// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Comma-separated datasets with a commented header.

use std::fmt::Write as _;

pub const TOOL_VERSION: &str = concat!("nwqed ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits, enough to round-trip an `f64`.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub command: String,
    pub seed: u64,
    pub config: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    pub columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(
        command: &str,
        seed: u64,
        config: Vec<(String, String)>,
        columns: Vec<String>,
    ) -> Self {
        Self {
            command: command.to_string(),
            seed,
            config,
            summary: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: f64) {
        self.summary.push((key.to_string(), number(value)));
    }

    pub fn note_text(&mut self, key: &str, value: impl Into<String>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool = {TOOL_VERSION}");
        let _ = writeln!(out, "# command = {}", self.command);
        let _ = writeln!(out, "# seed = {}", self.seed);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config.{k} = {v}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary.{k} = {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<_> = row.iter().map(|&x| number(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s
                .split('e')
                .next()
                .unwrap()
                .trim_start_matches('-')
                .replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn header_then_rows() {
        let mut d = Dataset::new(
            "scatter",
            7,
            vec![("purcell".into(), "20".into())],
            vec!["a".into(), "b".into()],
        );
        d.push(vec![1.0, 2.0]);
        d.note("efficiency", 0.5);
        let text = d.render();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "# command = scatter");
        assert_eq!(lines[3], "# config.purcell = 20");
        assert_eq!(lines[4], "# summary.efficiency = 5.0000000000000000e-1");
        assert_eq!(lines[5], "a,b");
        assert_eq!(lines[6], "1.0000000000000000e0,2.0000000000000000e0");
        assert_eq!(d.column("b"), Some(vec![2.0]));
    }

    #[test]
    #[should_panic]
    fn ragged_rows_rejected() {
        let mut d = Dataset::new("x", 0, vec![], vec!["a".into()]);
        d.push(vec![1.0, 2.0]);
    }
}
