//! CSV emission.
//!
//! Numbers print with `{}` — Rust's shortest decimal that round-trips to the
//! same bits — so re-reading an emitted file reproduces every value exactly.
//! Log-domain quantities are carried in columns suffixed `_ln`; no linear
//! twin is emitted for them (they may underflow, the log never does). An
//! empty row set still yields the header line.

use std::fmt::Write as _;
use std::fs;

use crate::config::Failure;

/// One CSV cell.
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

/// Missing optional value renders as an empty cell.
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Cell {
        match v {
            Some(x) => Cell::Num(x),
            None => Cell::Text(String::new()),
        }
    }
}

/// Render a rectangular table. Text cells are kept single-field: commas
/// become semicolons and line breaks become spaces.
pub fn render(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match cell {
                Cell::Num(v) => {
                    let _ = write!(out, "{v}");
                }
                Cell::Text(t) => out.push_str(&t.replace(',', ";").replace(['\n', '\r'], " ")),
            }
        }
        out.push('\n');
    }
    out
}

/// Write to the path, or to stdout when no path was given. A write failure
/// names the path and counts as a configuration problem.
pub fn write_out(path: Option<&str>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Failure::Config(vec![format!("cannot write `{p}`: {e}")])),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
