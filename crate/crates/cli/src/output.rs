//! Deterministic CSV emission: comma separated, '.' decimal point, floats at
//! 17 significant digits (round-trip exact for binary64), mandatory header.
//! Writing a non-finite number is refused.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Clone, Copy, Debug)]
pub enum Cell {
    Int(usize),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: &[Vec<Cell>],
) -> Result<(), String> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(format!(
                "{}: row {i} has {} cells, header has {}",
                path.display(),
                row.len(),
                header.len()
            ));
        }
        for cell in row {
            if let Cell::Float(v) = cell {
                if !v.is_finite() {
                    return Err(format!(
                        "{}: refusing to write non-finite value in row {i}",
                        path.display()
                    ));
                }
            }
        }
    }
    let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = BufWriter::new(file);
    let mut emit = |line: &str| -> Result<(), String> {
        writeln!(out, "{line}").map_err(|e| format!("{}: {e}", path.display()))
    };
    emit(&header.join(","))?;
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => format!("{v:.16e}"),
            })
            .collect();
        emit(&line.join(","))?;
    }
    out.flush().map_err(|e| format!("{}: {e}", path.display()))
}
