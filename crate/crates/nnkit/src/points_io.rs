//! Points files: one point per line, comma-separated decimal coordinates,
//! `#` lines ignored. `write_points` emits the canonical form (shortest
//! round-trip floats, no comments), which `read_points` inverts exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nnkit_core::Dataset;

use crate::HarnessError;

pub fn read_points(path: &Path) -> Result<Dataset, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let parse_err = |line: usize, msg: String| HarnessError::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };

    let mut coords: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            return Err(parse_err(lineno, "blank line".into()));
        }
        let mut row = 0usize;
        for field in trimmed.split(',') {
            let field = field.trim();
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid number {field:?}")))?;
            if !value.is_finite() {
                return Err(parse_err(lineno, format!("non-finite coordinate {field}")));
            }
            coords.push(value);
            row += 1;
        }
        match dim {
            None => dim = Some(row),
            Some(d) if d != row => {
                return Err(parse_err(lineno, format!("expected {d} coordinates, found {row}")));
            }
            Some(_) => {}
        }
    }
    let dim = dim.ok_or_else(|| HarnessError::EmptyPoints { path: path.display().to_string() })?;
    Ok(Dataset::from_flat(coords, dim)?)
}

pub fn write_points(data: &Dataset, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let werr = |e| HarnessError::io(path, e);
    for p in data.points() {
        let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", line.join(",")).map_err(werr)?;
    }
    out.flush().map_err(werr)
}
