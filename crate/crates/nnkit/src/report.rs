//! Benchmark report serialization: a CSV of cells plus a JSON sidecar with
//! the full config and provenance. Floats are written with Rust's shortest
//! round-trip formatting, so parsing the CSV back loses nothing.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::bench::{BenchCell, BenchReport, Engine};
use crate::HarnessError;

pub const CSV_HEADER: &str = "engine,k,epsilon,n,d,bucket_size,build_seconds,\
total_query_seconds,mean_query_seconds,leaf_points_examined,checksum";

/// Where the JSON sidecar for a CSV report lives: same path, `.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the cell CSV at `path` and the config/meta sidecar next to it.
pub fn write_report(report: &BenchReport, path: &Path) -> Result<(), HarnessError> {
    let sidecar = sidecar_path(path);
    if sidecar == path {
        return Err(HarnessError::InvalidSpec(format!(
            "report path {} collides with its own sidecar; use a non-.json extension",
            path.display()
        )));
    }

    let mut out = BufWriter::new(File::create(path).map_err(|e| HarnessError::io(path, e))?);
    let werr = |e| HarnessError::io(path, e);
    writeln!(out, "{CSV_HEADER}").map_err(werr)?;
    for c in &report.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.engine,
            c.k,
            c.epsilon,
            c.n,
            c.d,
            c.bucket_size,
            c.build_seconds,
            c.total_query_seconds,
            c.mean_query_seconds,
            c.leaf_points_examined,
            c.checksum
        )
        .map_err(werr)?;
    }
    out.flush().map_err(werr)?;

    let side = File::create(&sidecar).map_err(|e| HarnessError::io(&sidecar, e))?;
    serde_json::to_writer_pretty(
        BufWriter::new(side),
        &serde_json::json!({ "config": report.config, "meta": report.meta }),
    )
    .map_err(|e| HarnessError::InvalidSpec(format!("sidecar serialization: {e}")))?;
    Ok(())
}

/// Parses a CSV written by `write_report` back into cells.
pub fn read_cells(path: &Path) -> Result<Vec<BenchCell>, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let parse_err = |line: usize, msg: String| HarnessError::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };

    let (_, header) = lines
        .next()
        .ok_or_else(|| HarnessError::EmptyPoints { path: path.display().to_string() })?;
    let header = header.map_err(|e| HarnessError::io(path, e))?;
    if header != CSV_HEADER {
        return Err(parse_err(1, format!("unexpected header {header:?}")));
    }

    let mut cells = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(parse_err(lineno, format!("expected 11 fields, found {}", fields.len())));
        }
        fn num<T: std::str::FromStr>(
            field: &str,
            lineno: usize,
            mk: &impl Fn(usize, String) -> HarnessError,
        ) -> Result<T, HarnessError> {
            field.parse::<T>().map_err(|_| mk(lineno, format!("bad number {field:?}")))
        }
        let mk = |l, m| parse_err(l, m);
        cells.push(BenchCell {
            engine: fields[0].parse::<Engine>()?,
            k: num(fields[1], lineno, &mk)?,
            epsilon: num(fields[2], lineno, &mk)?,
            n: num(fields[3], lineno, &mk)?,
            d: num(fields[4], lineno, &mk)?,
            bucket_size: num(fields[5], lineno, &mk)?,
            build_seconds: num(fields[6], lineno, &mk)?,
            total_query_seconds: num(fields[7], lineno, &mk)?,
            mean_query_seconds: num(fields[8], lineno, &mk)?,
            leaf_points_examined: num(fields[9], lineno, &mk)?,
            checksum: num(fields[10], lineno, &mk)?,
        });
    }
    Ok(cells)
}
