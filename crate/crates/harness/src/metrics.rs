//! Per-run metrics and their CSV form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::grid::{Algorithm, SweepFactor};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub algorithm: Algorithm,
    pub factor: SweepFactor,
    pub value: f64,
    pub repetition: u32,
    pub utility: f64,
    /// Wall-clock seconds spent in the solver.
    pub runtime: f64,
    /// Peak bytes of solver-owned structures plus the instance's heap size.
    /// A counter-based estimate, not a process measurement.
    pub memory_estimate: u64,
    pub completed_tasks: u32,
    pub seed_used: u64,
}

pub const HEADER: [&str; 9] = [
    "algorithm",
    "factor",
    "value",
    "repetition",
    "utility",
    "runtime",
    "memory_estimate",
    "completed_tasks",
    "seed_used",
];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}, line {line}: {message}")]
    Field {
        path: String,
        line: u64,
        message: String,
    },
}

/// Seventeen significant digits: enough to reproduce every `f64` exactly.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a header row and one row per record, columns in [`HEADER`] order.
pub fn write_metrics_csv(records: &[MetricsRecord], path: impl AsRef<Path>) -> Result<(), CsvError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = File::create(path).map_err(|source| CsvError::Io {
        path: display.clone(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    write_records(records, &mut out).map_err(|source| CsvError::Csv {
        path: display.clone(),
        source,
    })?;
    out.flush().map_err(|source| CsvError::Io {
        path: display,
        source,
    })
}

pub fn write_records(records: &[MetricsRecord], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.algorithm.name().to_string(),
            r.factor.name().to_string(),
            float(r.value),
            r.repetition.to_string(),
            float(r.utility),
            float(r.runtime),
            r.memory_estimate.to_string(),
            r.completed_tasks.to_string(),
            r.seed_used.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_csv(path: impl AsRef<Path>) -> Result<Vec<MetricsRecord>, CsvError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let csv_err = |source| CsvError::Csv {
        path: display.clone(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(HEADER) {
        return Err(CsvError::Field {
            path: display,
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |message: String| CsvError::Field {
            path: display.clone(),
            line,
            message,
        };
        let get = |i: usize| {
            row.get(i)
                .ok_or_else(|| field(format!("missing column {}", HEADER[i])))
        };
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {name} {s:?}"))
        }
        let algorithm = get(0)?;
        let factor = get(1)?;
        out.push(MetricsRecord {
            algorithm: Algorithm::from_name(algorithm)
                .ok_or_else(|| field(format!("unknown algorithm {algorithm:?}")))?,
            factor: SweepFactor::from_name(factor)
                .ok_or_else(|| field(format!("unknown factor {factor:?}")))?,
            value: num(get(2)?, HEADER[2]).map_err(field)?,
            repetition: num(get(3)?, HEADER[3]).map_err(field)?,
            utility: num(get(4)?, HEADER[4]).map_err(field)?,
            runtime: num(get(5)?, HEADER[5]).map_err(field)?,
            memory_estimate: num(get(6)?, HEADER[6]).map_err(field)?,
            completed_tasks: num(get(7)?, HEADER[7]).map_err(field)?,
            seed_used: num(get(8)?, HEADER[8]).map_err(field)?,
        });
    }
    Ok(out)
}
