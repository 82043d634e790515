//! Plain numeric CSV: no header, one matrix row per line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sindy_core::numkernel::DenseMatrix;

use crate::error::CliError;

/// Parses a headerless numeric CSV into rows. Row and column numbers in
/// errors are 1-based.
pub fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input {
            file: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                let value: f64 = field.parse().map_err(|_| CliError::Parse {
                    file: path.to_path_buf(),
                    row: r + 1,
                    column: c + 1,
                    message: format!("'{field}' is not a number"),
                })?;
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(CliError::Parse {
                        file: path.to_path_buf(),
                        row: r + 1,
                        column: c + 1,
                        message: format!("'{field}' is not finite"),
                    })
                }
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Parse {
                    file: path.to_path_buf(),
                    row: r + 1,
                    column: row.len().min(first.len()) + 1,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse {
            file: path.to_path_buf(),
            row: 1,
            column: 1,
            message: "file contains no data".into(),
        });
    }
    Ok(rows)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let rows = read_rows(path)?;
    DenseMatrix::from_rows(&rows).map_err(|e| CliError::Input {
        file: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// A vector stored either as one column or as one row.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let rows = read_rows(path)?;
    match (rows.len(), rows[0].len()) {
        (_, 1) => Ok(rows.into_iter().map(|r| r[0]).collect()),
        (1, _) => Ok(rows.into_iter().next().unwrap_or_default()),
        (r, c) => Err(CliError::Input {
            file: path.to_path_buf(),
            message: format!("expected a single row or column, found {r}x{c}"),
        }),
    }
}

/// Writes `header` and then `rows`, floats in shortest round-trip form.
pub fn write_table(path: &Path, header: &[String], rows: impl IntoIterator<Item = (String, Vec<f64>)>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| CliError::io(path, e);
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for (key, values) in rows {
        write!(out, "{key}").map_err(io)?;
        for v in values {
            write!(out, ",{v:?}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}
