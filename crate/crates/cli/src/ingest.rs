//! CSV data ingestion.
//!
//! The header names every column: outcomes `y1..yK` and covariates
//! `x1..xp`, in any order. Outcomes must be `0` or `1`, covariates finite
//! numbers; empty cells are rejected rather than imputed.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use mvb::{Dataset, OutcomeVector};

use crate::error::{CliError, CliResult};

enum Column {
    Y(usize),
    X(usize),
}

fn classify(name: &str) -> Option<Column> {
    let (kind, digits) = name.split_at(name.char_indices().nth(1)?.0);
    let idx: usize = digits.parse().ok().filter(|&i| i >= 1)?;
    if digits.starts_with('0') {
        return None;
    }
    match kind {
        "y" => Some(Column::Y(idx)),
        "x" => Some(Column::X(idx)),
        _ => None,
    }
}

/// Checks that the indices are exactly `1..=n` and returns `n`.
fn contiguous(mut idx: Vec<usize>, prefix: &str) -> CliResult<usize> {
    idx.sort_unstable();
    for (want, &got) in (1..).zip(&idx) {
        if got != want {
            return Err(CliError::Input(if got < want {
                format!("duplicate column {prefix}{got}")
            } else {
                format!("missing column {prefix}{want}")
            }));
        }
    }
    Ok(idx.len())
}

pub fn ingest_csv(path: &Path) -> CliResult<Dataset<f64>> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> CliResult<Dataset<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| CliError::Input(format!("cannot read header: {e}")))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(CliError::Input("no data rows".into()));
    }

    // Position of each column in the record.
    let mut ys = Vec::new();
    let mut xs = Vec::new();
    for (pos, name) in headers.iter().enumerate() {
        match classify(name) {
            Some(Column::Y(i)) => ys.push((i, pos)),
            Some(Column::X(i)) => xs.push((i, pos)),
            None => {
                return Err(CliError::Input(format!(
                    "unrecognized column {name:?}; expected y1..yK and x1..xp"
                )))
            }
        }
    }
    let k = contiguous(ys.iter().map(|c| c.0).collect(), "y")?;
    let p = contiguous(xs.iter().map(|c| c.0).collect(), "x")?;
    if k == 0 {
        return Err(CliError::Input("no outcome columns (y1..yK)".into()));
    }
    ys.sort_unstable();
    xs.sort_unstable();

    let mut outcomes = Vec::new();
    let mut covariates = Vec::new();
    let mut values = vec![0u8; k];
    for (r, record) in rdr.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| CliError::Input(format!("row {row}: {e}")))?;
        for (slot, &(i, pos)) in values.iter_mut().zip(&ys) {
            *slot = match &record[pos] {
                "0" => 0,
                "1" => 1,
                "" => return Err(CliError::Input(format!("row {row}, column y{i}: missing value"))),
                other => {
                    return Err(CliError::Input(format!(
                        "row {row}, column y{i}: outcome must be 0 or 1, found {other:?}"
                    )))
                }
            };
        }
        outcomes.push(OutcomeVector::from_values(&values)?);
        for &(i, pos) in &xs {
            let cell = &record[pos];
            if cell.is_empty() {
                return Err(CliError::Input(format!("row {row}, column x{i}: missing value")));
            }
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Input(format!("row {row}, column x{i}: not a number: {cell:?}"))
            })?;
            if !v.is_finite() {
                return Err(CliError::Input(format!("row {row}, column x{i}: not finite: {cell:?}")));
            }
            covariates.push(v);
        }
    }
    if outcomes.is_empty() {
        return Err(CliError::Input("no data rows".into()));
    }
    Ok(Dataset::new(k, p, outcomes, covariates)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> CliResult<Dataset<f64>> {
        ingest_reader(text.as_bytes())
    }

    #[test]
    fn basic_shape() {
        let d = read("y1,y2,x1\n1,0,0.5\n0,1,-2\n").unwrap();
        assert_eq!((d.k(), d.p(), d.n()), (2, 1, 2));
        assert_eq!(d.outcome(0).values(), vec![1, 0]);
        assert_eq!(d.x(1), &[-2.0]);
    }

    #[test]
    fn columns_matched_by_name() {
        let d = read("x1,y2,y1\n0.5,1,0\n").unwrap();
        assert_eq!(d.outcome(0).values(), vec![0, 1]);
        assert_eq!(d.x(0), &[0.5]);
    }

    #[test]
    fn rejects_non_binary_with_location() {
        let err = read("y1,x1\n1,0.1\n2,0.3\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2") && msg.contains("y1"), "{msg}");
    }

    #[test]
    fn rejects_bad_covariates_and_missing() {
        assert!(read("y1,x1\n1,abc\n").unwrap_err().to_string().contains("x1"));
        assert!(read("y1,x1\n1,\n").unwrap_err().to_string().contains("missing"));
        assert!(read("y1,x1\n,0.2\n").unwrap_err().to_string().contains("missing"));
        assert!(read("y1,x1\n1,NaN\n").is_err());
        assert!(read("y1,x1\n1\n").is_err());
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(read("y1,y3\n0,1\n").is_err());
        assert!(read("y1,y1\n0,1\n").is_err());
        assert!(read("y1,z\n0,1\n").is_err());
        assert!(read("x1\n0.5\n").is_err());
        assert!(read("y01\n1\n").is_err());
    }

    #[test]
    fn empty_input() {
        assert_eq!(read("").unwrap_err().to_string(), "no data rows");
        assert_eq!(read("y1,y2\n").unwrap_err().to_string(), "no data rows");
    }
}
