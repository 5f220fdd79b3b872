use std::path::Path;

use odkit_core::TimeSeriesFrame;

use crate::error::{Result, StoreError};

/// Parses an ingest CSV: header row starting with `timestamp`, then integer
/// epoch-ms timestamps and finite decimal values. Line numbers in errors are
/// 1-based and count the header.
pub fn parse_csv(path: &Path) -> Result<TimeSeriesFrame> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => StoreError::Io { path: path.to_path_buf(), source },
        other => StoreError::Parse { line: 1, column: String::new(), message: format!("{other:?}") },
    })?;
    let header: Vec<String> = reader.headers().map_err(|e| parse_err(1, "", e))?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("timestamp") {
        return Err(StoreError::Parse {
            line: 1,
            column: header.first().cloned().unwrap_or_default(),
            message: "first column must be named `timestamp`".into(),
        });
    }
    let columns = header[1..].to_vec();

    let mut timestamps: Vec<i64> = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(line, "", e))?;
        if record.len() != header.len() {
            return Err(StoreError::Parse {
                line,
                column: String::new(),
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let t: i64 = record[0].trim().parse().map_err(|e| parse_err(line, "timestamp", e))?;
        if let Some(&prev) = timestamps.last() {
            if t <= prev {
                return Err(StoreError::NonMonotone { line, prev, next: t });
            }
        }
        timestamps.push(t);
        for (j, cell) in record.iter().enumerate().skip(1) {
            let v: f64 = cell.trim().parse().map_err(|e| parse_err(line, &header[j], e))?;
            if !v.is_finite() {
                return Err(parse_err(line, &header[j], "value is not finite"));
            }
            values.push(v);
        }
    }
    Ok(TimeSeriesFrame::new(timestamps, columns, values)?)
}

fn parse_err(line: usize, column: &str, e: impl ToString) -> StoreError {
    StoreError::Parse { line, column: column.to_string(), message: e.to_string() }
}

/// Writes `frame` in the ingest format. Values use the shortest decimal form
/// that parses back to the same bits.
pub fn write_csv(frame: &TimeSeriesFrame, path: &Path) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).map_err(|e| StoreError::Io { path: path.to_path_buf(), source: e.into() })?;
    let io = |e: csv::Error| StoreError::Io { path: path.to_path_buf(), source: e.into() };
    let mut header = vec!["timestamp".to_string()];
    header.extend(frame.columns().iter().cloned());
    w.write_record(&header).map_err(io)?;
    for (t, row) in frame.timestamps().iter().zip(frame.rows()) {
        let mut rec = vec![t.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|source| StoreError::Io { path: path.to_path_buf(), source })
}
