use std::collections::HashSet;
use std::ops::{Deref, Range};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// A timestamped, named-column table of finite `f64` values.
///
/// Values are stored row-major. Timestamps are integer epoch-milliseconds and
/// strictly increasing; a "static" frame simply numbers its rows `0..n`.
/// Frames are immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesFrame {
    timestamps: Vec<i64>,
    columns: Vec<String>,
    values: Vec<f64>,
}

impl TimeSeriesFrame {
    pub fn new(timestamps: Vec<i64>, columns: Vec<String>, values: Vec<f64>) -> Result<Self> {
        validate_columns(&columns)?;
        let n_cols = columns.len();
        if values.len() != timestamps.len() * n_cols {
            return Err(CoreError::Shape(format!(
                "{} timestamps x {} columns needs {} values, got {}",
                timestamps.len(),
                n_cols,
                timestamps.len() * n_cols,
                values.len()
            )));
        }
        for (row, pair) in timestamps.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(CoreError::NonMonotoneTimestamps { row: row + 1, prev: pair[0], next: pair[1] });
            }
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite { row: pos / n_cols.max(1), col: pos % n_cols.max(1) });
        }
        Ok(Self { timestamps, columns, values })
    }

    /// Builds a frame from per-row vectors.
    pub fn from_rows(timestamps: Vec<i64>, columns: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = columns.len();
        let mut values = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(CoreError::Shape(format!("row {i} has {} values, expected {n_cols}", row.len())));
            }
            values.extend_from_slice(row);
        }
        Self::new(timestamps, columns, values)
    }

    /// A frame without wall-clock meaning: timestamps are the row indices.
    pub fn static_frame(columns: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let n_cols = columns.len();
        if n_cols == 0 {
            return Err(CoreError::Shape("a frame needs at least one column".into()));
        }
        if !values.len().is_multiple_of(n_cols) {
            return Err(CoreError::Shape(format!("{} values do not fill rows of {n_cols} columns", values.len())));
        }
        let n_rows = values.len() / n_cols;
        Self::new((0..n_rows as i64).collect(), columns, values)
    }

    /// Zero rows, full schema.
    pub fn empty(columns: Vec<String>) -> Result<Self> {
        Self::new(Vec::new(), columns, Vec::new())
    }

    pub fn n_rows(&self) -> usize {
        self.timestamps.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_cols();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact would panic on zero columns, which validation rules out.
        self.values.chunks_exact(self.n_cols())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows in `range`, keeping timestamps and columns.
    pub fn slice(&self, range: Range<usize>) -> TimeSeriesFrame {
        let d = self.n_cols();
        TimeSeriesFrame {
            timestamps: self.timestamps[range.clone()].to_vec(),
            columns: self.columns.clone(),
            values: self.values[range.start * d..range.end * d].to_vec(),
        }
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<TimeSeriesFrame> {
        let columns = indices
            .iter()
            .map(|&j| self.columns.get(j).cloned().ok_or_else(|| CoreError::Shape(format!("no column {j}"))))
            .collect::<Result<Vec<_>>>()?;
        let values = self.rows().flat_map(|r| indices.iter().map(move |&j| r[j])).collect();
        TimeSeriesFrame::new(self.timestamps.clone(), columns, values)
    }
}

fn validate_columns(columns: &[String]) -> Result<()> {
    if columns.is_empty() {
        return Err(CoreError::Shape("a frame needs at least one column".into()));
    }
    let mut seen = HashSet::new();
    for c in columns {
        if c.is_empty() {
            return Err(CoreError::EmptyColumnName);
        }
        if !seen.insert(c.as_str()) {
            return Err(CoreError::DuplicateColumn(c.clone()));
        }
    }
    Ok(())
}

/// Per-instance outlier scores; higher means more outlying.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if let Some(row) = scores.iter().position(|s| !s.is_finite()) {
            return Err(CoreError::NonFinite { row, col: 0 });
        }
        Ok(Self(scores))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ScoreVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Binary labels, `1` = outlier and `0` = inlier.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelVector(Vec<u8>);

impl LabelVector {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(row) = labels.iter().position(|&l| l > 1) {
            return Err(CoreError::Shape(format!("label at row {row} is {}, expected 0 or 1", labels[row])));
        }
        Ok(Self(labels))
    }

    pub fn from_bools(flags: impl IntoIterator<Item = bool>) -> Self {
        Self(flags.into_iter().map(u8::from).collect())
    }

    pub fn count_outliers(&self) -> usize {
        self.0.iter().filter(|&&l| l == 1).count()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl Deref for LabelVector {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_non_increasing_timestamps() {
        let err = TimeSeriesFrame::new(vec![0, 5, 5], cols(&["a"]), vec![1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, CoreError::NonMonotoneTimestamps { row: 2, .. }));
    }

    #[test]
    fn rejects_nan_and_duplicate_names() {
        assert!(matches!(
            TimeSeriesFrame::new(vec![0], cols(&["a", "b"]), vec![1.0, f64::NAN]),
            Err(CoreError::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            TimeSeriesFrame::new(vec![0], cols(&["a", "a"]), vec![1.0, 2.0]),
            Err(CoreError::DuplicateColumn(_))
        ));
        assert!(matches!(TimeSeriesFrame::new(vec![0], cols(&[""]), vec![1.0]), Err(CoreError::EmptyColumnName)));
    }

    #[test]
    fn static_frame_numbers_rows() {
        let f = TimeSeriesFrame::static_frame(cols(&["x", "y"]), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.timestamps(), &[0, 1]);
        assert_eq!(f.row(1), &[3.0, 4.0]);
        assert_eq!(f.column(0), vec![1.0, 3.0]);
    }

    #[test]
    fn labels_must_be_binary() {
        assert!(LabelVector::new(vec![0, 1, 2]).is_err());
        assert_eq!(LabelVector::new(vec![0, 1, 1]).unwrap().count_outliers(), 2);
    }
}
