use crate::error::{CoreError, Result};
use crate::frame::TimeSeriesFrame;

/// Fixed-length, fixed-stride segmentation of a series into time slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    window_length: usize,
    stride: usize,
}

impl WindowSpec {
    pub fn new(window_length: usize, stride: usize) -> Result<Self> {
        if window_length == 0 || stride == 0 {
            return Err(CoreError::InvalidWindow);
        }
        Ok(Self { window_length, stride })
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Number of full windows over `n_rows` rows, or `None` if none fit.
    pub fn count(&self, n_rows: usize) -> Option<usize> {
        (n_rows >= self.window_length).then(|| (n_rows - self.window_length) / self.stride + 1)
    }
}

/// Cuts `frame` into full windows; window `i` covers rows
/// `[i * stride, i * stride + window_length)`. Trailing rows that do not fill a
/// window are dropped.
pub fn window_slices(frame: &TimeSeriesFrame, spec: WindowSpec) -> Result<Vec<TimeSeriesFrame>> {
    let count = spec
        .count(frame.n_rows())
        .ok_or(CoreError::WindowExceedsFrame { window: spec.window_length, rows: frame.n_rows() })?;
    Ok((0..count)
        .map(|i| {
            let start = i * spec.stride;
            frame.slice(start..start + spec.window_length)
        })
        .collect())
}

/// Turns equally shaped windows into a static frame with one row per window.
///
/// Row `i` holds window `i`'s values in row-major order; column `c` at offset
/// `t` within the window is named `<c>_t<t>`.
pub fn flatten_windows(windows: &[TimeSeriesFrame]) -> Result<TimeSeriesFrame> {
    let first = windows.first().ok_or(CoreError::NoWindows)?;
    let (w, d) = (first.n_rows(), first.n_cols());
    let mut values = Vec::with_capacity(windows.len() * w * d);
    for (i, win) in windows.iter().enumerate() {
        if win.n_rows() != w || win.columns() != first.columns() {
            return Err(CoreError::Shape(format!(
                "window {i} is {}x{}, expected {w}x{d} with identical columns",
                win.n_rows(),
                win.n_cols()
            )));
        }
        values.extend_from_slice(win.values());
    }
    let columns = (0..w).flat_map(|t| first.columns().iter().map(move |c| format!("{c}_t{t}"))).collect();
    TimeSeriesFrame::static_frame(columns, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(n: usize, d: usize) -> TimeSeriesFrame {
        let cols = (0..d).map(|j| format!("c{j}")).collect();
        let values = (0..n * d).map(|v| v as f64).collect();
        TimeSeriesFrame::new((0..n as i64).map(|t| t * 10).collect(), cols, values).unwrap()
    }

    #[test]
    fn exact_tiling() {
        let wins = window_slices(&series(10, 1), WindowSpec::new(5, 5).unwrap()).unwrap();
        assert_eq!(wins.len(), 2);
        assert_eq!(wins[0].timestamps(), &[0, 10, 20, 30, 40]);
        assert_eq!(wins[1].timestamps(), &[50, 60, 70, 80, 90]);
    }

    #[test]
    fn overlapping_windows() {
        let wins = window_slices(&series(5, 1), WindowSpec::new(3, 1).unwrap()).unwrap();
        assert_eq!(wins.len(), 3);
        assert_eq!(wins[2].values(), &[2.0, 3.0, 4.0]);
    }

    #[test]
    fn window_longer_than_frame() {
        let err = window_slices(&series(3, 1), WindowSpec::new(5, 1).unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "window exceeds frame (5 rows requested, frame has 3)");
    }

    #[test]
    fn zero_stride_rejected() {
        assert!(WindowSpec::new(3, 0).is_err());
        assert!(WindowSpec::new(0, 1).is_err());
    }

    #[test]
    fn flatten_two_by_one() {
        let a = TimeSeriesFrame::new(vec![0, 1], vec!["v".into()], vec![1.0, 2.0]).unwrap();
        let b = TimeSeriesFrame::new(vec![2, 3], vec!["v".into()], vec![3.0, 4.0]).unwrap();
        let flat = flatten_windows(&[a, b]).unwrap();
        assert_eq!(flat.n_rows(), 2);
        assert_eq!(flat.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(flat.columns(), &["v_t0".to_string(), "v_t1".to_string()]);
    }

    #[test]
    fn flatten_shape() {
        let flat = flatten_windows(&[series(3, 2)]).unwrap();
        assert_eq!((flat.n_rows(), flat.n_cols()), (1, 6));
    }

    #[test]
    fn flatten_rejects_empty_and_ragged() {
        assert_eq!(flatten_windows(&[]).unwrap_err(), CoreError::NoWindows);
        assert!(flatten_windows(&[series(3, 1), series(2, 1)]).is_err());
    }

    proptest! {
        #[test]
        fn count_formula(n in 1usize..200, w in 1usize..50, s in 1usize..20) {
            prop_assume!(n >= w);
            let wins = window_slices(&series(n, 1), WindowSpec::new(w, s).unwrap()).unwrap();
            prop_assert_eq!(wins.len(), (n - w) / s + 1);
            for (i, win) in wins.iter().enumerate() {
                prop_assert_eq!(win.timestamps()[0], (i * s) as i64 * 10);
            }
        }

        #[test]
        fn tiling_reconstructs_prefix(n in 1usize..120, w in 1usize..30, d in 1usize..4) {
            prop_assume!(n >= w);
            let frame = series(n, d);
            let wins = window_slices(&frame, WindowSpec::new(w, w).unwrap()).unwrap();
            let joined: Vec<f64> = wins.iter().flat_map(|x| x.values().to_vec()).collect();
            let covered = wins.len() * w;
            prop_assert_eq!(&joined[..], &frame.values()[..covered * d]);
        }

        #[test]
        fn flatten_then_reshape_is_identity(n in 2usize..60, w in 1usize..10, s in 1usize..5, d in 1usize..4) {
            prop_assume!(n >= w);
            let wins = window_slices(&series(n, d), WindowSpec::new(w, s).unwrap()).unwrap();
            let flat = flatten_windows(&wins).unwrap();
            for (i, win) in wins.iter().enumerate() {
                let row = flat.row(i);
                for t in 0..w {
                    prop_assert_eq!(&row[t * d..(t + 1) * d], win.row(t));
                }
            }
        }
    }
}
