use serde::{Deserialize, Serialize};

/// Row-major training points of fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Points {
    data: Vec<f64>,
    dim: usize,
}

impl Points {
    /// `data.len()` must be a multiple of `dim`.
    pub fn new(data: Vec<f64>, dim: usize) -> Self {
        assert!(dim > 0 && data.len().is_multiple_of(dim), "ragged point set");
        Self { data, dim }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Index of the first row bitwise-equal to `x`.
    pub fn position(&self, x: &[f64]) -> Option<usize> {
        self.rows().position(|r| r == x)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The `k` training points nearest to `x`, as `(distance, index)` sorted by
/// distance then index. When `x` coincides with a training row, the first
/// such row is treated as `x` itself and skipped.
pub fn k_nearest(points: &Points, x: &[f64], k: usize) -> Vec<(f64, usize)> {
    let skip = points.position(x);
    let mut all: Vec<(f64, usize)> =
        points.rows().enumerate().filter(|&(i, _)| Some(i) != skip).map(|(i, r)| (euclidean(r, x), i)).collect();
    let k = k.min(all.len());
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < all.len() {
        all.select_nth_unstable_by(k, cmp);
        all.truncate(k);
    }
    all.sort_by(cmp);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_self_once() {
        let p = Points::new(vec![0.0, 1.0, 1.0, 10.0], 1);
        let nn = k_nearest(&p, &[1.0], 2);
        assert_eq!(nn, vec![(0.0, 2), (1.0, 0)]);
        let nn = k_nearest(&p, &[2.0], 1);
        assert_eq!(nn, vec![(1.0, 1)]);
    }
}
