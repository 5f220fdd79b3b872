use odkit_core::RngSeed;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Points;
use crate::error::{DetectError, Result};
use crate::spec::IforestParams;

/// Expected path length of an unsuccessful search in a binary search tree
/// over `m` points: `2 H(m-1) - 2 (m-1) / m`, with `c(1) = c(0) = 0`.
pub fn average_path_length(m: usize) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    let harmonic: f64 = (1..m).map(|i| 1.0 / i as f64).sum();
    2.0 * harmonic - 2.0 * (m - 1) as f64 / m as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Split { feature: usize, value: f64, left: usize, right: usize },
    Leaf { size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn grow(points: &Points, rows: Vec<usize>, max_depth: usize, rng: &mut impl Rng) -> Self {
        let mut tree = Tree { nodes: Vec::new() };
        tree.build(points, rows, 0, max_depth, rng);
        tree
    }

    fn build(
        &mut self,
        points: &Points,
        rows: Vec<usize>,
        depth: usize,
        max_depth: usize,
        rng: &mut impl Rng,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { size: rows.len() });
        if rows.len() <= 1 || depth >= max_depth {
            return id;
        }
        let ranges: Vec<(usize, f64, f64)> = (0..points.dim())
            .filter_map(|j| {
                let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                    let v = points.row(i)[j];
                    (lo.min(v), hi.max(v))
                });
                (hi > lo).then_some((j, lo, hi))
            })
            .collect();
        if ranges.is_empty() {
            return id;
        }
        let (feature, lo, hi) = ranges[rng.random_range(0..ranges.len())];
        // uniform on (lo, hi], so both sides are non-empty
        let u: f64 = rng.random();
        let mut value = lo + (hi - lo) * (1.0 - u);
        if value <= lo {
            value = hi;
        }
        let (l, r): (Vec<usize>, Vec<usize>) = rows.into_iter().partition(|&i| points.row(i)[feature] < value);
        let left = self.build(points, l, depth + 1, max_depth, rng);
        let right = self.build(points, r, depth + 1, max_depth, rng);
        self.nodes[id] = Node::Split { feature, value, left, right };
        id
    }

    fn path_length(&self, x: &[f64]) -> f64 {
        let mut id = 0;
        let mut depth = 0.0;
        loop {
            match self.nodes[id] {
                Node::Split { feature, value, left, right } => {
                    id = if x[feature] < value { left } else { right };
                    depth += 1.0;
                }
                Node::Leaf { size } => return depth + average_path_length(size),
            }
        }
    }
}

/// Isolation forest; score `2^(-E[h(x)] / c(subsample))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IforestModel {
    trees: Vec<Tree>,
    normalizer: f64,
}

impl IforestModel {
    pub fn fit(params: &IforestParams, points: &Points, seed: RngSeed) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(DetectError::TooFewRows { algorithm: "IFOREST", needed: 2, got: n });
        }
        let subsample = params.subsample.min(n);
        let max_depth = params.max_depth.unwrap_or_else(|| (subsample as f64).log2().ceil() as usize).max(1);
        let trees = (0..params.n_trees)
            .map(|t| {
                let mut rng = seed.stream(t as u64);
                let rows = sample(&mut rng, n, subsample).into_vec();
                Tree::grow(points, rows, max_depth, &mut rng)
            })
            .collect();
        Ok(Self { trees, normalizer: average_path_length(subsample) })
    }

    pub fn mean_path_length(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.path_length(x)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        2f64.powf(-self.mean_path_length(x) / self.normalizer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_length_constants() {
        assert_eq!(average_path_length(1), 0.0);
        assert!((average_path_length(2) - 1.0).abs() < 1e-12);
        assert!((average_path_length(3) - (2.0 * 1.5 - 4.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn two_points_score_half() {
        let p = Points::new(vec![0.0, 0.0, 1.0, 2.0], 2);
        let params = IforestParams { n_trees: 1000, subsample: 2, max_depth: None };
        let m = IforestModel::fit(&params, &p, RngSeed(3)).unwrap();
        for r in p.rows() {
            let s = m.score_row(r);
            assert!((s - 0.5).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn scores_in_unit_interval() {
        let data: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64).collect();
        let p = Points::new(data, 2);
        let params = IforestParams { n_trees: 50, subsample: 64, max_depth: None };
        let m = IforestModel::fit(&params, &p, RngSeed(1)).unwrap();
        for x in [[-1e6, 5.0], [50.0, 50.0], [3.0, 1e9]] {
            let s = m.score_row(&x);
            assert!(s > 0.0 && s <= 1.0);
        }
    }
}
