use odkit_core::RngSeed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{euclidean, Points};
use crate::error::{DetectError, Result};
use crate::spec::CblofParams;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the nearest centroid, ties to the lowest index.
fn nearest(centroids: &[Vec<f64>], x: &[f64]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (c, mu) in centroids.iter().enumerate() {
        let d = sq_dist(mu, x);
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

fn kmeans_pp_init(points: &Points, k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points.row(rng.random_range(0..n)).to_vec()];
    let mut d2: Vec<f64> = points.rows().map(|r| sq_dist(r, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            break;
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = n - 1;
        for (i, &w) in d2.iter().enumerate() {
            acc += w;
            if acc > target && w > 0.0 {
                pick = i;
                break;
            }
        }
        let c = points.row(pick).to_vec();
        for (w, r) in d2.iter_mut().zip(points.rows()) {
            *w = w.min(sq_dist(r, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// Seeded k-means++ followed by Lloyd iterations. Empty clusters are dropped.
fn kmeans(points: &Points, k: usize, iters: usize, seed: RngSeed) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = seed.stream(0);
    let mut centroids = kmeans_pp_init(points, k.min(points.len()), &mut rng);
    let mut assign: Vec<usize> = points.rows().map(|r| nearest(&centroids, r)).collect();
    for _ in 0..iters {
        let dim = points.dim();
        let mut sums = vec![vec![0.0; dim]; centroids.len()];
        let mut counts = vec![0usize; centroids.len()];
        for (r, &a) in points.rows().zip(&assign) {
            counts[a] += 1;
            sums[a].iter_mut().zip(r).for_each(|(s, v)| *s += v);
        }
        for ((c, s), &m) in centroids.iter_mut().zip(sums).zip(&counts) {
            if m > 0 {
                *c = s.into_iter().map(|v| v / m as f64).collect();
            }
        }
        let next: Vec<usize> = points.rows().map(|r| nearest(&centroids, r)).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    let mut sizes = vec![0usize; centroids.len()];
    assign.iter().for_each(|&a| sizes[a] += 1);
    let (centroids, sizes) = centroids.into_iter().zip(sizes).filter(|&(_, s)| s > 0).unzip();
    (centroids, sizes)
}

/// Cluster-based local outlier factor (unweighted distance variant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CblofModel {
    centroids: Vec<Vec<f64>>,
    sizes: Vec<usize>,
    large: Vec<bool>,
}

impl CblofModel {
    pub fn fit(params: &CblofParams, points: &Points, seed: RngSeed) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(DetectError::TooFewRows { algorithm: "CBLOF", needed: 1, got: 0 });
        }
        let (centroids, sizes) = kmeans(points, params.n_clusters, params.kmeans_iters, seed);
        let large = partition_clusters(&sizes, params.alpha, params.beta);
        Ok(Self { centroids, sizes, large })
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_large(&self) -> &[bool] {
        &self.large
    }

    pub fn score_row(&self, x: &[f64]) -> f64 {
        let c = nearest(&self.centroids, x);
        if self.large[c] {
            return euclidean(&self.centroids[c], x);
        }
        self.centroids
            .iter()
            .zip(&self.large)
            .filter(|(_, &l)| l)
            .map(|(mu, _)| euclidean(mu, x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Large/small split of clusters by size: flags the largest clusters until they
/// hold `alpha` of the points or the next one is `beta` times smaller.
pub fn partition_clusters(sizes: &[usize], alpha: f64, beta: f64) -> Vec<bool> {
    let n: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut large = vec![false; sizes.len()];
    let mut cum = 0usize;
    for (rank, &c) in order.iter().enumerate() {
        large[c] = true;
        cum += sizes[c];
        let by_mass = cum as f64 >= alpha * n as f64;
        let by_ratio = order.get(rank + 1).is_some_and(|&next| sizes[c] as f64 >= beta * sizes[next] as f64);
        if by_mass || by_ratio {
            break;
        }
    }
    if !large.contains(&true) && !order.is_empty() {
        large[order[0]] = true;
    }
    large
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_rule() {
        assert_eq!(partition_clusters(&[10, 90], 0.9, 5.0), vec![false, true]);
        assert_eq!(partition_clusters(&[40, 35, 25], 0.9, 5.0), vec![true, true, true]);
        // ratio 60 / 10 >= 5 stops after the first cluster
        assert_eq!(partition_clusters(&[60, 10, 10, 10, 10], 0.9, 5.0), vec![true, false, false, false, false]);
    }

    #[test]
    fn single_cluster_is_distance_to_centroid() {
        let p = Points::new(vec![0.0, 2.0, 4.0], 1);
        let params = CblofParams { n_clusters: 1, alpha: 0.9, beta: 5.0, kmeans_iters: 10 };
        let m = CblofModel::fit(&params, &p, RngSeed(0)).unwrap();
        assert_eq!(m.score_row(&[2.0]), 0.0);
        assert_eq!(m.score_row(&[0.0]), 2.0);
        assert_eq!(m.score_row(&[7.0]), 5.0);
    }

    #[test]
    fn more_clusters_than_distinct_points() {
        let p = Points::new(vec![1.0, 1.0, 1.0, 5.0], 1);
        let params = CblofParams { n_clusters: 8, alpha: 0.9, beta: 5.0, kmeans_iters: 10 };
        let m = CblofModel::fit(&params, &p, RngSeed(0)).unwrap();
        assert_eq!(m.centroids().len(), 2);
        assert_eq!(m.sizes().iter().sum::<usize>(), 4);
    }
}
