use std::f64::consts::PI;

/// Product-Gaussian kernel density estimate in two dimensions with
/// Silverman bandwidths.
#[derive(Debug, Clone, PartialEq)]
pub struct Kde {
    points: Vec<[f64; 2]>,
    bandwidth: [f64; 2],
}

/// `1.06 σ̂ n^(-1/5)`, with σ̂ the sample standard deviation. A constant
/// coordinate falls back to bandwidth 1.
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 1.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd > 0.0 {
        1.06 * sd * n.powf(-0.2)
    } else {
        1.0
    }
}

impl Kde {
    pub fn fit(points: Vec<[f64; 2]>) -> Self {
        let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
        let bandwidth = [silverman_bandwidth(&xs), silverman_bandwidth(&ys)];
        Self { points, bandwidth }
    }

    pub fn bandwidth(&self) -> [f64; 2] {
        self.bandwidth
    }

    pub fn density(&self, x: f64, y: f64) -> f64 {
        let [hx, hy] = self.bandwidth;
        let norm = 1.0 / (2.0 * PI * hx * hy * self.points.len() as f64);
        self.points
            .iter()
            .map(|p| {
                let u = (x - p[0]) / hx;
                let v = (y - p[1]) / hy;
                (-0.5 * (u * u + v * v)).exp()
            })
            .sum::<f64>()
            * norm
    }

    /// Density sampled at cell centres of a `size × size` grid spanning the
    /// data extent padded by three bandwidths on every side.
    pub fn grid(&self, size: usize) -> KdeGrid {
        let [hx, hy] = self.bandwidth;
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let (x0, x1, y0, y1) = (x0 - 3.0 * hx, x1 + 3.0 * hx, y0 - 3.0 * hy, y1 + 3.0 * hy);
        let dx = (x1 - x0) / size as f64;
        let dy = (y1 - y0) / size as f64;
        let mut values = Vec::with_capacity(size * size);
        for j in 0..size {
            let y = y0 + (j as f64 + 0.5) * dy;
            for i in 0..size {
                values.push(self.density(x0 + (i as f64 + 0.5) * dx, y));
            }
        }
        KdeGrid { x0, x1, y0, y1, size, values }
    }
}

/// Density values on a regular grid, row-major with rows along y.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeGrid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub size: usize,
    pub values: Vec<f64>,
}

impl KdeGrid {
    pub fn cell_width(&self) -> f64 {
        (self.x1 - self.x0) / self.size as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.y1 - self.y0) / self.size as f64
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.size + i]
    }

    /// Midpoint Riemann sum of the density over the grid window.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_width() * self.cell_height()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Iso-line segments at `level` by marching squares over cell centres, in
    /// data coordinates.
    pub fn contour(&self, level: f64) -> Vec<[(f64, f64); 2]> {
        let (dx, dy) = (self.cell_width(), self.cell_height());
        let pos = |i: usize, j: usize| (self.x0 + (i as f64 + 0.5) * dx, self.y0 + (j as f64 + 0.5) * dy);
        let lerp = |a: (f64, f64), b: (f64, f64), va: f64, vb: f64| {
            let t = if vb != va { (level - va) / (vb - va) } else { 0.5 };
            (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
        };
        let mut segments = Vec::new();
        for j in 0..self.size - 1 {
            for i in 0..self.size - 1 {
                // corners counter-clockwise from bottom-left
                let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let v: Vec<f64> = c.iter().map(|&(a, b)| self.at(a, b)).collect();
                let p: Vec<(f64, f64)> = c.iter().map(|&(a, b)| pos(a, b)).collect();
                let edge = |e: usize| lerp(p[e], p[(e + 1) % 4], v[e], v[(e + 1) % 4]);
                let crossing: Vec<usize> = (0..4).filter(|&e| (v[e] >= level) != (v[(e + 1) % 4] >= level)).collect();
                match crossing.len() {
                    2 => segments.push([edge(crossing[0]), edge(crossing[1])]),
                    4 => {
                        // saddle: pair edges according to the centre value
                        let centre = v.iter().sum::<f64>() / 4.0;
                        if (centre >= level) == (v[0] >= level) {
                            segments.push([edge(0), edge(1)]);
                            segments.push([edge(2), edge(3)]);
                        } else {
                            segments.push([edge(3), edge(0)]);
                            segments.push([edge(1), edge(2)]);
                        }
                    }
                    _ => {}
                }
            }
        }
        segments
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_formula() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        let sd = 2.5f64.sqrt();
        assert!((silverman_bandwidth(&v) - 1.06 * sd * 5f64.powf(-0.2)).abs() < 1e-12);
    }

    #[test]
    fn single_gaussian_mass() {
        let pts: Vec<[f64; 2]> = (0..50).map(|i| [(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()]).collect();
        let g = Kde::fit(pts).grid(100);
        assert!((g.mass() - 1.0).abs() < 0.05, "{}", g.mass());
    }

    #[test]
    fn contour_of_a_bump_is_closed_ring() {
        let g = Kde::fit(vec![[0.0, 0.0]]).grid(40);
        let segs = g.contour(g.max() / 2.0);
        assert!(!segs.is_empty());
        // every endpoint is shared by exactly two segments in a closed ring
        for s in &segs {
            for p in s {
                let shared = segs
                    .iter()
                    .flat_map(|t| t.iter())
                    .filter(|q| (q.0 - p.0).abs() < 1e-9 && (q.1 - p.1).abs() < 1e-9)
                    .count();
                assert_eq!(shared, 2);
            }
        }
    }
}
