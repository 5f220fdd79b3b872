/// `q`-quantile with linear interpolation between order statistics: position
/// `q * (n - 1)` in the sorted sample.
pub fn quantile_linear(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates() {
        let v: Vec<f64> = (0..=10).map(f64::from).collect();
        assert_eq!(quantile_linear(&v, 0.9), 9.0);
        assert_eq!(quantile_linear(&[1.0, 2.0], 0.5), 1.5);
        assert_eq!(quantile_linear(&[3.0, 1.0, 2.0], 1.0), 3.0);
        assert_eq!(quantile_linear(&[5.0], 0.3), 5.0);
    }

    #[test]
    fn ninetieth_percentile_of_hundred() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        // position 0.9 * 99 = 89.1
        assert!((quantile_linear(&v, 0.9) - 90.1).abs() < 1e-12);
    }
}
