//! Small descriptive-statistics toolkit shared by the density estimators
//! and the study driver.

use std::f64::consts::PI;

use crate::error::{NkkError, Result};

/// Normal-consistency constant for the MAD.
const MAD_NORMAL: f64 = 0.6745;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation with the `n - 1` denominator.
pub fn std_dev(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    median_sorted(&v)
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median absolute deviation about the median (unscaled).
pub fn mad(x: &[f64]) -> f64 {
    let m = median(x);
    let dev: Vec<f64> = x.iter().map(|v| (v - m).abs()).collect();
    median(&dev)
}

/// Linear-interpolation quantile (type 7), `p` in `[0, 1]`.
pub fn quantile(x: &[f64], p: f64) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    let pos = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

/// Robust Silverman bandwidth `0.9 min(sd, MAD/0.6745) n^(-1/5)`.
///
/// Falls back to the standard deviation when the MAD vanishes on a
/// non-constant sample (heavy ties).
pub fn robust_bandwidth(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(NkkError::DegenerateSample(format!(
            "need at least two observations, got {}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(NkkError::InvalidData("non-finite observation".into()));
    }
    let sd = std_dev(x);
    if sd == 0.0 {
        return Err(NkkError::DegenerateSample(
            "all observations are equal".into(),
        ));
    }
    let robust = mad(x) / MAD_NORMAL;
    let spread = if robust > 0.0 { sd.min(robust) } else { sd };
    Ok(0.9 * spread * (x.len() as f64).powf(-0.2))
}

#[inline]
fn gaussian(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}

/// Gaussian-kernel density estimate with a fixed bandwidth.
pub fn kde_with_bandwidth(samples: &[f64], grid: &[f64], bandwidth: f64) -> Vec<f64> {
    let norm = 1.0 / (samples.len() as f64 * bandwidth);
    grid.iter()
        .map(|&y| {
            samples
                .iter()
                .map(|&x| gaussian((y - x) / bandwidth))
                .sum::<f64>()
                * norm
        })
        .collect()
}

/// Gaussian-kernel density estimate with the robust Silverman bandwidth.
pub fn kde(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let h = robust_bandwidth(samples)?;
    Ok(kde_with_bandwidth(samples, grid, h))
}

/// Kolmogorov–Smirnov distance between the sample ECDF and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let upper = ((i + 1) as f64 / m - f).abs();
            let lower = (i as f64 / m - f).abs();
            upper.max(lower)
        })
        .fold(0.0, f64::max)
}

/// Trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_single_sample_at_median() {
        let d = ks_statistic(&[0.0], |x| if x >= 0.0 { 0.5 } else { 0.0 });
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_on_exact_quantiles() {
        // exponential(1): F^-1(p) = -ln(1 - p)
        let m = 200;
        let xs: Vec<f64> = (1..=m)
            .map(|i| -(1.0 - (i as f64 - 0.5) / m as f64).ln())
            .collect();
        let d = ks_statistic(&xs, |x| 1.0 - (-x).exp());
        assert!((d - 0.5 / m as f64).abs() < 1e-12);
    }

    #[test]
    fn kde_is_symmetric_about_the_sample_centre() {
        let c = 2.0;
        let offsets = [0.1, 0.4, 0.7, 1.3, 2.2];
        let samples: Vec<f64> = offsets.iter().flat_map(|o| [c - o, c + o]).collect();
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.05).collect();
        let left: Vec<f64> = grid.iter().map(|g| c - g).collect();
        let right: Vec<f64> = grid.iter().map(|g| c + g).collect();
        let a = kde(&samples, &left).unwrap();
        let b = kde(&samples, &right).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn kde_tight_cluster_integrates_to_one() {
        let samples: Vec<f64> = (0..50).map(|i| 5.0 + 1e-3 * (i as f64 - 25.0)).collect();
        let grid = linspace(4.0, 6.0, 4001);
        let dens = kde(&samples, &grid).unwrap();
        assert!(dens.iter().all(|&d| d >= 0.0));
        assert!((trapezoid(&grid, &dens) - 1.0).abs() < 2e-2);
    }

    #[test]
    fn degenerate_samples_are_rejected() {
        assert!(matches!(
            kde(&[1.0, 1.0, 1.0], &[0.0]),
            Err(NkkError::DegenerateSample(_))
        ));
        assert!(matches!(
            kde(&[1.0], &[0.0]),
            Err(NkkError::DegenerateSample(_))
        ));
    }

    #[test]
    fn quantiles() {
        let x = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(median(&x), 2.5);
        assert_eq!(quantile(&x, 0.0), 1.0);
        assert_eq!(quantile(&x, 1.0), 4.0);
        assert!((quantile(&x, 0.5) - 2.5).abs() < 1e-15);
        assert_eq!(mad(&[1.0, 2.0, 3.0, 4.0, 100.0]), 1.0);
    }
}
