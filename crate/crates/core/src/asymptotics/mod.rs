//! Limit law of the NKK ordinate.
//!
//! With `eta_q = sign(eps_q)` and `gamma(h) = Cov(eta_0, eta_h)`, the LAD
//! coefficients satisfy `sqrt(n) (beta_hat - beta_0) -> N(0, Sigma)` where
//!
//! ```text
//! Sigma = 1/(2 f(0)^2) sum_h gamma(h) R(lambda_k h)
//! ```
//!
//! and the ordinate converges to `(1/(8 pi)) (l1 X1 + l2 X2)` for the
//! eigenvalues `l1 >= l2` of `Sigma` and independent chi-square(1) `X1, X2`.
//! Because `R(a) + R(a)^T = 2 cos(a) I`, the two-sided sum is always a
//! multiple of the identity; the general two-weight mixture is still
//! supported for externally supplied covariances.

mod mixture;
pub mod quadrature;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{NkkError, Result};
use crate::lad::Matrix2;
use crate::stats::{kde_with_bandwidth, robust_bandwidth};

pub use mixture::{ChiSquareMixture, INVERSION_TOL};

/// Planar rotation `[[cos a, sin a], [-sin a, cos a]]`.
pub fn rotation(angle: f64) -> Matrix2 {
    let (s, c) = angle.sin_cos();
    [[c, s], [-s, c]]
}

/// Elementwise sign with exact zeros kept at 0.
pub fn sign_sequence(residuals: &[f64]) -> Vec<i8> {
    residuals
        .iter()
        .map(|&r| {
            if r > 0.0 {
                1
            } else if r < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Biased sample autocovariances of a sign sequence, lags `0..=max_lag`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignAutocov {
    pub gamma: Vec<f64>,
    pub max_lag: usize,
    pub n_used: usize,
}

pub fn sign_autocov(signs: &[i8], max_lag: usize) -> Result<SignAutocov> {
    let n = signs.len();
    if n == 0 || 2 * max_lag >= n {
        return Err(NkkError::LagTooLarge { lag: max_lag, n });
    }
    let mean = signs.iter().map(|&s| s as f64).sum::<f64>() / n as f64;
    let centred: Vec<f64> = signs.iter().map(|&s| s as f64 - mean).collect();
    let gamma = (0..=max_lag)
        .map(|h| {
            centred[..n - h]
                .iter()
                .zip(&centred[h..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect();
    Ok(SignAutocov {
        gamma,
        max_lag,
        n_used: n,
    })
}

/// Default truncation lag, the integer cube root of `n`.
pub fn default_max_lag(n: usize) -> usize {
    let mut h = (n as f64).cbrt() as usize;
    while (h + 1).pow(3) <= n {
        h += 1;
    }
    while h > 0 && h.pow(3) > n {
        h -= 1;
    }
    h
}

/// Gaussian KDE of the residual density at zero with the robust Silverman
/// bandwidth.
pub fn density_at_zero(residuals: &[f64]) -> Result<f64> {
    if residuals.len() < 20 {
        return Err(NkkError::InvalidData(format!(
            "density at zero needs at least 20 residuals, got {}",
            residuals.len()
        )));
    }
    let h = robust_bandwidth(residuals)?;
    let f0 = kde_with_bandwidth(residuals, &[0.0], h)[0];
    if f0 > 0.0 && f0.is_finite() {
        Ok(f0)
    } else {
        Err(NkkError::InvalidDensity(f0))
    }
}

/// Limit covariance and its eigen-decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitLaw {
    /// Residual density at zero; absent when the law was assembled from
    /// averaged covariance matrices.
    pub f0: Option<f64>,
    /// Sign autocovariances behind `sigma` (empty for averaged laws).
    pub gamma: Vec<f64>,
    pub sigma: Matrix2,
    /// Eigenvalues, largest first, clamped at zero.
    pub eig: [f64; 2],
    pub scale: f64,
    pub lambda_k: f64,
    /// Set when a negative eigenvalue was clamped to zero.
    pub clamped: bool,
}

/// Closed-form eigenvalues of a symmetric 2x2 matrix, largest first.
pub fn symmetric_eigenvalues(m: &Matrix2) -> [f64; 2] {
    let mid = 0.5 * (m[0][0] + m[1][1]);
    let off = 0.5 * (m[0][1] + m[1][0]);
    let rad = (0.25 * (m[0][0] - m[1][1]).powi(2) + off * off).sqrt();
    [mid + rad, mid - rad]
}

impl LimitLaw {
    /// Law from a covariance matrix directly.
    pub fn from_covariance(sigma: Matrix2, lambda_k: f64) -> Self {
        let raw = symmetric_eigenvalues(&sigma);
        let clamped = raw.iter().any(|&l| l < 0.0);
        if clamped {
            log::warn!("limit covariance has eigenvalues {raw:?}; clamping negatives to zero");
        }
        LimitLaw {
            f0: None,
            gamma: Vec::new(),
            sigma,
            eig: [raw[0].max(0.0), raw[1].max(0.0)],
            scale: 1.0 / (8.0 * PI),
            lambda_k,
            clamped,
        }
    }

    pub fn trace(&self) -> f64 {
        self.sigma[0][0] + self.sigma[1][1]
    }

    pub fn mixture(&self) -> Result<ChiSquareMixture> {
        ChiSquareMixture::from_eigenvalues(self.eig[0], self.eig[1])
    }
}

/// `Sigma = 1/(2 f0^2) [gamma(0) I + sum_{h=1}^H gamma(h) (R(lambda h) + R(lambda h)^T)]`.
pub fn limit_covariance(autocov: &SignAutocov, lambda_k: f64, f0: f64) -> Result<LimitLaw> {
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(NkkError::InvalidDensity(f0));
    }
    let mut sum = [[0.0; 2]; 2];
    for (h, &g) in autocov.gamma.iter().enumerate() {
        let r = rotation(lambda_k * h as f64);
        let weight = if h == 0 { 1.0 } else { 2.0 };
        // h = 0 contributes gamma(0) I; lags h and -h pair into R + R^T
        for i in 0..2 {
            for j in 0..2 {
                let sym = if h == 0 {
                    r[i][j]
                } else {
                    0.5 * (r[i][j] + r[j][i])
                };
                sum[i][j] += weight * g * sym;
            }
        }
    }
    let c = 1.0 / (2.0 * f0 * f0);
    let sigma = [
        [c * sum[0][0], c * sum[0][1]],
        [c * sum[1][0], c * sum[1][1]],
    ];
    let mut law = LimitLaw::from_covariance(sigma, lambda_k);
    law.f0 = Some(f0);
    law.gamma = autocov.gamma.clone();
    Ok(law)
}

/// Residuals -> signs -> autocovariances and KDE density -> limit law.
pub fn estimate_limit_law(
    residuals: &[f64],
    lambda_k: f64,
    max_lag: Option<usize>,
) -> Result<LimitLaw> {
    let lag = max_lag.unwrap_or_else(|| default_max_lag(residuals.len()));
    let autocov = sign_autocov(&sign_sequence(residuals), lag)?;
    let f0 = density_at_zero(residuals)?;
    limit_covariance(&autocov, lambda_k, f0)
}

/// Density of the limit law at `y >= 0`.
pub fn mixture_density(law: &LimitLaw, y: f64) -> Result<f64> {
    Ok(law.mixture()?.density(y))
}

/// Distribution function of the limit law at `y >= 0`.
pub fn mixture_cdf(law: &LimitLaw, y: f64) -> Result<f64> {
    Ok(law.mixture()?.cdf(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    #[test]
    fn rotations() {
        assert_eq!(rotation(0.0), [[1.0, 0.0], [-0.0, 1.0]]);
        let q = rotation(PI / 2.0);
        let expected = [[0.0, 1.0], [-1.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((q[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
        let (a, b) = (0.7, -2.1);
        let ab = matmul(&rotation(a), &rotation(b));
        let direct = rotation(a + b);
        for i in 0..2 {
            for j in 0..2 {
                assert!((ab[i][j] - direct[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn signs() {
        assert_eq!(sign_sequence(&[-2.0, 0.0, 5.0]), vec![-1, 0, 1]);
        assert_eq!(sign_sequence(&[0.1, 3.0]), vec![1, 1]);
        let x = [0.3, -1.0, 0.0, 2.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let a = sign_sequence(&x);
        let b = sign_sequence(&neg);
        assert!(a.iter().zip(&b).all(|(p, q)| *p == -*q));
    }

    #[test]
    fn autocov_of_constant_and_alternating_signs() {
        let c = sign_autocov(&[1; 50], 5).unwrap();
        assert!(c.gamma.iter().all(|&g| g == 0.0));

        let n = 1000;
        let alt: Vec<i8> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let a = sign_autocov(&alt, 3).unwrap();
        // direct summation: gamma(0) = 1, gamma(1) = -(n-1)/n
        assert!((a.gamma[0] - 1.0).abs() < 1e-12);
        assert!((a.gamma[1] / a.gamma[0] + 1.0).abs() <= 1.0 / n as f64 + 1e-12);

        assert!(matches!(
            sign_autocov(&[1, -1, 1, -1], 2),
            Err(NkkError::LagTooLarge { .. })
        ));
    }

    #[test]
    fn default_lag_is_integer_cube_root() {
        assert_eq!(default_max_lag(1000), 10);
        assert_eq!(default_max_lag(999), 9);
        assert_eq!(default_max_lag(4096), 16);
        assert_eq!(default_max_lag(2048), 12);
    }

    #[test]
    fn iid_covariance() {
        let ac = SignAutocov {
            gamma: vec![1.0, 0.0, 0.0],
            max_lag: 2,
            n_used: 100,
        };
        let f0 = 0.4;
        let law = limit_covariance(&ac, 0.3, f0).unwrap();
        let v = 1.0 / (2.0 * f0 * f0);
        assert!((law.sigma[0][0] - v).abs() < 1e-12 && (law.sigma[1][1] - v).abs() < 1e-12);
        assert!(law.sigma[0][1].abs() < 1e-12);
        assert!((law.eig[0] - v).abs() < 1e-12 && (law.eig[1] - v).abs() < 1e-12);
        assert!(matches!(
            limit_covariance(&ac, 0.3, 0.0),
            Err(NkkError::InvalidDensity(_))
        ));
    }

    #[test]
    fn covariance_is_always_isotropic() {
        let ac = SignAutocov {
            gamma: vec![0.9, 0.5, -0.2, 0.1],
            max_lag: 3,
            n_used: 100,
        };
        let law = limit_covariance(&ac, 0.9, 0.7).unwrap();
        assert!(law.sigma[0][1].abs() < 1e-12 && law.sigma[1][0].abs() < 1e-12);
        assert_eq!(law.sigma[0][0], law.sigma[1][1]);
        assert!((law.trace() - law.eig[0] - law.eig[1]).abs() < 1e-10);

        let doubled = SignAutocov {
            gamma: ac.gamma.iter().map(|g| 2.0 * g).collect(),
            ..ac.clone()
        };
        let law2 = limit_covariance(&doubled, 0.9, 0.7).unwrap();
        assert!((law2.sigma[0][0] - 2.0 * law.sigma[0][0]).abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalues_are_clamped() {
        let ac = SignAutocov {
            gamma: vec![0.1, 0.5],
            max_lag: 1,
            n_used: 10,
        };
        let law = limit_covariance(&ac, 0.0, 1.0).unwrap();
        assert!(law.eig[0] > 0.0 && law.eig[1] >= 0.0);
        let neg = SignAutocov {
            gamma: vec![0.1, -0.5],
            max_lag: 1,
            n_used: 10,
        };
        let law = limit_covariance(&neg, 0.0, 1.0).unwrap();
        assert!(law.clamped && law.eig == [0.0, 0.0]);
        assert!(matches!(law.mixture(), Err(NkkError::PointMass)));
    }

    #[test]
    fn density_at_zero_scales_inversely() {
        let r: Vec<f64> = (0..200)
            .map(|i| ((i * 37 % 200) as f64 - 99.5) / 40.0)
            .collect();
        let scaled: Vec<f64> = r.iter().map(|v| 2.5 * v).collect();
        let a = density_at_zero(&r).unwrap();
        let b = density_at_zero(&scaled).unwrap();
        assert!((a / 2.5 - b).abs() < 1e-12);
        assert!(matches!(
            density_at_zero(&[1.0; 25]),
            Err(NkkError::DegenerateSample(_))
        ));
        assert!(density_at_zero(&[1.0; 10]).is_err());
    }
}
