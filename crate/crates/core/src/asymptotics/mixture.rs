use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{NkkError, Result};

use super::quadrature::{integrate_to_infinity, Panels};

/// Accuracy target of the characteristic-function inversions.
pub const INVERSION_TOL: f64 = 1e-9;

/// Law of `a X1 + b X2` with `X1, X2` independent chi-square(1) and
/// `a >= b >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquareMixture {
    pub weights: [f64; 2],
}

impl ChiSquareMixture {
    /// Mixture with weights sorted in decreasing order.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 {
            return Err(NkkError::InvalidData(format!(
                "mixture weights must be finite and nonnegative, got ({a}, {b})"
            )));
        }
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == 0.0 {
            return Err(NkkError::PointMass);
        }
        Ok(ChiSquareMixture { weights: [hi, lo] })
    }

    /// Law of `(1/(8 pi)) (l1 X1 + l2 X2)`, the limit of the NKK ordinate
    /// when `l1, l2` are the eigenvalues of the limit covariance.
    pub fn from_eigenvalues(l1: f64, l2: f64) -> Result<Self> {
        Self::new(l1 / (8.0 * PI), l2 / (8.0 * PI))
    }

    pub fn mean(&self) -> f64 {
        self.weights[0] + self.weights[1]
    }

    pub fn variance(&self) -> f64 {
        2.0 * (self.weights[0].powi(2) + self.weights[1].powi(2))
    }

    /// Both weights equal: the mixture is an exponential law.
    pub fn is_exponential(&self) -> bool {
        (self.weights[0] - self.weights[1]).abs() <= 1e-12 * self.weights[0]
    }

    /// `phi(t) = prod_j (1 - 2 i t w_j)^(-1/2)`.
    pub fn characteristic(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| Complex64::new(1.0, -2.0 * t * w).sqrt().inv())
            .product()
    }

    fn modulus(&self, t: f64) -> f64 {
        self.weights
            .iter()
            .map(|&w| (1.0 + 4.0 * t * t * w * w).powf(-0.25))
            .product()
    }

    // Integration layout shared by both inversions: adaptive head over a few
    // decay lengths of phi, then half-period panels of exp(-i t y).
    fn layout(&self, y: f64) -> (f64, Panels) {
        let start = 2.0 * PI / self.weights[0];
        if y > 0.0 {
            (start, Panels::Uniform(PI / y))
        } else {
            (start, Panels::Geometric)
        }
    }

    pub fn density(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        if self.is_exponential() {
            let s = 2.0 * self.weights[0];
            return (-y / s).exp() / s;
        }
        if y == 0.0 {
            // inversion at the jump would return the midpoint; use the right limit
            return match self.weights[1] {
                0.0 => f64::INFINITY,
                b => 0.5 / (self.weights[0] * b).sqrt(),
            };
        }
        let f = |t: f64| (Complex64::new(0.0, -t * y).exp() * self.characteristic(t)).re;
        let (start, panels) = self.layout(y);
        let v = integrate_to_infinity(&f, start, panels, INVERSION_TOL, |t| {
            self.modulus(t) < 1e-12
        });
        (v / PI).max(0.0)
    }

    /// Gil–Pelaez: `F(y) = 1/2 - (1/pi) int_0^inf Im[e^{-ity} phi(t)] / t dt`.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if self.is_exponential() {
            return -(-y / (2.0 * self.weights[0])).exp_m1();
        }
        let f = |t: f64| {
            if t == 0.0 {
                return self.mean() - y;
            }
            (Complex64::new(0.0, -t * y).exp() * self.characteristic(t)).im / t
        };
        let (start, panels) = self.layout(y);
        let v = integrate_to_infinity(&f, start, panels, INVERSION_TOL, |t| {
            self.modulus(t) / t < 1e-12
        });
        (0.5 - v / PI).clamp(0.0, 1.0)
    }

    /// Inverse distribution function by bracketing and bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if self.is_exponential() {
            return -2.0 * self.weights[0] * (-p).ln_1p();
        }
        let p = p.min(1.0 - 1e-12);
        let (mut lo, mut hi) = (0.0, self.mean().max(f64::MIN_POSITIVE));
        while self.cdf(hi) < p {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_closed_form() {
        let m = ChiSquareMixture::from_eigenvalues(1.0, 1.0).unwrap();
        assert!((m.density(0.0) - 4.0 * PI).abs() < 1e-12);
        assert!((m.density(0.1) - 4.0 * PI * (-0.4 * PI).exp()).abs() < 1e-12);
        assert_eq!(m.cdf(0.0), 0.0);
        assert!((m.cdf(2f64.ln() / (4.0 * PI)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn inversion_matches_closed_form_when_weights_coincide() {
        // force the general path by nudging one weight below the exponential test
        let w = 1.0 / (8.0 * PI);
        let near = ChiSquareMixture {
            weights: [w, w * (1.0 - 1e-9)],
        };
        let exact = ChiSquareMixture::new(w, w).unwrap();
        assert!(!near.is_exponential());
        for y in [0.001, 0.01, 0.05, 0.1, 0.3] {
            assert!((near.cdf(y) - exact.cdf(y)).abs() < 1e-6, "cdf at {y}");
            assert!(
                (near.density(y) - exact.density(y)).abs() < 1e-6 * exact.density(0.0),
                "pdf at {y}"
            );
        }
    }

    #[test]
    fn density_at_zero_is_the_right_limit() {
        let m = ChiSquareMixture::new(2.0, 0.5).unwrap();
        assert!((m.density(0.0) - 0.5).abs() < 1e-15);
        assert!((m.density(1e-4) - m.density(0.0)).abs() < 1e-3);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let e = ChiSquareMixture::from_eigenvalues(1.0, 1.0).unwrap();
        assert!((e.quantile(0.5) - 2f64.ln() / (4.0 * PI)).abs() < 1e-14);
        let g = ChiSquareMixture::new(2.0, 0.5).unwrap();
        for p in [0.1, 0.5, 0.99] {
            assert!((g.cdf(g.quantile(p)) - p).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_weights_are_a_point_mass() {
        assert!(matches!(
            ChiSquareMixture::new(0.0, 0.0),
            Err(NkkError::PointMass)
        ));
        assert!(ChiSquareMixture::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn rank_one_density_blows_up_at_zero() {
        let m = ChiSquareMixture::new(1.0, 0.0).unwrap();
        assert!(m.density(0.0).is_infinite());
        // chi-square(1) CDF at 1 is erf(1/sqrt 2) = 0.682689492137...
        assert!((m.cdf(1.0) - 0.682_689_492_137_085_9).abs() < 1e-7);
    }
}
