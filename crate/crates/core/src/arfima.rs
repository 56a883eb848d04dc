//! ARFIMA(0,d,0) and ARFIMA(1,d,1) paths with Student-t innovations.
//!
//! `(1 - phi L)(1 - L)^d Z_t = (1 + theta L) eps_t` is built in three passes:
//! the MA(1) filter, fractional integration by the causal series
//! `sum_k (d)_k / k! u_{t-k}`, then the AR(1) recursion. Every pass starts
//! from zero initial conditions, and a burn-in prefix is discarded.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{NkkError, Result};
use crate::rng::{self, Stream};

/// Floor on the default burn-in length.
pub const MIN_BURN_IN: usize = 1000;

fn default_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArfimaSpec {
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub theta: f64,
    pub d: f64,
    /// Student degrees of freedom; `inf` gives Gaussian innovations.
    pub nu: f64,
    pub n: usize,
    /// Discarded prefix; `None` means `max(1000, n)`.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Used by [`simulate`]; studies derive streams from their own seed.
    #[serde(default)]
    pub seed: u64,
    /// Multiplier on the innovations. Zero yields the all-zero path.
    #[serde(default = "default_scale")]
    pub scale: f64,
}

impl ArfimaSpec {
    /// Pure fractional noise ARFIMA(0,d,0).
    pub fn fractional(d: f64, nu: f64, n: usize) -> Self {
        Self::arfima11(0.0, 0.0, d, nu, n)
    }

    pub fn arfima11(phi: f64, theta: f64, d: f64, nu: f64, n: usize) -> Self {
        ArfimaSpec {
            phi,
            theta,
            d,
            nu,
            n,
            burn_in: None,
            seed: 0,
            scale: 1.0,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn effective_burn_in(&self) -> usize {
        self.burn_in.unwrap_or(MIN_BURN_IN.max(self.n))
    }

    pub fn is_fractional(&self) -> bool {
        self.phi == 0.0 && self.theta == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(NkkError::InvalidSpec(msg));
        if self.phi.is_nan() || self.phi.abs() >= 1.0 {
            return bad(format!(
                "AR coefficient {} is not stationary (|phi| < 1 required)",
                self.phi
            ));
        }
        if !self.theta.is_finite() {
            return bad(format!("MA coefficient {} is not finite", self.theta));
        }
        if !(0.0..0.5).contains(&self.d) {
            return bad(format!("memory parameter {} outside [0, 0.5)", self.d));
        }
        if self.nu.is_nan() || self.nu <= 2.0 {
            return bad(format!("degrees of freedom {} must exceed 2", self.nu));
        }
        if self.n == 0 {
            return bad("series length must be positive".into());
        }
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return bad(format!(
                "innovation scale {} must be finite and nonnegative",
                self.scale
            ));
        }
        Ok(())
    }
}

/// `pi_0 ..= pi_m` with `pi_k = pi_{k-1} (d + k - 1) / k`.
pub fn frac_coeffs(d: f64, m: usize) -> Vec<f64> {
    let mut pi = Vec::with_capacity(m + 1);
    pi.push(1.0);
    for k in 1..=m {
        let prev = pi[k - 1];
        pi.push(prev * (d + k as f64 - 1.0) / k as f64);
    }
    pi
}

/// `Z_i = sum_{k=0}^{i} pi_k u_{i-k}`; a negative `d` applies the
/// truncated differencing operator instead.
pub fn fractional_integrate(noise: &[f64], d: f64) -> Vec<f64> {
    let n = noise.len();
    if d == 0.0 {
        return noise.to_vec();
    }
    let pi = frac_coeffs(d, n.saturating_sub(1));
    (0..n)
        .map(|i| {
            pi[..=i]
                .iter()
                .zip(noise[..=i].iter().rev())
                .map(|(p, u)| p * u)
                .sum()
        })
        .collect()
}

/// i.i.d. Student-t draws as `N(0,1) / sqrt(chi2_nu / nu)`.
pub fn student_noise(nu: f64, n: usize, stream: &mut Stream) -> Vec<f64> {
    if nu.is_infinite() {
        return (0..n).map(|_| stream.sample(StandardNormal)).collect();
    }
    let chi = ChiSquared::new(nu).expect("nu > 2 checked by the caller");
    (0..n)
        .map(|_| {
            let z: f64 = stream.sample(StandardNormal);
            let c = chi.sample(stream);
            z / (c / nu).sqrt()
        })
        .collect()
}

/// MA(1), fractional integration and AR(1) applied to a given innovation
/// sequence, all with zero initial conditions.
pub fn arfima_filter(innovations: &[f64], phi: f64, theta: f64, d: f64) -> Vec<f64> {
    let mut prev = 0.0;
    let ma: Vec<f64> = innovations
        .iter()
        .map(|&e| {
            let out = e + theta * prev;
            prev = e;
            out
        })
        .collect();
    let mut z = fractional_integrate(&ma, d);
    let mut last = 0.0;
    for v in z.iter_mut() {
        *v += phi * last;
        last = *v;
    }
    z
}

fn draw_innovations(spec: &ArfimaSpec, stream: &mut Stream) -> Vec<f64> {
    let mut u = student_noise(spec.nu, spec.effective_burn_in() + spec.n, stream);
    if spec.scale != 1.0 {
        u.iter_mut().for_each(|v| *v *= spec.scale);
    }
    u
}

fn discard_burn_in(spec: &ArfimaSpec, mut path: Vec<f64>) -> Vec<f64> {
    path.drain(..spec.effective_burn_in());
    path
}

/// Fractional noise from the finite series representation.
pub fn arfima_0d0(spec: &ArfimaSpec, stream: &mut Stream) -> Result<Vec<f64>> {
    spec.validate()?;
    if !spec.is_fractional() {
        return Err(NkkError::InvalidSpec(format!(
            "ARFIMA(0,d,0) requires phi = theta = 0, got ({}, {})",
            spec.phi, spec.theta
        )));
    }
    let u = draw_innovations(spec, stream);
    Ok(discard_burn_in(spec, fractional_integrate(&u, spec.d)))
}

pub fn arfima_1d1(spec: &ArfimaSpec, stream: &mut Stream) -> Result<Vec<f64>> {
    spec.validate()?;
    let u = draw_innovations(spec, stream);
    Ok(discard_burn_in(
        spec,
        arfima_filter(&u, spec.phi, spec.theta, spec.d),
    ))
}

/// One path on stream `index` of `seed`.
pub fn simulate_stream(spec: &ArfimaSpec, seed: u64, index: u64) -> Result<Vec<f64>> {
    let mut stream = rng::stream(seed, index);
    if spec.is_fractional() {
        arfima_0d0(spec, &mut stream)
    } else {
        arfima_1d1(spec, &mut stream)
    }
}

/// One path on stream 0 of the spec's own seed.
pub fn simulate(spec: &ArfimaSpec) -> Result<Vec<f64>> {
    simulate_stream(spec, spec.seed, 0)
}
