//! Classical and NKK (LAD-based) periodograms of wavelet coefficients.
//!
//! Both ordinates share the normalisation `n / (8 pi) ||beta||^2`; they differ
//! only in the fitting criterion behind `beta`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{NkkError, Result};
use crate::lad::{harmonic_design, is_admissible, lad_fit, max_frequency_index, ols_fit};
use crate::wavelet::ModwtResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodogramKind {
    Classical,
    Nkk,
    NkkScaleAveraged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Periodogram {
    pub kind: PeriodogramKind,
    /// Wavelet levels the ordinates come from (one entry unless averaged).
    pub levels: Vec<usize>,
    pub ks: Vec<usize>,
    pub freqs: Vec<f64>,
    pub values: Vec<f64>,
    pub n: usize,
}

/// `{1, ..., floor((n-1)/2)}`, every index admissible.
pub fn default_frequencies(n: usize) -> Vec<usize> {
    (1..=max_frequency_index(n))
        .filter(|&k| is_admissible(n, k))
        .collect()
}

fn check_ks(n: usize, ks: &[usize]) -> Result<()> {
    match ks.iter().find(|&&k| !is_admissible(n, k)) {
        Some(&k) => Err(NkkError::DegenerateFrequency { n, k }),
        None => Ok(()),
    }
}

fn ordinate_scale(n: usize) -> f64 {
    n as f64 / (8.0 * PI)
}

/// `I_k = n/(8 pi) ||beta_ols||^2` at each requested index.
pub fn classical_periodogram(coeffs: &[f64], ks: &[usize]) -> Result<Periodogram> {
    let n = coeffs.len();
    check_ks(n, ks)?;
    let mut values = Vec::with_capacity(ks.len());
    let mut freqs = Vec::with_capacity(ks.len());
    for &k in ks {
        let design = harmonic_design(n, k)?;
        let fit = ols_fit(coeffs, &design)?;
        freqs.push(design.lambda_k);
        values.push(ordinate_scale(n) * fit.norm_sq());
    }
    Ok(Periodogram {
        kind: PeriodogramKind::Classical,
        levels: Vec::new(),
        ks: ks.to_vec(),
        freqs,
        values,
        n,
    })
}

/// Discrete-Fourier form `|sum_q w_q e^{-i lambda_k q}|^2 / (2 pi n)`.
pub fn fourier_periodogram(coeffs: &[f64], k: usize) -> f64 {
    let n = coeffs.len();
    let (mut re, mut im) = (0.0, 0.0);
    for (q, &w) in coeffs.iter().enumerate() {
        let angle = 2.0 * PI * ((k * q) % n) as f64 / n as f64;
        re += w * angle.cos();
        im -= w * angle.sin();
    }
    (re * re + im * im) / (2.0 * PI * n as f64)
}

/// `N_k = n/(8 pi) ||beta_lad||^2` at each requested index.
pub fn nkk_periodogram(coeffs: &[f64], ks: &[usize], tol: f64) -> Result<Periodogram> {
    let n = coeffs.len();
    check_ks(n, ks)?;
    let mut values = Vec::with_capacity(ks.len());
    let mut freqs = Vec::with_capacity(ks.len());
    for &k in ks {
        let design = harmonic_design(n, k)?;
        let fit = lad_fit(coeffs, &design, tol)?;
        if !fit.converged {
            log::warn!("LAD fit at k = {k} stopped before certifying optimality");
        }
        freqs.push(design.lambda_k);
        values.push(ordinate_scale(n) * fit.norm_sq());
    }
    Ok(Periodogram {
        kind: PeriodogramKind::Nkk,
        levels: Vec::new(),
        ks: ks.to_vec(),
        freqs,
        values,
        n,
    })
}

/// Arithmetic mean over `levels` of the per-level NKK periodograms.
pub fn scale_averaged_nkk(
    transform: &ModwtResult,
    ks: &[usize],
    levels: &[usize],
    tol: f64,
) -> Result<Periodogram> {
    if levels.is_empty() {
        return Err(NkkError::InvalidConfig(
            "no wavelet levels to average over".into(),
        ));
    }
    let mut acc: Option<Periodogram> = None;
    for &j in levels {
        let coeffs = transform.level(j).ok_or_else(|| {
            NkkError::InvalidConfig(format!(
                "level {j} outside 1..={} of the transform",
                transform.levels
            ))
        })?;
        let p = nkk_periodogram(coeffs, ks, tol)?;
        match acc.as_mut() {
            None => acc = Some(p),
            Some(a) => a
                .values
                .iter_mut()
                .zip(&p.values)
                .for_each(|(x, y)| *x += y),
        }
    }
    let mut out = acc.expect("levels is non-empty");
    let m = levels.len() as f64;
    out.values.iter_mut().for_each(|v| *v /= m);
    out.kind = if levels.len() == 1 {
        PeriodogramKind::Nkk
    } else {
        PeriodogramKind::NkkScaleAveraged
    };
    out.levels = levels.to_vec();
    Ok(out)
}
