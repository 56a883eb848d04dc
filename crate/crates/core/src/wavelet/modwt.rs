use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{NkkError, Result};

use super::{filter::FilterName, Mra, WaveletFilter};

/// Undecimated transform: every array has the input length `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModwtResult {
    pub levels: usize,
    pub wavelet: Vec<Vec<f64>>,
    pub scaling: Vec<f64>,
    pub len: usize,
    pub filter: FilterName,
}

impl ModwtResult {
    pub fn energy(&self) -> f64 {
        self.wavelet.iter().map(|w| super::energy(w)).sum::<f64>() + super::energy(&self.scaling)
    }

    /// Wavelet coefficients at 1-based level `j`.
    pub fn level(&self, j: usize) -> Option<&[f64]> {
        j.checked_sub(1)
            .and_then(|i| self.wavelet.get(i))
            .map(Vec::as_slice)
    }

    fn check(&self, filter: &WaveletFilter) -> Result<()> {
        if self.filter != filter.name {
            return Err(NkkError::InconsistentInput(format!(
                "transform computed with {} but filter {} supplied",
                self.filter, filter.name
            )));
        }
        if self.wavelet.len() != self.levels
            || self.scaling.len() != self.len
            || self.wavelet.iter().any(|w| w.len() != self.len)
        {
            return Err(NkkError::InconsistentInput(
                "MODWT arrays do not match the recorded level count and length".into(),
            ));
        }
        Ok(())
    }
}

struct Rescaled {
    h: Vec<f64>,
    g: Vec<f64>,
}

impl Rescaled {
    fn new(filter: &WaveletFilter) -> Self {
        Rescaled {
            h: filter.h.iter().map(|c| c * FRAC_1_SQRT_2).collect(),
            g: filter.g.iter().map(|c| c * FRAC_1_SQRT_2).collect(),
        }
    }
}

// Index offsets (stride * l) mod n for every tap.
fn offsets(n: usize, stride: usize, taps: usize) -> Vec<usize> {
    (0..taps).map(|l| (stride % n) * l % n).collect()
}

/// Level-j step with stride `2^(j-1)`:
/// `w[t] = sum_l h~[l] v[(t - stride*l) mod n]`.
fn analysis_step(v: &[f64], f: &Rescaled, stride: usize) -> (Vec<f64>, Vec<f64>) {
    let n = v.len();
    let offs = offsets(n, stride, f.h.len());
    let mut w = vec![0.0; n];
    let mut s = vec![0.0; n];
    for t in 0..n {
        let (mut acc_w, mut acc_s) = (0.0, 0.0);
        for ((&hl, &gl), &off) in f.h.iter().zip(&f.g).zip(&offs) {
            let x = v[(t + n - off) % n];
            acc_w += hl * x;
            acc_s += gl * x;
        }
        w[t] = acc_w;
        s[t] = acc_s;
    }
    (w, s)
}

/// Adjoint step, `v[t] = sum_l h~[l] w[(t + stride*l) mod n] + g~[l] s[...]`.
fn synthesis_step(
    w: Option<&[f64]>,
    s: Option<&[f64]>,
    f: &Rescaled,
    stride: usize,
    n: usize,
) -> Vec<f64> {
    let offs = offsets(n, stride, f.h.len());
    let mut v = vec![0.0; n];
    for (t, out) in v.iter_mut().enumerate() {
        let mut acc = 0.0;
        for ((&hl, &gl), &off) in f.h.iter().zip(&f.g).zip(&offs) {
            let idx = (t + off) % n;
            if let Some(w) = w {
                acc += hl * w[idx];
            }
            if let Some(s) = s {
                acc += gl * s[idx];
            }
        }
        *out = acc;
    }
    v
}

/// Maximal overlap DWT to depth `levels`, valid for any `n >= L`.
pub fn modwt(series: &[f64], filter: &WaveletFilter, levels: usize) -> Result<ModwtResult> {
    let n = series.len();
    if n < filter.len() {
        return Err(NkkError::SeriesTooShort {
            len: n,
            filter_len: filter.len(),
        });
    }
    if levels == 0 || levels >= usize::BITS as usize - 1 {
        return Err(NkkError::InvalidConfig(format!(
            "MODWT level count must be in 1..{}, got {levels}",
            usize::BITS - 1
        )));
    }
    let span = (1usize << (levels - 1)).saturating_mul(filter.len());
    if span > n {
        log::warn!(
            "MODWT depth {levels} with {} taps spans {span} > n = {n}; coarse levels are dominated by circular wrap-around",
            filter.len()
        );
    }
    let f = Rescaled::new(filter);
    let mut wavelet = Vec::with_capacity(levels);
    let mut v = series.to_vec();
    for j in 0..levels {
        let (w, s) = analysis_step(&v, &f, 1 << j);
        wavelet.push(w);
        v = s;
    }
    Ok(ModwtResult {
        levels,
        wavelet,
        scaling: v,
        len: n,
        filter: filter.name,
    })
}

fn invert(
    result: &ModwtResult,
    f: &Rescaled,
    keep_level: Option<usize>,
    keep_scaling: bool,
) -> Vec<f64> {
    let n = result.len;
    let mut v: Option<Vec<f64>> = keep_scaling.then(|| result.scaling.clone());
    for j in (0..result.levels).rev() {
        let w = (keep_level == Some(j)).then(|| result.wavelet[j].as_slice());
        if w.is_none() && v.is_none() {
            continue;
        }
        v = Some(synthesis_step(w, v.as_deref(), f, 1 << j, n));
    }
    v.unwrap_or_else(|| vec![0.0; n])
}

/// MODWT multiresolution analysis (zero-phase details and smooth).
pub fn modwt_mra(result: &ModwtResult, filter: &WaveletFilter) -> Result<Mra> {
    result.check(filter)?;
    let f = Rescaled::new(filter);
    let details = (0..result.levels)
        .map(|j| invert(result, &f, Some(j), false))
        .collect();
    let smooth = invert(result, &f, None, true);
    Ok(Mra { details, smooth })
}
