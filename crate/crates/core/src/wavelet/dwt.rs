use crate::error::{NkkError, Result};

use super::{filter::FilterName, Mra, WaveletFilter};

/// Partial DWT: `levels` wavelet arrays `w_j` of length `T / 2^j` plus the
/// final scaling array.
#[derive(Clone, Debug, PartialEq)]
pub struct DwtResult {
    pub levels: usize,
    pub wavelet: Vec<Vec<f64>>,
    pub scaling: Vec<f64>,
    pub len: usize,
    pub filter: FilterName,
}

impl DwtResult {
    /// Total coefficient energy; equals the input energy.
    pub fn energy(&self) -> f64 {
        self.wavelet.iter().map(|w| super::energy(w)).sum::<f64>() + super::energy(&self.scaling)
    }

    fn check(&self, filter: &WaveletFilter) -> Result<()> {
        if self.filter != filter.name {
            return Err(NkkError::InconsistentInput(format!(
                "transform computed with {} but filter {} supplied",
                self.filter, filter.name
            )));
        }
        if self.wavelet.len() != self.levels {
            return Err(NkkError::InconsistentInput(format!(
                "{} wavelet arrays for {} levels",
                self.wavelet.len(),
                self.levels
            )));
        }
        for (j, w) in self.wavelet.iter().enumerate() {
            if w.len() << (j + 1) != self.len {
                return Err(NkkError::InconsistentInput(format!(
                    "level {} has {} coefficients, expected {}",
                    j + 1,
                    w.len(),
                    self.len >> (j + 1)
                )));
            }
        }
        if self.scaling.len() << self.levels != self.len {
            return Err(NkkError::InconsistentInput(
                "scaling array length does not match the level count".into(),
            ));
        }
        Ok(())
    }
}

/// One analysis step: `w[t] = sum_l h[l] v[(2t + 1 - l) mod T]`, same for `g`.
fn analysis_step(v: &[f64], filter: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let len = v.len();
    let half = len / 2;
    let mut w = vec![0.0; half];
    let mut s = vec![0.0; half];
    for t in 0..half {
        let (mut acc_w, mut acc_s) = (0.0, 0.0);
        for (l, (&hl, &gl)) in filter.h.iter().zip(&filter.g).enumerate() {
            let idx = (2 * t + 1 + len * filter.len() - l) % len;
            acc_w += hl * v[idx];
            acc_s += gl * v[idx];
        }
        w[t] = acc_w;
        s[t] = acc_s;
    }
    (w, s)
}

/// Adjoint of [`analysis_step`]; exact inverse because the step is orthonormal.
fn synthesis_step(w: &[f64], s: &[f64], filter: &WaveletFilter) -> Vec<f64> {
    let len = 2 * w.len();
    let mut v = vec![0.0; len];
    for t in 0..w.len() {
        for (l, (&hl, &gl)) in filter.h.iter().zip(&filter.g).enumerate() {
            let idx = (2 * t + 1 + len * filter.len() - l) % len;
            v[idx] += hl * w[t] + gl * s[t];
        }
    }
    v
}

/// Partial discrete wavelet transform to depth `levels`.
pub fn dwt(series: &[f64], filter: &WaveletFilter, levels: usize) -> Result<DwtResult> {
    let len = series.len();
    if levels == 0 {
        return Err(NkkError::InvalidConfig(
            "DWT needs at least one level".into(),
        ));
    }
    if levels >= usize::BITS as usize || len == 0 || !len.is_multiple_of(1usize << levels) {
        return Err(NkkError::InvalidLength { len, levels });
    }
    let mut wavelet = Vec::with_capacity(levels);
    let mut v = series.to_vec();
    for _ in 0..levels {
        let (w, s) = analysis_step(&v, filter);
        wavelet.push(w);
        v = s;
    }
    Ok(DwtResult {
        levels,
        wavelet,
        scaling: v,
        len,
        filter: filter.name,
    })
}

fn invert(
    result: &DwtResult,
    filter: &WaveletFilter,
    keep_level: Option<usize>,
    keep_scaling: bool,
) -> Vec<f64> {
    let mut v = if keep_scaling {
        result.scaling.clone()
    } else {
        vec![0.0; result.scaling.len()]
    };
    for j in (0..result.levels).rev() {
        let w = &result.wavelet[j];
        v = if keep_level == Some(j) {
            synthesis_step(w, &v, filter)
        } else {
            synthesis_step(&vec![0.0; w.len()], &v, filter)
        };
    }
    v
}

/// Multiresolution analysis `X = sum_j d_j + s_J0` from a DWT.
pub fn mra(result: &DwtResult, filter: &WaveletFilter) -> Result<Mra> {
    result.check(filter)?;
    let details = (0..result.levels)
        .map(|j| invert(result, filter, Some(j), false))
        .collect();
    let smooth = invert(result, filter, None, true);
    Ok(Mra { details, smooth })
}
