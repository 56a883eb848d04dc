//! Daubechies filter banks with the decimated (DWT) and maximal overlap
//! (MODWT) pyramid algorithms. Both transforms use circular boundaries.

mod dwt;
mod filter;
mod modwt;

pub use dwt::{dwt, mra, DwtResult};
pub use filter::{filter_bank, FilterName, WaveletFilter, FILTER_IDENTITY_TOL};
pub use modwt::{modwt, modwt_mra, ModwtResult};

/// Additive decomposition `X = sum_j details[j] + smooth`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mra {
    pub details: Vec<Vec<f64>>,
    pub smooth: Vec<f64>,
}

impl Mra {
    /// Sum of all details and the smooth.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = self.smooth.clone();
        for d in &self.details {
            for (o, v) in out.iter_mut().zip(d) {
                *o += v;
            }
        }
        out
    }
}

#[inline]
pub(crate) fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}
