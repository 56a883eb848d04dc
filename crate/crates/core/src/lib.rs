//! Robust wavelet-domain periodograms built from least-absolute-deviations
//! harmonic regression.
//!
//! The crate is organised around the pipeline
//!
//! ```text
//! simulate (arfima) -> MODWT (wavelet) -> LAD harmonic fit (lad)
//!     -> NKK ordinate (spectral) -> limit law (asymptotics) -> study (montecarlo)
//! ```
//!
//! Every stage is a pure function of its inputs. Randomness only enters through
//! explicit [`rng::Stream`] values derived from a base seed and a replication
//! index, so any replication can be regenerated on its own.
//!
//! The `examples/` directory holds one runnable program per capability and the
//! `nkk` binary exposes the same functionality from the command line.

pub mod arfima;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod lad;
pub mod montecarlo;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod wavelet;

pub use error::{NkkError, Result};
