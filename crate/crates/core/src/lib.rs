//! Two-mode Gaussian model of a type-II optical parametric oscillator below
//! threshold with an intracavity quarter-wave plate.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`]: spectral covariance matrices and the entanglement and
//!   squeezing measures computed from them.
//! * [`opo`]: closed-form noise spectra of the OPO and an independent
//!   frequency-domain transfer-matrix solution of the linearized equations.
//! * [`detection`]: dB conversions, detection losses and the measurement
//!   analysis chain.
//! * [`entangle`]: the relative A₊/A₋ phase shift that puts the state in
//!   standard form, its numeric cross-check and a two-waveplate realisation.
//!
//! All values are vacuum-normalized: shot noise is a variance of 1 (0 dB).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod entangle;
mod error;
pub mod format;
pub mod gaussian;
pub mod opo;

pub use detection::{DetectionChain, MeasurementAnalysis, MeasurementRecord};
pub use entangle::{NumericOptimum, Standardized, WaveplateSettings};
pub use error::{Error, Result};
pub use gaussian::{Basis, CovarianceMatrix, Eof, EntanglementReport, ModeTransform};
pub use opo::{NoiseEllipse, OpoParams, SumSpectra};

/// Complex scalar type used for mode transforms and transfer functions.
pub type Complex = nalgebra::Complex<f64>;
