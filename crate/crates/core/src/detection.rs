//! Detection chain: dB conversions, efficiency losses, electronic-noise
//! correction and the analysis of measured squeezing records.

use nalgebra::Matrix4;
use serde::Deserialize;

use crate::format::Real;
use crate::gaussian::{self, Basis, CovarianceMatrix, EntanglementReport};
use crate::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("variance must be positive to express in dB, got {v}")));
    }
    Ok(10.0 * v.log10())
}

/// Homodyne detection chain. Visibility enters squared.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct DetectionChain {
    pub quantum_efficiency: f64,
    pub visibility: f64,
    pub propagation: f64,
    /// Dark-noise level in dB relative to shot noise.
    #[serde(default)]
    pub electronic_noise_db: Option<f64>,
}

impl DetectionChain {
    pub fn new(quantum_efficiency: f64, visibility: f64, propagation: f64, electronic_noise_db: Option<f64>) -> Result<Self> {
        let chain = Self {
            quantum_efficiency,
            visibility,
            propagation,
            electronic_noise_db,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn ideal() -> Self {
        Self {
            quantum_efficiency: 1.0,
            visibility: 1.0,
            propagation: 1.0,
            electronic_noise_db: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("quantum_efficiency", self.quantum_efficiency),
            ("visibility", self.visibility),
            ("propagation", self.propagation),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        match self.electronic_noise_db {
            Some(d) if d.is_nan() || d >= 0.0 => Err(Error::Domain(format!(
                "electronic noise must lie below shot noise (negative dB), got {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// `η = η_q · V² · T`.
    pub fn overall_efficiency(&self) -> f64 {
        self.quantum_efficiency * self.visibility * self.visibility * self.propagation
    }
}

pub fn overall_efficiency(chain: &DetectionChain) -> f64 {
    chain.overall_efficiency()
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency must lie in (0, 1], got {eta}")));
    }
    Ok(())
}

/// Beam-splitter loss mixing in vacuum: `η·v + (1 − η)`.
pub fn apply_efficiency(v: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(v > 0.0) {
        return Err(Error::Domain(format!("variance must be positive, got {v}")));
    }
    Ok(eta * v + (1.0 - eta))
}

/// The same loss on all four quadratures: `η·Γ + (1 − η)·I`.
pub fn apply_loss_to_covariance(gamma: &CovarianceMatrix, eta: f64) -> Result<CovarianceMatrix> {
    check_eta(eta)?;
    let m = gamma.entries() * eta + Matrix4::identity() * (1.0 - eta);
    CovarianceMatrix::symmetrized(m, gamma.basis())
}

/// Removes electronic noise from a measured variance:
/// `V = (V_meas − V_dark)/(1 − V_dark)`, the shot-noise reference being
/// dark-corrected the same way. `dark_db = −∞` leaves the value unchanged.
pub fn correct_electronic_noise(measured_db: f64, dark_db: f64) -> Result<f64> {
    if dark_db == f64::NEG_INFINITY {
        return Ok(measured_db);
    }
    let (vm, vd) = (db_to_linear(measured_db), db_to_linear(dark_db));
    if !(vd < 1.0) {
        return Err(Error::Domain(format!("dark level {dark_db} dB is not below shot noise")));
    }
    if !(vm > vd) {
        return Err(Error::Domain(format!(
            "measured level {measured_db} dB is not above the dark level {dark_db} dB"
        )));
    }
    linear_to_db((vm - vd) / (1.0 - vd))
}

/// Inverse of [`correct_electronic_noise`].
pub fn add_electronic_noise(corrected_db: f64, dark_db: f64) -> Result<f64> {
    let (vc, vd) = (db_to_linear(corrected_db), db_to_linear(dark_db));
    if !(vd < 1.0) {
        return Err(Error::Domain(format!("dark level {dark_db} dB is not below shot noise")));
    }
    linear_to_db(vc * (1.0 - vd) + vd)
}

/// Symmetric standard-form state with phase-insensitive individual noise
/// `v_individual`, the −45° mode squeezed to `v_minus` on X and the +45°
/// mode squeezed to `v_plus` on Y.
pub fn symmetric_state(v_individual: f64, v_plus: f64, v_minus: f64) -> Result<CovarianceMatrix> {
    let v = v_individual;
    let cx = v - v_minus;
    let cy = v_plus - v;
    CovarianceMatrix::from_rows(
        [[v, 0.0, cx, 0.0], [0.0, v, 0.0, cy], [cx, 0.0, v, 0.0], [0.0, cy, 0.0, v]],
        Basis::SignalIdler,
    )
    .map_err(|e| Error::Domain(format!("record does not describe a physical state: {e}")))
}

/// Measured noise levels of the rotated and individual modes.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct MeasurementRecord {
    pub squeezed_plus_db: f64,
    pub squeezed_minus_db: f64,
    pub individual_noise_db: f64,
    #[serde(flatten)]
    pub chain: DetectionChain,
}

impl MeasurementRecord {
    pub fn from_json(s: &str) -> Result<Self> {
        let rec: Self = serde_json::from_str(s)?;
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("squeezed_plus_db", self.squeezed_plus_db),
            ("squeezed_minus_db", self.squeezed_minus_db),
            ("individual_noise_db", self.individual_noise_db),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        self.chain.validate()
    }
}

/// Result of [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementAnalysis {
    pub corrected_plus_db: f64,
    pub corrected_minus_db: f64,
    pub corrected_individual_db: f64,
    pub overall_efficiency: f64,
    /// Inferred symmetric-state covariance (signal/idler basis).
    pub covariance: CovarianceMatrix,
    pub report: EntanglementReport,
}

impl MeasurementAnalysis {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "corrected_db": {
                "squeezed_plus": Real(self.corrected_plus_db),
                "squeezed_minus": Real(self.corrected_minus_db),
                "individual_noise": Real(self.corrected_individual_db),
            },
            "overall_efficiency": Real(self.overall_efficiency),
            "report": self.report.to_json_value(),
            "covariance": self.covariance.to_json_value(),
        })
    }
}

/// Corrects electronic noise (when a dark level is given), then computes
/// Δ and EOF from the squeezed variances and the Reid product from the
/// inferred symmetric state.
pub fn analyze(record: &MeasurementRecord) -> Result<MeasurementAnalysis> {
    record.validate()?;
    let correct = |db: f64| match record.chain.electronic_noise_db {
        Some(dark) => correct_electronic_noise(db, dark),
        None => Ok(db),
    };
    let plus_db = correct(record.squeezed_plus_db)?;
    let minus_db = correct(record.squeezed_minus_db)?;
    let individual_db = correct(record.individual_noise_db)?;
    let (vp, vm, vi) = (db_to_linear(plus_db), db_to_linear(minus_db), db_to_linear(individual_db));

    let delta = gaussian::duan_inseparability(vp, vm)?;
    let eof = gaussian::eof_symmetric(delta)?;
    let covariance = symmetric_state(vi, vp, vm)?;
    let xi = gaussian::pt_symplectic_eigenvalue(&covariance)?;
    let report = EntanglementReport {
        xi,
        log_negativity: if xi < 1.0 { -xi.log2() } else { 0.0 },
        max_log_negativity: gaussian::max_log_negativity(&covariance),
        duan_delta: delta,
        reid_product: gaussian::reid_epr_product(&covariance)?,
        eof: Some(eof),
    };
    Ok(MeasurementAnalysis {
        corrected_plus_db: plus_db,
        corrected_minus_db: minus_db,
        corrected_individual_db: individual_db,
        overall_efficiency: record.chain.overall_efficiency(),
        covariance,
        report,
    })
}
