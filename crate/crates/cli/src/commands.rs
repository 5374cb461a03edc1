use std::path::Path;

use opo_epr::detection::{add_electronic_noise, analyze, apply_efficiency, linear_to_db};
use opo_epr::entangle::{standardize_model, waveplate_settings};
use opo_epr::format::Real;
use opo_epr::gaussian::{log_negativity, rotate_to_plusminus};
use opo_epr::opo::{diff_mode_spectra, output_covariance, single_mode_components, sum_mode_spectra, tilt_angle};
use opo_epr::{Basis, DetectionChain, EntanglementReport, MeasurementRecord, NoiseEllipse, OpoParams};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{BasisArg, ChainArgs, Mode};
use crate::output::{report, Table};
use crate::params;
use crate::CliError;

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && stop.is_finite()) {
        return Err(CliError::Usage("grid bounds must be finite".into()));
    }
    match n {
        0 => Err(CliError::Usage("grid needs at least one point".into())),
        1 => Ok(vec![start]),
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            Ok((0..n).map(|k| if k == n - 1 { stop } else { start + k as f64 * step }).collect())
        }
    }
}

fn ellipse(p: &OpoParams, mode: Mode) -> NoiseEllipse {
    match mode {
        // the two polarization modes are symmetric
        Mode::Signal | Mode::Idler => single_mode_components(p),
        Mode::Plus => {
            let s = sum_mode_spectra(p);
            NoiseEllipse::from_components(s.p_sum, s.q_sum, 0.0)
        }
        Mode::Minus => diff_mode_spectra(p),
    }
}

pub fn spectrum(p: &OpoParams, mode: Mode, phi_deg: &[f64]) -> Result<Table, CliError> {
    let e = ellipse(p, mode);
    let rows = phi_deg
        .iter()
        .map(|&deg| {
            let phi = deg.to_radians();
            let v = e.variance_at(phi);
            Ok(vec![phi, v, linear_to_db(v)?])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        command: "spectrum",
        columns: &["phi_rad", "variance", "variance_db"],
        rows,
        mode: Some(mode.name()),
        params: *p,
    })
}

pub const SCAN_COLUMNS: [&str; 8] = [
    "c",
    "theta_rad",
    "theta_deg",
    "s_min_minus",
    "s_min_minus_db",
    "s_min_signal",
    "E_N_raw",
    "E_N_std",
];

fn scan_row(base: &OpoParams, c: f64) -> Result<Vec<f64>, CliError> {
    let p = base.with_c(c)?;
    let theta = tilt_angle(&p);
    let s_min_minus = diff_mode_spectra(&p).min_variance();
    let raw = log_negativity(&output_covariance(&p)?)?;
    let std = log_negativity(&standardize_model(&p)?.covariance)?;
    Ok(vec![
        c,
        theta,
        theta.to_degrees(),
        s_min_minus,
        linear_to_db(s_min_minus)?,
        single_mode_components(&p).min_variance(),
        raw,
        std,
    ])
}

pub fn scan_coupling(base: &OpoParams, c_grid: &[f64]) -> Result<Table, CliError> {
    // collect keeps grid order
    let rows = c_grid.par_iter().map(|&c| scan_row(base, c)).collect::<Result<Vec<_>, _>>()?;
    Ok(Table {
        command: "scan-coupling",
        columns: &SCAN_COLUMNS,
        rows,
        mode: None,
        params: *base,
    })
}

pub fn covariance(p: &OpoParams, basis: BasisArg, standardized: bool) -> Result<Value, CliError> {
    let mut body = json!({ "params": params::to_json(p), "standardized": standardized });
    let gamma = if standardized {
        let s = standardize_model(p)?;
        let plates = waveplate_settings(s.theta)?;
        body["theta_rad"] = json!(Real(s.theta));
        body["theta_deg"] = json!(Real(s.theta.to_degrees()));
        body["waveplates_deg"] = json!({
            "half_wave": Real(plates.half_wave_angle.to_degrees()),
            "quarter_wave": Real(plates.quarter_wave_angle.to_degrees()),
        });
        s.covariance
    } else {
        output_covariance(p)?
    };
    let gamma = match (basis, gamma.basis()) {
        (BasisArg::Plusminus, Basis::SignalIdler) | (BasisArg::A1a2, Basis::PlusMinus) => rotate_to_plusminus(&gamma),
        _ => gamma,
    };
    body["covariance"] = gamma.to_json_value();
    body["report"] = EntanglementReport::from_covariance(&gamma)?.to_json_value();
    Ok(report("covariance", body))
}

pub fn analyze_record(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read record {}: {e}", path.display())))?;
    let record = MeasurementRecord::from_json(&text)
        .map_err(|e| CliError::Record(format!("{}: {e}", path.display())))?;
    let analysis = analyze(&record)?;
    let mut body = analysis.to_json_value();
    body["mode"] = json!("record");
    Ok(report("analyze", body))
}

/// Sum-mode squeezing of the model before and after the detection chain.
pub fn budget(p: &OpoParams, chain: &ChainArgs) -> Result<Value, CliError> {
    let chain = DetectionChain::new(
        chain.quantum_efficiency.unwrap_or(1.0),
        chain.visibility.unwrap_or(1.0),
        chain.propagation.unwrap_or(1.0),
        chain.electronic_noise_db,
    )?;
    let eta = chain.overall_efficiency();
    let theory = sum_mode_spectra(p).q_sum;
    let detected = apply_efficiency(theory, eta)?;
    let detected_db = linear_to_db(detected)?;
    let mut body = json!({
        "mode": "budget",
        "params": params::to_json(p),
        "overall_efficiency": Real(eta),
        "theory": { "variance": Real(theory), "db": Real(linear_to_db(theory)?) },
        "detected": { "variance": Real(detected), "db": Real(detected_db) },
    });
    if let Some(dark) = chain.electronic_noise_db {
        body["with_electronic_noise_db"] = json!(Real(add_electronic_noise(detected_db, dark)?));
    }
    Ok(report("analyze", body))
}
