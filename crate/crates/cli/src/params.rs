//! Operating-point resolution: flags over config file over defaults.

use std::f64::consts::PI;
use std::path::Path;

use opo_epr::format::Real;
use opo_epr::OpoParams;
use serde::Deserialize;

use crate::args::{CouplingArgs, ModelArgs};
use crate::CliError;

pub const DEFAULT_SIGMA: f64 = 0.9;
pub const DEFAULT_OMEGA: f64 = 0.1;
pub const DEFAULT_KAPPA: f64 = 0.025;
pub const DEFAULT_KAPPA_PRIME: f64 = 0.03;

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Layer {
    sigma: Option<f64>,
    coupling: Option<f64>,
    rho: Option<f64>,
    omega: Option<f64>,
    frequency_hz: Option<f64>,
    round_trip_s: Option<f64>,
    kappa: Option<f64>,
    kappa_prime: Option<f64>,
}

impl Layer {
    fn from_flags(model: &ModelArgs, coupling: &CouplingArgs) -> Self {
        Self {
            sigma: model.sigma,
            coupling: coupling.coupling,
            rho: coupling.rho,
            omega: model.omega,
            frequency_hz: model.frequency_hz,
            round_trip_s: model.round_trip_s,
            kappa: model.kappa,
            kappa_prime: model.kappa_prime,
        }
    }

    fn check(&self, origin: &str) -> Result<(), CliError> {
        if self.coupling.is_some() && self.rho.is_some() {
            return Err(CliError::Usage(format!("{origin}: coupling and rho are mutually exclusive")));
        }
        if self.omega.is_some() && (self.frequency_hz.is_some() || self.round_trip_s.is_some()) {
            return Err(CliError::Usage(format!(
                "{origin}: omega and frequency_hz/round_trip_s are mutually exclusive"
            )));
        }
        if self.frequency_hz.is_some() != self.round_trip_s.is_some() {
            return Err(CliError::Usage(format!("{origin}: frequency_hz and round_trip_s go together")));
        }
        Ok(())
    }

    /// `self` wins field by field; coupling/rho and omega/frequency are
    /// overridden as groups.
    fn over(self, lower: Layer) -> Layer {
        let (coupling, rho) = if self.coupling.is_some() || self.rho.is_some() {
            (self.coupling, self.rho)
        } else {
            (lower.coupling, lower.rho)
        };
        let (omega, frequency_hz, round_trip_s) = if self.omega.is_some() || self.frequency_hz.is_some() {
            (self.omega, self.frequency_hz, self.round_trip_s)
        } else {
            (lower.omega, lower.frequency_hz, lower.round_trip_s)
        };
        Layer {
            sigma: self.sigma.or(lower.sigma),
            coupling,
            rho,
            omega,
            frequency_hz,
            round_trip_s,
            kappa: self.kappa.or(lower.kappa),
            kappa_prime: self.kappa_prime.or(lower.kappa_prime),
        }
    }
}

fn read_config(path: &Path) -> Result<Layer, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let layer: Layer =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    layer.check(&format!("config {}", path.display()))?;
    Ok(layer)
}

/// Resolves the operating point. `coupling` is `None` for commands that
/// set it themselves; the config's coupling keys are then ignored.
pub fn resolve(model: &ModelArgs, coupling: Option<&CouplingArgs>) -> Result<OpoParams, CliError> {
    let empty = CouplingArgs::default();
    let flags = Layer::from_flags(model, coupling.unwrap_or(&empty));
    flags.check("flags")?;
    let config = match &model.config {
        Some(path) => read_config(path)?,
        None => Layer::default(),
    };
    let mut layer = flags.over(config);
    if coupling.is_none() {
        layer.coupling = None;
        layer.rho = None;
    }
    let sigma = layer.sigma.unwrap_or(DEFAULT_SIGMA);
    let kappa = layer.kappa.unwrap_or(DEFAULT_KAPPA);
    let kappa_prime = layer.kappa_prime.unwrap_or(DEFAULT_KAPPA_PRIME);
    let omega = match (layer.omega, layer.frequency_hz, layer.round_trip_s) {
        (Some(w), _, _) => w,
        // Ω = ωτ/(2κ′)
        (None, Some(f), Some(tau)) => 2.0 * PI * f * tau / (2.0 * kappa_prime),
        _ => DEFAULT_OMEGA,
    };
    let params = match layer.rho {
        Some(rho) => OpoParams::from_plate_angle(sigma, rho, omega, kappa, kappa_prime)?,
        None => OpoParams::new(sigma, layer.coupling.unwrap_or(0.0), omega, kappa, kappa_prime)?,
    };
    Ok(params)
}

pub fn to_json(p: &OpoParams) -> serde_json::Value {
    let mut v = serde_json::json!({
        "sigma": Real(p.sigma()),
        "coupling": Real(p.c()),
        "omega": Real(p.omega()),
        "kappa": Real(p.kappa()),
        "kappa_prime": Real(p.kappa_prime()),
    });
    if let Some(rho) = p.rho() {
        v["rho"] = serde_json::json!(Real(rho));
    }
    v
}

pub fn to_comment(p: &OpoParams) -> String {
    use opo_epr::format::fmt_real;
    let mut s = format!(
        "sigma={} coupling={} omega={} kappa={} kappa_prime={}",
        fmt_real(p.sigma()),
        fmt_real(p.c()),
        fmt_real(p.omega()),
        fmt_real(p.kappa()),
        fmt_real(p.kappa_prime())
    );
    if let Some(rho) = p.rho() {
        s.push_str(&format!(" rho={}", fmt_real(rho)));
    }
    s
}
