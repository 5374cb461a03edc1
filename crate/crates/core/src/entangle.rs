//! The non-local phase shift of A₊ against A₋.
//!
//! With a rotated plate the squeezed quadratures of the ±45° modes are no
//! longer orthogonal and the signal/idler entanglement falls short of what
//! passive optics can extract. Phase-shifting `A₊ → A₊e^{iθ/2}`,
//! `A₋ → A₋e^{−iθ/2}` by the tilt angle restores the standard form, and the
//! resulting logarithmic negativity reaches `−log₂(λ₁λ₂)/2`.
//!
//! The shift couples signal and idler, so it has to be applied before the
//! beams are separated.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;

use crate::gaussian::{
    apply_mode_transform, golden_min, minor_axis_angle, pt_symplectic_eigenvalue, rotate_to_plusminus, wrap_half_pi,
    Basis, CovarianceMatrix, ModeTransform,
};
use crate::opo::{output_covariance, tilt_angle, OpoParams};
use crate::{Complex, Error, Result};

/// `M(θ) = [[cos θ/2, i sin θ/2], [i sin θ/2, cos θ/2]]` acting on (A1, A2).
pub fn nonlocal_phase_matrix(theta: f64) -> ModeTransform {
    let (s, c) = (0.5 * theta).sin_cos();
    let m = Matrix2::new(Complex::new(c, 0.0), Complex::new(0.0, s), Complex::new(0.0, s), Complex::new(c, 0.0));
    ModeTransform::new(m).expect("M(θ) is unitary")
}

/// `e^{−iθ/2}·M(θ)`: A₊ untouched, A₋ delayed by θ.
///
/// Differs from [`nonlocal_phase_matrix`] by a common phase on both modes,
/// which is local and leaves every entanglement measure unchanged.
pub fn relative_phase_shift(theta: f64) -> ModeTransform {
    let half = -0.5 * theta;
    ModeTransform::phases(half, half).after(&nonlocal_phase_matrix(theta))
}

/// Output of [`standardize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub covariance: CovarianceMatrix,
    /// Phase shift that was applied, in `(−π/2, π/2]`.
    pub theta: f64,
}

fn anisotropy(block: &Matrix2<f64>) -> f64 {
    (0.5 * (block[(0, 0)] - block[(1, 1)])).hypot(block[(0, 1)])
}

fn in_basis(gamma: &CovarianceMatrix, basis: Basis) -> CovarianceMatrix {
    if gamma.basis() == basis {
        gamma.clone()
    } else {
        rotate_to_plusminus(gamma)
    }
}

/// Phase shift that turns the A₋ minimum-noise axis orthogonal to A₊'s.
///
/// An isotropic A₋ needs no shift; an isotropic A₊ is treated as squeezed
/// along Y, the orientation of the anti-correlated quadratures.
pub fn standardizing_angle(gamma: &CovarianceMatrix) -> f64 {
    let pm = in_basis(gamma, Basis::PlusMinus);
    let (plus, minus) = (pm.block_a(), pm.block_b());
    let scale = pm.entries().amax().max(1.0);
    if anisotropy(&minus) <= 1e-12 * scale {
        return 0.0;
    }
    let theta_plus = if anisotropy(&plus) <= 1e-12 * scale {
        FRAC_PI_2
    } else {
        minor_axis_angle(&plus)
    };
    let theta = wrap_half_pi(minor_axis_angle(&minus) - theta_plus + FRAC_PI_2);
    if theta.abs() < 1e-15 {
        0.0
    } else {
        theta
    }
}

/// Applies [`relative_phase_shift`] with the angle read off the covariance,
/// yielding a state with simultaneously diagonal ±45° blocks. The result is
/// returned in the basis of the input.
pub fn standardize(gamma: &CovarianceMatrix) -> Standardized {
    let theta = standardizing_angle(gamma);
    Standardized {
        covariance: shift(gamma, theta),
        theta,
    }
}

fn shift(gamma: &CovarianceMatrix, theta: f64) -> CovarianceMatrix {
    let ab = in_basis(gamma, Basis::SignalIdler);
    let out = apply_mode_transform(&ab, &relative_phase_shift(theta));
    in_basis(&out, gamma.basis())
}

/// Model covariance at `params` shifted by the closed-form tilt angle.
pub fn standardize_model(params: &OpoParams) -> Result<Standardized> {
    let theta = tilt_angle(params);
    Ok(Standardized {
        covariance: shift(&output_covariance(params)?, theta),
        theta,
    })
}

/// Result of [`optimize_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptimum {
    /// Maximising angle in `(−π, π]`.
    pub theta: f64,
    pub log_negativity: f64,
}

/// Maximises the logarithmic negativity of `M(θ)Γ` over θ by a 1024-point
/// scan of `(−π, π]` refined by golden-section search to 1e−10 rad.
pub fn optimize_numeric(gamma: &CovarianceMatrix) -> NumericOptimum {
    let ab = in_basis(gamma, Basis::SignalIdler);
    // minimising ξ keeps the objective smooth where E_N is clamped at 0
    let xi = |theta: f64| {
        pt_symplectic_eigenvalue(&apply_mode_transform(&ab, &nonlocal_phase_matrix(theta))).unwrap_or(f64::INFINITY)
    };
    const GRID: usize = 1024;
    let step = 2.0 * PI / GRID as f64;
    let mut best = (PI, xi(PI));
    for k in 1..GRID {
        let theta = -PI + k as f64 * step;
        let v = xi(theta);
        if v < best.1 {
            best = (theta, v);
        }
    }
    let (theta, v) = golden_min(xi, best.0 - step, best.0 + step, 1e-10);
    let (theta, v) = if v <= best.1 { (theta, v) } else { best };
    let theta = if theta > PI { theta - 2.0 * PI } else if theta <= -PI { theta + 2.0 * PI } else { theta };
    NumericOptimum {
        theta,
        log_negativity: if v < 1.0 { -v.log2() } else { 0.0 },
    }
}

/// Orientations (rad, from the signal polarization axis) of a λ/4 plate
/// followed by a λ/2 plate that realise `M(θ)` up to output phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveplateSettings {
    pub half_wave_angle: f64,
    pub quarter_wave_angle: f64,
}

fn rotation(a: f64) -> Matrix2<Complex> {
    let (s, c) = a.sin_cos();
    Matrix2::new(Complex::new(c, 0.0), Complex::new(s, 0.0), Complex::new(-s, 0.0), Complex::new(c, 0.0))
}

/// Jones matrix of a retarder of phase `delay` with its fast axis at `angle`.
fn retarder(angle: f64, delay: f64) -> Matrix2<Complex> {
    let d = Matrix2::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::from_polar(1.0, delay));
    rotation(-angle) * d * rotation(angle)
}

impl WaveplateSettings {
    /// Composite Jones matrix, quarter-wave plate first.
    pub fn jones(&self) -> Matrix2<Complex> {
        retarder(self.half_wave_angle, PI) * retarder(self.quarter_wave_angle, FRAC_PI_2)
    }

    /// The plate pair as a mode transform.
    pub fn induced_transform(&self) -> ModeTransform {
        ModeTransform::new(self.jones()).expect("retarders are unitary")
    }

    /// Per-mode phases `(φ₁, φ₂)` with `jones = diag(e^{iφ₁}, e^{iφ₂})·M(θ)`.
    pub fn output_phases(&self, theta: f64) -> (f64, f64) {
        let (j, m) = (self.jones(), *nonlocal_phase_matrix(theta).matrix());
        let d1 = j[(0, 0)] * m[(0, 0)].conj() + j[(0, 1)] * m[(0, 1)].conj();
        let d2 = j[(1, 0)] * m[(1, 0)].conj() + j[(1, 1)] * m[(1, 1)].conj();
        (d1.arg(), d2.arg())
    }
}

/// Plate angles realising `M(θ)`: the λ/4 plate on the polarization axes
/// and the λ/2 plate at θ/4. The composite is `diag(1, −i)·M(θ)`; the
/// extra phase is local.
pub fn waveplate_settings(theta: f64) -> Result<WaveplateSettings> {
    let settings = WaveplateSettings {
        half_wave_angle: theta / 4.0,
        quarter_wave_angle: 0.0,
    };
    let (j, m) = (settings.jones(), *nonlocal_phase_matrix(theta).matrix());
    let (p1, p2) = settings.output_phases(theta);
    let d = Matrix2::new(Complex::from_polar(1.0, p1), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::from_polar(1.0, p2));
    let residual = (j - d * m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(residual <= 1e-9) {
        return Err(Error::NumericFailure(format!("waveplate pair misses M({theta}) by {residual:e}")));
    }
    Ok(settings)
}
