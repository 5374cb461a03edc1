//! Quantum noise of a self-phase-locked type-II OPO below threshold.
//!
//! The intracavity quarter-wave plate, rotated by ρ, couples signal and idler
//! linearly with strength `c = 2ρ/κ′`. The operating point is the one with
//! detunings `Δ₁ = Δ₂ = 2ρ` and matched birefringent phases; no other
//! detuning is representable.
//!
//! Quadratures follow the usual convention for this system: `p₁ = p₁(π/2)`,
//! `q₁ = p₁(π)`, `p₂ = p₂(-π/2)`, `q₂ = p₂(0)`, and covariances use the
//! ordering `(p₁, q₁, p₂, q₂)`.
//!
//! Two independent routes produce the output covariance: closed-form
//! spectra ([`single_mode_components`], [`sum_mode_spectra`],
//! [`diff_mode_spectra`]) and a direct solve of the Fourier-domain Langevin
//! system ([`transfer_matrix_oracle`]). The solve is the ground truth.

use nalgebra::{Matrix2, Matrix4, SMatrix};

use crate::gaussian::{minor_axis_angle, Basis, CovarianceMatrix};
use crate::{Complex, Error, Result};

/// Largest accepted pump parameter.
pub const SIGMA_MAX: f64 = 1.0 - 1e-9;

/// Operating point of the OPO.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpoParams {
    sigma: f64,
    c: f64,
    omega: f64,
    kappa: f64,
    kappa_prime: f64,
    rho: Option<f64>,
}

impl OpoParams {
    /// * `sigma`: pump amplitude over threshold amplitude, in `[0, 1 - 1e-9]`.
    /// * `c`: coupling `2ρ/κ′`.
    /// * `omega`: noise frequency over the cavity bandwidth, `≥ 0`.
    /// * `kappa`, `kappa_prime`: coupler and total amplitude losses,
    ///   `0 < κ ≤ κ′ < 1`.
    pub fn new(sigma: f64, c: f64, omega: f64, kappa: f64, kappa_prime: f64) -> Result<Self> {
        let p = Self {
            sigma,
            c,
            omega,
            kappa,
            kappa_prime,
            rho: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Operating point with the coupling derived from the plate angle ρ (rad).
    pub fn from_plate_angle(sigma: f64, rho: f64, omega: f64, kappa: f64, kappa_prime: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidParams(format!("plate angle must be finite, got {rho}")));
        }
        let mut p = Self::new(sigma, 2.0 * rho / kappa_prime, omega, kappa, kappa_prime)?;
        p.rho = Some(rho);
        Ok(p)
    }

    /// Lossless cavity (κ = κ′) with the coupler loss set to 0.03.
    pub fn lossless(sigma: f64, c: f64, omega: f64) -> Result<Self> {
        Self::new(sigma, c, omega, 0.03, 0.03)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=SIGMA_MAX).contains(&self.sigma) {
            return bad(format!("sigma must lie in [0, {SIGMA_MAX}] (below threshold), got {}", self.sigma));
        }
        if !self.c.is_finite() {
            return bad(format!("coupling must be finite, got {}", self.c));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return bad(format!("omega must be finite and non-negative, got {}", self.omega));
        }
        if !(self.kappa > 0.0 && self.kappa <= self.kappa_prime && self.kappa_prime < 1.0) {
            return bad(format!(
                "losses must satisfy 0 < kappa <= kappa_prime < 1, got kappa={} kappa_prime={}",
                self.kappa, self.kappa_prime
            ));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn kappa_prime(&self) -> f64 {
        self.kappa_prime
    }

    /// Plate angle, when the parameters were built from it.
    pub fn rho(&self) -> Option<f64> {
        self.rho
    }

    /// Internal loss μ = κ′ − κ.
    pub fn mu(&self) -> f64 {
        self.kappa_prime - self.kappa
    }

    /// Escape efficiency κ/κ′.
    pub fn escape_ratio(&self) -> f64 {
        self.kappa / self.kappa_prime
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::new(self.sigma, c, self.omega, self.kappa, self.kappa_prime)
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(sigma, self.c, self.omega, self.kappa, self.kappa_prime)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.sigma, self.c, omega, self.kappa, self.kappa_prime)
    }

    /// `16Ω² + (4Ω² − 4c² + σ² − 1)²`, the squared modulus of the
    /// determinant of the difference-mode system.
    fn diff_denominator(&self) -> f64 {
        let w2 = 4.0 * self.omega * self.omega;
        let x = w2 - 4.0 * self.c * self.c + self.sigma * self.sigma - 1.0;
        4.0 * w2 + x * x
    }
}

/// Phase-dependent noise of one mode:
/// `S(φ) = s_p cos²φ + s_q sin²φ + cross · sin 2φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseEllipse {
    pub s_p: f64,
    pub s_q: f64,
    /// Covariance of the two quadratures.
    pub cross: f64,
    /// Angle in `(-π/2, π/2]` of the minimum-noise quadrature.
    pub theta: f64,
}

impl NoiseEllipse {
    pub fn from_components(s_p: f64, s_q: f64, cross: f64) -> Self {
        let theta = minor_axis_angle(&Matrix2::new(s_p, cross, cross, s_q));
        Self { s_p, s_q, cross, theta }
    }

    /// Ellipse of a 2×2 covariance block.
    pub fn from_block(block: &Matrix2<f64>) -> Self {
        Self::from_components(block[(0, 0)], block[(1, 1)], 0.5 * (block[(0, 1)] + block[(1, 0)]))
    }

    pub fn variance_at(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.s_p * c * c + self.s_q * s * s + self.cross * (2.0 * phi).sin()
    }

    fn radius(&self) -> f64 {
        (0.5 * (self.s_p - self.s_q)).hypot(self.cross)
    }

    /// Smallest eigenvalue of `[[s_p, cross], [cross, s_q]]`.
    pub fn min_variance(&self) -> f64 {
        0.5 * (self.s_p + self.s_q) - self.radius()
    }

    pub fn max_variance(&self) -> f64 {
        0.5 * (self.s_p + self.s_q) + self.radius()
    }
}

/// Signal (or idler) noise without the plate, phase-insensitive:
/// `1 + 8σ²/((4Ω² + (σ−1)²)(4Ω² + (σ+1)²)) · κ/κ′`.
pub fn standard_opo_spectrum(params: &OpoParams) -> f64 {
    let (s, w2) = (params.sigma, 4.0 * params.omega * params.omega);
    1.0 + 8.0 * s * s / ((w2 + (s - 1.0).powi(2)) * (w2 + (s + 1.0).powi(2))) * params.escape_ratio()
}

/// `α = −8σc / (16Ω² + (4Ω² − 4c² + σ² − 1)²) · κ/κ′`.
fn alpha(params: &OpoParams) -> f64 {
    -8.0 * params.sigma * params.c / params.diff_denominator() * params.escape_ratio()
}

/// Noise ellipse of the signal mode with the plate rotated.
pub fn single_mode_components(params: &OpoParams) -> NoiseEllipse {
    let OpoParams { sigma: s, c, omega, .. } = *params;
    let (w2, c2) = (4.0 * omega * omega, c * c);
    let r = params.escape_ratio();
    let den = params.diff_denominator();
    // The numerator is read as 8σ[σ(…) ∓ c²(…)], with the c² group closed
    // before the denominator; this is the reading that agrees with the
    // transfer-matrix solve.
    let s_p = 1.0
        + 8.0 * s * (s * ((s - 1.0).powi(2) + w2) - c2 * (w2 - 4.0 * (1.0 + c2) + (s + 1.0).powi(2)))
            / ((w2 + (s - 1.0).powi(2)) * den)
            * r;
    let s_q = 1.0
        + 8.0 * s * (s * ((s + 1.0).powi(2) + w2) + c2 * (w2 - 4.0 * (1.0 + c2) + (s - 1.0).powi(2)))
            / ((w2 + (s + 1.0).powi(2)) * den)
            * r;
    NoiseEllipse::from_components(s_p, s_q, alpha(params))
}

pub fn single_mode_spectrum(params: &OpoParams, phi: f64) -> f64 {
    single_mode_components(params).variance_at(phi)
}

/// Variances of the +45° mode, independent of the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumSpectra {
    /// `S_{q₁+q₂}`, always below shot noise for σ > 0.
    pub q_sum: f64,
    /// `S_{p₁+p₂}`.
    pub p_sum: f64,
}

pub fn sum_mode_spectra(params: &OpoParams) -> SumSpectra {
    let (s, w2, r) = (params.sigma, 4.0 * params.omega * params.omega, params.escape_ratio());
    SumSpectra {
        q_sum: 1.0 - 4.0 * s / (w2 + (s + 1.0).powi(2)) * r,
        p_sum: 1.0 + 4.0 * s / (w2 + (s - 1.0).powi(2)) * r,
    }
}

/// Noise ellipse of the −45° mode, tilted by the coupling.
pub fn diff_mode_spectra(params: &OpoParams) -> NoiseEllipse {
    let OpoParams { sigma: s, c, omega, .. } = *params;
    let (w2, c2) = (4.0 * omega * omega, c * c);
    let r = params.escape_ratio();
    // denominator squared: the unsquared form is dimensionally inconsistent
    let den = params.diff_denominator();
    let s_p = 1.0 - 4.0 * s * (w2 - 4.0 * c2 + (s - 1.0).powi(2)) / den * r;
    let s_q = 1.0 + 4.0 * s * (w2 - 4.0 * c2 + (s + 1.0).powi(2)) / den * r;
    NoiseEllipse {
        s_p,
        s_q,
        cross: 2.0 * alpha(params),
        theta: tilt_angle(params),
    }
}

/// Tilt θ of the −45° noise ellipse, `tan 2θ = 4c / (4Ω² − 4c² + σ² + 1)`.
///
/// The branch `θ = ½·atan2(4c, 4Ω² − 4c² + σ² + 1)` is continuous in c,
/// vanishes at c = 0 and approaches ±π/2 for strong coupling. It is the
/// angle of the minimum-noise quadrature of the −45° mode.
pub fn tilt_angle(params: &OpoParams) -> f64 {
    let OpoParams { sigma: s, c, omega, .. } = *params;
    let x = 4.0 * omega * omega - 4.0 * c * c + s * s + 1.0;
    let theta = 0.5 * (4.0 * c).atan2(x);
    // atan2(±0, x>0) can return -0
    if theta == 0.0 {
        0.0
    } else {
        theta
    }
}

/// Output transfer matrix `T(Ω)`: rows `(p₁, p₂, q₁, q₂)` out, columns the
/// eight unit-variance vacuum inputs (four through the coupler, then four
/// through the losses).
pub fn transfer_matrix(params: &OpoParams) -> Result<SMatrix<Complex, 4, 8>> {
    let OpoParams { sigma: s, c, omega, kappa, kappa_prime, .. } = *params;
    let d = Complex::new(1.0, 2.0 * omega);
    let re = |x: f64| Complex::new(x, 0.0);
    #[rustfmt::skip]
    let a = Matrix4::new(
        d,      re(-s), re(c),  re(-c),
        re(-s), d,      re(-c), re(c),
        re(-c), re(c),  d,      re(s),
        re(c),  re(-c), re(s),  d,
    );
    let k_in = (2.0 * kappa).sqrt() / kappa_prime;
    let k_loss = (2.0 * params.mu()).sqrt() / kappa_prime;
    let mut b = SMatrix::<Complex, 4, 8>::zeros();
    for i in 0..4 {
        b[(i, i)] = re(k_in);
        b[(i, i + 4)] = re(k_loss);
    }
    let lu = a.lu();
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::Singular(format!("Langevin system at sigma={s}, c={c}, omega={omega}")))?;
    // p_out = √(2κ) p − p_in
    let mut t = x * re((2.0 * kappa).sqrt());
    for i in 0..4 {
        t[(i, i)] -= re(1.0);
    }
    Ok(t)
}

/// Output covariance from a direct solve of the Fourier-domain Langevin
/// equations, `S = Re[T T†]`, reordered to `(p₁, q₁, p₂, q₂)`.
pub fn transfer_matrix_oracle(params: &OpoParams) -> Result<CovarianceMatrix> {
    let t = transfer_matrix(params)?;
    let s = t * t.adjoint();
    let max_im = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_im > 1e-9 * s.iter().map(|z| z.re.abs()).fold(1.0, f64::max) {
        return Err(Error::NumericFailure(format!("spectral covariance has imaginary part {max_im:e}")));
    }
    // (p₁, p₂, q₁, q₂) → (p₁, q₁, p₂, q₂)
    const ORDER: [usize; 4] = [0, 2, 1, 3];
    let m = Matrix4::from_fn(|i, j| s[(ORDER[i], ORDER[j])].re);
    CovarianceMatrix::symmetrized(m, Basis::SignalIdler)
}

/// Covariance assembled from the closed-form spectra.
///
/// Single-mode blocks come from [`single_mode_components`]; the intermodal
/// block from the sum and difference spectra,
/// `cov(p₁,p₂) = (S_{p₁+p₂} − S_{p₁−p₂})/2` and likewise for q, with
/// `cov(p₁,q₂) = cov(q₁,p₂) = −α`.
pub fn closed_form_covariance(params: &OpoParams) -> Result<CovarianceMatrix> {
    let single = single_mode_components(params);
    let sum = sum_mode_spectra(params);
    let diff = diff_mode_spectra(params);
    let cp = 0.5 * (sum.p_sum - diff.s_p);
    let cq = 0.5 * (sum.q_sum - diff.s_q);
    let a = single.cross;
    CovarianceMatrix::from_rows(
        [
            [single.s_p, a, cp, -a],
            [a, single.s_q, -a, cq],
            [cp, -a, single.s_p, a],
            [-a, cq, a, single.s_q],
        ],
        Basis::SignalIdler,
    )
}

/// Closed-form covariance assembled directly in the ±45° basis: A₊ is
/// `diag(S_{p₁+p₂}, S_{q₁+q₂})`, A₋ the tilted difference ellipse and the
/// two modes are uncorrelated.
///
/// Better conditioned than the signal/idler form near threshold, where the
/// squeezed variance is lost in the rounding of the large single-mode noise.
pub fn plus_minus_covariance(params: &OpoParams) -> Result<CovarianceMatrix> {
    let sum = sum_mode_spectra(params);
    let diff = diff_mode_spectra(params);
    CovarianceMatrix::from_rows(
        [
            [sum.p_sum, 0.0, 0.0, 0.0],
            [0.0, sum.q_sum, 0.0, 0.0],
            [0.0, 0.0, diff.s_p, diff.cross],
            [0.0, 0.0, diff.cross, diff.s_q],
        ],
        Basis::PlusMinus,
    )
}

/// Covariance of the signal/idler output modes (the oracle result).
pub fn output_covariance(params: &OpoParams) -> Result<CovarianceMatrix> {
    transfer_matrix_oracle(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{log_negativity, rotate_to_plusminus};
    use std::f64::consts::FRAC_PI_2;
    use approx::assert_abs_diff_eq;

    fn reference() -> OpoParams {
        OpoParams::lossless(0.9, 1.5, 0.0).unwrap()
    }

    fn experiment(c: f64) -> OpoParams {
        OpoParams::new(0.9, c, 0.1, 0.025, 0.03).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(OpoParams::new(1.0, 0.0, 0.0, 0.03, 0.03).is_err());
        assert!(OpoParams::new(-0.1, 0.0, 0.0, 0.03, 0.03).is_err());
        assert!(OpoParams::new(SIGMA_MAX, 0.0, 0.0, 0.03, 0.03).is_ok());
        assert!(OpoParams::new(0.5, 0.0, -1.0, 0.03, 0.03).is_err());
        assert!(OpoParams::new(0.5, 0.0, 0.0, 0.04, 0.03).is_err());
        assert!(OpoParams::new(0.5, 0.0, 0.0, 0.0, 0.03).is_err());
        assert!(OpoParams::new(0.5, f64::NAN, 0.0, 0.03, 0.03).is_err());
        let p = OpoParams::from_plate_angle(0.9, 0.0225, 0.0, 0.03, 0.03).unwrap();
        assert!((p.c() - 2.0 * 0.0225 / 0.03).abs() < 1e-12);
        assert_eq!(p.rho(), Some(0.0225));
    }

    #[test]
    fn no_pump_gives_vacuum() {
        let p = OpoParams::new(0.0, 1.5, 0.3, 0.025, 0.03).unwrap();
        let e = single_mode_components(&p);
        assert_eq!((e.s_p, e.s_q, e.cross), (1.0, 1.0, 0.0));
        let s = sum_mode_spectra(&p);
        assert_eq!((s.q_sum, s.p_sum), (1.0, 1.0));
        let g = transfer_matrix_oracle(&p).unwrap();
        assert_abs_diff_eq!(g.entries(), &Matrix4::identity(), epsilon = 1e-12);
        assert_eq!(log_negativity(&output_covariance(&p).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_at_reference_point() {
        let e = single_mode_components(&reference());
        assert_abs_diff_eq!(e.s_p, 181.19, epsilon = 0.01);
        assert_abs_diff_eq!(e.s_q, 0.386, epsilon = 0.001);
    }

    #[test]
    fn single_mode_without_plate_is_standard_opo() {
        let p = OpoParams::lossless(0.9, 0.0, 0.0).unwrap();
        let e = single_mode_components(&p);
        let s = 0.9f64;
        let expected = 1.0 + 8.0 * s * s / ((s - 1.0).powi(2) * (s + 1.0).powi(2));
        assert_abs_diff_eq!(e.s_p, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(e.s_q, expected, epsilon = 1e-9);
        assert_eq!(e.cross, 0.0);
        for k in 0..16 {
            let phi = k as f64 * 0.2;
            assert!((single_mode_spectrum(&p, phi) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_minimum_is_ellipse_eigenvalue() {
        let e = single_mode_components(&reference());
        let eig = nalgebra::SymmetricEigen::new(Matrix2::new(e.s_p, e.cross, e.cross, e.s_q));
        let lo = eig.eigenvalues.min();
        assert_abs_diff_eq!(single_mode_spectrum(&reference(), e.theta), lo, epsilon = 1e-9);
        assert_abs_diff_eq!(e.min_variance(), lo, epsilon = 1e-9);
    }

    #[test]
    fn minimal_quadrature_turns_toward_q_with_coupling() {
        let mut last = f64::INFINITY;
        for c in [0.2, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let e = single_mode_components(&OpoParams::lossless(0.9, c, 0.0).unwrap());
            let dist = FRAC_PI_2 - e.theta.abs();
            assert!(dist < last, "c={c}: distance to the q quadrature {dist} did not shrink");
            last = dist;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn sum_mode_examples() {
        let s = sum_mode_spectra(&reference());
        assert_abs_diff_eq!(s.p_sum, 361.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.q_sum, 0.00277, epsilon = 1e-5);
        let s = sum_mode_spectra(&experiment(0.0));
        assert_abs_diff_eq!(s.q_sum, 0.178, epsilon = 0.002);
    }

    #[test]
    fn perfect_anticorrelation_at_threshold() {
        let s = sum_mode_spectra(&OpoParams::lossless(1.0 - 1e-6, 0.7, 0.0).unwrap());
        assert!(s.q_sum < 1e-5);
        for k in 1..100 {
            let p = OpoParams::new(k as f64 / 100.0, 0.0, 0.1, 0.025, 0.03).unwrap();
            assert!(sum_mode_spectra(&p).q_sum < 1.0);
        }
    }

    #[test]
    fn diff_mode_at_reference_point() {
        let e = diff_mode_spectra(&reference());
        assert_abs_diff_eq!(e.s_p, 1.383, epsilon = 0.001);
        assert_abs_diff_eq!(e.s_q, 0.770, epsilon = 0.001);
        assert_abs_diff_eq!(e.cross, -0.256, epsilon = 0.001);
        // tan 2θ = 6/(−9 + 0.81 + 1) = −0.8345…; the continuous branch sits
        // π/2 above the principal value −0.3477
        let tan2 = 6.0 / (-9.0 + 0.81 + 1.0);
        assert_abs_diff_eq!((2.0 * e.theta).tan(), tan2, epsilon = 1e-12);
        assert_abs_diff_eq!(e.theta, 0.5 * tan2.atan() + FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(e.theta - FRAC_PI_2, -0.3477, epsilon = 1e-4);
        assert_abs_diff_eq!(2.0 * e.cross / (e.s_p - e.s_q), tan2, epsilon = 1e-9);
    }

    #[test]
    fn tilt_is_minor_axis_of_diff_mode() {
        for c in [0.1, 0.35, 0.67, 0.68, 0.85, 1.5, 1.8, 4.0] {
            for omega in [0.0, 0.1, 0.5] {
                let p = OpoParams::new(0.9, c, omega, 0.025, 0.03).unwrap();
                let e = diff_mode_spectra(&p);
                let from_block = NoiseEllipse::from_components(e.s_p, e.s_q, e.cross);
                assert_abs_diff_eq!(from_block.theta, e.theta, epsilon = 1e-9);
                assert_abs_diff_eq!(e.variance_at(e.theta), e.min_variance(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn tilt_is_zero_without_plate_and_continuous() {
        assert_eq!(tilt_angle(&experiment(0.0)), 0.0);
        let e = diff_mode_spectra(&experiment(0.0));
        assert_eq!(e.cross, 0.0);
        // correlated and anti-correlated quadratures orthogonal: A- squeezed on p
        assert!(e.s_p < 1.0 && e.s_q > 1.0);
        let mut prev = 0.0;
        for k in 1..=400 {
            let th = tilt_angle(&experiment(k as f64 * 0.01));
            assert!(th > prev && th - prev < 0.05);
            prev = th;
        }
        assert!(tilt_angle(&experiment(-0.5)) < 0.0);
    }

    #[test]
    fn oracle_at_reference_point() {
        let pm = rotate_to_plusminus(&transfer_matrix_oracle(&reference()).unwrap());
        assert_abs_diff_eq!(pm.get(0, 0), 361.0, epsilon = 361.0 * 5e-3);
        assert_abs_diff_eq!(pm.get(1, 1), 0.00277, epsilon = 0.00277 * 5e-3);
        assert_abs_diff_eq!(pm.get(2, 2), 1.383, epsilon = 1.383 * 5e-3);
        assert_abs_diff_eq!(pm.get(3, 3), 0.770, epsilon = 0.770 * 5e-3);
        assert_abs_diff_eq!(pm.get(2, 3), -0.256, epsilon = 0.256 * 5e-3);
        assert_abs_diff_eq!(pm.get(0, 1), 0.0, epsilon = 1e-12);
        for i in 0..2 {
            for j in 2..4 {
                assert_abs_diff_eq!(pm.get(i, j), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn oracle_matches_closed_form_at_experiment_point() {
        for c in [0.0, 0.35, 0.85, 1.8] {
            let p = experiment(c);
            let a = transfer_matrix_oracle(&p).unwrap();
            let b = closed_form_covariance(&p).unwrap();
            assert_abs_diff_eq!(a.entries(), b.entries(), epsilon = 1e-9);
        }
    }

    #[test]
    fn output_log_negativity_at_reference_point() {
        let en = log_negativity(&output_covariance(&reference()).unwrap()).unwrap();
        assert_abs_diff_eq!(en, 4.06, epsilon = 0.02);
    }

    #[test]
    fn duan_of_model_equals_sum_mode_without_plate() {
        let p = experiment(0.0);
        let g = output_covariance(&p).unwrap();
        let pm = rotate_to_plusminus(&g);
        // Δ over (q₁+q₂)/√2 and (p₁−p₂)/√2
        let delta = 0.5 * (pm.get(1, 1) + pm.get(2, 2));
        assert_abs_diff_eq!(delta, sum_mode_spectra(&p).q_sum, epsilon = 1e-9);
        assert_abs_diff_eq!(crate::gaussian::duan_delta(&g), delta, epsilon = 1e-9);
    }

    #[test]
    fn diff_mode_squeezing_degrades_with_coupling() {
        let grid = [0.0, 0.35, 0.85, 1.5, 1.8, 2.5, 4.0];
        let mins: Vec<f64> = grid
            .iter()
            .map(|&c| diff_mode_spectra(&OpoParams::lossless(0.9, c, 0.0).unwrap()).min_variance())
            .collect();
        for w in mins.windows(2) {
            assert!(w[1] >= w[0], "{mins:?}");
        }
    }

    #[test]
    fn plus_minus_form_matches_rotated_closed_form() {
        for p in [reference(), experiment(0.35), experiment(1.8), OpoParams::new(0.99, 0.85, 0.5, 0.025, 0.03).unwrap()] {
            let a = plus_minus_covariance(&p).unwrap();
            let b = rotate_to_plusminus(&closed_form_covariance(&p).unwrap());
            assert_eq!(a.basis(), b.basis());
            assert!((a.entries() - b.entries()).amax() <= 1e-9 * a.entries().amax());
        }
    }

    #[test]
    fn near_threshold_state_is_pure_in_plus_minus_form() {
        let p = OpoParams::lossless(0.99, 0.0, 0.0).unwrap();
        let (lo, hi) = plus_minus_covariance(&p).unwrap().symplectic_eigenvalues().unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
        // the signal/idler form only resolves ν to its conditioning floor
        let g = output_covariance(&p).unwrap();
        assert!(g.resolution_floor() > 1e-9);
        assert!((g.symplectic_eigenvalues().unwrap().0 - 1.0).abs() <= g.resolution_floor());
    }
}
