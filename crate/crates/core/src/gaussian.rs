//! Two-mode Gaussian spectral covariance matrices and entanglement measures.
//!
//! Quadratures are ordered `(X_A, Y_A, X_B, Y_B)` and normalized so that the
//! vacuum has unit variance on every quadrature. A mode amplitude is
//! `a = (X + iY) / 2`, which fixes how a passive [`ModeTransform`] acts on
//! the real covariance (see [`ModeTransform::real_transform`]).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::format::Real;
use crate::{Complex, Error, Result};

/// Tolerance on the symplectic-eigenvalue physicality gate.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Tolerance on unitarity of a [`ModeTransform`].
pub const UNITARY_TOL: f64 = 1e-12;

/// Quadrature ordering written to JSON.
pub const ORDERING: [&str; 4] = ["XA", "YA", "XB", "YB"];

/// Which pair of modes the covariance describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Signal and idler, `A1` / `A2`.
    SignalIdler,
    /// The ±45° superpositions `A+ = (A1 + A2)/√2`, `A- = (A1 - A2)/√2`.
    PlusMinus,
}

impl Basis {
    pub fn labels(self) -> [&'static str; 2] {
        match self {
            Basis::SignalIdler => ["A1", "A2"],
            Basis::PlusMinus => ["A+", "A-"],
        }
    }

    fn from_labels(a: &str, b: &str) -> Option<Self> {
        match (a, b) {
            ("A1", "A2") => Some(Basis::SignalIdler),
            ("A+", "A-") => Some(Basis::PlusMinus),
            _ => None,
        }
    }

    fn swapped(self) -> Self {
        match self {
            Basis::SignalIdler => Basis::PlusMinus,
            Basis::PlusMinus => Basis::SignalIdler,
        }
    }
}

/// Symmetric, positive-definite, physical 4×4 covariance of two modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: Matrix4<f64>,
    basis: Basis,
}

impl CovarianceMatrix {
    /// Validates `entries` and wraps them.
    ///
    /// Symmetry is checked exactly; positive definiteness by Cholesky; and
    /// both symplectic eigenvalues must be at least `1 - 1e-9`, or
    /// `1 - resolution_floor` for matrices too ill-conditioned to resolve that.
    pub fn new(entries: Matrix4<f64>, basis: Basis) -> Result<Self> {
        Self::with_tolerance(entries, basis, PHYSICAL_TOL)
    }

    fn with_tolerance(entries: Matrix4<f64>, basis: Basis, tol: f64) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if entries != entries.transpose() {
            return Err(Error::InvalidState("matrix is not symmetric".into()));
        }
        if entries.cholesky().is_none() {
            return Err(Error::InvalidState("matrix is not positive definite".into()));
        }
        let gamma = Self { entries, basis };
        let (nu_min, _) = gamma.symplectic_eigenvalues()?;
        if nu_min < 1.0 - tol.max(gamma.resolution_floor()) {
            return Err(Error::InvalidState(format!(
                "symplectic eigenvalue {nu_min} violates the uncertainty principle"
            )));
        }
        Ok(gamma)
    }

    /// Like [`new`](Self::new) after replacing `m` by `(m + mᵀ)/2`.
    pub fn symmetrized(m: Matrix4<f64>, basis: Basis) -> Result<Self> {
        Self::new((m + m.transpose()) * 0.5, basis)
    }

    pub fn from_rows(rows: [[f64; 4]; 4], basis: Basis) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]), basis)
    }

    /// Two vacua.
    pub fn vacuum(basis: Basis) -> Self {
        Self {
            entries: Matrix4::identity(),
            basis,
        }
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn labels(&self) -> [&'static str; 2] {
        self.basis.labels()
    }

    /// γ_A, the covariance of the first mode.
    pub fn block_a(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// γ_B, the covariance of the second mode.
    pub fn block_b(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// σ_AB, the intermodal correlations.
    pub fn block_ab(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    /// Ordinary eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        [ev[0], ev[1], ev[2], ev[3]]
    }

    /// Smallest deviation of a symplectic eigenvalue that the stored entries
    /// can resolve, `16ε·λ_max·√(λ_max/λ_min)`.
    ///
    /// Rounding each entry by `ε·λ_max` moves ν by up to that much times the
    /// squared norm of the diagonalizing symplectic map, about √cond.
    pub fn resolution_floor(&self) -> f64 {
        let ev = self.eigenvalues();
        16.0 * f64::EPSILON * ev[3] * (ev[3] / ev[0]).sqrt()
    }

    /// Symplectic eigenvalues `(ν₋, ν₊)` of the matrix itself.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        williamson_spectrum(&self.entries)
    }

    /// Whether γ_A = γ_B to `rel_tol` relative to the largest entry.
    pub fn is_symmetric_state(&self, rel_tol: f64) -> bool {
        let scale = self.entries.amax().max(1.0);
        (self.block_a() - self.block_b()).amax() <= rel_tol * scale
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_dto()).expect("covariance serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("covariance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Dto {
            ordering: Vec<String>,
            labels: [String; 2],
            matrix: [[f64; 4]; 4],
        }
        let dto: Dto = serde_json::from_str(s)?;
        if dto.ordering != ORDERING {
            return Err(Error::InvalidState(format!(
                "unsupported quadrature ordering {:?}",
                dto.ordering
            )));
        }
        let basis = Basis::from_labels(&dto.labels[0], &dto.labels[1]).ok_or_else(|| {
            Error::InvalidState(format!("unknown mode labels {:?}", dto.labels))
        })?;
        // serialized entries carry 9 significant digits, enough to push a
        // pure state just below the uncertainty bound
        let m = Matrix4::from_fn(|i, j| dto.matrix[i][j]);
        let tol = PHYSICAL_TOL.max(1e-8 * m.amax());
        Self::with_tolerance(m, basis, tol)
    }

    fn to_dto(&self) -> CovarianceDto {
        // entries that vanish exactly in theory come out as rounding noise
        let floor = 1e-13 * self.entries.amax();
        let clean = |x: f64| if x.abs() < floor { 0.0 } else { x };
        CovarianceDto {
            ordering: ORDERING,
            labels: self.basis.labels(),
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| Real(clean(self.entries[(i, j)])))),
        }
    }
}

#[derive(Serialize)]
struct CovarianceDto {
    ordering: [&'static str; 4],
    labels: [&'static str; 2],
    matrix: [[Real; 4]; 4],
}

/// Symplectic spectrum `(ν₋, ν₊)` of a positive-definite matrix, from the
/// singular values of `Γ^{1/2} Ω Γ^{1/2}`, each of which appears twice.
///
/// Unlike the closed form in block determinants this stays accurate when
/// ν₋ ≈ ν₊, as for pure states with large entries.
pub fn williamson_spectrum(m: &Matrix4<f64>) -> Result<(f64, f64)> {
    let eig = SymmetricEigen::new(*m);
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidState("matrix is not positive definite".into()));
    }
    let root = eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    #[rustfmt::skip]
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    );
    let k = root * omega * root;
    let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| a.total_cmp(b));
    Ok((0.5 * (sv[0] + sv[1]), 0.5 * (sv[2] + sv[3])))
}

/// ξ, the smallest symplectic eigenvalue of the partially transposed
/// covariance. The state is entangled iff ξ < 1.
pub fn pt_symplectic_eigenvalue(gamma: &CovarianceMatrix) -> Result<f64> {
    let d = gamma.block_a().determinant() + gamma.block_b().determinant()
        - 2.0 * gamma.block_ab().determinant();
    let det = gamma.determinant();
    let disc = d * d - 4.0 * det;
    if disc < -PHYSICAL_TOL {
        return Err(Error::InvalidState(format!("negative discriminant {disc}")));
    }
    let root = disc.max(0.0).sqrt();
    // ξ² = (D - √(D² - 4 det Γ))/2 written as 2 det Γ / (D + √…)
    let denom = d + root;
    if denom <= 0.0 || det <= 0.0 {
        return Err(Error::InvalidState("ξ² is not positive".into()));
    }
    let xi_sq = 2.0 * det / denom;
    Ok(xi_sq.sqrt())
}

/// `E_N = max(0, -log₂ ξ)` in ebits.
pub fn log_negativity(gamma: &CovarianceMatrix) -> Result<f64> {
    let xi = pt_symplectic_eigenvalue(gamma)?;
    Ok(if xi < 1.0 { -xi.log2() } else { 0.0 })
}

/// Largest logarithmic negativity reachable by passive operations,
/// `-log₂(λ₁λ₂)/2` over the two smallest ordinary eigenvalues, floored at 0.
pub fn max_log_negativity(gamma: &CovarianceMatrix) -> f64 {
    let ev = gamma.eigenvalues();
    (-(ev[0] * ev[1]).log2() / 2.0).max(0.0)
}

/// Half-sum Δ of two squeezed variances.
pub fn duan_inseparability(v_plus_squeezed: f64, v_minus_squeezed: f64) -> Result<f64> {
    if !(v_plus_squeezed > 0.0 && v_minus_squeezed > 0.0) {
        return Err(Error::Domain(format!(
            "variances must be positive, got ({v_plus_squeezed}, {v_minus_squeezed})"
        )));
    }
    Ok(0.5 * (v_plus_squeezed + v_minus_squeezed))
}

/// Duan–Simon Δ of a covariance: the smallest half-sum
/// `[V_{A+}(φ) + V_{A-}(φ + π/2)]/2` over a common analysis angle φ.
///
/// The variances are taken in the ±45° basis, so for a state produced in the
/// signal/idler basis it is rotated first.
pub fn duan_delta(gamma: &CovarianceMatrix) -> f64 {
    let pm = match gamma.basis() {
        Basis::PlusMinus => gamma.clone(),
        Basis::SignalIdler => rotate_to_plusminus(gamma),
    };
    let p = pm.block_a();
    let m = pm.block_b();
    // V(φ) = (a+d)/2 + (a-d)/2 cos2φ + b sin2φ; the A- term has φ → φ + π/2
    let mean = 0.5 * (p[(0, 0)] + p[(1, 1)] + m[(0, 0)] + m[(1, 1)]);
    let cos_amp = 0.5 * ((p[(0, 0)] - p[(1, 1)]) - (m[(0, 0)] - m[(1, 1)]));
    let sin_amp = p[(0, 1)] - m[(0, 1)];
    0.5 * (mean - cos_amp.hypot(sin_amp))
}

/// `V(X₁|X₂) = V₁ - cov²/V₂`.
pub fn conditional_variance(v1: f64, v2: f64, cov: f64) -> Result<f64> {
    if !(v2 > 0.0) {
        return Err(Error::Domain(format!("conditioning variance must be positive, got {v2}")));
    }
    let v = v1 - cov * cov / v2;
    if v < -PHYSICAL_TOL {
        return Err(Error::InvalidState(format!("negative conditional variance {v}")));
    }
    Ok(v.max(0.0))
}

/// Reid EPR product `V(P₁|P₂)·V(Q₁|Q₂)` minimised over a joint quadrature
/// angle φ applied to both modes, `P = X cos φ + Y sin φ`.
pub fn reid_epr_product(gamma: &CovarianceMatrix) -> Result<f64> {
    let g = gamma.entries();
    let product = |phi: f64| -> Result<f64> {
        let (s, c) = phi.sin_cos();
        // covariance of the rotated quadratures of modes i, j ∈ {0, 2}
        let quad = |i: usize, j: usize, (u, v): (f64, f64)| {
            u * u * g[(i, j)] + u * v * (g[(i, j + 1)] + g[(i + 1, j)]) + v * v * g[(i + 1, j + 1)]
        };
        let p = (c, s);
        let q = (-s, c);
        let vp = conditional_variance(quad(0, 0, p), quad(2, 2, p), quad(0, 2, p))?;
        let vq = conditional_variance(quad(0, 0, q), quad(2, 2, q), quad(0, 2, q))?;
        Ok(vp * vq)
    };

    // the product has period π/2 in φ
    const GRID: usize = 720;
    let step = PI / GRID as f64;
    let mut best = (0.0, product(0.0)?);
    for k in 1..GRID {
        let phi = k as f64 * step;
        let v = product(phi)?;
        if v < best.1 {
            best = (phi, v);
        }
    }
    let (_, refined) = golden_min(|x| product(x).unwrap_or(f64::INFINITY), best.0 - step, best.0 + step, 1e-8);
    Ok(refined.min(best.1))
}

/// Golden-section minimisation on `[a, b]`; returns `(x, f(x))`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Entanglement of formation of a separable-or-better symmetric state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eof {
    pub ebits: f64,
    /// Δ ≥ 1: no inseparability certified, `ebits` reported as 0.
    pub separable: bool,
}

/// EOF of a symmetric Gaussian state from its inseparability value Δ:
/// `c₊log₂c₊ - c₋log₂c₋` with `c± = (Δ^{-1/2} ± Δ^{1/2})²/4`.
pub fn eof_symmetric(delta: f64) -> Result<Eof> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("Δ must be positive and finite, got {delta}")));
    }
    if delta >= 1.0 {
        return Ok(Eof {
            ebits: 0.0,
            separable: delta > 1.0,
        });
    }
    let (lo, hi) = (delta.sqrt(), delta.sqrt().recip());
    let c_plus = (hi + lo).powi(2) / 4.0;
    let c_minus = (hi - lo).powi(2) / 4.0;
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    Ok(Eof {
        ebits: xlog(c_plus) - xlog(c_minus),
        separable: false,
    })
}

/// The ±45° rotation `X± = (X_A ± X_B)/√2`, `Y± = (Y_A ± Y_B)/√2`.
/// It is its own inverse.
pub fn rotate_to_plusminus(gamma: &CovarianceMatrix) -> CovarianceMatrix {
    let h = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let r = Matrix4::new(
        h, 0.0,  h, 0.0,
        0.0, h, 0.0,  h,
        h, 0.0, -h, 0.0,
        0.0, h, 0.0, -h,
    );
    let m = r * gamma.entries() * r.transpose();
    CovarianceMatrix {
        entries: (m + m.transpose()) * 0.5,
        basis: gamma.basis().swapped(),
    }
}

/// Passive (photon-number preserving) transform of the two mode amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTransform {
    matrix: Matrix2<Complex>,
}

impl ModeTransform {
    pub fn new(matrix: Matrix2<Complex>) -> Result<Self> {
        let err = (matrix * matrix.adjoint() - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(err <= UNITARY_TOL) {
            return Err(Error::Domain(format!("mode transform is not unitary (error {err:e})")));
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix2::identity(),
        }
    }

    /// Independent phase shifts `diag(e^{iφ_A}, e^{iφ_B})`; a local operation.
    pub fn phases(phi_a: f64, phi_b: f64) -> Self {
        Self {
            matrix: Matrix2::new(Complex::from_polar(1.0, phi_a), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::from_polar(1.0, phi_b)),
        }
    }

    /// `(A1, A2) → ((A1 + A2)/√2, (A1 - A2)/√2)`.
    pub fn plus_minus() -> Self {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Self {
            matrix: Matrix2::new(h, h, h, -h),
        }
    }

    pub fn matrix(&self) -> &Matrix2<Complex> {
        &self.matrix
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &ModeTransform) -> ModeTransform {
        ModeTransform {
            matrix: self.matrix * first.matrix,
        }
    }

    /// Real 4×4 action on `(X_A, Y_A, X_B, Y_B)`: each complex entry
    /// `u` becomes the block `[[Re u, -Im u], [Im u, Re u]]`.
    pub fn real_transform(&self) -> Matrix4<f64> {
        let mut s = Matrix4::zeros();
        for j in 0..2 {
            for k in 0..2 {
                let u = self.matrix[(j, k)];
                s[(2 * j, 2 * k)] = u.re;
                s[(2 * j, 2 * k + 1)] = -u.im;
                s[(2 * j + 1, 2 * k)] = u.im;
                s[(2 * j + 1, 2 * k + 1)] = u.re;
            }
        }
        s
    }
}

/// Covariance of the transformed modes, `S Γ Sᵀ` with `S` from
/// [`ModeTransform::real_transform`].
pub fn apply_mode_transform(gamma: &CovarianceMatrix, u: &ModeTransform) -> CovarianceMatrix {
    let s = u.real_transform();
    let m = s * gamma.entries() * s.transpose();
    CovarianceMatrix {
        entries: (m + m.transpose()) * 0.5,
        basis: gamma.basis(),
    }
}

/// Angle in `(-π/2, π/2]` of the minimum-variance direction of a 2×2 block,
/// with `V(φ) = a cos²φ + d sin²φ + b sin 2φ`. Isotropic blocks give 0.
pub fn minor_axis_angle(block: &Matrix2<f64>) -> f64 {
    let (a, b, d) = (block[(0, 0)], block[(0, 1)], block[(1, 1)]);
    let half_diff = 0.5 * (a - d);
    let scale = a.abs().max(d.abs()).max(1.0);
    if half_diff.hypot(b) <= 1e-14 * scale {
        return 0.0;
    }
    let two_phi = (0.0 - b).atan2(-half_diff);
    // atan2 ∈ (-π, π] keeps φ in (-π/2, π/2]
    0.5 * two_phi
}

/// Wraps an angle into `(-π/2, π/2]`.
pub(crate) fn wrap_half_pi(x: f64) -> f64 {
    let mut y = x.rem_euclid(PI);
    if y > FRAC_PI_2 {
        y -= PI;
    }
    y
}

/// Entanglement figures of merit of the signal/idler pair, whatever the
/// basis the covariance is expressed in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub xi: f64,
    pub log_negativity: f64,
    pub max_log_negativity: f64,
    pub duan_delta: f64,
    pub reid_product: f64,
    /// Present only for symmetric states (γ_A = γ_B).
    pub eof: Option<Eof>,
}

impl EntanglementReport {
    pub fn from_covariance(gamma: &CovarianceMatrix) -> Result<Self> {
        let ab = match gamma.basis() {
            Basis::SignalIdler => gamma.clone(),
            Basis::PlusMinus => rotate_to_plusminus(gamma),
        };
        let xi = pt_symplectic_eigenvalue(&ab)?;
        let log_negativity = if xi < 1.0 { -xi.log2() } else { 0.0 };
        let duan = duan_delta(&ab);
        let eof = if ab.is_symmetric_state(1e-9) {
            Some(eof_symmetric(duan)?)
        } else {
            None
        };
        Ok(Self {
            xi,
            log_negativity,
            max_log_negativity: max_log_negativity(&ab),
            duan_delta: duan,
            reid_product: reid_epr_product(&ab)?,
            eof,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "xi": Real(self.xi),
            "log_negativity": Real(self.log_negativity),
            "max_log_negativity": Real(self.max_log_negativity),
            "duan_delta": Real(self.duan_delta),
            "reid_product": Real(self.reid_product),
            "eof": self.eof.map(|e| serde_json::json!({
                "ebits": Real(e.ebits),
                "separable": e.separable,
            })),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Symmetric standard-form state: γ = V·I, σ_AB = diag(cx, cy).
    fn standard_form(v: f64, cx: f64, cy: f64) -> CovarianceMatrix {
        CovarianceMatrix::from_rows(
            [[v, 0.0, cx, 0.0], [0.0, v, 0.0, cy], [cx, 0.0, v, 0.0], [0.0, cy, 0.0, v]],
            Basis::SignalIdler,
        )
        .unwrap()
    }

    /// Two-mode squeezed vacuum with squeezing parameter r.
    fn tmsv(r: f64) -> CovarianceMatrix {
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        standard_form(c, s, -s)
    }

    #[test]
    fn vacuum_is_separable_boundary() {
        let g = CovarianceMatrix::vacuum(Basis::SignalIdler);
        assert_eq!(pt_symplectic_eigenvalue(&g).unwrap(), 1.0);
        assert_eq!(log_negativity(&g).unwrap(), 0.0);
        assert_eq!(max_log_negativity(&g), 0.0);
        assert_abs_diff_eq!(reid_epr_product(&g).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(duan_delta(&g), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tmsv_log_negativity_is_2r_over_ln2() {
        // ξ = e^{-2r} for a pure two-mode squeezed vacuum
        for r in [0.1, 0.5, 1.0, 1.7] {
            let g = tmsv(r);
            assert_abs_diff_eq!(pt_symplectic_eigenvalue(&g).unwrap(), (-2.0 * r).exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(log_negativity(&g).unwrap(), 2.0 * r / 2f64.ln(), epsilon = 1e-10);
            // already in standard form: the passive bound is attained
            assert_abs_diff_eq!(max_log_negativity(&g), log_negativity(&g).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_unphysical_matrices() {
        let mut m = Matrix4::identity() * 0.5;
        assert!(matches!(CovarianceMatrix::new(m, Basis::SignalIdler), Err(Error::InvalidState(_))));
        m = Matrix4::identity();
        m[(0, 1)] = 0.1;
        assert!(CovarianceMatrix::new(m, Basis::SignalIdler).is_err(), "asymmetric");
        m[(1, 0)] = 0.1;
        assert!(CovarianceMatrix::new(m, Basis::SignalIdler).is_err(), "squeezed below vacuum on one axis");
        let neg = -Matrix4::<f64>::identity();
        assert!(CovarianceMatrix::new(neg, Basis::SignalIdler).is_err());
    }

    #[test]
    fn duan_examples() {
        assert_eq!(duan_inseparability(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(duan_inseparability(0.5, 0.5).unwrap(), 0.5);
        let d = duan_inseparability(10f64.powf(-0.47), 10f64.powf(-0.49)).unwrap();
        assert_abs_diff_eq!(d, 0.33, epsilon = 0.01);
        assert!(matches!(duan_inseparability(0.0, 0.5), Err(Error::Domain(_))));
        assert!(duan_inseparability(0.5, -1.0).is_err());
    }

    #[test]
    fn duan_delta_of_standard_form_is_half_sum() {
        let (v, vp, vm) = (4.0, 0.3, 0.4);
        let g = standard_form(v, v - vm, vp - v);
        assert_abs_diff_eq!(duan_delta(&g), 0.5 * (vp + vm), epsilon = 1e-12);
    }

    #[test]
    fn conditional_variance_examples() {
        assert_eq!(conditional_variance(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(conditional_variance(3.0, 3.0, 3.0).unwrap(), 0.0);
        let v = conditional_variance(6.607, 6.607, 6.268).unwrap();
        assert_abs_diff_eq!(v, 0.66, epsilon = 0.02);
        assert!(matches!(conditional_variance(1.0, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(conditional_variance(1.0, 1.0, 2.0), Err(Error::InvalidState(_))));
    }

    #[test]
    fn eof_examples() {
        let one = eof_symmetric(1.0).unwrap();
        assert_eq!(one.ebits, 0.0);
        assert!(!one.separable);
        assert_abs_diff_eq!(eof_symmetric(0.33).unwrap().ebits, 1.1, epsilon = 0.05);
        // frozen from (x+1)log₂(x+1) - x log₂x with x = (1-Δ)²/(4Δ) = 1/8
        assert_abs_diff_eq!(eof_symmetric(0.5).unwrap().ebits, 0.5661656266226015, epsilon = 1e-12);
        let sep = eof_symmetric(1.3).unwrap();
        assert_eq!(sep.ebits, 0.0);
        assert!(sep.separable);
        assert!(matches!(eof_symmetric(0.0), Err(Error::Domain(_))));
        assert!(eof_symmetric(-0.2).is_err());
    }

    #[test]
    fn eof_strictly_decreasing() {
        let grid: Vec<f64> = (1..200).map(|k| k as f64 / 200.0).collect();
        for w in grid.windows(2) {
            assert!(eof_symmetric(w[0]).unwrap().ebits > eof_symmetric(w[1]).unwrap().ebits);
        }
    }

    #[test]
    fn plusminus_involution_and_identity() {
        let g = CovarianceMatrix::vacuum(Basis::SignalIdler);
        let pm = rotate_to_plusminus(&g);
        assert_eq!(pm.basis(), Basis::PlusMinus);
        assert_abs_diff_eq!(pm.entries(), &Matrix4::identity(), epsilon = 1e-15);
        let t = tmsv(0.8);
        let back = rotate_to_plusminus(&rotate_to_plusminus(&t));
        assert_eq!(back.basis(), Basis::SignalIdler);
        assert_abs_diff_eq!(back.entries(), t.entries(), epsilon = 1e-12);
        let rel = (rotate_to_plusminus(&t).determinant() - t.determinant()).abs() / t.determinant();
        assert!(rel < 1e-9);
    }

    #[test]
    fn plusminus_matches_mode_transform() {
        let t = tmsv(0.6);
        let a = rotate_to_plusminus(&t);
        let b = apply_mode_transform(&t, &ModeTransform::plus_minus());
        assert_abs_diff_eq!(a.entries(), b.entries(), epsilon = 1e-12);
    }

    #[test]
    fn mode_transform_rejects_non_unitary() {
        let m = Matrix2::new(Complex::new(1.0, 0.0), Complex::new(0.1, 0.0), Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        assert!(matches!(ModeTransform::new(m), Err(Error::Domain(_))));
    }

    #[test]
    fn local_phases_keep_log_negativity() {
        let t = tmsv(0.9);
        let before = log_negativity(&t).unwrap();
        let after = log_negativity(&apply_mode_transform(&t, &ModeTransform::phases(0.4, 0.4))).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-9);
        let after = log_negativity(&apply_mode_transform(&t, &ModeTransform::phases(-1.1, 0.3))).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-9);
    }

    #[test]
    fn identity_transform_is_noop() {
        let t = tmsv(0.3);
        assert_eq!(apply_mode_transform(&t, &ModeTransform::identity()).entries(), t.entries());
    }

    #[test]
    fn reid_of_standard_form_matches_closed_form() {
        let (v, vp, vm) = (6.607, 0.3388, 0.3236);
        let g = standard_form(v, v - vm, vp - v);
        let closed = (v - (v - vp).powi(2) / v) * (v - (v - vm).powi(2) / v);
        assert_abs_diff_eq!(reid_epr_product(&g).unwrap(), closed, epsilon = 1e-9);
    }

    #[test]
    fn minor_axis() {
        let m = Matrix2::new(2.0, 0.0, 0.0, 1.0);
        assert_abs_diff_eq!(minor_axis_angle(&m), FRAC_PI_2, epsilon = 1e-15);
        let m = Matrix2::new(1.0, 0.0, 0.0, 2.0);
        assert_eq!(minor_axis_angle(&m), 0.0);
        assert_eq!(minor_axis_angle(&Matrix2::identity()), 0.0);
        let m = Matrix2::new(1.5, -0.5, -0.5, 1.5);
        assert_abs_diff_eq!(minor_axis_angle(&m), std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn json_layout() {
        let g = tmsv(0.5);
        let v = g.to_json_value();
        assert_eq!(v["ordering"], serde_json::json!(["XA", "YA", "XB", "YB"]));
        assert_eq!(v["labels"], serde_json::json!(["A1", "A2"]));
        assert_eq!(v["matrix"][0][0], serde_json::json!(1.54308063));
        let back = CovarianceMatrix::from_json(&g.to_json()).unwrap();
        assert_abs_diff_eq!(back.entries(), g.entries(), epsilon = 1e-8);
        assert!(CovarianceMatrix::from_json(r#"{"ordering":["XA","YA","XB","YB"],"labels":["B","C"],"matrix":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).is_err());
    }
}
