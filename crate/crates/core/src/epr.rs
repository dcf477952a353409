//! Quadrature statistics and EPR-type squeezing diagnostics.
//!
//! Quadratures are `X = (m + m†)/√2`, `P = (m - m†)/(i√2)` for each mode `m`,
//! so the vacuum variance per mode is 1/2 and `Δ` is the mean of the plain
//! variances `Var(X_A - X_B)` and `Var(P_A + P_B)`. With that convention the
//! vacuum sits at `Δ = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bogoliubov::{
    composite_squeeze, normalize_phase, stage1, stage2, ModeBasis, SqueezeParams,
};
use crate::entanglement::xlog2x;
use crate::error::{Error, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureStats {
    pub delta: f64,
    pub epr_uncertainty: f64,
    pub squeezed: bool,
    pub basis: ModeBasis,
}

impl QuadratureStats {
    fn from_delta(delta: f64, basis: ModeBasis) -> Self {
        QuadratureStats {
            delta,
            epr_uncertainty: delta.min(1.0),
            squeezed: delta < 1.0,
            basis,
        }
    }
}

/// `Δ = cosh 2r - sinh 2r cos φ`.
pub fn mean_variance(s: &SqueezeParams) -> QuadratureStats {
    let two_r = 2.0 * s.r;
    let delta = two_r.cosh() - two_r.sinh() * s.phi.cos();
    QuadratureStats::from_delta(delta, s.basis)
}

/// Closed form `(1 + Re g) / sqrt(1 - |g|²)` with `g = γ/κ`, for the
/// Heisenberg ground state in the sublattice modes.
pub fn mean_variance_from_gamma(gamma: Complex64, kappa: f64) -> Result<QuadratureStats> {
    let g = gamma / kappa;
    let g_sq = g.norm_sqr();
    if !(g_sq < 1.0) {
        return Err(Error::domain(format!(
            "|γ/κ| = {} >= 1: quadrature variance diverges",
            g_sq.sqrt()
        )));
    }
    let delta = (1.0 + g.re) / (1.0 - g_sq).sqrt();
    Ok(QuadratureStats::from_delta(delta, ModeBasis::AbHeisenberg))
}

/// Squeezing condition `Re[γ(J + iD)] < sqrt(J²(1 - |γ|²) - |γ|²D²) - J`,
/// valid without anisotropy.
pub fn squeezing_condition_closed(gamma: Complex64, j: f64, d: f64) -> bool {
    let lhs = (gamma * Complex64::new(j, d)).re;
    let rad = j * j * (1.0 - gamma.norm_sqr()) - gamma.norm_sqr() * d * d;
    rad >= 0.0 && lhs < rad.sqrt() - j
}

/// Whether the full ground state is two-mode squeezed in the sublattice
/// modes, `tanh r̂ <= cos φ̂`.
pub fn squeezing_domain_dm(gamma: Complex64, params: &ModelParams) -> Result<bool> {
    let s1 = stage1(gamma, params.kappa())?;
    let s2 = stage2(gamma, params)?;
    let hat = composite_squeeze(&s1, &s2.coeffs)?;
    let squeezed = hat.r.tanh() <= hat.phi.cos();
    if params.anisotropy() == 0.0 {
        let margin = (hat.r.tanh() - hat.phi.cos()).abs();
        debug_assert!(
            margin < 1e-9
                || gamma.norm_sqr() == 0.0
                || squeezed == squeezing_condition_closed(gamma, params.j(), params.d()),
            "squeezing conditions disagree at γ = {gamma}"
        );
    }
    Ok(squeezed)
}

/// Entropy of entanglement of a real-γ two-mode state recovered from its
/// mean variance. The expression is invariant under `Δ → 1/Δ`, so it covers
/// both `φ = 0` and `φ = π`.
pub fn entropy_from_delta(delta: f64, phi: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::validation(format!(
            "Δ must be positive, got {delta}"
        )));
    }
    let phi = normalize_phase(phi);
    if phi.abs() > 1e-9 && (phi - PI).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "entropy from Δ needs φ = 0 or π (real γ), got {phi}"
        )));
    }
    let root = 2.0 * delta.sqrt();
    let plus = ((1.0 + delta) / root).powi(2);
    let minus = ((1.0 - delta) / root).powi(2);
    Ok(xlog2x(plus) - xlog2x(minus))
}
