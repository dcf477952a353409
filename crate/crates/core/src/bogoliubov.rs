//! The two Bogoliubov stages, their squeeze parameters and the magnon
//! dispersions.
//!
//! Both stages diagonalize a pair Hamiltonian `x·(mode mode) + h.c.` relative
//! to a unit diagonal, so they share one coefficient map with coupling
//! `x = γ/κ` (sublattice → Heisenberg eigenmodes) or `x = Γ` (Heisenberg →
//! full eigenmodes). `u` and `η` are taken real and positive; all phase
//! content lives in `v` and `ζ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dm_mixing, kappa_radicand, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageCoeffs {
    /// `|u|²` (or `|η|²`).
    pub u_sq: f64,
    /// `|v|²` (or `|ζ|²`).
    pub v_sq: f64,
    /// `v / u*` (or `ζ / η*`).
    pub ratio: Complex64,
    pub u: f64,
    pub v: Complex64,
    /// The dimensionless pair coupling the stage diagonalizes.
    pub coupling: Complex64,
}

impl StageCoeffs {
    fn from_coupling(x: Complex64) -> Option<Self> {
        let x_sq = x.norm_sqr();
        if !(x_sq < 1.0) {
            return None;
        }
        let root = (1.0 - x_sq).sqrt();
        // 1/(2 root) - 1/2 rewritten without cancellation
        let v_sq = x_sq / (2.0 * root * (1.0 + root));
        let u_sq = 1.0 + v_sq;
        // -(1 - root)/x == -conj(x)/(1 + root)
        let ratio = -x.conj() / (1.0 + root);
        let u = u_sq.sqrt();
        Some(StageCoeffs {
            u_sq,
            v_sq,
            ratio,
            u,
            v: ratio * u,
            coupling: x,
        })
    }

    /// Identity transformation.
    pub fn identity() -> Self {
        Self::from_coupling(Complex64::new(0.0, 0.0)).expect("zero coupling is valid")
    }
}

/// Sublattice `(a, b)` → Heisenberg eigenmodes `(α, β)`.
pub fn stage1(gamma: Complex64, kappa: f64) -> Result<StageCoeffs> {
    StageCoeffs::from_coupling(gamma / kappa).ok_or_else(|| {
        Error::domain(format!(
            "|γ/κ| = {} >= 1 at γ = {gamma}: sublattice modes cannot be diagonalized",
            gamma.norm() / kappa
        ))
    })
}

/// Second stage together with the mixing `Γ` it diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DmStage {
    pub coeffs: StageCoeffs,
    pub mixing: Complex64,
}

/// Heisenberg eigenmodes `(α, β)` → full eigenmodes `(α̃, β̃)`.
pub fn stage2(gamma: Complex64, params: &ModelParams) -> Result<DmStage> {
    let mixing = dm_mixing(params, gamma).ok_or_else(|| {
        Error::domain(format!("|γ/κ| >= 1 at γ = {gamma}: DM mixing is undefined"))
    })?;
    let coeffs = StageCoeffs::from_coupling(mixing).ok_or_else(|| {
        Error::domain(format!(
            "|Γ| = {} >= 1 at γ = {gamma}: DM stage cannot be diagonalized",
            mixing.norm()
        ))
    })?;
    Ok(DmStage { coeffs, mixing })
}

/// `zSJ sqrt(κ² - |γ|²)` in meV.
pub fn dispersion_heisenberg(params: &ModelParams, gamma: Complex64) -> Result<f64> {
    let rad = kappa_radicand(params.kappa(), gamma);
    if rad < 0.0 {
        return Err(Error::domain(format!(
            "|γ| = {} exceeds κ = {}: Heisenberg dispersion is imaginary",
            gamma.norm(),
            params.kappa()
        )));
    }
    Ok(params.z() * params.spin() * params.j() * rad.sqrt())
}

/// `zS sqrt(J²(κ² - |γ|²) - D²|γ|²)` in meV.
pub fn dispersion_full(params: &ModelParams, gamma: Complex64) -> Result<f64> {
    let dj = params.d_over_j();
    let rad = kappa_radicand(params.kappa(), gamma) - dj * dj * gamma.norm_sqr();
    if rad < 0.0 {
        return Err(Error::domain(format!(
            "negative radicand {rad} in the full dispersion at γ = {gamma}"
        )));
    }
    Ok(params.z() * params.spin() * params.j() * rad.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeBasis {
    /// Ground state written in the sublattice modes, Heisenberg part only.
    AbHeisenberg,
    /// Full ground state written in the Heisenberg eigenmodes.
    AlphabetaDm,
    /// Full ground state written in the sublattice modes.
    AbTotal,
}

/// A two-mode generalized coherent state `Σ e^{inφ} tanhⁿr |n,n⟩ / cosh r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    pub r: f64,
    pub phi: f64,
    pub basis: ModeBasis,
}

impl SqueezeParams {
    pub fn tanh_r(&self) -> f64 {
        self.r.tanh()
    }

    /// `e^{iφ} tanh r`.
    pub fn amplitude_ratio(&self) -> Complex64 {
        Complex64::from_polar(self.r.tanh(), self.phi)
    }
}

/// Maps an angle onto `(-π, π]`.
pub fn normalize_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// `arg` with `arg 0 := 0`, on `(-π, π]`.
fn arg0(z: Complex64) -> f64 {
    if z.norm_sqr() == 0.0 {
        0.0
    } else {
        normalize_phase(z.arg())
    }
}

/// Closed phase law of stage one: `π - arg γ`.
pub fn phase_law_stage1(gamma: Complex64) -> f64 {
    normalize_phase(PI - arg0(gamma))
}

/// Closed phase law of stage two: `π/2 - arg γ`.
pub fn phase_law_stage2(gamma: Complex64) -> f64 {
    normalize_phase(PI / 2.0 - arg0(gamma))
}

/// Closed phase law of the composite state: `π - arg[γ (1 + iD/J)]`.
pub fn phase_law_total(gamma: Complex64, d_over_j: f64) -> f64 {
    normalize_phase(PI - arg0(gamma * Complex64::new(1.0, d_over_j)))
}

/// `r = artanh|ratio|`, `φ = arg(ratio)`. At `ratio = 0` the phase is
/// continued from the phase law, `π - arg(coupling)` with `arg 0 = 0`.
pub fn squeeze_params_stage(coeffs: &StageCoeffs, basis: ModeBasis) -> SqueezeParams {
    let phi = if coeffs.ratio.norm_sqr() == 0.0 {
        normalize_phase(PI - arg0(coeffs.coupling))
    } else {
        normalize_phase(coeffs.ratio.arg())
    };
    SqueezeParams {
        r: coeffs.v_sq.sqrt().asinh(),
        phi,
        basis,
    }
}

/// Squeeze parameters of the full ground state in the sublattice modes,
/// `e^{iφ̂} tanh r̂ = (v η* + u ζ) / (u* η* + v* ζ)`.
pub fn composite_squeeze(s1: &StageCoeffs, s2: &StageCoeffs) -> Result<SqueezeParams> {
    let (u, v) = (Complex64::new(s1.u, 0.0), s1.v);
    let (eta, zeta) = (Complex64::new(s2.u, 0.0), s2.v);
    let q = (v * eta.conj() + u * zeta) / (u.conj() * eta.conj() + v.conj() * zeta);
    let t = q.norm();
    if !(t < 1.0) {
        return Err(Error::domain(format!(
            "composite squeeze ratio |q| = {t} >= 1"
        )));
    }
    let phi = if t == 0.0 {
        normalize_phase(PI - arg0(s1.coupling))
    } else {
        normalize_phase(q.arg())
    };
    Ok(SqueezeParams {
        r: t.atanh(),
        phi,
        basis: ModeBasis::AbTotal,
    })
}
