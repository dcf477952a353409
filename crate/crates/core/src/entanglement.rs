//! Entropies of entanglement across the three mode bases and per-k reports.

use num_complex::Complex64;
use serde::Serialize;

use crate::bogoliubov::{
    composite_squeeze, dispersion_full, dispersion_heisenberg, squeeze_params_stage, stage1,
    stage2, ModeBasis,
};
use crate::epr::mean_variance;
use crate::error::{Error, Result};
use crate::fock::{apply_linear, reduced_entropy, two_mode_squeezed, CutoffPolicy};
use crate::lattice::{structure_factor, KPoint};
use crate::model::ModelParams;

/// `x log₂ x` with `0 log 0 = 0`.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `cosh²r log₂ cosh²r - sinh²r log₂ sinh²r`, in bits.
pub fn entropy_from_squeeze(r: f64) -> f64 {
    let s = r.sinh().powi(2);
    two_mode_entropy(s)
}

/// `|u|² log₂|u|² - |v|² log₂|v|²` for Bogoliubov moduli with
/// `|u|² - |v|² = 1`.
pub fn entropy_from_moduli(u_sq: f64, v_sq: f64) -> Result<f64> {
    if !(v_sq >= 0.0) || !u_sq.is_finite() {
        return Err(Error::validation(format!(
            "Bogoliubov moduli need |v|² >= 0, got ({u_sq}, {v_sq})"
        )));
    }
    if (u_sq - v_sq - 1.0).abs() > 1e-9 * u_sq.max(1.0) {
        return Err(Error::validation(format!(
            "Bogoliubov moduli violate |u|² - |v|² = 1: ({u_sq}, {v_sq})"
        )));
    }
    Ok(two_mode_entropy(v_sq))
}

/// Entropy of a thermal-like Schmidt spectrum with mean occupation `n`,
/// `(n+1) log₂(n+1) - n log₂ n`, arranged as `log₂(n+1) + n log₂(1 + 1/n)`
/// so that it stays accurate at large `n`.
fn two_mode_entropy(n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    (n.ln_1p() + n * (1.0 / n).ln_1p()) / std::f64::consts::LN_2
}

/// Everything computed for one wave vector (or one `|γ|` abscissa).
/// Entropies are in bits, energies in meV; `None` marks values that diverge
/// or are undefined at this point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub k: Option<KPoint>,
    pub gamma: Complex64,
    pub eps_heisenberg: Option<f64>,
    pub eps_full: Option<f64>,
    pub e0_ab: Option<f64>,
    pub e_alphabeta: Option<f64>,
    pub e_ab: Option<f64>,
    pub e_dm_ab: Option<f64>,
    pub delta: Option<f64>,
    pub epr_uncertainty: Option<f64>,
    pub squeezed: Option<bool>,
    pub diverged: bool,
}

/// Full hierarchy at a lattice wave vector.
pub fn hierarchy(params: &ModelParams, k: &KPoint) -> EntanglementReport {
    let gamma = structure_factor(params.lattice(), k);
    let mut report = hierarchy_at_gamma(params, gamma);
    report.k = Some(k.clone());
    report
}

/// Full hierarchy for a given structure factor value.
pub fn hierarchy_at_gamma(params: &ModelParams, gamma: Complex64) -> EntanglementReport {
    let mut report = EntanglementReport {
        k: None,
        gamma,
        eps_heisenberg: dispersion_heisenberg(params, gamma).ok(),
        eps_full: dispersion_full(params, gamma).ok(),
        e0_ab: None,
        e_alphabeta: None,
        e_ab: None,
        e_dm_ab: None,
        delta: None,
        epr_uncertainty: None,
        squeezed: None,
        diverged: true,
    };
    let Ok(s1) = stage1(gamma, params.kappa()) else {
        return report;
    };
    let e0 = two_mode_entropy(s1.v_sq);
    report.e0_ab = Some(e0);

    let Ok(s2) = stage2(gamma, params) else {
        return report;
    };
    let Ok(hat) = composite_squeeze(&s1, &s2.coeffs) else {
        return report;
    };
    let e_ab = entropy_from_squeeze(hat.r);
    let quad = mean_variance(&hat);
    report.e_alphabeta = Some(two_mode_entropy(s2.coeffs.v_sq));
    report.e_ab = Some(e_ab);
    report.e_dm_ab = Some(e_ab - e0);
    report.delta = Some(quad.delta);
    report.epr_uncertainty = Some(quad.epr_uncertainty);
    report.squeezed = Some(quad.squeezed);
    report.diverged = false;
    report
}

/// Excitations of the Heisenberg ground state in the `(α, β)` eigenmodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Excitation {
    /// `α†|ψ₀⟩`
    Alpha1,
    /// `β†|ψ₀⟩`
    Beta1,
    /// `(α†)²|ψ₀⟩`
    Alpha2,
    /// `(β†)²|ψ₀⟩`
    Beta2,
    /// `α†β†|ψ₀⟩`
    AlphaBeta11,
}

impl Excitation {
    pub const ALL: [Excitation; 5] = [
        Excitation::Alpha1,
        Excitation::Beta1,
        Excitation::Alpha2,
        Excitation::Beta2,
        Excitation::AlphaBeta11,
    ];
}

/// Entropy of entanglement between the sublattice modes of an excited
/// Heisenberg eigenstate, computed numerically in a truncated Fock space.
///
/// `α† = u a† - v* b` and `β† = u b† - v* a` follow from inverting the
/// stage-one transformation.
pub fn excited_state_entropy(
    gamma: Complex64,
    params: &ModelParams,
    excitation: Excitation,
    policy: &CutoffPolicy,
) -> Result<f64> {
    if params.d() != 0.0 {
        return Err(Error::validation(
            "excited-state entropies are defined for the pure Heisenberg model (D = 0)",
        ));
    }
    let s1 = stage1(gamma, params.kappa())?;
    let sq = squeeze_params_stage(&s1, ModeBasis::AbHeisenberg);
    let zero = Complex64::new(0.0, 0.0);
    let u = Complex64::new(s1.u, 0.0);
    let minus_v_conj = -s1.v.conj();
    let alpha_dag = |st| apply_linear(st, u, zero, zero, minus_v_conj);
    let beta_dag = |st| apply_linear(st, zero, minus_v_conj, u, zero);

    let ground = two_mode_squeezed(sq.r, sq.phi, policy)?;
    let state = match excitation {
        Excitation::Alpha1 => alpha_dag(&ground)?,
        Excitation::Beta1 => beta_dag(&ground)?,
        Excitation::Alpha2 => alpha_dag(&alpha_dag(&ground)?)?,
        Excitation::Beta2 => beta_dag(&beta_dag(&ground)?)?,
        Excitation::AlphaBeta11 => alpha_dag(&beta_dag(&ground)?)?,
    };
    Ok(reduced_entropy(&state))
}
