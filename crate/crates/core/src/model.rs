//! Physical couplings and the diagonalizability conditions.
//!
//! Uniaxial anisotropy `-K (n·S)²` with the easy axis along the DM vector
//! only rescales the diagonal of the bosonic Hamiltonian, so it enters every
//! formula through `κ = 1 + 2K/(zJ)`: stage one sees `γ/κ` and stage two sees
//! `Γ = iDγ / (J sqrt(κ² - |γ|²))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Raw couplings in meV, before validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub j: f64,
    pub d: f64,
    pub k: f64,
    pub s: f64,
}

impl Default for Couplings {
    fn default() -> Self {
        Couplings {
            j: 1.0,
            d: 0.0,
            k: 0.0,
            s: 0.5,
        }
    }
}

/// Validated model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    couplings: Couplings,
    lattice: Lattice,
    kappa: f64,
    full_zone_stable: bool,
}

/// Checks `J > 0`, `S > 0`, `D >= 0` and `κ > 0`, and records whether
/// `|κ| > sqrt(1 + D²/J²)` so that both stages are valid over the whole zone.
/// Failing that inequality is not an error.
pub fn validate(lattice: Lattice, couplings: Couplings) -> Result<ModelParams> {
    let Couplings { j, d, k, s } = couplings;
    if ![j, d, k, s].iter().all(|x| x.is_finite()) {
        return Err(Error::validation("couplings must be finite"));
    }
    if j <= 0.0 {
        return Err(Error::validation(format!(
            "exchange J must be positive (antiferromagnetic), got {j}"
        )));
    }
    if s <= 0.0 {
        return Err(Error::validation(format!(
            "spin S must be positive, got {s}"
        )));
    }
    if d < 0.0 {
        return Err(Error::validation(format!(
            "DM strength D is a magnitude and must be >= 0, got {d}"
        )));
    }
    let kappa = 1.0 + 2.0 * k / (lattice.z() as f64 * j);
    if kappa <= 0.0 {
        return Err(Error::validation(format!(
            "anisotropy factor 1 + 2K/(zJ) = {kappa} must be positive"
        )));
    }
    let full_zone_stable = kappa.abs() > (1.0 + (d / j).powi(2)).sqrt();
    Ok(ModelParams {
        couplings,
        lattice,
        kappa,
        full_zone_stable,
    })
}

impl ModelParams {
    pub fn new(lattice: Lattice, couplings: Couplings) -> Result<Self> {
        validate(lattice, couplings)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn j(&self) -> f64 {
        self.couplings.j
    }

    pub fn d(&self) -> f64 {
        self.couplings.d
    }

    pub fn anisotropy(&self) -> f64 {
        self.couplings.k
    }

    pub fn spin(&self) -> f64 {
        self.couplings.s
    }

    pub fn z(&self) -> f64 {
        self.lattice.z() as f64
    }

    pub fn d_over_j(&self) -> f64 {
        self.couplings.d / self.couplings.j
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn full_zone_stable(&self) -> bool {
        self.full_zone_stable
    }

    /// Same model with a different DM strength.
    pub fn with_d(&self, d: f64) -> Result<Self> {
        validate(
            self.lattice.clone(),
            Couplings {
                d,
                ..self.couplings
            },
        )
    }
}

/// `κ² - |γ|²`, factored for accuracy near the zone center.
pub(crate) fn kappa_radicand(kappa: f64, gamma: Complex64) -> f64 {
    let g = gamma.norm();
    (kappa - g) * (kappa + g)
}

/// The stage-two mixing `Γ = iDγ / (J sqrt(κ² - |γ|²))`, or `None` outside
/// the stage-one domain.
pub fn dm_mixing(params: &ModelParams, gamma: Complex64) -> Option<Complex64> {
    let rad = kappa_radicand(params.kappa, gamma);
    if !(rad > 0.0) {
        return None;
    }
    Some(Complex64::i() * gamma * (params.d() / (params.j() * rad.sqrt())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainCheck {
    pub gamma_ok: bool,
    pub big_gamma_ok: bool,
    pub messages: Vec<String>,
}

impl DomainCheck {
    pub fn ok(&self) -> bool {
        self.gamma_ok && self.big_gamma_ok
    }
}

pub fn check_domain(params: &ModelParams, gamma: Complex64) -> DomainCheck {
    let mut messages = Vec::new();
    let ratio = gamma.norm() / params.kappa;
    let gamma_ok = ratio < 1.0;
    if !gamma_ok {
        messages.push(format!(
            "|γ/κ| = {ratio} >= 1: stage one is not diagonalizable"
        ));
    }
    let big_gamma_ok = match dm_mixing(params, gamma) {
        Some(mix) if mix.norm() < 1.0 => true,
        Some(mix) => {
            messages.push(format!(
                "|Γ| = {} >= 1: DM stage is not diagonalizable",
                mix.norm()
            ));
            false
        }
        None => false,
    };
    DomainCheck {
        gamma_ok,
        big_gamma_ok,
        messages,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeKind;

    fn cubic() -> Lattice {
        Lattice::preset(LatticeKind::SimpleCubic).unwrap()
    }

    fn params(d: f64, k: f64) -> ModelParams {
        validate(
            cubic(),
            Couplings {
                j: 1.0,
                d,
                k,
                s: 0.5,
            },
        )
        .unwrap()
    }

    #[test]
    fn kappa_and_stability_flag() {
        let p = params(0.0, 0.0);
        assert_eq!(p.kappa(), 1.0);
        assert!(!p.full_zone_stable());

        let p = params(0.1, 0.015);
        assert!((p.kappa() - 1.005).abs() < 1e-15);
        assert!(p.full_zone_stable());
    }

    #[test]
    fn rejects_bad_couplings() {
        let bad = |c: Couplings| matches!(validate(cubic(), c), Err(Error::Validation(_)));
        assert!(bad(Couplings {
            j: -1.0,
            ..Couplings::default()
        }));
        assert!(bad(Couplings {
            j: 0.0,
            ..Couplings::default()
        }));
        assert!(bad(Couplings {
            s: 0.0,
            ..Couplings::default()
        }));
        assert!(bad(Couplings {
            d: -0.1,
            ..Couplings::default()
        }));
        assert!(bad(Couplings {
            k: -3.0,
            ..Couplings::default()
        }));
        assert!(bad(Couplings {
            j: f64::NAN,
            ..Couplings::default()
        }));
    }

    #[test]
    fn kappa_monotone_in_anisotropy() {
        let ks = [-0.5, -0.1, 0.0, 1e-5, 0.015, 0.3, 2.0];
        let kappas: Vec<f64> = ks.iter().map(|&k| params(0.0, k).kappa()).collect();
        assert!(kappas.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn domain_examples() {
        let c = check_domain(&params(0.0, 0.0), Complex64::new(0.999, 0.0));
        assert!(c.gamma_ok && c.big_gamma_ok);

        // 0.96² = 0.9216 exceeds 1/1.09 = 0.91743
        let c = check_domain(&params(0.3, 0.0), Complex64::new(0.96, 0.0));
        assert!(c.gamma_ok);
        assert!(!c.big_gamma_ok);
        assert_eq!(c.messages.len(), 1);

        let c = check_domain(&params(0.1, 0.015), Complex64::new(1.0, 0.0));
        assert!(c.ok());
    }

    #[test]
    fn pure_heisenberg_reduces_to_gamma_condition() {
        let p = params(0.0, 0.0);
        for i in 0..=1000 {
            let g = i as f64 / 1000.0 * 1.2;
            let c = check_domain(&p, Complex64::new(g, 0.0));
            assert_eq!(c.ok(), g < 1.0, "at |γ| = {g}");
        }
    }

    #[test]
    fn full_zone_stability_covers_unit_disc() {
        for (d, k) in [(0.1, 0.015), (0.3, 0.2), (0.0, 1e-5), (0.5, 1.0)] {
            let p = params(d, k);
            assert!(p.full_zone_stable());
            for i in 0..=2000 {
                let g = i as f64 / 2000.0;
                let c = check_domain(&p, Complex64::from_polar(g, 0.37 * i as f64));
                assert!(c.ok(), "D={d} K={k} |γ|={g}");
            }
        }
    }

    #[test]
    fn mixing_vanishes_without_dm() {
        let p = params(0.0, 0.0);
        assert_eq!(dm_mixing(&p, Complex64::new(0.7, 0.1)).unwrap().norm(), 0.0);
        assert!(dm_mixing(&p, Complex64::new(1.0, 0.0)).is_none());
    }
}
