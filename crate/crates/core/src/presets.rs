//! Built-in material presets.

use serde::Serialize;

use crate::lattice::LatticeKind;
use crate::model::Couplings;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialPreset {
    pub name: &'static str,
    /// `None` when the couplings must come from the user.
    pub lattice: Option<LatticeKind>,
    pub couplings: Option<Couplings>,
    pub note: &'static str,
}

pub fn material_presets() -> Vec<MaterialPreset> {
    vec![
        MaterialPreset {
            name: "SrMnO3",
            lattice: Some(LatticeKind::SimpleCubic),
            couplings: Some(Couplings {
                j: 17.1,
                d: 0.0,
                k: 0.0,
                s: 1.5,
            }),
            note: "perovskite, nearest-neighbor Heisenberg exchange only",
        },
        MaterialPreset {
            name: "La2CuO4",
            lattice: None,
            couplings: None,
            note: "DM antiferromagnet; supply lattice, J_meV and D_meV",
        },
        MaterialPreset {
            name: "FeBO3",
            lattice: None,
            couplings: None,
            note: "DM antiferromagnet; supply lattice, J_meV and D_meV",
        },
        MaterialPreset {
            name: "CoCO3",
            lattice: None,
            couplings: None,
            note: "DM antiferromagnet; supply lattice, J_meV and D_meV",
        },
    ]
}

pub fn find_material(name: &str) -> Option<MaterialPreset> {
    material_presets()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}
