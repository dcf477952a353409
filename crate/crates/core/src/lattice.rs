//! Bipartite nearest-neighbor lattices and their structure factor.
//!
//! Wave vectors are expressed in reduced coordinates: component `i` is
//! `k·a_i` for the primitive lattice vector `a_i`, so every zone spans
//! `[-π, π)` per axis. Neighbor vectors are given in fractional coordinates
//! of the same primitive vectors (lattice constant `a = 1`). For the chain,
//! square and simple cubic lattices this coincides with cartesian units.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type PresetTable = (Vec<[f64; 3]>, Vec<(&'static str, [f64; 3])>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Chain,
    Square,
    SimpleCubic,
    Honeycomb,
    Custom,
}

impl LatticeKind {
    pub const PRESETS: [LatticeKind; 4] = [
        LatticeKind::Chain,
        LatticeKind::Square,
        LatticeKind::SimpleCubic,
        LatticeKind::Honeycomb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Chain => "chain",
            LatticeKind::Square => "square",
            LatticeKind::SimpleCubic => "simple_cubic",
            LatticeKind::Honeycomb => "honeycomb",
            LatticeKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KPoint {
    pub coords: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl KPoint {
    pub fn new(coords: [f64; 3]) -> Self {
        KPoint {
            coords,
            label: None,
        }
    }

    pub fn labeled(coords: [f64; 3], label: impl Into<String>) -> Self {
        KPoint {
            coords,
            label: Some(label.into()),
        }
    }

    pub fn neg(&self) -> KPoint {
        KPoint::new([-self.coords[0], -self.coords[1], -self.coords[2]])
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    kind: LatticeKind,
    name: String,
    neighbors: Vec<[f64; 3]>,
    symmetry_points: BTreeMap<String, [f64; 3]>,
    dim: usize,
    inversion_symmetric: bool,
}

impl Lattice {
    pub fn preset(kind: LatticeKind) -> Result<Self> {
        let (neighbors, points): PresetTable = match kind {
            LatticeKind::Chain => (
                vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
                vec![("G", [0.0; 3]), ("X", [PI, 0.0, 0.0])],
            ),
            LatticeKind::Square => (
                vec![
                    [1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0],
                    [0.0, -1.0, 0.0],
                ],
                vec![("G", [0.0; 3]), ("X", [PI, 0.0, 0.0]), ("M", [PI, PI, 0.0])],
            ),
            LatticeKind::SimpleCubic => (
                vec![
                    [1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0],
                    [0.0, -1.0, 0.0],
                    [0.0, 0.0, 1.0],
                    [0.0, 0.0, -1.0],
                ],
                vec![
                    ("G", [0.0; 3]),
                    ("X", [PI, 0.0, 0.0]),
                    ("M", [PI, PI, 0.0]),
                    ("R", [PI, PI, PI]),
                ],
            ),
            // A-site to its three B neighbors, in fractional coordinates of
            // a1 = d1 - d2, a2 = d1 - d3.
            LatticeKind::Honeycomb => (
                vec![
                    [1.0 / 3.0, 1.0 / 3.0, 0.0],
                    [-2.0 / 3.0, 1.0 / 3.0, 0.0],
                    [1.0 / 3.0, -2.0 / 3.0, 0.0],
                ],
                vec![
                    ("G", [0.0; 3]),
                    ("K", [2.0 * PI / 3.0, -2.0 * PI / 3.0, 0.0]),
                    ("M", [PI, 0.0, 0.0]),
                ],
            ),
            LatticeKind::Custom => {
                return Err(Error::validation(
                    "custom lattices need explicit neighbor vectors",
                ))
            }
        };
        let points = points
            .into_iter()
            .map(|(l, p)| (l.to_string(), p))
            .collect();
        Self::build(kind, kind.name().to_string(), neighbors, points)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let kind = LatticeKind::PRESETS
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::validation(format!("unknown lattice '{name}'")))?;
        Self::preset(kind)
    }

    /// A user-supplied lattice. `neighbors` are the vectors from an A site to
    /// its B neighbors in fractional coordinates.
    pub fn custom(
        name: impl Into<String>,
        neighbors: Vec<[f64; 3]>,
        symmetry_points: BTreeMap<String, [f64; 3]>,
    ) -> Result<Self> {
        Self::build(LatticeKind::Custom, name.into(), neighbors, symmetry_points)
    }

    fn build(
        kind: LatticeKind,
        name: String,
        neighbors: Vec<[f64; 3]>,
        symmetry_points: BTreeMap<String, [f64; 3]>,
    ) -> Result<Self> {
        if neighbors.is_empty() {
            return Err(Error::validation(
                "lattice needs at least one neighbor vector",
            ));
        }
        if neighbors.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::validation("neighbor vectors must be finite"));
        }
        if neighbors.iter().any(|d| d.iter().all(|&c| c == 0.0)) {
            return Err(Error::validation("neighbor vectors must be nonzero"));
        }
        if symmetry_points.values().flatten().any(|c| !c.is_finite()) {
            return Err(Error::validation("symmetry points must be finite"));
        }
        let dim = (0..3)
            .rev()
            .find(|&axis| neighbors.iter().any(|d| d[axis] != 0.0))
            .map_or(1, |axis| axis + 1);
        let inversion_symmetric = neighbors.iter().all(|d| {
            neighbors
                .iter()
                .any(|e| e[0] == -d[0] && e[1] == -d[1] && e[2] == -d[2])
        });
        Ok(Lattice {
            kind,
            name,
            neighbors,
            symmetry_points,
            dim,
            inversion_symmetric,
        })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Coordination number.
    pub fn z(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self) -> &[[f64; 3]] {
        &self.neighbors
    }

    /// Number of reduced axes the zone extends along.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_inversion_symmetric(&self) -> bool {
        self.inversion_symmetric
    }

    pub fn symmetry_points(&self) -> &BTreeMap<String, [f64; 3]> {
        &self.symmetry_points
    }

    pub fn symmetry_point(&self, label: &str) -> Result<KPoint> {
        self.symmetry_points
            .get(label)
            .map(|&c| KPoint::labeled(c, label))
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown symmetry point '{label}' for lattice {}",
                    self.name
                ))
            })
    }

    /// Path used when none is configured.
    pub fn default_path(&self) -> Vec<String> {
        let labels: &[&str] = match self.kind {
            LatticeKind::Chain => &["G", "X"],
            LatticeKind::Square => &["G", "X", "M", "G"],
            LatticeKind::SimpleCubic => &["G", "X", "M", "R", "G"],
            LatticeKind::Honeycomb => &["G", "K", "M", "G"],
            LatticeKind::Custom => return self.symmetry_points.keys().cloned().collect(),
        };
        labels.iter().map(|s| s.to_string()).collect()
    }
}

/// Normalized nearest-neighbor phase sum `(1/z) Σ_δ exp(i k·δ)`.
pub fn structure_factor(lattice: &Lattice, k: &KPoint) -> Complex64 {
    let z = lattice.z() as f64;
    let phase = |d: &[f64; 3]| k.coords[0] * d[0] + k.coords[1] * d[1] + k.coords[2] * d[2];
    if lattice.inversion_symmetric {
        // sine terms cancel between δ and -δ
        let re: f64 = lattice.neighbors.iter().map(|d| phase(d).cos()).sum();
        return Complex64::new(re / z, 0.0);
    }
    let sum: Complex64 = lattice
        .neighbors
        .iter()
        .map(|d| Complex64::from_polar(1.0, phase(d)))
        .sum();
    sum / z
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSegment {
    pub start: String,
    pub end: String,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathPoint {
    pub k: KPoint,
    /// Cumulative path length in reduced units.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KPath {
    pub segments: Vec<PathSegment>,
    pub points: Vec<PathPoint>,
}

/// Piecewise-linear path through labelled symmetry points, `samples` steps per
/// segment. Shared segment endpoints appear once, so the path has
/// `segments * samples + 1` points.
pub fn build_kpath<S: AsRef<str>>(
    lattice: &Lattice,
    labels: &[S],
    samples: usize,
) -> Result<KPath> {
    if labels.len() < 2 {
        return Err(Error::validation("a k-path needs at least two labels"));
    }
    if samples == 0 {
        return Err(Error::validation("samples per segment must be >= 1"));
    }
    let anchors = labels
        .iter()
        .map(|l| lattice.symmetry_point(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;

    let mut points = vec![PathPoint {
        k: anchors[0].clone(),
        s: 0.0,
    }];
    let mut segments = Vec::with_capacity(anchors.len() - 1);
    let mut s0 = 0.0;
    for pair in anchors.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let diff = [
            b.coords[0] - a.coords[0],
            b.coords[1] - a.coords[1],
            b.coords[2] - a.coords[2],
        ];
        let len = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
        for i in 1..=samples {
            let k = if i == samples {
                b.clone()
            } else {
                let t = i as f64 / samples as f64;
                KPoint::new([
                    a.coords[0] + t * diff[0],
                    a.coords[1] + t * diff[1],
                    a.coords[2] + t * diff[2],
                ])
            };
            points.push(PathPoint {
                k,
                s: s0 + len * i as f64 / samples as f64,
            });
        }
        s0 += len;
        segments.push(PathSegment {
            start: a.label.clone().unwrap_or_default(),
            end: b.label.clone().unwrap_or_default(),
            samples,
        });
    }
    Ok(KPath { segments, points })
}

/// Uniform `n^dim` grid over the reduced zone. Axis values are
/// `-π + 2π i / n` for `i in 0..n`, so the grid origin sits at the zone
/// corner `(-π, …)`; points are ordered row-major with the first axis
/// slowest.
pub fn build_bz_grid(lattice: &Lattice, n: usize) -> Result<Vec<KPoint>> {
    if n == 0 {
        return Err(Error::validation("grid size n must be >= 1"));
    }
    let dim = lattice.dim();
    let total = n
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::validation("grid too large"))?;
    let axis = |i: usize| -PI + 2.0 * PI * i as f64 / n as f64;
    let points = (0..total)
        .map(|flat| {
            let mut coords = [0.0; 3];
            let mut rem = flat;
            for d in (0..dim).rev() {
                coords[d] = axis(rem % n);
                rem /= n;
            }
            KPoint::new(coords)
        })
        .collect();
    Ok(points)
}
