//! Sweep configuration and orchestration.
//!
//! Every run is a list of independent points evaluated by a pool of
//! stateless workers; results are collected in input order, so output is
//! identical for any thread count.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{hierarchy, hierarchy_at_gamma, EntanglementReport};
use crate::error::{Error, Result};
use crate::lattice::{build_bz_grid, build_kpath, KPoint, Lattice};
use crate::model::{validate, Couplings, ModelParams};
use crate::output::OutputRow;
use crate::presets::find_material;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Report,
    SweepGamma,
    Bands,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::validation(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "ThreadsRepr")]
pub enum Threads {
    #[default]
    Auto,
    Count(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ThreadsRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<ThreadsRepr> for Threads {
    type Error = Error;
    fn try_from(r: ThreadsRepr) -> Result<Self> {
        match r {
            ThreadsRepr::Count(n) => Threads::from_count(n),
            ThreadsRepr::Word(w) => w.parse(),
        }
    }
}

impl Threads {
    fn from_count(n: usize) -> Result<Self> {
        if n == 0 {
            Err(Error::validation("thread count must be >= 1 (or \"auto\")"))
        } else {
            Ok(Threads::Count(n))
        }
    }
}

impl FromStr for Threads {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Threads::Auto);
        }
        let n = s.parse::<usize>().map_err(|_| {
            Error::validation(format!("threads must be a number or \"auto\", got '{s}'"))
        })?;
        Threads::from_count(n)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Named(String),
    Custom {
        #[serde(default)]
        name: Option<String>,
        neighbors: Vec<[f64; 3]>,
        #[serde(default)]
        symmetry_points: BTreeMap<String, [f64; 3]>,
    },
}

impl LatticeSpec {
    fn build(&self) -> Result<Lattice> {
        match self {
            LatticeSpec::Named(name) => Lattice::from_name(name),
            LatticeSpec::Custom {
                name,
                neighbors,
                symmetry_points,
            } => Lattice::custom(
                name.clone().unwrap_or_else(|| "custom".into()),
                neighbors.clone(),
                symmetry_points.clone(),
            ),
        }
    }
}

/// Model source: a preset, inline couplings, or a preset with overrides.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    #[serde(default, rename = "J_meV")]
    pub j_mev: Option<f64>,
    #[serde(default, rename = "D_meV")]
    pub d_mev: Option<f64>,
    #[serde(default, rename = "K_meV")]
    pub k_mev: Option<f64>,
    #[serde(default, rename = "S")]
    pub spin: Option<f64>,
}

impl ModelSpec {
    pub fn resolve(&self) -> Result<ModelParams> {
        let preset = match &self.preset {
            Some(name) => Some(
                find_material(name)
                    .ok_or_else(|| Error::validation(format!("unknown preset '{name}'")))?,
            ),
            None => None,
        };
        let lattice = match (&self.lattice, preset.as_ref().and_then(|p| p.lattice)) {
            (Some(spec), _) => spec.build()?,
            (None, Some(kind)) => Lattice::preset(kind)?,
            (None, None) => {
                return Err(Error::validation(match &preset {
                    Some(p) => format!("preset {} has no lattice; set model.lattice", p.name),
                    None => "model needs a lattice or a preset".to_string(),
                }))
            }
        };
        let base = preset.as_ref().and_then(|p| p.couplings);
        let j = self.j_mev.or(base.map(|c| c.j)).ok_or_else(|| {
            Error::validation(match &preset {
                Some(p) => format!("preset {} has no couplings; set model.J_meV", p.name),
                None => "model needs J_meV or a preset".to_string(),
            })
        })?;
        let defaults = Couplings::default();
        let couplings = Couplings {
            j,
            d: self.d_mev.or(base.map(|c| c.d)).unwrap_or(defaults.d),
            k: self.k_mev.or(base.map(|c| c.k)).unwrap_or(defaults.k),
            s: self.spin.or(base.map(|c| c.s)).unwrap_or(defaults.s),
        };
        validate(lattice, couplings)
    }
}

/// A k-point as coordinates or as a symmetry label.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Coords([f64; 3]),
    Label(String),
}

impl KSpec {
    fn resolve(&self, lattice: &Lattice) -> Result<KPoint> {
        match self {
            KSpec::Coords(c) => {
                let k = KPoint::new(*c);
                if !k.is_finite() {
                    return Err(Error::validation("k-point must be finite"));
                }
                Ok(k)
            }
            KSpec::Label(l) => lattice.symmetry_point(l),
        }
    }
}

impl FromStr for KSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() == 1 && parts[0].parse::<f64>().is_err() {
            return Ok(KSpec::Label(parts[0].to_string()));
        }
        let mut coords = [0.0; 3];
        if parts.len() > 3 {
            return Err(Error::validation("k has at most three components"));
        }
        for (c, p) in coords.iter_mut().zip(&parts) {
            *c = p
                .parse()
                .map_err(|_| Error::validation(format!("bad k component '{p}'")))?;
        }
        Ok(KSpec::Coords(coords))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    50
}

impl Default for PathSpec {
    fn default() -> Self {
        PathSpec {
            labels: None,
            samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSweep {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Default for GammaSweep {
    fn default() -> Self {
        GammaSweep {
            min: 0.0,
            max: 0.99,
            steps: 100,
        }
    }
}

impl GammaSweep {
    fn values(&self) -> Result<Vec<f64>> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min < 0.0 {
            return Err(Error::validation(
                "gamma_sweep bounds must be finite and >= 0",
            ));
        }
        if self.max <= self.min {
            return Err(Error::validation(format!(
                "gamma_sweep needs max > min, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(Error::validation("gamma_sweep needs steps >= 2"));
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default)]
    pub k: Option<KSpec>,
    #[serde(default)]
    pub path: Option<PathSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub gamma_sweep: Option<GammaSweep>,
    #[serde(default)]
    pub dj_values: Option<Vec<f64>>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub threads: Threads,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fixes the mode and rejects specs that belong to other modes.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        if let Some(m) = self.mode {
            if m != mode {
                return Err(Error::validation(format!(
                    "config mode {m:?} does not match requested {mode:?}"
                )));
            }
        }
        let present = [
            (Mode::Report, self.k.is_some(), "k"),
            (Mode::Bands, self.path.is_some(), "path"),
            (Mode::Grid, self.grid.is_some(), "grid"),
            (Mode::SweepGamma, self.gamma_sweep.is_some(), "gamma_sweep"),
            (Mode::SweepGamma, self.dj_values.is_some(), "dj_values"),
        ];
        for (owner, is_set, key) in present {
            if is_set && owner != mode {
                return Err(Error::validation(format!(
                    "'{key}' is only valid in {owner:?} mode, not {mode:?}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub mode: Mode,
    pub lattice: String,
    pub z: usize,
    #[serde(rename = "J_meV")]
    pub j_mev: f64,
    #[serde(rename = "D_meV")]
    pub d_mev: f64,
    #[serde(rename = "K_meV")]
    pub k_mev: f64,
    #[serde(rename = "S")]
    pub spin: f64,
    pub kappa: f64,
    pub full_zone_stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dj_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_sweep: Option<GammaSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_per_segment: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_convention: Option<String>,
}

impl RunMeta {
    fn new(mode: Mode, params: &ModelParams) -> Self {
        let c = params.couplings();
        RunMeta {
            mode,
            lattice: params.lattice().name().to_string(),
            z: params.lattice().z(),
            j_mev: c.j,
            d_mev: c.d,
            k_mev: c.k,
            spin: c.s,
            kappa: params.kappa(),
            full_zone_stable: params.full_zone_stable(),
            dj_values: None,
            gamma_sweep: None,
            path_labels: None,
            samples_per_segment: None,
            grid_n: None,
            grid_convention: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub meta: RunMeta,
    pub rows: Vec<OutputRow>,
}

/// Evaluates `f` on every item with `threads` workers, preserving order.
fn par_map<T, R, F>(items: &[T], threads: Threads, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Threads::Count(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

pub fn run_report(config: &SweepConfig) -> Result<EntanglementReport> {
    config.check_mode(Mode::Report)?;
    let params = config.model.resolve()?;
    let k = config
        .k
        .as_ref()
        .ok_or_else(|| Error::validation("report mode needs a k-point"))?
        .resolve(params.lattice())?;
    Ok(hierarchy(&params, &k))
}

/// Rows over real `|γ|` for each `D/J`: outer loop `D/J`, inner loop `|γ|`.
pub fn run_sweep_gamma(config: &SweepConfig) -> Result<SweepOutput> {
    config.check_mode(Mode::SweepGamma)?;
    let params = config.model.resolve()?;
    let sweep = config.gamma_sweep.clone().unwrap_or_default();
    let gammas = sweep.values()?;
    let dj_values = config
        .dj_values
        .clone()
        .unwrap_or_else(|| vec![params.d_over_j()]);
    if dj_values.is_empty() {
        return Err(Error::validation("dj_values must not be empty"));
    }
    let models = dj_values
        .iter()
        .map(|&dj| params.with_d(dj * params.j()))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, f64)> = (0..models.len())
        .flat_map(|m| gammas.iter().map(move |&g| (m, g)))
        .collect();
    let reports = par_map(&points, config.threads, |&(m, g)| {
        hierarchy_at_gamma(&models[m], Complex64::new(g, 0.0))
    })?;
    let rows = reports
        .into_iter()
        .enumerate()
        .map(|(i, report)| OutputRow {
            k_index: i,
            path_s: None,
            report,
        })
        .collect();
    let mut meta = RunMeta::new(Mode::SweepGamma, &params);
    meta.dj_values = Some(dj_values);
    meta.gamma_sweep = Some(sweep);
    Ok(SweepOutput { meta, rows })
}

/// Rows along a symmetry path, with the cumulative path coordinate.
pub fn run_bands(config: &SweepConfig) -> Result<SweepOutput> {
    config.check_mode(Mode::Bands)?;
    let params = config.model.resolve()?;
    let spec = config.path.clone().unwrap_or_default();
    let labels = spec
        .labels
        .clone()
        .unwrap_or_else(|| params.lattice().default_path());
    let path = build_kpath(params.lattice(), &labels, spec.samples)?;
    let reports = par_map(&path.points, config.threads, |p| hierarchy(&params, &p.k))?;
    let rows = reports
        .into_iter()
        .zip(&path.points)
        .enumerate()
        .map(|(i, (report, p))| OutputRow {
            k_index: i,
            path_s: Some(p.s),
            report,
        })
        .collect();
    let mut meta = RunMeta::new(Mode::Bands, &params);
    meta.path_labels = Some(labels);
    meta.samples_per_segment = Some(spec.samples);
    Ok(SweepOutput { meta, rows })
}

/// Rows over the uniform zone grid in row-major order.
pub fn run_grid(config: &SweepConfig) -> Result<SweepOutput> {
    config.check_mode(Mode::Grid)?;
    let params = config.model.resolve()?;
    let n = config
        .grid
        .as_ref()
        .ok_or_else(|| Error::validation("grid mode needs grid.n"))?
        .n;
    let points = build_bz_grid(params.lattice(), n)?;
    let reports = par_map(&points, config.threads, |k| hierarchy(&params, k))?;
    let rows = reports
        .into_iter()
        .enumerate()
        .map(|(i, report)| OutputRow {
            k_index: i,
            path_s: None,
            report,
        })
        .collect();
    let mut meta = RunMeta::new(Mode::Grid, &params);
    meta.grid_n = Some(n);
    meta.grid_convention = Some(
        "axis values -pi + 2*pi*i/n for i in 0..n; origin at the zone corner; row-major, first axis slowest"
            .to_string(),
    );
    Ok(SweepOutput { meta, rows })
}
