use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use magnon_core::output::{write_csv, write_json, OutputRow};
use magnon_core::presets::{material_presets, MaterialPreset};
use magnon_core::sweep::{
    run_bands, run_grid, run_report, run_sweep_gamma, Format, GammaSweep, GridSpec, KSpec,
    LatticeSpec, Mode, SweepConfig, SweepOutput, Threads,
};
use magnon_core::{Error, Lattice, LatticeKind, Result};

/// Magnon entanglement, dispersion and EPR diagnostics.
#[derive(Debug, Parser)]
#[command(name = "magnon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entanglement hierarchy at a single k-point.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Symmetry label or comma-separated reduced coordinates.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Sweep real |gamma| for one or more D/J values.
    SweepGamma {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        gamma_min: Option<f64>,
        #[arg(long)]
        gamma_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated D/J values.
        #[arg(long, value_delimiter = ',')]
        dj: Option<Vec<f64>>,
    },
    /// Dispersion and entanglement along a symmetry path.
    Bands {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated symmetry labels.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        /// Samples per path segment.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Uniform Brillouin-zone grid.
    Grid {
        #[command(flatten)]
        common: CommonArgs,
        /// Points per axis.
        #[arg(long)]
        n: Option<usize>,
    },
    /// List built-in lattices and material presets.
    Presets,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON config file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Lattice name: chain, square, simple_cubic, honeycomb.
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long = "J", value_name = "MEV")]
    j: Option<f64>,
    #[arg(long = "D", value_name = "MEV")]
    d: Option<f64>,
    #[arg(long = "K", value_name = "MEV")]
    k_aniso: Option<f64>,
    #[arg(long = "S", value_name = "SPIN")]
    spin: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Worker count or "auto".
    #[arg(long)]
    threads: Option<String>,
}

impl CommonArgs {
    fn load(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Validation(format!("cannot read config {}: {e}", path.display()))
                })?;
                SweepConfig::from_json(&text)?
            }
            None => SweepConfig::default(),
        };
        let m = &mut cfg.model;
        if self.preset.is_some() {
            m.preset = self.preset.clone();
        }
        if let Some(l) = &self.lattice {
            m.lattice = Some(LatticeSpec::Named(l.clone()));
        }
        m.j_mev = self.j.or(m.j_mev);
        m.d_mev = self.d.or(m.d_mev);
        m.k_mev = self.k_aniso.or(m.k_mev);
        m.spin = self.spin.or(m.spin);
        if let Some(f) = &self.format {
            cfg.output.format = Some(f.parse()?);
        }
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        if let Some(t) = &self.threads {
            cfg.threads = t.parse::<Threads>()?;
        }
        Ok(cfg)
    }
}

fn open_output(cfg: &SweepConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output.path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cfg: &SweepConfig, out: &SweepOutput) -> Result<()> {
    let mut w = open_output(cfg)?;
    match cfg.output.format.unwrap_or_default() {
        Format::Csv => write_csv(&out.rows, &mut w)?,
        Format::Json => write_json(&out.meta, &out.rows, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct LatticeListing {
    name: String,
    z: usize,
    dim: usize,
    neighbors: Vec<[f64; 3]>,
    symmetry_points: BTreeMap<String, [f64; 3]>,
    default_path: Vec<String>,
}

impl LatticeListing {
    fn new(l: &Lattice) -> Self {
        LatticeListing {
            name: l.name().to_string(),
            z: l.z(),
            dim: l.dim(),
            neighbors: l.neighbors().to_vec(),
            symmetry_points: l.symmetry_points().clone(),
            default_path: l.default_path(),
        }
    }
}

#[derive(Serialize)]
struct PresetListing {
    lattices: Vec<LatticeListing>,
    materials: Vec<MaterialPreset>,
}

#[derive(Serialize)]
struct ReportMeta {
    mode: Mode,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Report { common, k } => {
            let mut cfg = common.load()?;
            if let Some(k) = k {
                cfg.k = Some(k.parse::<KSpec>()?);
            }
            let report = run_report(&cfg)?;
            let rows = [OutputRow {
                k_index: 0,
                path_s: None,
                report,
            }];
            let mut w = open_output(&cfg)?;
            match cfg.output.format.unwrap_or(Format::Json) {
                Format::Csv => write_csv(&rows, &mut w)?,
                Format::Json => write_json(&ReportMeta { mode: Mode::Report }, &rows, &mut w)?,
            }
            w.flush()?;
        }
        Command::SweepGamma {
            common,
            gamma_min,
            gamma_max,
            steps,
            dj,
        } => {
            let mut cfg = common.load()?;
            if gamma_min.is_some() || gamma_max.is_some() || steps.is_some() {
                let base = cfg.gamma_sweep.clone().unwrap_or_default();
                cfg.gamma_sweep = Some(GammaSweep {
                    min: gamma_min.unwrap_or(base.min),
                    max: gamma_max.unwrap_or(base.max),
                    steps: steps.unwrap_or(base.steps),
                });
            }
            if dj.is_some() {
                cfg.dj_values = dj;
            }
            emit(&cfg, &run_sweep_gamma(&cfg)?)?;
        }
        Command::Bands {
            common,
            labels,
            samples,
        } => {
            let mut cfg = common.load()?;
            if labels.is_some() || samples.is_some() {
                let mut spec = cfg.path.clone().unwrap_or_default();
                if labels.is_some() {
                    spec.labels = labels;
                }
                if let Some(s) = samples {
                    spec.samples = s;
                }
                cfg.path = Some(spec);
            }
            emit(&cfg, &run_bands(&cfg)?)?;
        }
        Command::Grid { common, n } => {
            let mut cfg = common.load()?;
            if let Some(n) = n {
                cfg.grid = Some(GridSpec { n });
            }
            emit(&cfg, &run_grid(&cfg)?)?;
        }
        Command::Presets => {
            let mut w = BufWriter::new(io::stdout().lock());
            let lattices = LatticeKind::PRESETS
                .iter()
                .map(|&kind| Lattice::preset(kind).map(|l| LatticeListing::new(&l)))
                .collect::<Result<Vec<_>>>()?;
            let listing = PresetListing {
                lattices,
                materials: material_presets(),
            };
            serde_json::to_writer_pretty(&mut w, &listing).map_err(io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magnon: {e}");
            if e.is_user_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
