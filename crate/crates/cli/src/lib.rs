//! Experiment runner for `magnon-core`: config-driven runs, parallel
//! parameter sweeps, reference presets and reproducible CSV/SVG output.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod presets;
pub mod svg;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Kind};
use manifest::{Run, RunManifest};
use output::OutputSet;

#[derive(Debug, Parser)]
#[command(
    name = "magnon",
    version,
    about = "Magnon spectra, Floquet analysis and dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML experiment config; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (overrides `out` in the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Midpoint steps per drive period (overrides `floquet.steps`).
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Worker threads for sweeps; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Preset name for the `preset` subcommand.
    #[arg(long, global = true)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Static spectrum with IPRs and band labels.
    Spectrum,
    /// Time evolution of site densities.
    Dynamics,
    /// Floquet quasienergies of the driven chain.
    Floquet,
    /// Band or combination-type labels and continuum outliers.
    Classify,
    /// Spectra over a parameter grid.
    Sweep,
    /// Reference parameter sets: fig1, fig2, fig3, fig5, fig6.
    Preset,
}

impl Command {
    pub fn kind(&self) -> Kind {
        match self {
            Command::Spectrum => Kind::Spectrum,
            Command::Dynamics => Kind::Dynamics,
            Command::Floquet => Kind::Floquet,
            Command::Classify => Kind::Classify,
            Command::Sweep => Kind::Sweep,
            Command::Preset => Kind::Preset,
        }
    }
}

/// Loads and validates the config, runs it, and writes the manifest.
pub fn execute(cli: &Cli) -> Result<RunManifest> {
    let kind = cli.command.kind();
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(steps) = cli.steps {
        cfg.floquet.steps = steps;
    }
    if let Some(name) = &cli.preset {
        cfg.preset = Some(name.clone());
    }
    if let Some(0) = cli.threads {
        anyhow::bail!("--threads must be at least 1");
    }
    cfg.validate(kind)?;
    if kind == Kind::Preset {
        presets::check_name(cfg.preset.as_deref().unwrap_or_default())?;
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("cannot start worker threads")?;
    pool.install(|| {
        let mut run = Run::new(OutputSet::create(&out)?);
        let steps = cfg.floquet.steps;
        let echo = match kind {
            Kind::Spectrum => commands::run_spectrum(&cfg, &mut run).map(|_| None),
            Kind::Dynamics => commands::run_dynamics(&cfg, steps, &mut run).map(|_| None),
            Kind::Floquet => commands::run_floquet(&cfg, steps, &mut run).map(|_| None),
            Kind::Classify => commands::run_classify(&cfg, steps, &mut run).map(|_| None),
            Kind::Sweep => commands::run_sweep(&cfg, steps, &mut run).map(|_| None),
            Kind::Preset => {
                let name = cfg.preset.clone().unwrap_or_default();
                presets::run_preset(&name, steps, &mut run).map(Some)
            }
        }?;
        let config = match echo {
            Some(v) => v,
            None => serde_json::to_value(&cfg)?,
        };
        run.finish(kind.as_str(), cfg.preset.clone(), config)
    })
}
