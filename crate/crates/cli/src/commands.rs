//! The experiment kinds behind the subcommands, plus the building blocks
//! the presets share with them.

use std::sync::Arc;

use anyhow::{ensure, Context, Result};
use magnon_core::classify::{
    classify_interacting_bands, classify_noninteracting, detect_eic_beic, BandLabel,
    BoundInContinuum, InteractingOptions,
};
use magnon_core::dynamics::{evolve_driven, evolve_static, from_tunneling_units, Trajectory};
use magnon_core::effective::{validity_warnings, ValidityWarning};
use magnon_core::floquet::{one_period_propagator, step_doubling_change, stroboscopic_evolve};
use magnon_core::observables::two_magnon_correlation;
use magnon_core::{
    build_basis, static_magnon_hamiltonian, ChainParams, Eigensystem, FloquetSpectrum, Frame,
    MagnonBasis, StateVector,
};
use rayon::prelude::*;

use crate::config::{
    Axis, ClassifyMode, ExperimentConfig, InitialState, Method, SweepMode, SweepSection,
};
use crate::manifest::{Derived, Run};
use crate::output::{fmt, matrix_table, site_table, Csv};
use crate::svg::heatmap;

pub fn basis(sites: usize, magnons: usize) -> Result<Arc<MagnonBasis>> {
    Ok(Arc::new(build_basis(sites, magnons)?))
}

pub fn initial_state(state: &InitialState, basis: &Arc<MagnonBasis>) -> Result<StateVector> {
    let b = basis.clone();
    Ok(match *state {
        InitialState::Single(l) => StateVector::single(b, l)?,
        InitialState::Adjacent(l) => StateVector::adjacent(b, l)?,
        InitialState::Pair(x, y) => StateVector::pair(b, x.min(y), x.max(y))?,
        InitialState::Uniform => StateVector::uniform(b),
    })
}

/// One table row per eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRows {
    pub energies: Vec<f64>,
    pub iprs: Vec<f64>,
    pub labels: Vec<String>,
    /// Continuum IPR outliers, when a window was searched.
    pub outliers: Option<Vec<bool>>,
}

impl SpectrumRows {
    fn unlabelled(energies: Vec<f64>, iprs: Vec<f64>) -> Self {
        let labels = vec!["-".to_string(); energies.len()];
        Self {
            energies,
            iprs,
            labels,
            outliers: None,
        }
    }

    pub fn flag(&mut self, found: &[BoundInContinuum]) {
        let mut flags = vec![false; self.energies.len()];
        for b in found {
            flags[b.index] = true;
        }
        self.outliers = Some(flags);
    }

    pub fn csv(&self, energy_col: &str) -> String {
        let mut header = vec!["index", energy_col, "ipr", "label"];
        if self.outliers.is_some() {
            header.push("continuum_outlier");
        }
        let mut csv = Csv::new(&header);
        for k in 0..self.energies.len() {
            let mut cells = vec![
                k.to_string(),
                fmt(self.energies[k]),
                fmt(self.iprs[k]),
                self.labels[k].clone(),
            ];
            if let Some(o) = &self.outliers {
                cells.push(u8::from(o[k]).to_string());
            }
            csv.row(&cells);
        }
        csv.finish()
    }
}

fn eigen_iprs(system: &Eigensystem) -> Vec<f64> {
    (0..system.len())
        .map(|k| system.probabilities(k).iter().map(|p| p * p).sum())
        .collect()
}

/// Static spectrum; two-magnon sectors carry interacting band labels.
pub fn static_spectrum(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
    half_width: Option<f64>,
) -> Result<(Eigensystem, SpectrumRows, Option<Vec<BandLabel>>)> {
    let system = Eigensystem::of(&static_magnon_hamiltonian(params, basis)?);
    let mut rows = SpectrumRows::unlabelled(system.values().to_vec(), eigen_iprs(&system));
    let mut bands = None;
    if basis.magnons() == 2 {
        let opts = InteractingOptions {
            max_half_width: half_width.unwrap_or(f64::INFINITY),
        };
        let c = classify_interacting_bands(&system, params.delta(), params.j0(), &opts)?;
        let labels: Vec<BandLabel> = c.labels.iter().map(|x| x.label).collect();
        rows.labels = labels.iter().map(|l| l.as_str().to_string()).collect();
        bands = Some(labels);
    }
    Ok((system, rows, bands))
}

/// Quasienergies of the single-magnon Floquet states most localized on
/// site 1 and on site `L`.
pub fn edge_levels(params: &ChainParams, steps: usize) -> Result<(f64, f64)> {
    let l = params.sites();
    let s = FloquetSpectrum::compute(params, &basis(l, 1)?, steps)?;
    let peak = |site: usize| {
        (0..s.len())
            .max_by(|&a, &b| {
                let pa = s.states()[(site - 1, a)].norm_sqr();
                let pb = s.states()[(site - 1, b)].norm_sqr();
                pa.total_cmp(&pb)
            })
            .unwrap_or(0)
    };
    Ok((s.quasienergies()[peak(1)], s.quasienergies()[peak(l)]))
}

/// Two-magnon Floquet spectrum labelled by combination type.
pub fn noninteracting_spectrum(
    params: &ChainParams,
    steps: usize,
) -> Result<(FloquetSpectrum, SpectrumRows)> {
    let (eps_minus, eps_plus) = edge_levels(params, steps)?;
    let s = FloquetSpectrum::compute(params, &basis(params.sites(), 2)?, steps)?;
    let c = classify_noninteracting(&s, eps_minus, eps_plus, params.j1())?;
    let mut rows = SpectrumRows::unlabelled(s.quasienergies().to_vec(), s.iprs().to_vec());
    rows.labels = c
        .labels
        .iter()
        .map(|x| x.label.as_str().to_string())
        .collect();
    Ok((s, rows))
}

pub fn continuum_window(cfg: &ExperimentConfig) -> (f64, f64) {
    match cfg.classify.window {
        Some([lo, hi]) => (lo, hi),
        None => (-cfg.chain.j1.abs(), cfg.chain.j1.abs()),
    }
}

fn validity_notes(params: &ChainParams) -> Vec<String> {
    validity_warnings(params)
        .into_iter()
        .map(|w| match w {
            ValidityWarning::SlowDrive => "drive frequency not large against J0, J1".to_string(),
            ValidityWarning::WeakGradient => "field gradient not large against J0".to_string(),
        })
        .collect()
}

fn floquet_notes(run: &mut Run, s: &FloquetSpectrum) {
    for w in s.warnings() {
        run.warnings.push(format!(
            "eigenphase {:.3e} of state {} lies on the branch cut",
            w.phase, w.index
        ));
    }
}

/// Two-magnon correlation of `psi` as a CSV table and a heatmap.
pub fn write_correlation(run: &mut Run, id: &str, psi: &StateVector) -> Result<()> {
    let c = two_magnon_correlation(psi)?;
    let l = c.sites();
    run.outputs.write(
        &format!("correlation_{id}.csv"),
        &matrix_table(l, l, |x, y| c.get(x, y)),
    )?;
    let rows: Vec<Vec<f64>> = (1..=l)
        .map(|x| (1..=l).map(|y| c.get(x, y)).collect())
        .collect();
    run.outputs.write(
        &format!("correlation_{id}.svg"),
        &heatmap(&format!("correlation {id}"), "site y", "site x", &rows),
    )
}

/// Density and magnetization tables plus a density heatmap.
pub fn write_trajectory(run: &mut Run, stem: &str, tr: &Trajectory, j0: f64) -> Result<()> {
    let times = tr.times_in_tunneling_units(j0);
    let densities = tr.densities();
    run.outputs
        .write(&format!("{stem}.csv"), &site_table("n", &times, &densities))?;
    let mag_stem = stem.replacen("density", "magnetization", 1);
    let mag_stem = if mag_stem == stem {
        format!("{stem}_magnetization")
    } else {
        mag_stem
    };
    run.outputs.write(
        &format!("{mag_stem}.csv"),
        &site_table("m", &times, &tr.magnetizations()),
    )?;
    run.outputs.write(
        &format!("{stem}.svg"),
        &heatmap(&format!("{stem}: n_l(t)"), "site", "t [2pi/J0]", &densities),
    )
}

pub fn run_spectrum(cfg: &ExperimentConfig, run: &mut Run) -> Result<()> {
    let params = cfg.chain.params()?;
    let b = basis(cfg.chain.sites, cfg.chain.magnons)?;
    let (_, rows, _) = run.timed("diagonalize", || {
        static_spectrum(&params, &b, cfg.classify.half_width)
    })?;
    run.outputs.write("spectrum.csv", &rows.csv("energy_j0"))
}

pub fn run_floquet(cfg: &ExperimentConfig, steps: usize, run: &mut Run) -> Result<()> {
    let params = cfg.chain.params()?;
    run.derived = Derived::of(&params);
    run.warnings.extend(validity_notes(&params));
    let b = basis(cfg.chain.sites, cfg.chain.magnons)?;
    let s = run.timed("floquet", || FloquetSpectrum::compute(&params, &b, steps))?;
    floquet_notes(run, &s);
    if cfg.floquet.convergence_check {
        let change = run.timed("convergence", || step_doubling_change(&params, &b, steps))?;
        run.convergence = Some(change);
    }
    let mut rows = SpectrumRows::unlabelled(s.quasienergies().to_vec(), s.iprs().to_vec());
    let found = if cfg.chain.magnons == 2 {
        detect_eic_beic(&s, continuum_window(cfg), cfg.classify.ipr_factor)
    } else {
        Vec::new()
    };
    if cfg.chain.magnons == 2 {
        rows.flag(&found);
    }
    run.outputs
        .write("spectrum.csv", &rows.csv("quasienergy_j0"))?;
    for (k, b) in found.iter().enumerate() {
        write_correlation(run, &format!("outlier_{}", k + 1), &s.state(b.index))?;
    }
    Ok(())
}

fn label_counts(labels: &[String], order: &[BandLabel]) -> String {
    let mut csv = Csv::new(&["label", "count"]);
    let names: Vec<&str> = order
        .iter()
        .map(BandLabel::as_str)
        .chain(["ambiguous", "unclassified"])
        .collect();
    for name in names {
        let n = labels.iter().filter(|l| l.as_str() == name).count();
        csv.row(&[name.to_string(), n.to_string()]);
    }
    csv.finish()
}

pub fn run_classify(cfg: &ExperimentConfig, steps: usize, run: &mut Run) -> Result<()> {
    let params = cfg.chain.params()?;
    let b = basis(cfg.chain.sites, 2)?;
    let driven = match cfg.classify.mode {
        ClassifyMode::Auto => cfg.chain.is_driven(),
        ClassifyMode::Interacting => false,
        ClassifyMode::Noninteracting => true,
    };
    if !driven {
        let (system, rows, _) = run.timed("classify", || {
            static_spectrum(&params, &b, cfg.classify.half_width)
        })?;
        run.outputs.write("spectrum.csv", &rows.csv("energy_j0"))?;
        run.outputs.write(
            "counts.csv",
            &label_counts(&rows.labels, &BandLabel::INTERACTING),
        )?;
        for label in BandLabel::INTERACTING {
            if let Some(k) = rows.labels.iter().position(|l| l == label.as_str()) {
                write_correlation(run, &format!("band_{}", label.as_str()), &system.state(k))?;
            }
        }
        return Ok(());
    }
    run.derived = Derived::of(&params);
    run.warnings.extend(validity_notes(&params));
    let (s, mut rows) = run.timed("classify", || noninteracting_spectrum(&params, steps))?;
    floquet_notes(run, &s);
    let found = detect_eic_beic(&s, continuum_window(cfg), cfg.classify.ipr_factor);
    rows.flag(&found);
    run.outputs
        .write("spectrum.csv", &rows.csv("quasienergy_j0"))?;
    run.outputs.write(
        "counts.csv",
        &label_counts(&rows.labels, &BandLabel::NONINTERACTING),
    )?;
    for (k, x) in found.iter().enumerate() {
        write_correlation(run, &format!("outlier_{}", k + 1), &s.state(x.index))?;
    }
    Ok(())
}

/// Sampling times in units of `1/J0` and the stroboscopic stride.
fn sample_times(cfg: &ExperimentConfig) -> Vec<f64> {
    let d = &cfg.dynamics;
    let total = from_tunneling_units(d.duration, cfg.chain.j0);
    (0..=d.samples)
        .map(|k| total * k as f64 / d.samples as f64)
        .collect()
}

pub fn run_dynamics(cfg: &ExperimentConfig, steps: usize, run: &mut Run) -> Result<()> {
    let params = cfg.chain.params()?;
    run.derived = Derived::of(&params);
    let b = basis(cfg.chain.sites, cfg.chain.magnons)?;
    let psi0 = initial_state(&InitialState::parse(&cfg.dynamics.initial)?, &b)?;
    let tr = match cfg.dynamics.method {
        Method::Static => {
            let h = static_magnon_hamiltonian(&params, &b)?;
            run.timed("evolve", || evolve_static(&h, &psi0, &sample_times(cfg)))?
        }
        Method::Lab | Method::Rotating => {
            let frame = if cfg.dynamics.method == Method::Lab {
                Frame::Lab
            } else {
                Frame::Rotating
            };
            let times = sample_times(cfg);
            let gap = times[1] - times[0];
            let target = params.derived()?.period / steps as f64;
            let dt = gap / (gap / target).ceil();
            run.timed("evolve", || {
                evolve_driven(&params, &b, &psi0, &times, frame, dt)
            })?
        }
        Method::Stroboscopic => {
            let u = run.timed("propagator", || one_period_propagator(&params, &b, steps))?;
            let total = from_tunneling_units(cfg.dynamics.duration, cfg.chain.j0);
            let cycles = (total / u.period()).round() as usize;
            ensure!(cycles >= 1, "duration is shorter than one drive period");
            let full = run.timed("evolve", || stroboscopic_evolve(&u, &psi0, cycles))?;
            thin(&full, cfg.dynamics.stride)?
        }
    };
    write_trajectory_files(run, &tr, cfg.chain.j0)?;
    if cfg.chain.magnons == 2 {
        let last = tr.last().context("empty trajectory")?;
        write_correlation(run, "final", last)?;
    }
    Ok(())
}

fn write_trajectory_files(run: &mut Run, tr: &Trajectory, j0: f64) -> Result<()> {
    let times = tr.times_in_tunneling_units(j0);
    let densities = tr.densities();
    run.outputs
        .write("trajectory.csv", &site_table("n", &times, &densities))?;
    run.outputs.write(
        "magnetization.csv",
        &site_table("m", &times, &tr.magnetizations()),
    )?;
    run.outputs.write(
        "trajectory.svg",
        &heatmap("n_l(t)", "site", "t [2pi/J0]", &densities),
    )
}

/// Every `stride`-th sample of `tr`.
pub fn thin(tr: &Trajectory, stride: usize) -> Result<Trajectory> {
    let keep: Vec<usize> = (0..tr.len()).step_by(stride.max(1)).collect();
    Ok(Trajectory::new(
        keep.iter().map(|&k| tr.times()[k]).collect(),
        keep.iter().map(|&k| tr.states()[k].clone()).collect(),
    )?)
}

/// Result of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub rows: SpectrumRows,
    pub bands: Option<Vec<BandLabel>>,
}

pub fn sweep_point(
    cfg: &ExperimentConfig,
    sweep: &SweepSection,
    value: f64,
    steps: usize,
) -> Result<SweepPoint> {
    let chain = sweep.axis.apply(&cfg.chain, value);
    let params = chain.params()?;
    let b = basis(chain.sites, chain.magnons)?;
    match sweep.mode {
        SweepMode::Static => {
            let (_, rows, bands) = static_spectrum(&params, &b, cfg.classify.half_width)?;
            Ok(SweepPoint { value, rows, bands })
        }
        SweepMode::Floquet => {
            let rows = if chain.magnons == 2 && chain.delta == 0.0 && chain.j1 != 0.0 {
                noninteracting_spectrum(&params, steps)?.1
            } else {
                let s = FloquetSpectrum::compute(&params, &b, steps)?;
                SpectrumRows::unlabelled(s.quasienergies().to_vec(), s.iprs().to_vec())
            };
            Ok(SweepPoint {
                value,
                rows,
                bands: None,
            })
        }
    }
}

/// Evaluates the grid in parallel; results keep grid order.
pub fn sweep_points(
    cfg: &ExperimentConfig,
    sweep: &SweepSection,
    steps: usize,
) -> Result<Vec<SweepPoint>> {
    let grid = sweep.grid()?;
    grid.par_iter()
        .map(|&v| {
            sweep_point(cfg, sweep, v, steps)
                .with_context(|| format!("sweep point {} = {v}", sweep.axis.as_str()))
        })
        .collect()
}

pub fn sweep_csv(axis: Axis, mode: SweepMode, points: &[SweepPoint]) -> String {
    let energy = match mode {
        SweepMode::Static => "energy_j0",
        SweepMode::Floquet => "quasienergy_j0",
    };
    let with_bands = points.iter().all(|p| p.bands.is_some());
    let mut header = vec![axis.as_str().to_string(), "index".into(), energy.into()];
    header.extend(["ipr".to_string(), "label".to_string()]);
    if with_bands {
        header.extend(
            BandLabel::INTERACTING
                .iter()
                .map(|l| format!("band_{}", l.as_str())),
        );
    }
    let mut csv = Csv::new(&header);
    for p in points {
        for k in 0..p.rows.energies.len() {
            let mut cells = vec![
                fmt(p.value),
                k.to_string(),
                fmt(p.rows.energies[k]),
                fmt(p.rows.iprs[k]),
                p.rows.labels[k].clone(),
            ];
            if let (true, Some(bands)) = (with_bands, &p.bands) {
                for l in BandLabel::INTERACTING {
                    cells.push(u8::from(bands[k] == l).to_string());
                }
            }
            csv.row(&cells);
        }
    }
    csv.finish()
}

/// Energies against the sweep value, one heatmap row per grid point.
pub fn sweep_svg(axis: Axis, points: &[SweepPoint]) -> String {
    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.rows.energies.clone()).collect();
    heatmap(
        &format!("sorted levels against {}", axis.as_str()),
        "level index",
        axis.as_str(),
        &rows,
    )
}

pub fn run_sweep(cfg: &ExperimentConfig, steps: usize, run: &mut Run) -> Result<()> {
    let sweep = cfg
        .sweep
        .as_ref()
        .context("sweep needs a [sweep] section")?;
    let points = run.timed("sweep", || sweep_points(cfg, sweep, steps))?;
    run.outputs
        .write("sweep.csv", &sweep_csv(sweep.axis, sweep.mode, &points))?;
    run.outputs
        .write("sweep.svg", &sweep_svg(sweep.axis, &points))
}
