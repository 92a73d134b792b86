//! Fixed parameter sets for the reference figures.

use anyhow::{bail, Result};
use magnon_core::classify::{detect_eic_beic, BandLabel};
use magnon_core::dynamics::{evolve_static, from_tunneling_units};
use magnon_core::effective::effective_two;
use magnon_core::floquet::{fold_quasienergy, one_period_propagator, stroboscopic_evolve};
use magnon_core::{static_magnon_hamiltonian, ChainParams, FloquetSpectrum, StateVector};
use serde_json::{json, Value};

use crate::commands::{
    basis, noninteracting_spectrum, static_spectrum, sweep_csv, sweep_points, sweep_svg, thin,
    write_correlation, write_trajectory, SpectrumRows,
};
use crate::config::{Axis, ChainSection, ExperimentConfig, SweepMode, SweepSection};
use crate::manifest::{Derived, Run};
use crate::output::{fmt, Csv};

pub const PRESETS: [&str; 5] = ["fig1", "fig2", "fig3", "fig5", "fig6"];

const L: usize = 21;
const OMEGA: f64 = 8.0;

/// Launch sites for the three transport panels.
const LAUNCHES: [(&str, usize); 3] = [("left", 1), ("center", 11), ("right", L)];

#[derive(Debug)]
pub struct UnknownPreset(pub String);

impl std::fmt::Display for UnknownPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "unknown preset `{}`; valid presets: {}",
            self.0,
            PRESETS.join(", ")
        )
    }
}

impl std::error::Error for UnknownPreset {}

pub fn check_name(name: &str) -> Result<()> {
    if PRESETS.contains(&name) {
        Ok(())
    } else {
        Err(UnknownPreset(name.to_string()).into())
    }
}

/// Runs the preset and returns its parameter echo for the manifest.
pub fn run_preset(name: &str, steps: usize, run: &mut Run) -> Result<Value> {
    match name {
        "fig1" => fig1(run),
        "fig2" => fig2(run),
        "fig3" => fig3(steps, run),
        "fig5" => fig5(steps, run),
        "fig6" => fig6(steps, run),
        other => bail!(UnknownPreset(other.to_string())),
    }
}

fn chain(magnons: usize, delta: f64, j1: f64, omega: Option<f64>) -> ChainSection {
    ChainSection {
        sites: L,
        magnons,
        j0: 1.0,
        j1,
        delta,
        omega,
        gradient: None,
    }
}

/// Single magnon at Δ = 20 launched from the left edge, the center and the
/// right edge, over 10 tunneling times.
fn fig1(run: &mut Run) -> Result<Value> {
    let (delta, duration, samples) = (20.0, 10.0, 1000);
    let params = ChainParams::undriven(L, delta)?;
    let b = basis(L, 1)?;
    let h = static_magnon_hamiltonian(&params, &b)?;
    let total = from_tunneling_units(duration, 1.0);
    let times: Vec<f64> = (0..=samples)
        .map(|k| total * k as f64 / samples as f64)
        .collect();
    for (name, site) in LAUNCHES {
        let psi = StateVector::single(b.clone(), site)?;
        let tr = run.timed(name, || evolve_static(&h, &psi, &times))?;
        write_trajectory(run, &format!("density_{name}"), &tr, 1.0)?;
    }
    Ok(json!({
        "chain": chain(1, delta, 0.0, None),
        "duration_2pi_over_j0": duration,
        "samples": samples,
        "launch_sites": LAUNCHES.map(|(_, s)| s),
    }))
}

/// Two-magnon spectrum against Δ with band labels, and band
/// representatives at Δ = 20.
fn fig2(run: &mut Run) -> Result<Value> {
    let sweep = SweepSection::range(Axis::Delta, SweepMode::Static, 0.0, 20.0, 0.1);
    let cfg = ExperimentConfig {
        chain: chain(2, 0.0, 0.0, None),
        sweep: Some(sweep.clone()),
        ..Default::default()
    };
    let points = run.timed("sweep", || sweep_points(&cfg, &sweep, 1))?;
    run.outputs
        .write("sweep.csv", &sweep_csv(sweep.axis, sweep.mode, &points))?;
    run.outputs
        .write("sweep.svg", &sweep_svg(sweep.axis, &points))?;
    let delta = 20.0;
    let params = ChainParams::undriven(L, delta)?;
    let (system, rows, _) = static_spectrum(&params, &basis(L, 2)?, None)?;
    run.outputs.write("spectrum.csv", &rows.csv("energy_j0"))?;
    for label in BandLabel::INTERACTING {
        if let Some(k) = rows.labels.iter().position(|l| l == label.as_str()) {
            write_correlation(run, &format!("band_{}", label.as_str()), &system.state(k))?;
        }
    }
    Ok(json!({
        "chain": cfg.chain,
        "sweep": sweep,
        "representatives_delta": delta,
    }))
}

/// Noninteracting quasienergies against J1 for one and two magnons, and
/// the labelled spectrum at J1 = 0.01.
fn fig3(steps: usize, run: &mut Run) -> Result<Value> {
    let sweep = SweepSection::range(Axis::J1, SweepMode::Floquet, -0.2, 0.2, 0.01);
    let mut echo = Vec::new();
    for (magnons, file) in [(1, "sweep_single"), (2, "sweep")] {
        let cfg = ExperimentConfig {
            chain: chain(magnons, 0.0, 0.0, Some(OMEGA)),
            sweep: Some(sweep.clone()),
            ..Default::default()
        };
        let points = run.timed(file, || sweep_points(&cfg, &sweep, steps))?;
        run.outputs.write(
            &format!("{file}.csv"),
            &sweep_csv(sweep.axis, sweep.mode, &points),
        )?;
        run.outputs
            .write(&format!("{file}.svg"), &sweep_svg(sweep.axis, &points))?;
        echo.push(cfg.chain);
    }
    let j1 = 0.01;
    let params = ChainParams::driven(L, 0.0, j1, OMEGA)?;
    run.derived = Derived::of(&params);
    let (s, mut rows) = run.timed("labels", || noninteracting_spectrum(&params, steps))?;
    let found = detect_eic_beic(&s, (-j1, j1), magnon_core::classify::DEFAULT_IPR_FACTOR);
    rows.flag(&found);
    run.outputs
        .write("spectrum.csv", &rows.csv("quasienergy_j0"))?;
    for (k, x) in found.iter().enumerate() {
        write_correlation(run, &format!("eic_{}", k + 1), &s.state(x.index))?;
    }
    Ok(json!({
        "chains": echo,
        "sweep": sweep,
        "steps": steps,
        "labelled_j1": j1,
    }))
}

/// Single-magnon stroboscopic transport at Δ = 2Δ₁, J1 = 0.01.
fn fig5(steps: usize, run: &mut Run) -> Result<Value> {
    let (j1, periods, stride) = (0.01, 3200, 4);
    let delta1 = ChainParams::driven(L, 0.0, j1, OMEGA)?.derived()?.delta1;
    let params = ChainParams::driven(L, 2.0 * delta1, j1, OMEGA)?;
    run.derived = Derived::of(&params);
    let b = basis(L, 1)?;
    let u = run.timed("propagator", || one_period_propagator(&params, &b, steps))?;
    for (name, site) in LAUNCHES {
        let psi = StateVector::single(b.clone(), site)?;
        let tr = run.timed(name, || stroboscopic_evolve(&u, &psi, periods))?;
        write_trajectory(run, &format!("density_{name}"), &thin(&tr, stride)?, 1.0)?;
    }
    Ok(json!({
        "chain": chain(1, 2.0 * delta1, j1, Some(OMEGA)),
        "periods": periods,
        "stride": stride,
        "steps": steps,
        "launch_sites": LAUNCHES.map(|(_, s)| s),
    }))
}

/// Exact against effective two-magnon quasienergies at Δ = 0.1, J1 = 0.1,
/// with the bound states in the continuum flagged.
fn fig6(steps: usize, run: &mut Run) -> Result<Value> {
    let (delta, j1) = (0.1, 0.1);
    let params = ChainParams::driven(L, delta, j1, OMEGA)?;
    run.derived = Derived::of(&params);
    let b = basis(L, 2)?;
    let s = run.timed("floquet", || FloquetSpectrum::compute(&params, &b, steps))?;
    let found = detect_eic_beic(&s, (-j1, j1), magnon_core::classify::DEFAULT_IPR_FACTOR);
    let mut rows = SpectrumRows {
        energies: s.quasienergies().to_vec(),
        iprs: s.iprs().to_vec(),
        labels: vec!["-".to_string(); s.len()],
        outliers: None,
    };
    for x in &found {
        rows.labels[x.index] = "beic".to_string();
    }
    rows.flag(&found);
    run.outputs
        .write("spectrum.csv", &rows.csv("quasienergy_j0"))?;

    let mut model: Vec<f64> = effective_two(&params, &b)?
        .eigenvalues()
        .into_iter()
        .map(|e| fold_quasienergy(e, OMEGA))
        .collect();
    model.sort_by(f64::total_cmp);
    let mut csv = Csv::new(&["index", "exact_j0", "effective_j0", "difference_j0"]);
    for (k, (x, y)) in s.quasienergies().iter().zip(&model).enumerate() {
        csv.row(&[k.to_string(), fmt(*x), fmt(*y), fmt(x - y)]);
    }
    run.outputs.write("effective.csv", &csv.finish())?;
    for (k, x) in found.iter().enumerate() {
        write_correlation(run, &format!("beic_{}", k + 1), &s.state(x.index))?;
    }
    Ok(json!({
        "chain": chain(2, delta, j1, Some(OMEGA)),
        "steps": steps,
        "window": [-j1, j1],
        "ipr_factor": magnon_core::classify::DEFAULT_IPR_FACTOR,
    }))
}
