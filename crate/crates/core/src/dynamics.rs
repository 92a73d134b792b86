//! Time evolution: exact for static Hamiltonians, midpoint-exponential
//! stepping for driven ones.
//!
//! Times are in natural units `1/J0` internally; figures quote them in units
//! of `2π/J0`, see [`from_tunneling_units`] and [`Trajectory::times_in_tunneling_units`].

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{MagnonBasis, StateVector};
use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{Frame, Generator, HermitianOperator};
use crate::observables::{self, CorrelationMatrix};
use crate::params::ChainParams;

/// Convert a time in units of `2π/J0` to natural units.
pub fn from_tunneling_units(t: f64, j0: f64) -> f64 {
    t * 2.0 * PI / j0
}

/// States of one evolution on a strictly increasing time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch {
                left: times.len(),
                right: states.len(),
            });
        }
        check_increasing(&times)?;
        Ok(Self { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn times_in_tunneling_units(&self, j0: f64) -> Vec<f64> {
        self.times.iter().map(|t| t * j0 / (2.0 * PI)).collect()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&StateVector> {
        self.states.last()
    }

    /// `n_l(t)` for every stored time.
    pub fn densities(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(observables::density).collect()
    }

    /// Density at one 1-based site over time.
    pub fn site_density(&self, site: usize) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| observables::density(s)[site - 1])
            .collect()
    }

    pub fn magnetizations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(observables::magnetization).collect()
    }

    pub fn correlations(&self) -> Result<Vec<CorrelationMatrix>> {
        self.states
            .iter()
            .map(observables::two_magnon_correlation)
            .collect()
    }

    /// Largest `|‖ψ(t)‖ - 1|` over the trajectory.
    pub fn max_norm_defect(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_increasing(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(invalid("times must be finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("times must be strictly increasing"));
    }
    Ok(())
}

/// `ψ(t) = V exp(-iEt) V† ψ(0)` from a single eigendecomposition.
pub fn evolve_static(
    h: &HermitianOperator,
    psi0: &StateVector,
    times: &[f64],
) -> Result<Trajectory> {
    h.basis().ensure_same(psi0.basis())?;
    check_increasing(times)?;
    let (energies, v) = h.eigh();
    let coeffs = v.adjoint() * psi0.amplitudes();
    let states = times
        .iter()
        .map(|&t| {
            let phased = DVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(&energies)
                    .map(|(c, e)| c * Complex64::new(0.0, -e * t).exp()),
            );
            StateVector::from_unitary_image(psi0.basis().clone(), &v * phased)
        })
        .collect();
    Trajectory::new(times.to_vec(), states)
}

/// Default driven step: `T/256` for a drive of frequency `omega`.
pub fn default_dt(omega: f64) -> f64 {
    2.0 * PI / omega / 256.0
}

/// Number of `dt` steps covering `gap`, requiring an integer multiple.
fn step_count(gap: f64, dt: f64) -> Result<usize> {
    let ratio = gap / dt;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-6 * ratio.max(1.0) {
        return Err(invalid(format!(
            "dt = {dt} does not divide the sampling gap {gap}"
        )));
    }
    Ok(n as usize)
}

/// Evolve `psi0` (the state at `t = 0`) under the lab- or rotating-frame
/// Hamiltonian with midpoint-sampled exponential steps of length `dt`,
/// recording the state at each of `times` (ascending, non-negative).
pub fn evolve_driven(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
    psi0: &StateVector,
    times: &[f64],
    frame: Frame,
    dt: f64,
) -> Result<Trajectory> {
    basis.ensure_same(psi0.basis())?;
    if dt.is_nan() || dt <= 0.0 || !dt.is_finite() {
        return Err(invalid("dt must be positive"));
    }
    check_increasing(times)?;
    if times.first().is_some_and(|&t| t < 0.0) {
        return Err(invalid("times must be non-negative"));
    }
    let generator = Generator::new(params, basis, Some(frame))?;
    let mut amps = psi0.amplitudes().clone();
    let mut now = 0.0;
    let mut clock = 0usize;
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        let n = step_count(target - now, dt)?;
        for _ in 0..n {
            let t_mid = (clock as f64 + 0.5) * dt;
            generator.exp_step(t_mid, dt, amps.as_mut_slice());
            clock += 1;
        }
        now = target;
        states.push(StateVector::from_unitary_image(basis.clone(), amps.clone()));
    }
    Trajectory::new(times.to_vec(), states)
}
