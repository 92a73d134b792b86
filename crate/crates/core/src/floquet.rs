//! One-period propagators of the rotating-frame Hamiltonian, the Floquet
//! Hamiltonian `H_F = (i/T) log U_T`, quasienergy spectra and stroboscopic
//! evolution.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{MagnonBasis, StateVector};
use crate::dynamics::Trajectory;
use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{Frame, Generator, HermitianOperator};
use crate::linalg::{self, CMatrix};
use crate::observables;
use crate::params::ChainParams;
use crate::spectrum::{Eigensystem, DEGENERACY_TOL};

/// Midpoint sub-steps per drive period.
pub const DEFAULT_STEPS: usize = 256;
/// Accepted `max |U†U - I|` for a propagator.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Accepted `max |H_F - H_F†|` before symmetrization.
pub const FLOQUET_HERMITIAN_TOL: f64 = 1e-8;
/// Accepted quasienergy change under step doubling at the default step count.
pub const CONVERGENCE_TOL: f64 = 1e-5;
/// Eigenphases this close to `±π` are flagged as sitting on the branch cut.
pub const BRANCH_CUT_TOL: f64 = 1e-10;

/// Time-ordered evolution over one drive period.
#[derive(Debug, Clone)]
pub struct UnitaryPropagator {
    basis: Arc<MagnonBasis>,
    matrix: CMatrix,
    period: f64,
}

impl UnitaryPropagator {
    pub fn new(basis: Arc<MagnonBasis>, matrix: CMatrix, period: f64) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: matrix.nrows(),
            });
        }
        if period.is_nan() || period <= 0.0 {
            return Err(invalid("period must be positive"));
        }
        let defect = linalg::unitarity_defect(&matrix);
        if defect >= UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self {
            basis,
            matrix,
            period,
        })
    }

    pub fn basis(&self) -> &Arc<MagnonBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.matrix)
    }
}

/// `U_T` as the ordered product of `exp(-i H^rot(t_k) δt)` over `steps`
/// sub-intervals, each sampled at its midpoint `t_k = (k + 1/2) δt`.
pub fn one_period_propagator(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
    steps: usize,
) -> Result<UnitaryPropagator> {
    one_period_propagator_from(params, basis, steps, 0.0)
}

/// Same as [`one_period_propagator`] over `[t0, t0 + T]`.
pub fn one_period_propagator_from(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
    steps: usize,
    t0: f64,
) -> Result<UnitaryPropagator> {
    if steps == 0 {
        return Err(invalid("propagator needs at least one step"));
    }
    if !params.is_resonant() {
        return Err(invalid(
            "one-period propagator requires resonant driving (omega = B)",
        ));
    }
    let period = params.derived()?.period;
    let generator = Generator::new(params, basis, Some(Frame::Rotating))?;
    let dt = period / steps as f64;
    let n = basis.dim();
    let mut u = CMatrix::identity(n, n);
    for k in 0..steps {
        generator.exp_step(t0 + (k as f64 + 0.5) * dt, dt, u.as_mut_slice());
    }
    UnitaryPropagator::new(basis.clone(), u, period)
}

/// An eigenphase on (or within [`BRANCH_CUT_TOL`] of) the `±π` cut; it is
/// assigned `+π`, i.e. quasienergy `-ω/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCutWarning {
    pub index: usize,
    pub phase: f64,
}

/// `H_F = (i/T) log U_T` plus any branch-cut warnings.
#[derive(Debug, Clone)]
pub struct FloquetHamiltonian {
    hamiltonian: HermitianOperator,
    period: f64,
    warnings: Vec<BranchCutWarning>,
}

impl FloquetHamiltonian {
    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn warnings(&self) -> &[BranchCutWarning] {
        &self.warnings
    }

    pub fn spectrum(&self) -> FloquetSpectrum {
        quasienergy_spectrum(self)
    }
}

/// Principal eigenphase in `(-π, π]` with branch-cut detection.
fn principal_phase(lambda: Complex64) -> (f64, bool) {
    let theta = lambda.arg();
    if PI - theta.abs() < BRANCH_CUT_TOL {
        (PI, true)
    } else {
        (theta, false)
    }
}

/// `H_F = (i/T) log U` from the eigendecomposition of `U`, eigenphases
/// `θ ∈ (-π, π]`, quasienergies `-θ/T ∈ [-ω/2, ω/2)`.
pub fn floquet_hamiltonian(u: &UnitaryPropagator) -> Result<FloquetHamiltonian> {
    let (lambdas, q) = linalg::unitary_eigen(&u.matrix);
    let mut warnings = Vec::new();
    let energies: Vec<f64> = lambdas
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let (theta, on_cut) = principal_phase(lambda);
            if on_cut {
                warnings.push(BranchCutWarning {
                    index: k,
                    phase: lambda.arg(),
                });
            }
            -theta / u.period
        })
        .collect();
    let h = linalg::spectral_function(
        &(0..energies.len()).map(|k| energies[k]).collect::<Vec<_>>(),
        &q,
        |e| Complex64::new(e, 0.0),
    );
    let defect = linalg::hermiticity_defect(&h);
    if defect >= FLOQUET_HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let symmetric = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(FloquetHamiltonian {
        hamiltonian: HermitianOperator::new(u.basis.clone(), symmetric)?,
        period: u.period,
        warnings,
    })
}

/// Fold into the Floquet zone `[-ω/2, ω/2)`.
pub fn fold_quasienergy(e: f64, omega: f64) -> f64 {
    let folded = e - omega * ((e + omega / 2.0) / omega).floor();
    if folded >= omega / 2.0 {
        folded - omega
    } else {
        folded
    }
}

/// Quasienergies in `[-ω/2, ω/2)` (ascending), Floquet states and their
/// inverse participation ratios.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    system: Eigensystem,
    omega: f64,
    iprs: Vec<f64>,
    warnings: Vec<BranchCutWarning>,
}

impl FloquetSpectrum {
    pub fn quasienergies(&self) -> &[f64] {
        self.system.values()
    }

    pub fn states(&self) -> &CMatrix {
        self.system.vectors()
    }

    pub fn iprs(&self) -> &[f64] {
        &self.iprs
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn basis(&self) -> &Arc<MagnonBasis> {
        self.system.basis()
    }

    pub fn state(&self, k: usize) -> StateVector {
        self.system.state(k)
    }

    pub fn eigensystem(&self) -> &Eigensystem {
        &self.system
    }

    pub fn warnings(&self) -> &[BranchCutWarning] {
        &self.warnings
    }

    /// Exact spectrum of the resonantly driven chain: propagator with
    /// `steps` midpoint steps, matrix logarithm, diagonalization.
    pub fn compute(params: &ChainParams, basis: &Arc<MagnonBasis>, steps: usize) -> Result<Self> {
        let u = one_period_propagator(params, basis, steps)?;
        Ok(floquet_hamiltonian(&u)?.spectrum())
    }
}

pub fn quasienergy_spectrum(h_f: &FloquetHamiltonian) -> FloquetSpectrum {
    let omega = h_f.omega();
    let (values, vectors) = h_f.hamiltonian.eigh();
    let mut pairs: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .map(|(k, &e)| (fold_quasienergy(e, omega), k))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut sorted = CMatrix::zeros(vectors.nrows(), vectors.ncols());
    for (dst, &(_, src)) in pairs.iter().enumerate() {
        sorted.set_column(dst, &vectors.column(src));
    }
    let mut system = Eigensystem::from_parts(
        h_f.hamiltonian.basis().clone(),
        pairs.iter().map(|p| p.0).collect(),
        sorted,
    );
    system.canonicalize_clusters(DEGENERACY_TOL);
    let iprs = (0..system.len())
        .map(|k| observables::ipr(system.vectors().column(k).as_slice()).unwrap_or(0.0))
        .collect();
    FloquetSpectrum {
        system,
        omega,
        iprs,
        warnings: h_f.warnings.clone(),
    }
}

/// `ψ(kT) = U^k ψ(0)` for `k = 0..=cycles`.
pub fn stroboscopic_evolve(
    u: &UnitaryPropagator,
    psi0: &StateVector,
    cycles: usize,
) -> Result<Trajectory> {
    u.basis.ensure_same(psi0.basis())?;
    let mut times = Vec::with_capacity(cycles + 1);
    let mut states = Vec::with_capacity(cycles + 1);
    let mut amps: DVector<Complex64> = psi0.amplitudes().clone();
    for k in 0..=cycles {
        if k > 0 {
            amps = &u.matrix * &amps;
        }
        times.push(k as f64 * u.period);
        states.push(StateVector::from_unitary_image(
            psi0.basis().clone(),
            amps.clone(),
        ));
    }
    Trajectory::new(times, states)
}

/// Largest change of any quasienergy when the step count is doubled.
pub fn step_doubling_change(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
    steps: usize,
) -> Result<f64> {
    let coarse = FloquetSpectrum::compute(params, basis, steps)?;
    let fine = FloquetSpectrum::compute(params, basis, 2 * steps)?;
    Ok(coarse
        .quasienergies()
        .iter()
        .zip(fine.quasienergies())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
