//! Magnon Hamiltonians in an `N`-magnon sector.
//!
//! All builders share one structure: a diagonal (interaction, interaction-
//! induced edge defects, optional tilt) plus nearest-neighbour hopping
//! `h a†_l a_{l+1} + h.c.`. In matrix form the hop `a†_l a_{l+1}` puts `h`
//! at `(to, from)` where `to` has the magnon on `l` and `from` has it on
//! `l+1`, and `h*` at the transposed position.

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{MagnonBasis, StateVector};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::params::ChainParams;

/// Construction tolerance on `max |M - M†|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense Hermitian matrix acting on a magnon basis.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    basis: Arc<MagnonBasis>,
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(basis: Arc<MagnonBasis>, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(basis, matrix, HERMITIAN_TOL)
    }

    pub(crate) fn with_tolerance(
        basis: Arc<MagnonBasis>,
        matrix: CMatrix,
        tol: f64,
    ) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: matrix.nrows(),
            });
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect >= tol {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &Arc<MagnonBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues and orthonormal eigenvectors (columns).
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        linalg::eigh(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        self.basis.ensure_same(psi.basis())?;
        let amps = psi.amplitudes();
        Ok((amps.adjoint() * &self.matrix * amps)[(0, 0)].re)
    }
}

/// Which gauge the driven Hamiltonian is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Tilt `Σ_l B l n_l` on the diagonal, real exchange `J(t)`.
    Lab,
    /// Tilt removed by `exp(i Σ_l l B t n_l)`, complex exchange `𝒥(t)`.
    Rotating,
}

fn check_basis(params: &ChainParams, basis: &MagnonBasis) -> Result<()> {
    if basis.sites() != params.sites() {
        return Err(invalid(format!(
            "basis has L={} but parameters have L={}",
            basis.sites(),
            params.sites()
        )));
    }
    Ok(())
}

/// Rotating-frame exchange
/// `𝒥(t) = M0 e^{i(ω-B)t} + M1 e^{-iBt} + M2 e^{-i(ω+B)t}`;
/// at resonance this is `M0 + M1 e^{-iωt} + M2 e^{-2iωt}`.
pub fn coupling_at(t: f64, params: &ChainParams) -> Complex64 {
    let omega = params.omega();
    let b = params.gradient();
    let m0 = params.j1() / 4.0;
    let m1 = params.j0() / 2.0;
    let m2 = params.j1() / 4.0;
    let phase = |w: f64| Complex64::new(0.0, w * t).exp();
    phase(omega - b) * m0 + phase(-b) * m1 + phase(-(omega + b)) * m2
}

/// Lab-frame exchange `J(t) = [J0 + J1 cos(ωt)]/2`.
pub fn lab_exchange_at(t: f64, params: &ChainParams) -> f64 {
    (params.j0() + params.j1() * (params.omega() * t).cos()) / 2.0
}

/// Sparse form of a (possibly time-dependent) magnon Hamiltonian.
#[derive(Debug, Clone)]
pub(crate) struct Generator {
    params: ChainParams,
    frame: Option<Frame>,
    basis: Arc<MagnonBasis>,
    diag: Vec<f64>,
    /// (to, from) pairs, see module docs.
    hops: Vec<(usize, usize)>,
    max_degree: usize,
}

impl Generator {
    /// `frame = None` gives the static model with hopping `J0/2`.
    pub(crate) fn new(
        params: &ChainParams,
        basis: &Arc<MagnonBasis>,
        frame: Option<Frame>,
    ) -> Result<Self> {
        check_basis(params, basis)?;
        let delta = params.delta();
        let last = basis.sites();
        let diag = (0..basis.dim())
            .map(|k| {
                let mut e = delta * basis.adjacent_pairs(k) as f64;
                if basis.is_occupied(k, 1) {
                    e -= delta / 2.0;
                }
                if basis.is_occupied(k, last) {
                    e -= delta / 2.0;
                }
                if frame == Some(Frame::Lab) {
                    e += params.gradient() * basis.position_sum(k) as f64;
                }
                e
            })
            .collect();
        let hops: Vec<_> = basis.left_moves().iter().map(|h| (h.to, h.from)).collect();
        let mut degree = vec![0usize; basis.dim()];
        for &(to, from) in &hops {
            degree[to] += 1;
            degree[from] += 1;
        }
        Ok(Self {
            params: *params,
            frame,
            basis: basis.clone(),
            diag,
            hops,
            max_degree: degree.into_iter().max().unwrap_or(0),
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.diag.len()
    }

    pub(crate) fn hopping(&self, t: f64) -> Complex64 {
        match self.frame {
            None => Complex64::new(self.params.j0() / 2.0, 0.0),
            Some(Frame::Lab) => Complex64::new(lab_exchange_at(t, &self.params), 0.0),
            Some(Frame::Rotating) => coupling_at(t, &self.params),
        }
    }

    pub(crate) fn dense(&self, t: f64) -> CMatrix {
        let n = self.dim();
        let hop = self.hopping(t);
        let mut m = CMatrix::zeros(n, n);
        for (k, &e) in self.diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(e, 0.0);
        }
        for &(to, from) in &self.hops {
            m[(to, from)] += hop;
            m[(from, to)] += hop.conj();
        }
        m
    }

    pub(crate) fn operator(&self, t: f64) -> Result<HermitianOperator> {
        HermitianOperator::new(self.basis.clone(), self.dense(t))
    }

    /// `y = (H - shift) x` for hopping amplitude `hop`.
    fn apply_shifted(&self, hop: Complex64, shift: f64, x: &[Complex64], y: &mut [Complex64]) {
        for ((yk, xk), e) in y.iter_mut().zip(x).zip(&self.diag) {
            *yk = xk * (e - shift);
        }
        let hop_c = hop.conj();
        for &(to, from) in &self.hops {
            y[to] += hop * x[from];
            y[from] += hop_c * x[to];
        }
    }

    /// Replace every column `v` of `block` (column-major, `dim` rows) by
    /// `exp(-i H(t) dt) v`, with `H(t)` frozen at the given time.
    ///
    /// The exponential is summed as a Taylor series to full double
    /// precision after shifting the diagonal to centre the spectrum bound;
    /// long steps are split into equal sub-steps of the same operator.
    pub(crate) fn exp_step(&self, t: f64, dt: f64, block: &mut [Complex64]) {
        let n = self.dim();
        if n == 0 || dt == 0.0 {
            return;
        }
        let hop = self.hopping(t);
        let (lo, hi) = self
            .diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        let shift = 0.5 * (lo + hi);
        let bound = 0.5 * (hi - lo) + self.max_degree as f64 * hop.norm();
        let substeps = ((bound * dt.abs()) / 0.5).ceil().max(1.0) as usize;
        let h = dt / substeps as f64;
        let phase = Complex64::new(0.0, -shift * h).exp();

        let mut term = vec![Complex64::default(); n];
        let mut next = vec![Complex64::default(); n];
        for col in block.chunks_mut(n) {
            for _ in 0..substeps {
                term.copy_from_slice(col);
                for k in 1..=64 {
                    self.apply_shifted(hop, shift, &term, &mut next);
                    let factor = Complex64::new(0.0, -h / k as f64);
                    let mut term_max = 0.0f64;
                    let mut sum_max = 0.0f64;
                    for ((t_i, n_i), c_i) in term.iter_mut().zip(&next).zip(col.iter_mut()) {
                        *t_i = n_i * factor;
                        *c_i += *t_i;
                        term_max = term_max.max(t_i.norm_sqr());
                        sum_max = sum_max.max(c_i.norm_sqr());
                    }
                    if term_max <= 1e-36 * sum_max {
                        break;
                    }
                }
                for c_i in col.iter_mut() {
                    *c_i *= phase;
                }
            }
        }
    }
}

/// Static magnon model: hopping `J0/2`, interaction `Δ n_l n_{l+1}` and the
/// interaction-induced edge defects `-Δ/2 (n_1 + n_L)`.
pub fn static_magnon_hamiltonian(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
) -> Result<HermitianOperator> {
    Generator::new(params, basis, None)?.operator(0.0)
}

/// Rotating-frame Floquet Hamiltonian at time `t`: hopping `𝒥(t)` on
/// `a†_l a_{l+1}`, same diagonal as the static model.
pub fn rotating_frame_hamiltonian(
    t: f64,
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
) -> Result<HermitianOperator> {
    Generator::new(params, basis, Some(Frame::Rotating))?.operator(t)
}

/// Lab-frame driven, tilted Hamiltonian at time `t`: real hopping `J(t)`
/// and the tilt `B Σ_l l n_l` added to the static diagonal.
pub fn lab_frame_hamiltonian(
    t: f64,
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
) -> Result<HermitianOperator> {
    Generator::new(params, basis, Some(Frame::Lab))?.operator(t)
}

/// Diagonal phases `exp(i B t Σ_i l_i)` of the rotating-frame gauge
/// transformation, one per configuration.
pub fn gauge_phases(params: &ChainParams, basis: &MagnonBasis, t: f64) -> Vec<Complex64> {
    (0..basis.dim())
        .map(|k| Complex64::new(0.0, params.gradient() * t * basis.position_sum(k) as f64).exp())
        .collect()
}
