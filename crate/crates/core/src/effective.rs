//! First-order static effective models of the resonantly driven chain and
//! the second-order Wannier-Zeeman edge defects of the tilted chain.

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::MagnonBasis;
use crate::error::{invalid, Error, Result};
use crate::floquet::{fold_quasienergy, FloquetSpectrum};
use crate::hamiltonians::HermitianOperator;
use crate::linalg::CMatrix;
use crate::params::ChainParams;

/// Ratio below which `B ≫ J0` or `ω ≫ J0, J1` is considered violated.
pub const VALIDITY_RATIO: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityWarning {
    /// `ω` is not large compared with `J0` and `J1`.
    SlowDrive,
    /// `B` is not large compared with `J0`.
    WeakGradient,
}

/// Regime checks for the effective descriptions; advisory only.
pub fn validity_warnings(params: &ChainParams) -> Vec<ValidityWarning> {
    let mut out = Vec::new();
    let scale = params.j0().abs().max(params.j1().abs());
    if params.omega() < VALIDITY_RATIO * scale {
        out.push(ValidityWarning::SlowDrive);
    }
    if params.gradient().abs() < VALIDITY_RATIO * params.j0().abs() {
        out.push(ValidityWarning::WeakGradient);
    }
    out
}

fn check_sector(params: &ChainParams, basis: &MagnonBasis, magnons: usize) -> Result<()> {
    if basis.magnons() != magnons {
        return Err(invalid(format!(
            "effective model needs the N={magnons} sector, got N={}",
            basis.magnons()
        )));
    }
    if basis.sites() != params.sites() {
        return Err(Error::BasisMismatch {
            expected_sites: params.sites(),
            expected_magnons: magnons,
            sites: basis.sites(),
            magnons: basis.magnons(),
        });
    }
    if !params.is_resonant() {
        return Err(invalid(
            "effective models require resonant driving (omega = B)",
        ));
    }
    Ok(())
}

/// Uniform hopping `M0` plus a diagonal built by `diag(config)`.
fn hopping_model(
    basis: &Arc<MagnonBasis>,
    m0: f64,
    diag: impl Fn(&[usize]) -> f64,
) -> Result<HermitianOperator> {
    let n = basis.dim();
    let mut m = CMatrix::zeros(n, n);
    for (k, config) in basis.configs().enumerate() {
        m[(k, k)] = Complex64::new(diag(config), 0.0);
    }
    for hop in basis.left_moves() {
        m[(hop.to, hop.from)] = Complex64::new(m0, 0.0);
        m[(hop.from, hop.to)] = Complex64::new(m0, 0.0);
    }
    HermitianOperator::new(basis.clone(), m)
}

/// Single magnon: hopping `M0`, `-(Δ/2 + Δ₁)` on site 1, `-(Δ/2 - Δ₁)` on
/// site `L`.
pub fn effective_single(
    params: &ChainParams,
    basis: &Arc<MagnonBasis>,
) -> Result<HermitianOperator> {
    check_sector(params, basis, 1)?;
    let d = params.derived()?;
    let (delta, last) = (params.delta(), params.sites());
    hopping_model(basis, d.m0, |c| {
        let mut e = 0.0;
        if c[0] == 1 {
            e -= delta / 2.0 + d.delta1;
        }
        if c[0] == last {
            e -= delta / 2.0 - d.delta1;
        }
        e
    })
}

/// Two magnons: hopping `M0` (hard-core), diagonal
/// `Δ[l₂ = l₁+1] - (Δ/2 + Δ₁)[l₁ = 1] - (Δ/2 - Δ₁)[l₂ = L]`.
///
/// The configuration `(1, L)` picks up both edge terms.
pub fn effective_two(params: &ChainParams, basis: &Arc<MagnonBasis>) -> Result<HermitianOperator> {
    check_sector(params, basis, 2)?;
    let d = params.derived()?;
    let (delta, last) = (params.delta(), params.sites());
    hopping_model(basis, d.m0, |c| {
        let (l1, l2) = (c[0], c[1]);
        let mut e = 0.0;
        if l2 == l1 + 1 {
            e += delta;
        }
        if l1 == 1 {
            e -= delta / 2.0 + d.delta1;
        }
        if l2 == last {
            e -= delta / 2.0 - d.delta1;
        }
        e
    })
}

/// Second-order edge shifts of the tilted, undriven single-magnon chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WannierZeemanDefects {
    /// `-J0²/(4B)`
    pub left_shift: f64,
    /// `+J0²/(4B)`
    pub right_shift: f64,
    /// `B - J0²/(4B)`
    pub left_energy: f64,
    /// `L B + J0²/(4B)`
    pub right_energy: f64,
    /// `false` when `B ≫ J0` does not hold.
    pub valid: bool,
}

pub fn wannier_zeeman_defects(params: &ChainParams) -> Result<WannierZeemanDefects> {
    let b = params.gradient();
    if b == 0.0 {
        return Err(invalid("Wannier-Zeeman defects need a non-zero gradient"));
    }
    let shift = params.j0() * params.j0() / (4.0 * b);
    Ok(WannierZeemanDefects {
        left_shift: -shift,
        right_shift: shift,
        left_energy: b - shift,
        right_energy: params.sites() as f64 * b + shift,
        valid: b.abs() >= VALIDITY_RATIO * params.j0().abs(),
    })
}

/// Largest difference between the sorted exact quasienergies and the
/// sorted model eigenvalues folded into the same Floquet zone.
pub fn spectral_deviation(exact: &FloquetSpectrum, model: &HermitianOperator) -> Result<f64> {
    if exact.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            left: exact.len(),
            right: model.dim(),
        });
    }
    let omega = exact.omega();
    let raw = model.eigenvalues();
    if let (Some(lo), Some(hi)) = (raw.first(), raw.last()) {
        if hi - lo >= omega {
            return Err(invalid("model spectrum is wider than one Floquet zone"));
        }
    }
    let mut folded: Vec<f64> = raw.iter().map(|&e| fold_quasienergy(e, omega)).collect();
    folded.sort_by(f64::total_cmp);
    Ok(exact
        .quasienergies()
        .iter()
        .zip(&folded)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
