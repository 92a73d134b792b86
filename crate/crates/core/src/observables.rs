//! Densities, magnetization, two-magnon and spin correlations, and the
//! inverse participation ratio.
//!
//! Site arguments are 1-based throughout; returned per-site arrays are
//! indexed `l - 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{MagnonBasis, StateVector};
use crate::error::{invalid, Error, Result};

/// Magnon density `n_l = Σ_{c ∋ l} |ψ_c|²`.
pub fn density(psi: &StateVector) -> Vec<f64> {
    density_from_probabilities(psi.basis(), &psi.probabilities())
}

/// Density of a (possibly mixed) distribution over configurations.
pub fn density_from_probabilities(basis: &MagnonBasis, probs: &[f64]) -> Vec<f64> {
    let mut n = vec![0.0; basis.sites()];
    for (config, p) in basis.configs().zip(probs) {
        for &l in config {
            n[l - 1] += p;
        }
    }
    n
}

/// Spin magnetization `S^z_l = n_l - 1/2`.
pub fn magnetization(psi: &StateVector) -> Vec<f64> {
    density(psi).into_iter().map(|n| n - 0.5).collect()
}

/// Magnetization of the fully polarized reference state (no magnons).
pub fn vacuum_magnetization(sites: usize) -> Vec<f64> {
    vec![-0.5; sites]
}

/// Two-magnon correlation `C_xy = ⟨a†_x a†_y a_y a_x⟩` on an `L × L` grid.
///
/// For hard-core magnons `C_xy = |ψ_{min(x,y), max(x,y)}|²` off the
/// diagonal and `C_xx = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    values: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Builds the correlation from configuration probabilities of an
    /// `N = 2` basis; a mixture (e.g. the diagonal of a subspace projector)
    /// is allowed.
    pub fn from_probabilities(basis: &MagnonBasis, probs: &[f64]) -> Result<Self> {
        if basis.magnons() != 2 {
            return Err(invalid("two-magnon correlation requires the N=2 basis"));
        }
        if probs.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: probs.len(),
            });
        }
        let l = basis.sites();
        let mut values = DMatrix::zeros(l, l);
        for (config, &p) in basis.configs().zip(probs) {
            let (x, y) = (config[0] - 1, config[1] - 1);
            values[(x, y)] = p;
            values[(y, x)] = p;
        }
        Ok(Self { values })
    }

    pub fn sites(&self) -> usize {
        self.values.nrows()
    }

    /// `C_xy` for 1-based sites.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[(x - 1, y - 1)]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `Σ_{x≠y} C_xy`; equals 2 for a normalized two-magnon state.
    pub fn total(&self) -> f64 {
        self.values.sum()
    }

    /// Largest entry; the diagonal is identically zero so this is the
    /// off-diagonal maximum.
    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// `C / C_max`, or all zeros for a vanishing matrix.
    pub fn normalized(&self) -> DMatrix<f64> {
        let m = self.max();
        if m > 0.0 {
            &self.values / m
        } else {
            self.values.clone()
        }
    }

    /// Fraction of the total weight on cells `(x, y)` (1-based) selected
    /// by `cell`.
    pub fn weight_fraction(&self, cell: impl Fn(usize, usize) -> bool) -> f64 {
        let l = self.sites();
        let mut selected = 0.0;
        for x in 1..=l {
            for y in 1..=l {
                if cell(x, y) {
                    selected += self.get(x, y);
                }
            }
        }
        let total = self.total();
        if total > 0.0 {
            selected / total
        } else {
            0.0
        }
    }
}

pub fn two_magnon_correlation(psi: &StateVector) -> Result<CorrelationMatrix> {
    CorrelationMatrix::from_probabilities(psi.basis(), &psi.probabilities())
}

/// Spin correlation `S_xy = ⟨S^z_x S^z_y⟩` obtained from the two-magnon
/// correlation: `C_xy - S^z_x/2 - S^z_y/2 - 1/4` for `x ≠ y`, `1/4` on the
/// diagonal.
pub fn spin_correlation(psi: &StateVector) -> Result<DMatrix<f64>> {
    let c = two_magnon_correlation(psi)?;
    let sz = magnetization(psi);
    let l = sz.len();
    Ok(DMatrix::from_fn(l, l, |x, y| {
        if x == y {
            0.25
        } else {
            c.values[(x, y)] - sz[x] / 2.0 - sz[y] / 2.0 - 0.25
        }
    }))
}

/// Inverse participation ratio `Σ|u|⁴ / (Σ|u|²)²`.
pub fn ipr(amps: &[Complex64]) -> Result<f64> {
    let (mut s2, mut s4) = (0.0, 0.0);
    for a in amps {
        let p = a.norm_sqr();
        s2 += p;
        s4 += p * p;
    }
    if s2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(s4 / (s2 * s2))
}

pub fn state_ipr(psi: &StateVector) -> f64 {
    // a StateVector is normalized by construction
    ipr(psi.amplitudes().as_slice()).unwrap_or(0.0)
}
