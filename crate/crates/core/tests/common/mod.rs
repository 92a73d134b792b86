//! Occupation-number reference builders shared by the oracle and
//! acceptance targets.
#![allow(dead_code)]

use magnon_core::linalg::CMatrix;
use magnon_core::{ChainParams, MagnonBasis};
use num_complex::Complex64;

/// Occupation-number space of `magnons` hard-core bosons on `sites` sites.
pub struct Fock {
    pub sites: usize,
    pub masks: Vec<u32>,
}

impl Fock {
    pub fn new(sites: usize, magnons: usize) -> Self {
        let masks = (0u32..1 << sites)
            .filter(|m| m.count_ones() as usize == magnons)
            .collect();
        Self { sites, masks }
    }

    pub fn occupied(mask: u32, site: usize) -> bool {
        mask & (1 << (site - 1)) != 0
    }

    pub fn number(mask: u32, site: usize) -> f64 {
        Self::occupied(mask, site) as u8 as f64
    }

    /// `Σ_l [h a†_l a_{l+1} + h* a†_{l+1} a_l] + Σ_c diag(c) |c⟩⟨c|` in the
    /// Fock ordering.
    pub fn operator(&self, h: Complex64, diag: impl Fn(u32) -> f64) -> CMatrix {
        let n = self.masks.len();
        let pos = |m: u32| self.masks.iter().position(|&x| x == m).unwrap();
        let mut out = CMatrix::zeros(n, n);
        for (j, &m) in self.masks.iter().enumerate() {
            out[(j, j)] += Complex64::new(diag(m), 0.0);
            for l in 1..self.sites {
                // a†_l a_{l+1}
                if Self::occupied(m, l + 1) && !Self::occupied(m, l) {
                    let target = m ^ (1 << l) ^ (1 << (l - 1));
                    out[(pos(target), j)] += h;
                }
                // a†_{l+1} a_l
                if Self::occupied(m, l) && !Self::occupied(m, l + 1) {
                    let target = m ^ (1 << l) ^ (1 << (l - 1));
                    out[(pos(target), j)] += h.conj();
                }
            }
        }
        out
    }

    /// Permute into the crate's configuration ordering.
    pub fn reorder(&self, basis: &MagnonBasis, m: &CMatrix) -> CMatrix {
        let perm: Vec<usize> = basis
            .configs()
            .map(|c| {
                let mask = c.iter().fold(0u32, |acc, &l| acc | 1 << (l - 1));
                self.masks.iter().position(|&x| x == mask).unwrap()
            })
            .collect();
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(perm[i], perm[j])])
    }

    pub fn interaction(&self, mask: u32, delta: f64) -> f64 {
        (1..self.sites)
            .map(|l| delta * Self::number(mask, l) * Self::number(mask, l + 1))
            .sum()
    }
}

pub fn static_reference(p: &ChainParams, fock: &Fock) -> CMatrix {
    let (delta, last) = (p.delta(), p.sites());
    fock.operator(Complex64::new(p.j0() / 2.0, 0.0), |m| {
        fock.interaction(m, delta) - delta / 2.0 * (Fock::number(m, 1) + Fock::number(m, last))
    })
}

pub fn rotating_reference(p: &ChainParams, fock: &Fock, t: f64) -> CMatrix {
    let (delta, last) = (p.delta(), p.sites());
    let (w, b) = (p.omega(), p.gradient());
    let i = Complex64::i();
    let coupling = p.j1() / 4.0 * (i * (w - b) * t).exp()
        + p.j0() / 2.0 * (-i * b * t).exp()
        + p.j1() / 4.0 * (-i * (w + b) * t).exp();
    fock.operator(coupling, |m| {
        fock.interaction(m, delta) - delta / 2.0 * (Fock::number(m, 1) + Fock::number(m, last))
    })
}

pub fn lab_reference(p: &ChainParams, fock: &Fock, t: f64) -> CMatrix {
    let (delta, last) = (p.delta(), p.sites());
    let exchange = (p.j0() + p.j1() * (p.omega() * t).cos()) / 2.0;
    fock.operator(Complex64::new(exchange, 0.0), |m| {
        let tilt: f64 = (1..=last)
            .map(|l| p.gradient() * l as f64 * Fock::number(m, l))
            .sum();
        fock.interaction(m, delta) - delta / 2.0 * (Fock::number(m, 1) + Fock::number(m, last))
            + tilt
    })
}

pub fn effective_reference(p: &ChainParams, fock: &Fock) -> CMatrix {
    let (delta, last) = (p.delta(), p.sites());
    let m0 = p.j1() / 4.0;
    let delta1 = (p.j0().powi(2) / 4.0 + p.j1().powi(2) / 32.0) / p.omega();
    fock.operator(Complex64::new(m0, 0.0), |m| {
        fock.interaction(m, delta)
            - (delta / 2.0 + delta1) * Fock::number(m, 1)
            - (delta / 2.0 - delta1) * Fock::number(m, last)
    })
}
