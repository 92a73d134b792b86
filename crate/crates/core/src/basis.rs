//! Number-conserving magnon bases and state vectors.
//!
//! Sites are labelled `1..=L` in configurations; matrix and vector indices
//! are 0-based positions in the lexicographic configuration list.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Ordered list of hard-core `N`-magnon configurations `l1 < l2 < … < lN`
/// on `L` sites, with the inverse map back to indices.
#[derive(Debug, Clone)]
pub struct MagnonBasis {
    sites: usize,
    magnons: usize,
    // flattened, stride = magnons
    sites_flat: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

/// A single nearest-neighbour move `a†_l a_{l+1}`: the magnon at `l+1` in
/// configuration `from` hops to `l`, giving configuration `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub to: usize,
    pub from: usize,
    /// Left site `l` of the bond (1-based).
    pub bond: usize,
}

/// Enumerate the lexicographically ordered `N`-magnon basis on `L` sites.
pub fn build_basis(sites: usize, magnons: usize) -> Result<MagnonBasis> {
    if magnons < 1 || magnons > sites {
        return Err(invalid(format!(
            "magnon number must satisfy 1 <= N <= L, got N={magnons}, L={sites}"
        )));
    }
    let mut sites_flat = Vec::new();
    let mut current: Vec<usize> = (1..=magnons).collect();
    loop {
        sites_flat.extend_from_slice(&current);
        // rightmost position that can still be advanced
        let Some(pos) = (0..magnons)
            .rev()
            .find(|&i| current[i] < sites - (magnons - 1 - i))
        else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..magnons {
            current[i] = current[i - 1] + 1;
        }
    }
    let index = sites_flat
        .chunks(magnons)
        .enumerate()
        .map(|(k, c)| (c.to_vec(), k))
        .collect();
    Ok(MagnonBasis {
        sites,
        magnons,
        sites_flat,
        index,
    })
}

impl MagnonBasis {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn magnons(&self) -> usize {
        self.magnons
    }

    pub fn dim(&self) -> usize {
        self.sites_flat.len() / self.magnons
    }

    /// Sorted, 1-based occupied sites of configuration `k`.
    pub fn config(&self, k: usize) -> &[usize] {
        &self.sites_flat[k * self.magnons..(k + 1) * self.magnons]
    }

    pub fn configs(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.sites_flat.chunks(self.magnons)
    }

    pub fn index_of(&self, config: &[usize]) -> Option<usize> {
        self.index.get(config).copied()
    }

    pub fn is_occupied(&self, k: usize, site: usize) -> bool {
        self.config(k).binary_search(&site).is_ok()
    }

    /// Number of occupied nearest-neighbour bonds in configuration `k`.
    pub fn adjacent_pairs(&self, k: usize) -> usize {
        self.config(k)
            .windows(2)
            .filter(|w| w[1] == w[0] + 1)
            .count()
    }

    /// `Σ_i l_i` for configuration `k`; the tilt energy is `B` times this.
    pub fn position_sum(&self, k: usize) -> usize {
        self.config(k).iter().sum()
    }

    /// All hard-core-respecting moves of one magnon one site to the left.
    /// Each unordered pair of configurations connected by a single hop
    /// appears exactly once.
    pub fn left_moves(&self) -> Vec<Hop> {
        let mut hops = Vec::new();
        let mut scratch = vec![0; self.magnons];
        for from in 0..self.dim() {
            let config = self.config(from);
            for (i, &site) in config.iter().enumerate() {
                if site == 1 || (i > 0 && config[i - 1] == site - 1) {
                    continue;
                }
                scratch.copy_from_slice(config);
                scratch[i] = site - 1;
                let to = self.index[&scratch];
                hops.push(Hop {
                    to,
                    from,
                    bond: site - 1,
                });
            }
        }
        hops
    }

    pub(crate) fn ensure_same(&self, other: &MagnonBasis) -> Result<()> {
        if self.sites == other.sites && self.magnons == other.magnons {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected_sites: self.sites,
                expected_magnons: self.magnons,
                sites: other.sites,
                magnons: other.magnons,
            })
        }
    }
}

impl PartialEq for MagnonBasis {
    fn eq(&self, other: &Self) -> bool {
        self.sites == other.sites && self.magnons == other.magnons
    }
}

/// Normalized amplitudes `ψ_{l1…lN}` over a magnon basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<MagnonBasis>,
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Normalizes `amps`; fails on a length mismatch or a zero vector.
    pub fn from_amplitudes(basis: Arc<MagnonBasis>, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: amps.len(),
            });
        }
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            basis,
            amps: amps.unscale(norm),
        })
    }

    /// Takes amplitudes that are already normalized (e.g. produced by a
    /// unitary map) without rescaling them.
    pub(crate) fn from_unitary_image(basis: Arc<MagnonBasis>, amps: DVector<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), basis.dim());
        Self { basis, amps }
    }

    /// The basis state `|l1 … lN⟩`.
    pub fn basis_state(basis: Arc<MagnonBasis>, config: &[usize]) -> Result<Self> {
        let k = basis
            .index_of(config)
            .ok_or_else(|| invalid(format!("configuration {config:?} is not in the basis")))?;
        let mut amps = DVector::zeros(basis.dim());
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    /// One magnon at `site` (single-magnon basis).
    pub fn single(basis: Arc<MagnonBasis>, site: usize) -> Result<Self> {
        if basis.magnons() != 1 {
            return Err(invalid("single-site launch requires the N=1 basis"));
        }
        Self::basis_state(basis, &[site])
    }

    /// Two magnons on the bond `(site, site+1)`.
    pub fn adjacent(basis: Arc<MagnonBasis>, site: usize) -> Result<Self> {
        Self::pair(basis, site, site + 1)
    }

    /// Two magnons at `first` and `second` (any order, must differ).
    pub fn pair(basis: Arc<MagnonBasis>, first: usize, second: usize) -> Result<Self> {
        if basis.magnons() != 2 {
            return Err(invalid("two-magnon launch requires the N=2 basis"));
        }
        if first == second {
            return Err(invalid("hard-core magnons cannot share a site"));
        }
        Self::basis_state(basis, &[first.min(second), first.max(second)])
    }

    /// Equal-amplitude superposition of every configuration.
    pub fn uniform(basis: Arc<MagnonBasis>) -> Self {
        let d = basis.dim();
        let amps = DVector::from_element(d, Complex64::new(1.0 / (d as f64).sqrt(), 0.0));
        Self { basis, amps }
    }

    pub fn basis(&self) -> &Arc<MagnonBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Configuration probabilities `|ψ_c|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.basis.ensure_same(&other.basis)?;
        Ok(self.amps.dotc(&other.amps).norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn two_magnon_count() {
        assert_eq!(build_basis(21, 2).unwrap().dim(), 210);
    }

    #[test]
    fn lexicographic_order() {
        let b = build_basis(3, 2).unwrap();
        let configs: Vec<_> = b.configs().map(|c| c.to_vec()).collect();
        assert_eq!(configs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn single_magnon_identity() {
        let b = build_basis(21, 1).unwrap();
        assert_eq!(b.dim(), 21);
        for l in 1..=21 {
            assert_eq!(b.index_of(&[l]), Some(l - 1));
        }
    }

    #[test]
    fn rejects_bad_magnon_numbers() {
        assert!(build_basis(3, 0).is_err());
        assert!(build_basis(3, 4).is_err());
        assert_eq!(build_basis(3, 3).unwrap().dim(), 1);
    }

    #[test]
    fn left_moves_small_chain() {
        let b = build_basis(3, 2).unwrap();
        // (1,3) -> (1,2) and (2,3) -> (1,3); (1,2) is blocked.
        let hops: Vec<_> = b.left_moves().iter().map(|h| (h.from, h.to)).collect();
        assert_eq!(hops, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn launches() {
        let b = Arc::new(build_basis(21, 2).unwrap());
        let s = StateVector::adjacent(b.clone(), 5).unwrap();
        assert_eq!(s.probabilities()[b.index_of(&[5, 6]).unwrap()], 1.0);
        let s = StateVector::pair(b.clone(), 9, 2).unwrap();
        assert_eq!(s.probabilities()[b.index_of(&[2, 9]).unwrap()], 1.0);
        assert!(StateVector::pair(b.clone(), 4, 4).is_err());
        assert!(StateVector::single(b, 1).is_err());
    }

    #[test]
    fn normalizes_amplitudes() {
        let b = Arc::new(build_basis(4, 1).unwrap());
        let amps = DVector::from_element(4, Complex64::new(3.0, -1.0));
        let s = StateVector::from_amplitudes(b.clone(), amps).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(
            StateVector::from_amplitudes(b, DVector::zeros(4)).unwrap_err(),
            Error::ZeroVector
        );
    }

    proptest! {
        #[test]
        fn index_round_trip(sites in 1usize..12, magnons in 1usize..5) {
            prop_assume!(magnons <= sites);
            let b = build_basis(sites, magnons).unwrap();
            prop_assert_eq!(b.dim(), binomial(sites, magnons));
            let mut previous: Option<Vec<usize>> = None;
            for (k, c) in b.configs().enumerate() {
                prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(c[0] >= 1 && c[magnons - 1] <= sites);
                prop_assert_eq!(b.index_of(c), Some(k));
                if let Some(p) = &previous {
                    prop_assert!(p.as_slice() < c);
                }
                previous = Some(c.to_vec());
            }
        }
    }
}
