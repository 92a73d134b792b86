//! Eigensystems with degenerate-cluster bookkeeping.

use std::ops::Range;
use std::sync::Arc;

use nalgebra::DVector;

use crate::basis::{MagnonBasis, StateVector};
use crate::hamiltonians::HermitianOperator;
use crate::linalg::{self, CMatrix};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Ascending eigenvalues with orthonormal eigenvectors over a basis.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    basis: Arc<MagnonBasis>,
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Eigensystem {
    pub(crate) fn from_parts(basis: Arc<MagnonBasis>, values: Vec<f64>, vectors: CMatrix) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self {
            basis,
            values,
            vectors,
        }
    }

    pub fn of(op: &HermitianOperator) -> Self {
        let (values, vectors) = op.eigh();
        Self::from_parts(op.basis().clone(), values, vectors)
    }

    pub fn basis(&self) -> &Arc<MagnonBasis> {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn state(&self, k: usize) -> StateVector {
        StateVector::from_unitary_image(
            self.basis.clone(),
            DVector::from_column_slice(self.vectors.column(k).as_slice()),
        )
    }

    /// `|u_k(c)|²` over configurations.
    pub fn probabilities(&self, k: usize) -> Vec<f64> {
        self.vectors
            .column(k)
            .iter()
            .map(|z| z.norm_sqr())
            .collect()
    }

    /// Maximal runs of eigenvalues whose consecutive gaps are below `tol`.
    pub fn clusters(&self, tol: f64) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] >= tol {
                out.push(start..k);
                start = k;
            }
        }
        out
    }

    /// Diagonal of the normalized projector onto the span of `range`:
    /// configuration probabilities averaged over the subspace. Independent
    /// of the basis chosen inside a degenerate subspace.
    pub fn subspace_probabilities(&self, range: Range<usize>) -> Vec<f64> {
        let width = range.len() as f64;
        let mut probs = vec![0.0; self.basis.dim()];
        for k in range {
            for (p, z) in probs.iter_mut().zip(self.vectors.column(k).iter()) {
                *p += z.norm_sqr() / width;
            }
        }
        probs
    }

    /// Cluster containing index `k`.
    pub fn cluster_of(&self, k: usize, tol: f64) -> Range<usize> {
        let mut lo = k;
        while lo > 0 && self.values[lo] - self.values[lo - 1] < tol {
            lo -= 1;
        }
        let mut hi = k + 1;
        while hi < self.values.len() && self.values[hi] - self.values[hi - 1] < tol {
            hi += 1;
        }
        lo..hi
    }

    /// Re-orthonormalize every degenerate cluster and rotate it onto the
    /// eigenbasis of the edge-occupation operator `n_1 + n_L` restricted to
    /// the cluster (largest edge occupation first). Makes the state basis
    /// inside a degenerate cluster reproducible and puts edge-localized
    /// states on single vectors.
    pub(crate) fn canonicalize_clusters(&mut self, tol: f64) {
        let last = self.basis.sites();
        let score: Vec<f64> = (0..self.basis.dim())
            .map(|c| {
                (self.basis.is_occupied(c, 1) as u8 + self.basis.is_occupied(c, last) as u8) as f64
            })
            .collect();
        for range in self.clusters(tol) {
            if range.len() < 2 {
                continue;
            }
            linalg::orthonormalize_columns(&mut self.vectors, range.clone());
            let block = self.vectors.columns(range.start, range.len()).clone_owned();
            let mut weighted = block.clone();
            for (mut row, s) in weighted.row_iter_mut().zip(&score) {
                row *= num_complex::Complex64::new(*s, 0.0);
            }
            let restricted = block.adjoint() * weighted;
            let (_, rotation) = linalg::eigh(&restricted);
            // descending edge occupation
            let mut rotated = block * rotation;
            let n = rotated.ncols();
            for j in 0..n / 2 {
                rotated.swap_columns(j, n - 1 - j);
            }
            linalg::fix_phases(&mut rotated);
            self.vectors
                .columns_mut(range.start, range.len())
                .copy_from(&rotated);
        }
    }
}
