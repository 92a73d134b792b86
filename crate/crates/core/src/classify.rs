//! Labels for two-magnon spectra: the five bands of the interacting static
//! chain, the four edge/extended combinations of the noninteracting driven
//! chain, and interaction- or edge-induced bound states in the continuum
//! found as IPR outliers.

use crate::basis::MagnonBasis;
use crate::error::{invalid, Result};
use crate::floquet::FloquetSpectrum;
use crate::observables;
use crate::spectrum::{Eigensystem, DEGENERACY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandLabel {
    /// (i) bound pair, `E ≈ Δ`
    BoundPair,
    /// (ii) bound pair at an edge, `E ≈ Δ/2`
    BoundMagnonEdge,
    /// (iii) two independent magnons, `E ≈ 0`
    Independent,
    /// (iv) one magnon on an edge, `E ≈ -Δ/2`
    OneMagnonEdge,
    /// (v) one magnon on each edge, `E ≈ -Δ`
    TwoMagnonEdge,
    /// (I) left-edge mode plus an extended magnon
    LeftEdgePlusExtended,
    /// (II) right-edge mode plus an extended magnon
    RightEdgePlusExtended,
    /// (III) both edge modes occupied
    BothEdges,
    /// (IV) two extended magnons
    BothExtended,
    /// Energy and structure disagree while the energy windows overlap.
    Ambiguous,
    Unclassified,
}

impl BandLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BandLabel::BoundPair => "i",
            BandLabel::BoundMagnonEdge => "ii",
            BandLabel::Independent => "iii",
            BandLabel::OneMagnonEdge => "iv",
            BandLabel::TwoMagnonEdge => "v",
            BandLabel::LeftEdgePlusExtended => "I",
            BandLabel::RightEdgePlusExtended => "II",
            BandLabel::BothEdges => "III",
            BandLabel::BothExtended => "IV",
            BandLabel::Ambiguous => "ambiguous",
            BandLabel::Unclassified => "unclassified",
        }
    }

    pub const INTERACTING: [BandLabel; 5] = [
        BandLabel::BoundPair,
        BandLabel::BoundMagnonEdge,
        BandLabel::Independent,
        BandLabel::OneMagnonEdge,
        BandLabel::TwoMagnonEdge,
    ];

    pub const NONINTERACTING: [BandLabel; 4] = [
        BandLabel::LeftEdgePlusExtended,
        BandLabel::RightEdgePlusExtended,
        BandLabel::BothEdges,
        BandLabel::BothExtended,
    ];
}

/// Probability weights of one state (or degenerate subspace) on
/// configuration classes, plus its IPR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    /// Weight on nearest-neighbour pairs `l₂ = l₁ + 1`.
    pub adjacency: f64,
    /// Weight on configurations containing site 1.
    pub left_edge: f64,
    /// Weight on configurations containing site `L`.
    pub right_edge: f64,
    /// Weight on configurations containing site 1 or `L`.
    pub edge: f64,
    /// Weight on the configuration `(1, L)`.
    pub corner: f64,
    pub ipr: f64,
}

impl StateDiagnostics {
    pub fn from_probabilities(basis: &MagnonBasis, probs: &[f64], ipr: f64) -> Self {
        let last = basis.sites();
        let mut d = StateDiagnostics {
            adjacency: 0.0,
            left_edge: 0.0,
            right_edge: 0.0,
            edge: 0.0,
            corner: 0.0,
            ipr,
        };
        for (k, (config, &p)) in basis.configs().zip(probs).enumerate() {
            let left = basis.is_occupied(k, 1);
            let right = basis.is_occupied(k, last);
            if config.windows(2).any(|w| w[1] == w[0] + 1) {
                d.adjacency += p;
            }
            if left {
                d.left_edge += p;
            }
            if right {
                d.right_edge += p;
            }
            if left || right {
                d.edge += p;
            }
            if left && right {
                d.corner += p;
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: BandLabel,
    pub diagnostics: StateDiagnostics,
}

/// Energy-window settings for the interacting bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractingOptions {
    /// Upper bound on the window half-width; the width used is
    /// `min(|Δ|/4, max_half_width)`.
    pub max_half_width: f64,
}

impl Default for InteractingOptions {
    fn default() -> Self {
        Self {
            max_half_width: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractingClassification {
    pub labels: Vec<Classification>,
    /// `|Δ| > 4 |J0|`: bands expected to be isolated.
    pub isolated: bool,
}

impl InteractingClassification {
    pub fn count(&self, label: BandLabel) -> usize {
        self.labels.iter().filter(|c| c.label == label).count()
    }

    pub fn indices(&self, label: BandLabel) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&k| self.labels[k].label == label)
            .collect()
    }
}

fn structural_interacting(d: &StateDiagnostics) -> BandLabel {
    let bound = d.adjacency > 0.5;
    let edged = d.edge > 0.5;
    match (bound, edged) {
        (true, false) => BandLabel::BoundPair,
        (true, true) => BandLabel::BoundMagnonEdge,
        (false, false) => BandLabel::Independent,
        (false, true) if d.corner > 0.5 => BandLabel::TwoMagnonEdge,
        (false, true) => BandLabel::OneMagnonEdge,
    }
}

/// Assign the five static two-magnon bands by energy window around
/// `{Δ, Δ/2, 0, -Δ/2, -Δ}` and confirm each hit with the structure of the
/// state: bound-pair weight, edge weight and `(1, L)` weight, evaluated on
/// the projector of its degenerate cluster. Disagreement or no window hit
/// gives [`BandLabel::Unclassified`].
pub fn classify_interacting_bands(
    system: &Eigensystem,
    delta: f64,
    j0: f64,
    options: &InteractingOptions,
) -> Result<InteractingClassification> {
    let basis = system.basis();
    if basis.magnons() != 2 {
        return Err(invalid("band classification needs the N=2 sector"));
    }
    if !delta.is_finite() || !j0.is_finite() {
        return Err(invalid("Delta and J0 must be finite"));
    }
    let half_width = (delta.abs() / 4.0).min(options.max_half_width);
    let centers = [delta, delta / 2.0, 0.0, -delta / 2.0, -delta];
    let mut labels = Vec::with_capacity(system.len());
    for range in system.clusters(DEGENERACY_TOL) {
        let probs = system.subspace_probabilities(range.clone());
        for k in range {
            let ipr = observables::ipr(system.vectors().column(k).as_slice()).unwrap_or(0.0);
            let diagnostics = StateDiagnostics::from_probabilities(basis, &probs, ipr);
            let e = system.values()[k];
            let hits: Vec<usize> = (0..5)
                .filter(|&b| half_width > 0.0 && (e - centers[b]).abs() <= half_width)
                .collect();
            let label = match hits.as_slice() {
                [b] if structural_interacting(&diagnostics) == BandLabel::INTERACTING[*b] => {
                    BandLabel::INTERACTING[*b]
                }
                _ => BandLabel::Unclassified,
            };
            labels.push(Classification { label, diagnostics });
        }
    }
    Ok(InteractingClassification {
        labels,
        isolated: delta.abs() > 4.0 * j0.abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoninteractingClassification {
    pub labels: Vec<Classification>,
    /// Some of the energy windows of types I, II and IV intersect.
    pub overlapping: bool,
}

impl NoninteractingClassification {
    pub fn count(&self, label: BandLabel) -> usize {
        self.labels.iter().filter(|c| c.label == label).count()
    }

    pub fn indices(&self, label: BandLabel) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&k| self.labels[k].label == label)
            .collect()
    }
}

/// Slack added to every energy window.
const WINDOW_SLACK: f64 = 1e-9;

fn intervals_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Label the two-magnon Floquet states of the noninteracting chain by edge
/// occupation (site 1 weight > 1/2, site `L` weight > 1/2) and check the
/// label against its energy window: `ε₋ ± |J1|/2` (I), `ε₊ ± |J1|/2` (II),
/// `ε₋ + ε₊` within the continuum (III) and `[-|J1|, |J1|]` (IV). Here `ε₋`
/// is the left-edge and `ε₊` the right-edge single-magnon quasienergy; their
/// order is not assumed.
///
/// States are taken individually (after the edge-occupation rotation of
/// degenerate clusters), so the doubly-edged state is separated from
/// continuum states it is degenerate with.
pub fn classify_noninteracting(
    spectrum: &FloquetSpectrum,
    epsilon_minus: f64,
    epsilon_plus: f64,
    j1: f64,
) -> Result<NoninteractingClassification> {
    let basis = spectrum.basis();
    if basis.magnons() != 2 {
        return Err(invalid(
            "noninteracting classification needs the N=2 sector",
        ));
    }
    let band = j1.abs() / 2.0 + WINDOW_SLACK;
    let cont = j1.abs() + WINDOW_SLACK;
    let win_i = (epsilon_minus - band, epsilon_minus + band);
    let win_ii = (epsilon_plus - band, epsilon_plus + band);
    let win_iv = (-cont, cont);
    let both = epsilon_minus + epsilon_plus;
    let win_iii = (both - cont, both + cont);
    let overlapping = intervals_overlap(win_i, win_ii)
        || intervals_overlap(win_i, win_iv)
        || intervals_overlap(win_ii, win_iv);
    let inside = |w: (f64, f64), e: f64| w.0 <= e && e <= w.1;

    let labels = (0..spectrum.len())
        .map(|k| {
            let probs = spectrum.eigensystem().probabilities(k);
            let diagnostics =
                StateDiagnostics::from_probabilities(basis, &probs, spectrum.iprs()[k]);
            let e = spectrum.quasienergies()[k];
            let (structural, window) =
                match (diagnostics.left_edge > 0.5, diagnostics.right_edge > 0.5) {
                    (true, true) => (BandLabel::BothEdges, win_iii),
                    (true, false) => (BandLabel::LeftEdgePlusExtended, win_i),
                    (false, true) => (BandLabel::RightEdgePlusExtended, win_ii),
                    (false, false) => (BandLabel::BothExtended, win_iv),
                };
            let label = if inside(window, e) {
                structural
            } else if overlapping {
                BandLabel::Ambiguous
            } else {
                BandLabel::Unclassified
            };
            Classification { label, diagnostics }
        })
        .collect();
    Ok(NoninteractingClassification {
        labels,
        overlapping,
    })
}

/// A state in the continuum window with an outlying IPR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInContinuum {
    pub index: usize,
    pub quasienergy: f64,
    pub ipr: f64,
}

/// Default IPR factor over the median continuum IPR.
pub const DEFAULT_IPR_FACTOR: f64 = 10.0;

/// States with quasienergy in `window` (inclusive) whose IPR exceeds
/// `ipr_factor` times the median IPR of all states in the window.
pub fn detect_eic_beic(
    spectrum: &FloquetSpectrum,
    window: (f64, f64),
    ipr_factor: f64,
) -> Vec<BoundInContinuum> {
    let inside: Vec<usize> = (0..spectrum.len())
        .filter(|&k| {
            let e = spectrum.quasienergies()[k];
            window.0 <= e && e <= window.1
        })
        .collect();
    if inside.is_empty() {
        return Vec::new();
    }
    let mut iprs: Vec<f64> = inside.iter().map(|&k| spectrum.iprs()[k]).collect();
    iprs.sort_by(f64::total_cmp);
    let m = iprs.len();
    let median = if m % 2 == 1 {
        iprs[m / 2]
    } else {
        0.5 * (iprs[m / 2 - 1] + iprs[m / 2])
    };
    inside
        .into_iter()
        .filter(|&k| spectrum.iprs()[k] > ipr_factor * median)
        .map(|k| BoundInContinuum {
            index: k,
            quasienergy: spectrum.quasienergies()[k],
            ipr: spectrum.iprs()[k],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::floquet::{floquet_hamiltonian, UnitaryPropagator};
    use crate::hamiltonians::static_magnon_hamiltonian;
    use crate::linalg::{self, CMatrix};
    use crate::params::ChainParams;
    use std::sync::Arc;

    fn basis(l: usize, n: usize) -> Arc<MagnonBasis> {
        Arc::new(build_basis(l, n).unwrap())
    }

    #[test]
    fn diagnostics_of_basis_states() {
        let b = basis(6, 2);
        let mut probs = vec![0.0; b.dim()];
        probs[b.index_of(&[1, 6]).unwrap()] = 1.0;
        let d = StateDiagnostics::from_probabilities(&b, &probs, 1.0);
        assert_eq!(
            (d.left_edge, d.right_edge, d.edge, d.corner),
            (1.0, 1.0, 1.0, 1.0)
        );
        assert_eq!(d.adjacency, 0.0);
        assert_eq!(structural_interacting(&d), BandLabel::TwoMagnonEdge);
    }

    #[test]
    fn interacting_small_chain_partitions() {
        let p = ChainParams::undriven(9, 20.0).unwrap();
        let b = basis(9, 2);
        let sys = Eigensystem::of(&static_magnon_hamiltonian(&p, &b).unwrap());
        let c =
            classify_interacting_bands(&sys, 20.0, 1.0, &InteractingOptions::default()).unwrap();
        assert!(c.isolated);
        assert_eq!(c.labels.len(), 36);
        // L-3 bulk pairs, 2 edge pairs, 2(L-3) one-edge, 1 corner, rest bulk
        assert_eq!(c.count(BandLabel::BoundPair), 6);
        assert_eq!(c.count(BandLabel::BoundMagnonEdge), 2);
        assert_eq!(c.count(BandLabel::Independent), 15);
        assert_eq!(c.count(BandLabel::OneMagnonEdge), 12);
        assert_eq!(c.count(BandLabel::TwoMagnonEdge), 1);
    }

    #[test]
    fn interacting_without_interaction_is_unclassified() {
        let p = ChainParams::undriven(5, 0.0).unwrap();
        let b = basis(5, 2);
        let sys = Eigensystem::of(&static_magnon_hamiltonian(&p, &b).unwrap());
        let c = classify_interacting_bands(&sys, 0.0, 1.0, &InteractingOptions::default()).unwrap();
        assert_eq!(c.count(BandLabel::Unclassified), 10);
        assert!(classify_interacting_bands(
            &Eigensystem::of(&static_magnon_hamiltonian(&p, &basis(5, 1)).unwrap()),
            0.0,
            1.0,
            &InteractingOptions::default()
        )
        .is_err());
    }

    fn diagonal_spectrum(values: &[f64]) -> FloquetSpectrum {
        let b = basis(values.len(), 1);
        let period = 1.0;
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values
                .iter()
                .map(|&e| num_complex::Complex64::new(0.0, -e * period).exp()),
        ));
        let u = UnitaryPropagator::new(b, m, period).unwrap();
        floquet_hamiltonian(&u).unwrap().spectrum()
    }

    #[test]
    fn eic_detection_windows() {
        let s = diagonal_spectrum(&[-1.0, 0.1, 0.2, 0.3]);
        assert!(detect_eic_beic(&s, (5.0, 6.0), 10.0).is_empty());
        // basis states all have IPR 1: nothing stands out
        assert!(detect_eic_beic(&s, (-2.0, 2.0), 10.0).is_empty());
        assert_eq!(
            linalg::max_abs(&(s.states() - CMatrix::identity(4, 4))),
            0.0
        );
    }
}
