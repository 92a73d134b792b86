//! Brute-force references: every matrix builder is rebuilt term by term in
//! an occupation-number (bitmask) representation and compared entrywise.

use std::f64::consts::PI;
use std::sync::Arc;

use magnon_core::linalg::{self, CMatrix};
use magnon_core::{
    build_basis, effective_single, effective_two, lab_frame_hamiltonian, one_period_propagator,
    rotating_frame_hamiltonian, spin_correlation, static_magnon_hamiltonian,
    two_magnon_correlation, ChainParams, StateVector,
};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

mod common;

use common::*;

fn sectors() -> impl Iterator<Item = (usize, usize)> {
    (1..=5).flat_map(|l| (1..=l.min(3)).map(move |n| (l, n)))
}

fn driven(l: usize, j0: f64, j1: f64, delta: f64, omega: f64) -> ChainParams {
    ChainParams::builder(l)
        .j0(j0)
        .j1(j1)
        .delta(delta)
        .resonant(omega)
        .build()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn builders_match_fock_reference(
        j0 in -2.0f64..2.0,
        j1 in -1.0f64..1.0,
        delta in -5.0f64..5.0,
        omega in 1.0f64..12.0,
        t in 0.0f64..3.0,
    ) {
        for (l, n) in sectors() {
            let p = driven(l, j0, j1, delta, omega);
            let basis = Arc::new(build_basis(l, n).unwrap());
            let fock = Fock::new(l, n);
            let cases = [
                ("static", static_magnon_hamiltonian(&p, &basis).unwrap(), static_reference(&p, &fock)),
                ("rotating", rotating_frame_hamiltonian(t, &p, &basis).unwrap(), rotating_reference(&p, &fock, t)),
                ("lab", lab_frame_hamiltonian(t, &p, &basis).unwrap(), lab_reference(&p, &fock, t)),
            ];
            for (name, built, reference) in cases {
                let diff = linalg::max_abs(&(built.matrix() - fock.reorder(&basis, &reference)));
                prop_assert!(diff < 1e-12, "{} L={} N={}: {}", name, l, n, diff);
                prop_assert!(linalg::hermiticity_defect(built.matrix()) < 1e-12);
            }
            let effective = match n {
                1 => Some(effective_single(&p, &basis).unwrap()),
                2 => Some(effective_two(&p, &basis).unwrap()),
                _ => None,
            };
            if let Some(h) = effective {
                let reference = fock.reorder(&basis, &effective_reference(&p, &fock));
                prop_assert!(linalg::max_abs(&(h.matrix() - reference)) < 1e-12);
            }
        }
    }
}

#[test]
fn tilted_builders_match_reference() {
    let p = ChainParams::builder(5)
        .j1(0.3)
        .delta(0.7)
        .field(6.5, 8.0)
        .build()
        .unwrap();
    for n in 1..=3 {
        let basis = Arc::new(build_basis(5, n).unwrap());
        let fock = Fock::new(5, n);
        for t in [0.0, 0.37, 1.9] {
            let rot = rotating_frame_hamiltonian(t, &p, &basis).unwrap();
            let lab = lab_frame_hamiltonian(t, &p, &basis).unwrap();
            let r = fock.reorder(&basis, &rotating_reference(&p, &fock, t));
            let l = fock.reorder(&basis, &lab_reference(&p, &fock, t));
            assert!(linalg::max_abs(&(rot.matrix() - r)) < 1e-12);
            assert!(linalg::max_abs(&(lab.matrix() - l)) < 1e-12);
        }
    }
}

/// Time-ordered product of dense exponentials of the reference Hamiltonian.
#[test]
fn propagator_matches_dense_product() {
    let p = driven(5, 1.0, 0.4, 0.6, 8.0);
    let steps = 64;
    let period = 2.0 * PI / 8.0;
    let dt = period / steps as f64;
    for n in 1..=3 {
        let basis = Arc::new(build_basis(5, n).unwrap());
        let fock = Fock::new(5, n);
        let mut u = CMatrix::identity(basis.dim(), basis.dim());
        for k in 0..steps {
            let h = fock.reorder(
                &basis,
                &rotating_reference(&p, &fock, (k as f64 + 0.5) * dt),
            );
            u = linalg::expm_hermitian(&h, dt) * u;
        }
        let built = one_period_propagator(&p, &basis, steps).unwrap();
        assert!(linalg::max_abs(&(built.matrix() - u)) < 1e-12);
    }
}

/// `⟨S^z_x S^z_y⟩` evaluated on the full `2^L` spin space.
#[test]
fn spin_correlation_matches_spin_space() {
    let l = 4;
    let basis = Arc::new(build_basis(l, 2).unwrap());
    let amps = DVector::from_fn(basis.dim(), |k, _| {
        Complex64::new((k as f64 + 1.0).sin(), (2.0 * k as f64).cos())
    });
    let psi = StateVector::from_amplitudes(basis.clone(), amps).unwrap();
    let mut spin_state = vec![Complex64::default(); 1 << l];
    for (k, c) in basis.configs().enumerate() {
        let mask = c.iter().fold(0usize, |acc, &s| acc | 1 << (s - 1));
        spin_state[mask] = psi.amplitudes()[k];
    }
    let sz = |mask: usize, site: usize| if mask & (1 << site) != 0 { 0.5 } else { -0.5 };
    let built = spin_correlation(&psi).unwrap();
    let c = two_magnon_correlation(&psi).unwrap();
    for x in 0..l {
        for y in 0..l {
            let reference: f64 = spin_state
                .iter()
                .enumerate()
                .map(|(m, a)| a.norm_sqr() * sz(m, x) * sz(m, y))
                .sum();
            assert!((built[(x, y)] - reference).abs() < 1e-14);
            let pair: f64 = if x == y {
                0.0
            } else {
                spin_state
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| m & (1 << x) != 0 && m & (1 << y) != 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum()
            };
            assert!((c.get(x + 1, y + 1) - pair).abs() < 1e-14);
        }
    }
}
