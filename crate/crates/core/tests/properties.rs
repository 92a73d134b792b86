use std::sync::Arc;

use magnon_core::classify::{classify_interacting_bands, BandLabel, InteractingOptions};
use magnon_core::dynamics::{evolve_driven, evolve_static};
use magnon_core::effective::effective_single;
use magnon_core::floquet::{floquet_hamiltonian, one_period_propagator, stroboscopic_evolve};
use magnon_core::hamiltonians::gauge_phases;
use magnon_core::linalg;
use magnon_core::observables::{density, two_magnon_correlation};
use magnon_core::{
    build_basis, static_magnon_hamiltonian, ChainParams, Eigensystem, Frame, MagnonBasis,
    StateVector,
};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn basis(l: usize, n: usize) -> Arc<MagnonBasis> {
    Arc::new(build_basis(l, n).unwrap())
}

fn state(b: Arc<MagnonBasis>, seed: u64) -> StateVector {
    let amps = DVector::from_fn(b.dim(), |k, _| {
        let x = (seed as f64 + 1.0) * (k as f64 + 0.5);
        Complex64::new(x.sin(), (1.7 * x).cos())
    });
    StateVector::from_amplitudes(b, amps).unwrap()
}

fn params() -> impl Strategy<Value = ChainParams> {
    (
        3usize..8,
        -1.5f64..1.5,
        -1.0f64..1.0,
        -3.0f64..3.0,
        4.0f64..12.0,
    )
        .prop_map(|(l, j0, j1, delta, omega)| {
            ChainParams::builder(l)
                .j0(j0)
                .j1(j1)
                .delta(delta)
                .resonant(omega)
                .build()
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn floquet_round_trip(p in params(), n in 1usize..3) {
        let b = basis(p.sites(), n);
        let u = one_period_propagator(&p, &b, 64).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-8);
        let h_f = floquet_hamiltonian(&u).unwrap();
        let back = linalg::expm_hermitian(h_f.hamiltonian().matrix(), u.period());
        let trip = linalg::max_abs(&(back - u.matrix()));
        prop_assert!(trip < 1e-8, "round trip {}", trip);
        let s = h_f.spectrum();
        let half = u.omega() / 2.0;
        prop_assert!(s.quasienergies().iter().all(|&e| -half <= e && e < half), "{:?}", s.quasienergies());
        prop_assert!(s.quasienergies().windows(2).all(|w| w[0] <= w[1]));
        let overlap = s.states().adjoint() * s.states();
        let id = linalg::CMatrix::identity(b.dim(), b.dim());
        let ortho = linalg::max_abs(&(overlap - id));
        prop_assert!(ortho < 1e-10, "orthonormality {}", ortho);
        let n_states = b.dim() as f64;
        prop_assert!(s.iprs().iter().all(|&r| r >= 1.0 / n_states - 1e-12 && r <= 1.0 + 1e-12));
    }

    #[test]
    fn gauge_leaves_observables_unchanged(p in params(), seed in 0u64..1000, t in 0.0f64..5.0) {
        let b = basis(p.sites(), 2);
        let psi = state(b.clone(), seed);
        let phases = gauge_phases(&p, &b, t);
        let rotated = DVector::from_iterator(
            b.dim(),
            psi.amplitudes().iter().zip(&phases).map(|(a, g)| a * g),
        );
        let phi = StateVector::from_amplitudes(b, rotated).unwrap();
        for (x, y) in density(&psi).iter().zip(density(&phi)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let (c, d) = (two_magnon_correlation(&psi).unwrap(), two_magnon_correlation(&phi).unwrap());
        prop_assert!((c.values() - d.values()).abs().max() < 1e-12);
    }

    #[test]
    fn static_evolution_conserves(p in params(), seed in 0u64..1000) {
        let b = basis(p.sites(), 2);
        let h = static_magnon_hamiltonian(&p, &b).unwrap();
        let psi = state(b, seed);
        let e0 = h.expectation(&psi).unwrap();
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 1.3).collect();
        let tr = evolve_static(&h, &psi, &times).unwrap();
        prop_assert!(tr.max_norm_defect() < 1e-10);
        for s in tr.states() {
            prop_assert!((h.expectation(s).unwrap() - e0).abs() < 1e-10);
            let c = two_magnon_correlation(s).unwrap();
            prop_assert!((c.total() - 2.0).abs() < 1e-10);
            prop_assert!((density(s).iter().sum::<f64>() - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn driven_evolution_conserves_norm(p in params(), seed in 0u64..1000) {
        let b = basis(p.sites(), 2);
        let period = p.derived().unwrap().period;
        let psi = state(b.clone(), seed);
        let times: Vec<f64> = (1..=3).map(|k| k as f64 * period).collect();
        for frame in [Frame::Lab, Frame::Rotating] {
            let tr = evolve_driven(&p, &b, &psi, &times, frame, period / 64.0).unwrap();
            prop_assert!(tr.max_norm_defect() < 1e-10);
        }
        let u = one_period_propagator(&p, &b, 32).unwrap();
        let strob = stroboscopic_evolve(&u, &psi, 50).unwrap();
        prop_assert!(strob.max_norm_defect() < 1e-8 * 50.0);
    }

    #[test]
    fn effective_single_mirror(p in params()) {
        // reflecting the chain maps site 1 to L; with Δ₁ -> -Δ₁ the edges swap
        let b = basis(p.sites(), 1);
        let h = effective_single(&p, &b).unwrap();
        let d1 = p.derived().unwrap().delta1;
        let last = p.sites() - 1;
        let delta = p.delta();
        let left = h.matrix()[(0, 0)].re;
        let right = h.matrix()[(last, last)].re;
        let mirror = |d: f64| (-(delta / 2.0 - d), -(delta / 2.0 + d));
        let (ml, mr) = mirror(-d1);
        if p.sites() > 1 {
            prop_assert!((left - ml).abs() < 1e-14);
            prop_assert!((right - mr).abs() < 1e-14);
        }
    }

    #[test]
    fn classification_is_total_and_deterministic(l in 4usize..10, delta in -25.0f64..25.0) {
        let p = ChainParams::undriven(l, delta).unwrap();
        let sys = Eigensystem::of(&static_magnon_hamiltonian(&p, &basis(l, 2)).unwrap());
        let opts = InteractingOptions::default();
        let a = classify_interacting_bands(&sys, delta, 1.0, &opts).unwrap();
        let b = classify_interacting_bands(&sys, delta, 1.0, &opts).unwrap();
        prop_assert_eq!(a.labels.len(), sys.len());
        prop_assert_eq!(&a, &b);
        for c in &a.labels {
            prop_assert!(BandLabel::INTERACTING.contains(&c.label) || c.label == BandLabel::Unclassified);
        }
    }

    #[test]
    fn degenerate_pair_projector_is_symmetric(delta in 8.0f64..25.0) {
        let l = 11;
        let p = ChainParams::undriven(l, delta).unwrap();
        let sys = Eigensystem::of(&static_magnon_hamiltonian(&p, &basis(l, 2)).unwrap());
        let c = classify_interacting_bands(&sys, delta, 1.0, &InteractingOptions::default()).unwrap();
        let pair = c.indices(BandLabel::BoundMagnonEdge);
        prop_assert_eq!(pair.len(), 2);
        let d = c.labels[pair[0]].diagnostics;
        prop_assert!((d.left_edge - d.right_edge).abs() < 1e-8);
    }
}
