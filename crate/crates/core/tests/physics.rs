//! Reference points of the driven and undriven chain.

use std::sync::Arc;

use magnon_core::classify::{classify_noninteracting, detect_eic_beic, BandLabel};
use magnon_core::dynamics::{evolve_driven, evolve_static, from_tunneling_units};
use magnon_core::effective::{effective_single, effective_two, spectral_deviation};
use magnon_core::floquet::{
    floquet_hamiltonian, one_period_propagator, one_period_propagator_from, step_doubling_change,
    stroboscopic_evolve, FloquetSpectrum, CONVERGENCE_TOL,
};
use magnon_core::{
    build_basis, static_magnon_hamiltonian, ChainParams, Frame, MagnonBasis, StateVector,
};

const L: usize = 21;

fn basis(l: usize, n: usize) -> Arc<MagnonBasis> {
    Arc::new(build_basis(l, n).unwrap())
}

#[test]
fn single_magnon_defect_levels() {
    let p = ChainParams::driven(L, 0.0, 0.01, 8.0).unwrap();
    let s = FloquetSpectrum::compute(&p, &basis(L, 1), 256).unwrap();
    let e = s.quasienergies();
    // band of width about J1 around zero plus two split-off levels
    let (lo, hi) = (e[0], e[L - 1]);
    assert!((lo + hi).abs() < 1e-6);
    assert!(lo < -0.025 && hi > 0.025);
    assert!(e[1..L - 1].iter().all(|x| x.abs() <= 0.0051));
    // lower level sits on the left edge
    assert!(s.states()[(0, 0)].norm_sqr() > 0.9);
    assert!(s.states()[(L - 1, L - 1)].norm_sqr() > 0.9);
}

#[test]
fn spectrum_independent_of_time_origin() {
    let p = ChainParams::driven(9, 0.3, 0.2, 8.0).unwrap();
    let b = basis(9, 2);
    let a = FloquetSpectrum::compute(&p, &b, 128).unwrap();
    for t0 in [0.1, 0.37] {
        let u = one_period_propagator_from(&p, &b, 128, t0).unwrap();
        let s = floquet_hamiltonian(&u).unwrap().spectrum();
        for (x, y) in a.quasienergies().iter().zip(s.quasienergies()) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }
}

#[test]
fn noninteracting_band_ordering() {
    let j1 = 0.005;
    let p = ChainParams::driven(L, 0.0, j1, 8.0).unwrap();
    let s1 = FloquetSpectrum::compute(&p, &basis(L, 1), 256).unwrap();
    let (eps_minus, eps_plus) = (s1.quasienergies()[0], s1.quasienergies()[L - 1]);
    let s = FloquetSpectrum::compute(&p, &basis(L, 2), 256).unwrap();
    let c = classify_noninteracting(&s, eps_minus, eps_plus, j1).unwrap();
    assert!(!c.overlapping);
    let range = |label| {
        let e: Vec<f64> = c
            .indices(label)
            .iter()
            .map(|&k| s.quasienergies()[k])
            .collect();
        (e[0], *e.last().unwrap())
    };
    let (i_lo, i_hi) = range(BandLabel::LeftEdgePlusExtended);
    let (iv_lo, iv_hi) = range(BandLabel::BothExtended);
    let (ii_lo, _) = range(BandLabel::RightEdgePlusExtended);
    assert!(eps_minus < eps_plus);
    assert!(i_lo < i_hi && i_hi < iv_lo && iv_hi < ii_lo);
    let total: usize = BandLabel::NONINTERACTING.iter().map(|l| c.count(*l)).sum();
    assert_eq!(total, 210);
}

#[test]
fn negative_modulation_keeps_labels() {
    // Δ₁ is even in J1, so the edge levels keep their order
    let j1 = -0.01;
    let p = ChainParams::driven(L, 0.0, j1, 8.0).unwrap();
    let s1 = FloquetSpectrum::compute(&p, &basis(L, 1), 256).unwrap();
    let s = FloquetSpectrum::compute(&p, &basis(L, 2), 256).unwrap();
    let c =
        classify_noninteracting(&s, s1.quasienergies()[0], s1.quasienergies()[L - 1], j1).unwrap();
    assert_eq!(c.count(BandLabel::BothEdges), 1);
    assert_eq!(c.count(BandLabel::LeftEdgePlusExtended), 19);
    assert_eq!(c.count(BandLabel::RightEdgePlusExtended), 19);
}

#[test]
fn single_eic_without_interaction() {
    let j1 = 0.01;
    let p = ChainParams::driven(L, 0.0, j1, 8.0).unwrap();
    let s = FloquetSpectrum::compute(&p, &basis(L, 2), 256).unwrap();
    let found = detect_eic_beic(&s, (-j1, j1), 10.0);
    assert_eq!(found.len(), 1);
    assert!(found[0].quasienergy.abs() < 1e-6);
}

#[test]
fn effective_two_edge_pair_levels() {
    let p = ChainParams::driven(L, 0.1, 0.1, 8.0).unwrap();
    let d1 = p.derived().unwrap().delta1;
    let h = effective_two(&p, &basis(L, 2)).unwrap();
    let (values, vectors) = h.eigh();
    // states living on the (1,2) and (L-1,L) corners of the pair lattice
    let b = h.basis();
    let left = b.index_of(&[1, 2]).unwrap();
    let right = b.index_of(&[L - 1, L]).unwrap();
    let peak = |c: usize| {
        (0..values.len())
            .max_by(|&x, &y| {
                vectors[(c, x)]
                    .norm_sqr()
                    .total_cmp(&vectors[(c, y)].norm_sqr())
            })
            .unwrap()
    };
    assert!((values[peak(left)] - (0.05 - d1)).abs() < 1e-2);
    assert!((values[peak(right)] - (0.05 + d1)).abs() < 1e-2);
}

#[test]
fn effective_without_defect_has_degenerate_edge_pair() {
    // J0 = 0 and a very fast drive leave Δ₁ negligible
    let p = ChainParams::builder(L)
        .j0(0.0)
        .j1(0.4)
        .delta(2.0)
        .resonant(1e9)
        .build()
        .unwrap();
    let e = effective_two(&p, &basis(L, 2)).unwrap().eigenvalues();
    let near: Vec<f64> = e
        .iter()
        .copied()
        .filter(|x| (x - 1.0).abs() < 0.2)
        .collect();
    assert_eq!(near.len(), 2);
    assert!((near[0] - near[1]).abs() < 1e-6);
}

#[test]
fn effective_improves_with_frequency() {
    let mut last = f64::INFINITY;
    for omega in [8.0, 16.0, 32.0] {
        let p = ChainParams::driven(11, 0.1, 0.1, omega).unwrap();
        let b = basis(11, 2);
        let exact = FloquetSpectrum::compute(&p, &b, 256).unwrap();
        let dev = spectral_deviation(&exact, &effective_two(&p, &b).unwrap()).unwrap();
        assert!(dev < last, "omega {omega}: {dev} >= {last}");
        last = dev;
    }
}

#[test]
fn single_effective_deviation_identity() {
    let p = ChainParams::driven(7, 0.0, 0.1, 8.0).unwrap();
    let b = basis(7, 1);
    let model = effective_single(&p, &b).unwrap();
    let u = magnon_core::floquet::UnitaryPropagator::new(
        b.clone(),
        magnon_core::linalg::expm_hermitian(model.matrix(), p.derived().unwrap().period),
        p.derived().unwrap().period,
    )
    .unwrap();
    let s = floquet_hamiltonian(&u).unwrap().spectrum();
    assert!(spectral_deviation(&s, &model).unwrap() < 1e-12);
    assert!(spectral_deviation(&s, &effective_two(&p, &basis(7, 2)).unwrap()).is_err());
}

#[test]
fn step_doubling_stays_below_tolerance() {
    let p = ChainParams::driven(L, 0.1, 0.1, 8.0).unwrap();
    let change = step_doubling_change(&p, &basis(L, 1), 256).unwrap();
    assert!(change < CONVERGENCE_TOL, "{change}");
}

#[test]
fn stepping_agrees_with_stroboscopic_map() {
    let p = ChainParams::driven(11, 0.2, 0.1, 8.0).unwrap();
    let b = basis(11, 2);
    let u = one_period_propagator(&p, &b, 256).unwrap();
    let psi = StateVector::adjacent(b.clone(), 5).unwrap();
    let strob = stroboscopic_evolve(&u, &psi, 5).unwrap();
    let stepped = evolve_driven(
        &p,
        &b,
        &psi,
        strob.times(),
        Frame::Rotating,
        u.period() / 256.0,
    )
    .unwrap();
    for (a, s) in strob.states().iter().zip(stepped.states()) {
        assert!((a.amplitudes() - s.amplitudes()).norm() < 1e-10);
    }
}

#[test]
fn driven_error_is_second_order() {
    let p = ChainParams::driven(11, 0.2, 0.4, 8.0).unwrap();
    let b = basis(11, 1);
    let psi = StateVector::single(b.clone(), 1).unwrap();
    let period = p.derived().unwrap().period;
    let times = [4.0 * period];
    let reference = evolve_driven(&p, &b, &psi, &times, Frame::Rotating, period / 4096.0).unwrap();
    let target = reference.last().unwrap();
    let deficit = |steps: f64| {
        let tr = evolve_driven(&p, &b, &psi, &times, Frame::Rotating, period / steps).unwrap();
        1.0 - tr.last().unwrap().fidelity(target).unwrap()
    };
    // fidelity deficit is quadratic in the amplitude error, so the ratio of
    // square roots tracks the order of the scheme
    let ratio = (deficit(32.0) / deficit(64.0)).sqrt();
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn undriven_dynamics_localize_at_strong_interaction() {
    let p = ChainParams::undriven(L, 20.0).unwrap();
    let b = basis(L, 1);
    let h = static_magnon_hamiltonian(&p, &b).unwrap();
    let times: Vec<f64> = (0..=500)
        .map(|k| from_tunneling_units(k as f64 / 50.0, 1.0))
        .collect();
    let tr = evolve_static(&h, &StateVector::single(b, 1).unwrap(), &times).unwrap();
    assert!(tr.site_density(1).iter().all(|&n| n >= 0.99));
}
