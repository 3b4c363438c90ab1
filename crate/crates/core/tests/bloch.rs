// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

use approx::assert_abs_diff_eq;
use nalgebra::Matrix4;
use num_complex::Complex64;
use nwqed::bloch::{
    field_observables, liouvillian, saturation_closed_form, sigma_ge, steady_state,
};
use nwqed::{params_from_purcell, propagate, scatter_point, DensityMatrix2, EmitterParams};
use proptest::prelude::*;

fn random_state(theta: f64, phi: f64, purity: f64) -> DensityMatrix2<f64> {
    let pure = DensityMatrix2::pure(
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    )
    .unwrap();
    let mixed = pure.matrix().scale(Complex64::new(purity, 0.0))
        + nwqed::linalg::Mat2::identity().scale(Complex64::new((1.0 - purity) / 2.0, 0.0));
    DensityMatrix2::new(mixed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn propagation_keeps_states_physical(
        gamma_pl in 0.0f64..5.0,
        gamma_prime in 0.01f64..5.0,
        omega in 0.0f64..20.0,
        delta in -10.0f64..10.0,
        t in 0.0f64..20.0,
        theta in 0.0f64..std::f64::consts::PI,
        phi in 0.0f64..std::f64::consts::TAU,
        purity in 0.0f64..1.0,
    ) {
        let params = EmitterParams::new(gamma_pl, gamma_prime, omega, delta, false).unwrap();
        let rho = propagate(&params, &random_state(theta, phi, purity), t).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-10);
        prop_assert!(rho.hermiticity_error() <= 1e-10);
        let [lo, _] = rho.eigenvalues();
        prop_assert!(lo >= -1e-10, "{}", lo);
    }
}

#[test]
fn propagator_is_completely_positive() {
    for (p, omega, delta, t) in [
        (20.0, 1.0, 0.0, 0.3),
        (0.5, 10.0, 2.0, 1.7),
        (3.0, 0.01, -4.0, 12.0),
        (1.0, 5.0, 0.5, 0.01),
    ] {
        let params = params_from_purcell(p, 1.0, omega, delta).unwrap();
        let choi = liouvillian(&params).propagator(t).choi();
        let m = Matrix4::from_fn(|i, j| choi.0[i][j]);
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        assert!((m - m.adjoint()).norm() < 1e-12);
        let eig = herm.symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e >= -1e-12), "{eig:?}");
        // trace preserving: partial trace over the output is the identity
        let tr = choi.0[0][0] + choi.0[1][1] + choi.0[2][2] + choi.0[3][3];
        assert_abs_diff_eq!(tr.re, 2.0, epsilon = 1e-12);
    }
}

/// Mean values obey the Langevin-Bloch equations
/// `d⟨σ_ge⟩/dt = (iδ − Γ/2)⟨σ_ge⟩ + iΩ(ρ_gg − ρ_ee)` and
/// `dρ_ee/dt = −Γ ρ_ee + iΩ(⟨σ_eg⟩ − ⟨σ_ge⟩)`.
#[test]
fn mean_values_follow_langevin_bloch() {
    let h = 1e-4;
    for (p, omega, delta) in [(20.0, 0.7, 0.0), (2.0, 3.0, 1.5), (0.6, 0.05, -0.8)] {
        let params = params_from_purcell(p, 1.0, omega, delta).unwrap();
        let gamma = params.gamma_total();
        let rho0 = random_state(1.1, 0.4, 0.8);
        for t in [0.0, 0.5, 2.0] {
            let at = |s: f64| propagate(&params, &rho0, s).unwrap();
            let (minus, mid, plus) = (at(t + 1.0 * h), at(t + 2.0 * h), at(t + 3.0 * h));
            let s = mid.coherence();
            let ds = (plus.coherence() - minus.coherence()) / (2.0 * h);
            let i = Complex64::i();
            let expected =
                (i * delta - gamma / 2.0) * s + i * omega * (mid.rho_gg() - mid.rho_ee());
            assert!((ds - expected).norm() < 1e-6, "{ds} vs {expected}");
            let dee = (plus.rho_ee() - minus.rho_ee()) / (2.0 * h);
            let expected = -gamma * mid.rho_ee() + (i * omega * (s.conj() - s)).re;
            assert!((dee - expected).abs() < 1e-6, "{dee} vs {expected}");
            assert_abs_diff_eq!(mid.expect(&sigma_ge()).re, s.re, epsilon = 1e-15);
        }
    }
}

#[test]
fn saturation_matches_closed_form() {
    for p in [0.5_f64, 1.0, 2.0, 5.0, 20.0, 100.0] {
        for s in [1e-3, 1e-1, 1.0, 10.0] {
            let params = params_from_purcell(p, 1.0, s, 0.0).unwrap();
            let obs = field_observables(&params, &steady_state(&params).unwrap()).unwrap();
            let (t, r) = saturation_closed_form(p, s);
            assert_abs_diff_eq!(obs.transmittance, t, epsilon = 1e-8);
            assert_abs_diff_eq!(obs.reflectance, r, epsilon = 1e-8);
        }
    }
}

#[test]
fn weak_drive_recovers_single_photon_values() {
    for p in [0.5_f64, 1.0, 2.0, 5.0, 20.0, 100.0] {
        for delta in [0.0, 0.4, -1.3] {
            let params = params_from_purcell(p, 1.0, 1e-3, delta).unwrap();
            let obs = field_observables(&params, &steady_state(&params).unwrap()).unwrap();
            let single = scatter_point(&params);
            assert!((obs.transmittance - single.transmittance).abs() < 1e-4);
            assert!((obs.reflectance - single.reflectance).abs() < 1e-4);
            assert!((obs.mean_transmitted / 1e-3 - single.t).norm() < 1e-4);
        }
    }
}

#[test]
fn saturated_emitter_is_transparent() {
    let params = params_from_purcell(20.0, 1.0, 10.0, 0.0).unwrap();
    let obs = field_observables(&params, &steady_state(&params).unwrap()).unwrap();
    assert!(obs.transmittance > 0.95);
    let (t, _) = saturation_closed_form(20.0, 1.0);
    assert_abs_diff_eq!(t, 0.889141, epsilon = 1e-6);
}
