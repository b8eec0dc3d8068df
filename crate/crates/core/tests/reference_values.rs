//! Reference values through the public API. Oracles are closed forms evaluated
//! independently of the library code paths (mostly with `f64` `exp`/`ln`).

use approx::assert_relative_eq;
use num_complex::Complex64;
use otto_core::dynamics::ground_state;
use otto_core::*;

fn gap(x: f64) -> DimensionlessGap {
    DimensionlessGap::new(x).unwrap()
}

/// `√(1-u²) ln((1+u)/(1-u)) / (2u)` evaluated directly.
fn d_direct(u: f64) -> f64 {
    (1.0 - u * u).sqrt() * ((1.0 + u) / (1.0 - u)).ln() / (2.0 * u)
}

#[test]
fn planck_values() {
    assert!((planck_occupation(gap(1.0)) - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-15);
    assert!((planck_occupation(gap(1.0)) - 0.581_976_7).abs() < 1e-7);
    assert!(planck_occupation(gap(50.0)) < 2e-22);
    assert_relative_eq!(planck_occupation(gap(1e-10)), 1e10 - 0.5, max_relative = 1e-9);
}

#[test]
fn doppler_values() {
    assert_eq!(doppler_log_factor(0.0).unwrap(), 1.0);
    // √0.75 · ln 3
    let d = doppler_log_factor(0.5).unwrap();
    assert!((d - 0.75f64.sqrt() * 3f64.ln()).abs() < 1e-15);
    assert!((d - 0.951_426_2).abs() < 1e-7);
    let top = doppler_log_factor(0.999).unwrap();
    assert!(top > 0.0 && top < 0.2);
    assert!(doppler_log_factor(0.9995).is_err());
    let mut prev = 1.0;
    for i in 1..=999 {
        let d = doppler_log_factor(i as f64 * 1e-3).unwrap();
        assert!(d < prev);
        prev = d;
    }
    for u in [0.01, 0.3, 0.7, 0.99] {
        assert_relative_eq!(doppler_log_factor(u).unwrap(), d_direct(u), max_relative = 1e-13);
    }
}

#[test]
fn moving_occupation_values() {
    assert!((moving_occupation(gap(1.0), 1e-8).unwrap() - 0.581_976_7).abs() < 1e-6);
    let n = moving_occupation(gap(1.0), 0.5).unwrap();
    assert!((n - 0.545_100).abs() < 1e-5);
    // ∫ ds/(e^s - 1) = ln(1 - e^{-s}) over the band [1/√3, √3]
    let (a, b) = (1.0 / 3f64.sqrt(), 3f64.sqrt());
    let log_ratio = ((1.0 - (-b).exp()) / (1.0 - (-a).exp())).ln() / (b - a);
    assert!((n - log_ratio).abs() < 1e-14);
    let hot = moving_occupation(gap(1e-3), 0.5).unwrap();
    assert_relative_eq!(hot, d_direct(0.5) / 1e-3, max_relative = 1e-3);
}

#[test]
fn oracle_values() {
    let n = band_average_occupation_oracle(gap(1.0), 0.5, 1e-10).unwrap();
    assert!((n - 0.545_100_139_133_153_3).abs() < 1e-9);
    assert_eq!(
        band_average_occupation_oracle(gap(1.0), 1e-8, 1e-10).unwrap(),
        planck_occupation(gap(1.0))
    );
}

#[test]
fn asymptotes() {
    let hi = occupation_asymptote(gap(1e-4), 0.5, Regime::HighT).unwrap();
    assert_relative_eq!(hi, moving_occupation(gap(1e-4), 0.5).unwrap(), max_relative = 1e-3);
    assert_relative_eq!(
        occupation_asymptote(gap(0.01), 0.0, Regime::HighT).unwrap(),
        100.0,
        max_relative = 1e-15
    );
    let lo = occupation_asymptote(gap(30.0), 0.5, Regime::LowT).unwrap();
    assert_relative_eq!(lo, moving_occupation(gap(30.0), 0.5).unwrap(), max_relative = 1e-2);
}

#[test]
fn media_values() {
    assert_eq!(asymptotic_qubit_state(0.0).unwrap().p_excited(), 0.0);
    assert!((asymptotic_qubit_state(0.5).unwrap().p_excited() - 0.25).abs() < 1e-15);
    assert!((asymptotic_qubit_state(1e9).unwrap().p_excited() - 0.5).abs() < 1e-9);
    assert!(asymptotic_qubit_state(-1.0).is_err());

    let osc = asymptotic_oscillator_state(1.0, 60, 1e-12).unwrap();
    assert!((osc.populations()[0] - 0.5).abs() < 1e-15);
    assert!((osc.populations()[1] - 0.25).abs() < 1e-15);
    let vac = asymptotic_oscillator_state(0.0, 10, 1e-12).unwrap();
    assert_eq!(vac.populations()[0], 1.0);
    assert!(vac.populations()[1..].iter().all(|&p| p == 0.0));
    assert!(matches!(
        asymptotic_oscillator_state(1.0, 10, 1e-12),
        Err(OttoError::Truncation { .. })
    ));

    assert_eq!(qubit_mean_energy(1.0, 0.0).unwrap(), -0.5);
    assert!((qubit_mean_energy(1.0, 0.5).unwrap() + 0.25).abs() < 1e-15);
    assert!(qubit_mean_energy(1.0, 1e12).unwrap().abs() < 1e-12);
    assert_eq!(oscillator_mean_energy(1.0, 0.0).unwrap(), 0.5);
    assert_eq!(oscillator_mean_energy(1.0, 0.5).unwrap(), 1.0);

    assert_eq!(fock_truncation_bound(0.0, 1e-12), 8);
    assert_eq!(fock_truncation_bound(1.0, 1e-12), 39);
}

#[test]
fn qubit_dynamics_values() {
    let spec = LindbladSpec::new(1.0, 0.0, 1.0).unwrap();
    let excited = QubitState::diagonal(1.0).unwrap();
    assert_eq!(evolve_qubit(&excited, &spec, 0.0).unwrap(), excited);
    let p = evolve_qubit(&excited, &spec, 1.0).unwrap().p_excited();
    assert!((p - (-1f64).exp()).abs() < 1e-15);
    assert!(evolve_qubit(&excited, &spec, -1.0).is_err());

    let warm = LindbladSpec::new(1.0, 0.7, 1.0).unwrap();
    let start = QubitState::new(0.5, Complex64::new(0.3, -0.2)).unwrap();
    let late = evolve_qubit(&start, &warm, 100.0).unwrap();
    assert!((late.p_excited() - 0.7 / 2.4).abs() < 1e-12);
    assert!(late.coherence().norm() < 1e-12);
}

#[test]
fn oscillator_dynamics_values() {
    let spec = LindbladSpec::new(1.0, 1.0, 1.0).unwrap();
    let n_max = fock_truncation_bound(1.0, 1e-12);
    let vac = OscillatorState::vacuum(n_max, 1e-12).unwrap();
    let control = StepControl::default();

    assert_eq!(evolve_oscillator(&vac, &spec, 0.0, &control).unwrap(), vac);

    let two = evolve_oscillator(&vac, &spec, 2.0, &control).unwrap();
    assert!((two.mean_occupation() - (1.0 - (-2f64).exp())).abs() < 1e-8);

    let late = evolve_oscillator(&vac, &spec, 50.0, &control).unwrap();
    let target = asymptotic_oscillator_state(1.0, n_max, 1e-12).unwrap();
    for (p, q) in late.populations().iter().zip(target.populations()) {
        assert!((p - q).abs() < 1e-8);
    }
}

#[test]
fn relaxation_values() {
    let spec = LindbladSpec::new(1.0, 0.5, 1.0).unwrap();
    let ground = ground_state(MediumKind::Qubit, 0, 1e-12).unwrap();
    let r = relax_to_steady(&ground, &spec, &RelaxOptions::with_tol(1e-6)).unwrap();
    assert!((r.t_relax - (0.25f64 / 1e-6).ln() / 2.0).abs() < 1e-9);
    assert!((r.t_relax - 6.21).abs() < 0.01);

    let steady = MediumState::Qubit(asymptotic_qubit_state(0.5).unwrap());
    let r = relax_to_steady(&steady, &spec, &RelaxOptions::with_tol(1e-6)).unwrap();
    assert_eq!(r.t_relax, 0.0);
    assert_eq!(r.trajectory.len(), 1);

    let spec = LindbladSpec::new(1.0, 1.0, 1.0).unwrap();
    let vac = ground_state(MediumKind::Oscillator, fock_truncation_bound(1.0, 1e-12), 1e-12).unwrap();
    let r = relax_to_steady(&vac, &spec, &RelaxOptions::with_tol(1e-9)).unwrap();
    assert!(r.trajectory.converged && r.t_relax.is_finite() && r.t_relax > 0.0);
}

fn reference(medium: MediumKind) -> CycleSpec {
    CycleSpec::new(1.0, 2.0, 2.0, 0.5, 0.5, medium).unwrap()
}

#[test]
fn cycle_values() {
    let n_c = 1.0 / (2f64.exp() - 1.0);
    let e = stroke_energies(&reference(MediumKind::Oscillator)).unwrap();
    assert!((e.a - (n_c + 0.5)).abs() < 1e-15);
    assert!((e.a - 0.656_518).abs() < 1e-6);

    let n_h = 0.545_100_139_133_153_3;
    let e = stroke_energies(&reference(MediumKind::Qubit)).unwrap();
    assert!((e.c + 2.0 / (2.0 * (2.0 * n_h + 1.0))).abs() < 1e-12);
    assert!((e.c + 0.478_423).abs() < 1e-6);

    let l = cycle_ledger(&reference(MediumKind::Oscillator)).unwrap();
    assert!((l.w_out - (n_h - n_c)).abs() < 1e-12);
    assert!((l.w_out - 0.388_582).abs() < 1e-5);
    let l = cycle_ledger(&reference(MediumKind::Qubit)).unwrap();
    assert!((l.w_out - 0.5 * (1f64.tanh() - 1.0 / (2.0 * n_h + 1.0))).abs() < 1e-12);
    assert!((l.w_out - 0.141_586).abs() < 1e-5);
    assert_eq!(efficiency(&reference(MediumKind::Qubit)), 0.5);

    let flat = CycleSpec::new(1.0, 1.5, 0.7, 0.7, 0.0, MediumKind::Oscillator).unwrap();
    let e = stroke_energies(&CycleSpec::degenerate(1.0, 0.7, 0.7, 0.0, MediumKind::Qubit).unwrap())
        .unwrap();
    assert_eq!(e.a, e.c);
    assert!(!engine_condition(&flat).unwrap());
    assert!(engine_condition(&CycleSpec::new(1.0, 2.0, 2.0, 0.5, 0.0, MediumKind::Qubit).unwrap())
        .unwrap());
}

#[test]
fn limit_work_values() {
    // η = 0.2 at ω_c = 1 means ω_h = 1.25
    let s = CycleSpec::new(1.0, 1.25, 1.0, 0.5, 1e-8, MediumKind::Oscillator).unwrap();
    let lw = limit_work(&s, Regime::HighT).unwrap();
    assert!((lw.mean_work.abs() - 0.15).abs() < 1e-9);
    assert_eq!(lw.output_work, -lw.mean_work);

    let s = CycleSpec::new(0.3, 0.7, 1.2, 0.4, 1e-8, MediumKind::Qubit).unwrap();
    let lw = limit_work(&s, Regime::HighT).unwrap();
    let rest = (0.3 - 0.7) * (1.2 * 0.3 - 0.4 * 0.7) / 4.0;
    assert_relative_eq!(lw.mean_work, rest, max_relative = 1e-12);
}

#[test]
fn optimizer_values() {
    let p = EngineParams::new(1e-3, 1.0, 0.25, 0.5).unwrap();
    let r = maximize_limit_work(MediumKind::Qubit, Regime::HighT, &p, None).unwrap();
    assert!((r.omega_h_star / 1e-3 - 2.402_866).abs() < 1e-4);
    let closed = optimal_hot_frequency_limit(MediumKind::Qubit, Regime::HighT, &p).unwrap();
    assert_relative_eq!(closed / 1e-3, (d_direct(0.5) + 0.25) / 0.5, max_relative = 1e-13);

    let rest = EngineParams::new(1e-3, 1.0, 0.25, 1e-8).unwrap();
    let r = maximize_work_numeric(MediumKind::Oscillator, &rest, None).unwrap();
    assert!((r.eta_star - 0.5).abs() < 1e-6);

    let flat = EngineParams::new(1e-3, 1.0, 1.0, 0.0).unwrap();
    assert!(matches!(
        maximize_work_numeric(MediumKind::Oscillator, &flat, None),
        Err(OttoError::NonEngine(_))
    ));

    let p = EngineParams::new(1.0, 1.0, 0.25, 0.0).unwrap();
    assert_eq!(optimal_hot_frequency_limit(MediumKind::Qubit, Regime::HighT, &p).unwrap(), 2.5);
    let p = EngineParams::new(1.0, 1.0, 0.25, 0.5).unwrap();
    let o = optimal_hot_frequency_limit(MediumKind::Oscillator, Regime::HighT, &p).unwrap();
    assert!((o - (d_direct(0.5) / 0.25).sqrt()).abs() < 1e-14);
}

#[test]
fn efficiency_values() {
    let p = EngineParams::new(1.0, 1.0, 0.25, 0.0).unwrap();
    let osc = efficiency_at_max_work_limit(MediumKind::Oscillator, Regime::HighT, &p).unwrap();
    let qubit = efficiency_at_max_work_limit(MediumKind::Qubit, Regime::HighT, &p).unwrap();
    assert!((osc - 0.5).abs() < 1e-15 && (qubit - 0.6).abs() < 1e-15);
    let p = EngineParams::new(1.0, 1.0, 0.25, 0.5).unwrap();
    let osc = efficiency_at_max_work_limit(MediumKind::Oscillator, Regime::HighT, &p).unwrap();
    assert!((osc - (1.0 - (0.25 / d_direct(0.5)).sqrt())).abs() < 1e-14);

    let b = reference_bounds(1.0, 0.25).unwrap();
    assert_eq!((b.carnot, b.curzon_ahlborn), (0.75, 0.5));
    let b = reference_bounds(0.4, 0.4).unwrap();
    assert_eq!((b.carnot, b.curzon_ahlborn), (0.0, 0.0));
}

#[test]
fn effective_temperature_values() {
    let rest = EngineParams::new(1.0, 1.0, 0.25, 0.0).unwrap();
    let r = effective_temperature_fit(MediumKind::Qubit, Regime::HighT, &rest).unwrap();
    assert!((r.beta_eff.unwrap() - 0.25).abs() < 1e-15);
    assert!(r.spectral_mismatch.unwrap() < 1e-12);

    let moving = EngineParams::new(1.0, 1.0, 0.25, 0.5).unwrap();
    let r = effective_temperature_fit(MediumKind::Qubit, Regime::HighT, &moving).unwrap();
    assert!((r.beta_eff.unwrap() - 0.25 / d_direct(0.5)).abs() < 1e-12);
    assert!(r.spectral_mismatch.unwrap() > 1e-3);
    assert!(!r.consistent);
}
