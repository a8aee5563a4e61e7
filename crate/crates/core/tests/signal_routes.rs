use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;

use superosc::corpus;
use superosc::signal::{
    apply_window, instantaneous_frequency, make_real_superosc, sample_bessel, spectrum, synth_asymptotic,
    synth_bessel, synth_bessel_scaled, synth_integral, zero_crossings, Branch, SampledSignal, SignalError,
    SuperoscPair, SuperoscParams, SynthesisRoute, UniformGrid, WindowSpec,
};

// J₀(x) = (1/2π)∫₀^{2π} cos(x sin θ) dθ; the trapezoid rule is spectrally
// accurate on a full period.
fn j0_oracle(x: f64) -> f64 {
    let n = 256;
    (0..n).map(|j| (x * (2.0 * PI * j as f64 / n as f64).sin()).cos()).sum::<f64>() / n as f64
}

const J0_AT_4: f64 = -0.397_149_809_863_847_4;
const J0_AT_9: f64 = -0.090_333_611_182_876_13;

fn params(delta: f64, boost: f64, extent: f64) -> SuperoscParams {
    SuperoscParams::builder()
        .delta(delta)
        .boost(boost)
        .extent(extent)
        .window_criterion(f64::INFINITY)
        .build()
        .unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn oracle_reproduces_frozen_bessel_values() {
    assert_relative_eq!(j0_oracle(4.0), J0_AT_4, max_relative = 1e-14);
    assert_relative_eq!(j0_oracle(9.0), J0_AT_9, max_relative = 1e-13);
}

#[test]
fn zero_amplitude_integral_vanishes() {
    for (d, a) in [(0.5, 1.0), (0.3, 0.0), (0.7, 1.4)] {
        let p = params(d, a, 5.0).with_amplitude(0.0).unwrap();
        assert_eq!(synth_integral(&p, -1.0).unwrap().value, Complex64::new(0.0, 0.0));
    }
}

#[test]
fn closed_form_at_origin() {
    let p = params(0.5, 1.0, 5.0);
    let want = PI.sqrt() / (2f64.sqrt() * 0.5) * J0_AT_4;
    let b = synth_bessel(&p, 0.0).unwrap();
    assert_relative_eq!(b.re, want, max_relative = 1e-12);
    assert!(b.im.abs() <= 1e-15);
    let i = synth_integral(&p, 0.0).unwrap();
    assert!((i.value - want).norm() <= 1e-8 * want.abs());
}

#[test]
fn integral_without_boost_matches_closed_form() {
    // radicand at z = −10, δ = 0.5, A = 0 is 2.25², so the argument is 9
    let p = params(0.5, 0.0, 20.0);
    let want = Complex64::from_polar(PI.sqrt() / (2f64.sqrt() * 0.5) * J0_AT_9, -5.0);
    let i = synth_integral(&p, -10.0).unwrap();
    assert!((i.value - want).norm() <= 1e-8 * want.norm());
    assert!((synth_bessel(&p, -10.0).unwrap() - want).norm() <= 1e-12 * want.norm());
}

#[test]
fn growth_peak_location_and_height() {
    let (d, a): (f64, f64) = (0.3, 1.0);
    let p = params(d, a, 1.0);
    let peak = 2.0 * a.cosh() / (d * d);
    let zs = linspace(1e-3, 2.0 * peak, 20_001);
    let (z_star, ln_star) = zs
        .iter()
        .map(|&z| (z, synth_bessel_scaled(&p, z).ln_abs()))
        .fold((0.0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
    assert!((z_star - peak).abs() <= 0.05 * peak, "argmax {z_star} vs {peak}");
    let predicted = 1.0 / (2.0 * a.sinh().sqrt()) * (a.sinh() / (d * d)).exp();
    let ratio = ln_star.exp() / predicted;
    assert!((ratio - 1.0).abs() <= 0.2, "peak ratio {ratio}");
}

#[test]
fn asymptotic_form_tracks_closed_form() {
    let p = params(0.1, 1.0, 2.0);
    let a = synth_asymptotic(&p, -1.0).unwrap();
    let b = synth_bessel(&p, -1.0).unwrap();
    assert!((a - b).norm() <= 1e-3 * b.norm());

    let flat = params(0.1, 0.0, 2.0);
    assert!(synth_asymptotic(&flat, -1.0).unwrap().norm().is_finite());
    assert!(matches!(synth_asymptotic(&p, 0.5), Err(SignalError::DomainError(_))));
}

#[test]
fn asymptotic_form_reduces_to_shifted_cosine_in_window() {
    let (d, a): (f64, f64) = (0.1, 1.0);
    let z_c = 0.01 / (d * d * a.cosh());
    let p = params(d, a, z_c);
    for z in linspace(-z_c, -1e-6, 41) {
        let reduced = Complex64::from_polar(1.0, 0.5 * z) * (1.0 / (d * d) - 0.5 * z * a.cosh() - 0.25 * PI).cos();
        let v = synth_asymptotic(&p, z).unwrap();
        assert!((v - reduced).norm() <= 0.01, "z = {z}");
    }
}

#[test]
fn asymptotic_error_shrinks_with_delta() {
    let a = 1.0f64;
    // long enough for the phase 1/δ² − z cosh A/2 to sweep a full half period
    let z_c = 2.0 * PI / a.cosh() + 1.0;
    let deviation = |d: f64| {
        let p = params(d, a, z_c);
        let zs = linspace(-z_c, -1e-3, 201);
        let scale = zs.iter().map(|&z| synth_bessel(&p, z).unwrap().norm()).fold(0.0, f64::max);
        zs.iter()
            .map(|&z| (synth_asymptotic(&p, z).unwrap() - synth_bessel(&p, z).unwrap()).norm() / scale)
            .fold(0.0, f64::max)
    };
    let ladder: Vec<f64> = [0.2, 0.15, 0.1, 0.05].iter().map(|&d| deviation(d)).collect();
    for w in ladder.windows(2) {
        assert!(w[1] < w[0], "{ladder:?}");
    }
}

fn small_pair(m: u32, cosh_boost: f64, extent: f64) -> SuperoscPair {
    SuperoscPair::phase_locked(m, cosh_boost.acosh(), 1.0, 1.0, extent, Branch::Plus).unwrap()
}

#[test]
fn pair_oscillates_at_twice_the_band_limit() {
    let pair = corpus::certificate_pair().unwrap();
    let s = pair.sample(UniformGrid::spanning(-20.0, 20.0, PI / 32.0).unwrap()).unwrap();
    let z_c = pair.extent();
    let k = instantaneous_frequency(&s, -0.5 * z_c).unwrap();
    assert!((k - 2.0).abs() <= 0.02, "k' = {k}");
    for z in linspace(-z_c, 0.0, 21) {
        let m = pair.eval(z).unwrap().norm();
        assert!((m - 1.0).abs() <= 0.05, "|G({z})| = {m}");
    }
}

#[test]
fn unboosted_pair_is_not_superoscillatory() {
    let pair = SuperoscPair::phase_locked(40, 0.0, 1.0, 1.0, 2.5, Branch::Plus).unwrap();
    assert_eq!(pair.local_wavenumber(), 1.0);
    let s = pair.sample(UniformGrid::spanning(-20.0, 20.0, PI / 32.0).unwrap()).unwrap();
    let k = instantaneous_frequency(&s, -1.25).unwrap();
    assert!((k - 1.0).abs() <= 0.01, "k' = {k}");
}

#[test]
fn pair_requires_both_lock_offsets() {
    let quarter = SuperoscParams::builder()
        .phase_locked(40, superosc::signal::LockOffset::Quarter)
        .boost(1.0)
        .extent(1.0)
        .build()
        .unwrap();
    let unlocked = SuperoscParams::builder().inv_delta_sq(252.0).boost(1.0).extent(1.0).build().unwrap();
    assert!(matches!(
        superosc::signal::combine_pair(&quarter, &unlocked, Branch::Plus),
        Err(SignalError::PhaseLockViolation(_))
    ));
}

#[test]
fn real_signal_is_a_sine_in_the_window() {
    let pair = small_pair(400, 3.0, 8.0);
    let k = pair.local_wavenumber();
    let step = PI / 32.0;
    let grid = UniformGrid::new(-408.0 * step, step, 511).unwrap();
    let s = make_real_superosc(&pair, k, grid).unwrap();
    assert!(s.is_real());

    let at_zero = s.values()[s.grid().nearest(0.0)].re;
    assert!(at_zero.abs() <= 1e-2 * s.max_abs(), "F(0) = {at_zero}");

    let inside: Vec<f64> = zero_crossings(&s).into_iter().filter(|z| (-8.0..=0.0).contains(z)).collect();
    assert!(inside.len() >= 4);
    for w in inside.windows(2) {
        let gap = w[1] - w[0];
        assert!((gap - PI / k).abs() <= 0.02 * PI / k, "spacing {gap}");
    }
    for z in linspace(-7.2, -0.8, 9) {
        let f = instantaneous_frequency(&s, z).unwrap();
        assert!((f - k).abs() <= 0.01 * k, "k({z}) = {f}");
    }
    assert!(matches!(
        make_real_superosc(&pair, 1.5, *s.grid()),
        Err(SignalError::DomainError(_))
    ));
}

#[test]
fn identity_window_keeps_values() {
    let g = UniformGrid::new(-10.0, 0.1, 201).unwrap();
    let v: Vec<f64> = g.points().map(|z| (0.7 * z).sin()).collect();
    let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap();
    assert_eq!(apply_window(&s, WindowSpec::identity()).values(), s.values());
}

#[test]
fn windowed_far_tail_is_negligible() {
    let pair = corpus::certificate_pair().unwrap();
    let p = pair.first();
    let w = WindowSpec::for_band(1.0);
    let far = 10.0 * 4.0 * p.boost().cosh() / (p.delta_sq() * p.band_limit());
    let interior = linspace(-pair.extent(), 0.0, 11)
        .into_iter()
        .map(|z| pair.eval_scaled(z).ln_abs() + w.h(z).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    for z in [-far, far] {
        let ln_tail = pair.eval_scaled(z).ln_abs() - 0.5 * (w.kappa() * z).powi(2);
        assert!(ln_tail - interior < (1e-6f64).ln(), "tail at {z}");
    }
}

#[test]
fn windowed_pair_keeps_spectrum_in_band() {
    let s = corpus::certificate_signal().unwrap();
    let spec = spectrum(&s).unwrap();
    let kappa = s.window().unwrap().kappa();
    let inside = spec.fraction_inside(-kappa, 1.0 + kappa);
    assert!(inside >= 1.0 - 1e-4, "in-band fraction {inside}");
    assert!(spec.parseval_mismatch(&s) <= 1e-6);
}

#[test]
fn cosine_spectrum_is_symmetric() {
    let g = UniformGrid::new(-400.0, 0.25, 3201).unwrap();
    let v: Vec<f64> = g.points().map(|z| (0.5 * z).cos()).collect();
    let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap().with_band_limit(1.0);
    let s = apply_window(&s, WindowSpec::gaussian(0.02).unwrap());
    let spec = spectrum(&s).unwrap();
    let (j_max, _) = spec
        .values()
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (j, v)| if v.norm() > acc.1 { (j, v.norm()) } else { acc });
    assert!((spec.k(j_max).abs() - 0.5).abs() <= spec.k_step());
    let plus = spec.values()[spec.index_of(0.5).unwrap()].norm();
    let minus = spec.values()[spec.index_of(-0.5).unwrap()].norm();
    assert_relative_eq!(plus, minus, max_relative = 1e-9);
    assert!(spec.parseval_mismatch(&s) <= 1e-6);
}

#[test]
fn plane_wave_frequency_is_exact() {
    let g = UniformGrid::new(-20.0, 0.05, 801).unwrap();
    let k = 1.7;
    let v: Vec<Complex64> = g.points().map(|z| Complex64::from_polar(1.0, k * z)).collect();
    let s = SampledSignal::new(g, v, SynthesisRoute::External, 2.0).unwrap();
    for z in [-15.0, -3.3, 0.0, 12.1] {
        assert_relative_eq!(instantaneous_frequency(&s, z).unwrap(), k, max_relative = 1e-6);
    }
    assert!(matches!(instantaneous_frequency(&s, -20.0), Err(SignalError::EdgeError { .. })));
}

#[test]
fn far_field_wavenumber_is_the_band_limit() {
    let pair = corpus::certificate_pair().unwrap();
    let p = pair.first();
    let z = -100.0 * p.boost().cosh() / (p.delta_sq() * p.band_limit());
    let s = sample_bessel(p, UniformGrid::spanning(z - 60.0, z + 60.0, PI / 32.0).unwrap()).unwrap();
    // far from the window F carries equal k = 0 and k = k₀ parts; drop the mean
    let mean = s.values().iter().map(|v| v.re).sum::<f64>() / s.len() as f64;
    let real: Vec<f64> = s.values().iter().map(|v| v.re - mean).collect();
    let re = SampledSignal::from_real(*s.grid(), real, SynthesisRoute::External, 1.0).unwrap();
    let k = instantaneous_frequency(&re, z).unwrap();
    assert!((k - 1.0).abs() <= 0.05, "far-field k = {k}");
}

#[test]
fn far_field_envelope_falls_like_inverse_root() {
    let p = params(0.3, 1.0, 1.0);
    let envelope = |z: f64| {
        linspace(z - 2.0 * PI, z, 400)
            .into_iter()
            .map(|x| synth_bessel(&p, x).unwrap().norm() * x.abs().sqrt())
            .fold(0.0, f64::max)
    };
    let values: Vec<f64> = [-1e3, -1e4, -1e5].iter().map(|&z| envelope(z)).collect();
    let hi = values.iter().cloned().fold(0.0, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(lo > 0.0 && hi / lo <= 1.2, "{values:?}");
}
