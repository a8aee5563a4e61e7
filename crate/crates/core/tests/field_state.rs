use std::f64::consts::PI;
use std::sync::OnceLock;

use approx::assert_relative_eq;
use num_complex::Complex64;

use superosc::corpus;
use superosc::field::{
    energy_before, fourier_coeffs, two_point_function, vacuum_term, CoherentAmplitudes, ModeGrid, DEFAULT_LENGTH,
};
use superosc::signal::{apply_window, SampledSignal, SynthesisRoute, UniformGrid, WindowSpec};

fn dynamics() -> &'static (SampledSignal, CoherentAmplitudes) {
    static CELL: OnceLock<(SampledSignal, CoherentAmplitudes)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = corpus::dynamics_signal().unwrap();
        let grid = corpus::dynamics_mode_grid(&s).unwrap();
        let ca = CoherentAmplitudes::from_signal(&s, &grid).unwrap();
        (s, ca)
    })
}

fn packet(f: impl Fn(f64) -> f64, kappa: f64) -> SampledSignal {
    let g = UniformGrid::new(-400.0, 0.25, 3201).unwrap();
    let v: Vec<f64> = g.points().map(f).collect();
    let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap().with_band_limit(1.0);
    apply_window(&s, WindowSpec::gaussian(kappa).unwrap())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn cosine_and_sine_select_their_channels() {
    let grid = ModeGrid::new(2048.0, 1.0, None).unwrap();
    let k1 = grid.k(150);
    let c = fourier_coeffs(&packet(|z| (k1 * z).cos(), 0.03), &grid).unwrap();
    let (a, b) = (max_abs(c.a()), max_abs(c.b()));
    assert_eq!(c.a().iter().position(|v| v.abs() == a), Some(149));
    assert!(b <= 1e-6 * a);
    let c = fourier_coeffs(&packet(|z| (k1 * z).sin(), 0.03), &grid).unwrap();
    let (a, b) = (max_abs(c.a()), max_abs(c.b()));
    assert_eq!(c.b().iter().position(|v| v.abs() == b), Some(149));
    assert!(a <= 1e-6 * b);
}

#[test]
fn fourier_series_resums_to_the_signal() {
    let s = packet(|z| (0.61 * z).sin() + 0.4 * (0.23 * z).cos(), 0.02);
    let grid = ModeGrid::new(2048.0, 1.0, None).unwrap();
    let c = fourier_coeffs(&s, &grid).unwrap();
    let f = s.real_values();
    let peak = max_abs(&f);
    for i in (0..s.len()).step_by(37) {
        let z = s.grid().z(i);
        let direct: f64 = c.dc()
            + (1..=grid.n_modes())
                .map(|n| c.a()[n - 1] * (grid.k(n) * z).cos() + c.b()[n - 1] * (grid.k(n) * z).sin())
                .sum::<f64>();
        assert!((direct - f[i]).abs() <= 1e-4 * peak, "z = {z}");
        assert!((c.reconstruct(z) - direct).abs() <= 1e-9 * peak);
    }
}

#[test]
fn zero_transform_is_the_vacuum() {
    let grid = ModeGrid::new(1000.0, 1.0, Some(50.0)).unwrap();
    let ca = CoherentAmplitudes::from_transform(grid, vec![Complex64::new(0.0, 0.0); grid.n_modes()]).unwrap();
    assert!(ca.is_vacuum());
    assert!(ca.alpha().iter().all(|a| a.norm() == 0.0));
    for (z, t) in [(0.0, 0.0), (-3.0, 7.0), (11.0, 2.5)] {
        assert_eq!(ca.expectation_b(z, t), 0.0);
    }
    assert_eq!(energy_before(&ca).value(), 0.0);
}

#[test]
fn single_mode_occupation_is_energy_over_frequency() {
    let grid = ModeGrid::new(1000.0, 1.0, Some(50.0)).unwrap();
    let mut t = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
    t[40] = Complex64::new(0.3, -1.7);
    t[60] = Complex64::new(0.0, 0.0);
    let ca = CoherentAmplitudes::from_transform(grid, t.clone()).unwrap();
    let n = 41;
    let want = grid.length() * t[40].norm_sqr() * grid.dk() / (2.0 * PI * grid.omega(n) * grid.dk());
    assert_relative_eq!(ca.occupation(n), want, max_relative = 1e-14);
    assert_relative_eq!(ca.occupation(n), energy_before(&ca).value() / grid.omega(n), max_relative = 1e-12);
    let alpha = Complex64::i() * (grid.length() / (2.0 * PI * grid.omega(n))).sqrt() * t[40];
    assert!((ca.alpha()[40] - alpha).norm() <= 1e-14 * alpha.norm());
}

#[test]
fn classicality_follows_amplitude() {
    let (_, ca) = dynamics();
    let m = ca.min_support_amplitude().unwrap();
    assert!(ca.scaled(10.0 / m * (1.0 + 1e-9)).is_classical());
    assert!(!ca.scaled(9.0 / m).is_classical());
    let doubled = ca.scaled(2.0);
    for (a, b) in ca.alpha().iter().zip(doubled.alpha()) {
        assert!((b - 2.0 * a).norm() <= 1e-15 * a.norm().max(1e-300));
    }
}

#[test]
fn corpus_state_reproduces_the_signal() {
    let (s, ca) = dynamics();
    let f = s.real_values();
    let peak = max_abs(&f);
    let b = ca.expectation_b_grid(s.grid(), 0.0);
    let worst = b.iter().zip(&f).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-4 * peak, "reconstruction error {worst:e}");
}

#[test]
fn corpus_state_moves_rigidly_right() {
    let (s, ca) = dynamics();
    let f = s.real_values();
    let peak = max_abs(&f);
    let shift = 1600;
    let t = shift as f64 * s.grid().step();
    let b = ca.expectation_b_grid(s.grid(), t);
    let worst = (shift..s.len()).map(|i| (b[i] - f[i - shift]).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-4 * peak, "translation error {worst:e}");
    for (z, t, dt) in [(-50.0, 30.0, 7.25), (10.0, 100.0, 55.5)] {
        let d = ca.expectation_b(z, t) - ca.expectation_b(z - dt, t - dt);
        assert!(d.abs() <= 1e-4 * peak);
    }
}

#[test]
fn energy_formulas_agree() {
    let (_, ca) = dynamics();
    let e = energy_before(ca);
    assert!(e.relative_mismatch() <= 1e-8, "{e:?}");
    let e2 = energy_before(&ca.scaled(2.0));
    assert_relative_eq!(e2.value(), 4.0 * e.value(), max_relative = 1e-12);
}

#[test]
fn energy_matches_spatial_quadrature() {
    // real F: (L²/4π²)∫_{k>0}|F̃|²dk = (L²/4π)∫F²dz
    let s = packet(|z| (0.55 * z).sin(), 0.02);
    let grid = ModeGrid::new(2048.0, 1.0, None).unwrap();
    let ca = CoherentAmplitudes::from_signal(&s, &grid).unwrap();
    let f = s.real_values();
    let h = s.grid().step();
    let spatial: f64 = f.iter().map(|v| v * v).sum::<f64>() * h;
    let want = grid.length().powi(2) / (4.0 * PI) * spatial;
    assert_relative_eq!(energy_before(&ca).value(), want, max_relative = 1e-6);
}

fn vacuum_oracle(length: f64, w_uv: f64, tau: f64) -> Complex64 {
    let n = 20_000;
    let h = w_uv / n as f64;
    let f = |j: usize| {
        let w = j as f64 * h;
        Complex64::from_polar(w, w * tau)
    };
    let mut sum = f(0) + f(n);
    for j in 1..n {
        sum += f(j) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0 / (length * length)
}

#[test]
fn vacuum_two_point_term_matches_direct_integral() {
    let grid = ModeGrid::new(1000.0, 1.0, Some(50.0)).unwrap();
    let ca = CoherentAmplitudes::vacuum(grid);
    for (t1, t2) in [(0.0, 0.0), (0.0, 0.37), (2.0, 1.1), (5.0, 9.0)] {
        let tp = two_point_function(&ca, 0.0, t1, t2).unwrap();
        assert_eq!(tp.product, 0.0);
        let want = vacuum_oracle(1000.0, 50.0, t2 - t1);
        assert!((tp.vacuum - want).norm() <= 1e-8 * want.norm(), "{t1} {t2}");
    }
    let big = CoherentAmplitudes::vacuum(grid.with_length(1e4).unwrap());
    let ratio = two_point_function(&big, 0.0, 0.0, 1.3).unwrap().vacuum / two_point_function(&ca, 0.0, 0.0, 1.3).unwrap().vacuum;
    assert!((ratio - 1e-2).norm() <= 1e-15);
}

#[test]
fn vacuum_term_is_negligible_for_the_corpus_state() {
    let (_, ca) = dynamics();
    assert!(ca.grid().length() >= DEFAULT_LENGTH);
    // two crests of sin(2z) behind the detector
    let (t1, t2) = (0.25 * PI, 1.25 * PI);
    let tp = two_point_function(ca, 0.0, t1, t2).unwrap();
    let ratio = tp.vacuum.norm() / tp.product.abs();
    assert!(ratio <= 1e-6, "vacuum/product = {ratio:e}");
    assert_eq!(tp.vacuum, vacuum_term(ca.grid().length(), ca.grid().k_uv().unwrap(), t2 - t1));
}
