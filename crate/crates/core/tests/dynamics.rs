use std::f64::consts::PI;
use std::sync::OnceLock;

use approx::assert_relative_eq;

use superosc::corpus;
use superosc::dynamics::{
    detuning_scan, fit_exponent, fit_sine_amplitude, monochromatic_reference, transition_probability, DynamicsError,
    ProbabilityCurve, TransitionSolver, TwoLevelParticle, BREAKDOWN_THRESHOLD,
};
use superosc::signal::{SampledSignal, SynthesisRoute, UniformGrid};

fn corpus_signal() -> &'static SampledSignal {
    static CELL: OnceLock<SampledSignal> = OnceLock::new();
    CELL.get_or_init(|| corpus::dynamics_signal().unwrap())
}

fn corpus_amplitude() -> f64 {
    let p = corpus::dynamics_particle();
    fit_sine_amplitude(corpus_signal(), p.gap(), -corpus::DYNAMICS_EXTENT, 0.0).unwrap()
}

fn sine(k: f64, z_min: f64) -> SampledSignal {
    let g = UniformGrid::spanning(z_min, 5.0, 0.02).unwrap();
    let v: Vec<f64> = g.points().map(|z| (k * z).sin()).collect();
    SampledSignal::from_real(g, v, SynthesisRoute::External, k).unwrap()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (a.ln() + (b / a).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

#[test]
fn zero_field_never_excites() {
    let g = UniformGrid::spanning(-100.0, 1.0, 0.1).unwrap();
    let s = SampledSignal::from_real(g, vec![0.0; g.len()], SynthesisRoute::External, 1.0).unwrap();
    let p = TwoLevelParticle::new(2.0).unwrap();
    for t in [0.0, 1.0, 37.5, 99.0] {
        assert_eq!(transition_probability(&s, &p, t).unwrap(), 0.0);
    }
}

#[test]
fn resonant_sine_gives_quarter_t_squared() {
    let omega = 2.0;
    let t = 20.0 * 2.0 * PI / omega;
    let s = sine(omega, -t - 5.0);
    let p = TwoLevelParticle::new(omega).unwrap().with_coupling(1e-3);
    let got = transition_probability(&s, &p, t).unwrap();
    let want = monochromatic_reference(&p, 1.0, t);
    assert_relative_eq!(want, 0.25 * (1e-3 * t).powi(2), max_relative = 1e-15);
    assert_relative_eq!(got, want, max_relative = 1e-6);
}

#[test]
fn reference_is_quadratic_in_amplitude_and_time() {
    let p = TwoLevelParticle::new(2.0).unwrap().with_coupling(0.3);
    assert_eq!(monochromatic_reference(&p, 1.7, 0.0), 0.0);
    let a = monochromatic_reference(&p, 1.7, 12.0);
    assert_relative_eq!(monochromatic_reference(&p, 3.4, 12.0), 4.0 * a, max_relative = 1e-15);
    assert_relative_eq!(monochromatic_reference(&p, 1.7, 24.0), 4.0 * a, max_relative = 1e-15);
}

#[test]
fn corpus_matches_the_sine_reference_at_mid_window() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let t = 0.5 * corpus::DYNAMICS_EXTENT;
    let got = transition_probability(s, &p, t).unwrap();
    let want = monochromatic_reference(&p, corpus_amplitude(), t);
    assert!((got / want - 1.0).abs() <= 0.05, "P/P_mono = {}", got / want);
}

#[test]
fn corpus_tracks_the_reference_across_the_window() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let a = corpus_amplitude();
    let lo = 10.0 * 2.0 * PI / p.gap();
    let times = logspace(lo, corpus::DYNAMICS_EXTENT, 25);
    let curve = ProbabilityCurve::compute(s, &p, &times, "dynamics").unwrap();
    assert!(!curve.any_breakdown());
    for (t, v) in curve.times.iter().zip(&curve.values) {
        let r = v / monochromatic_reference(&p, a, *t);
        assert!((r - 1.0).abs() <= 0.05, "t = {t}: ratio {r}");
    }
}

#[test]
fn exact_quadratic_data_fits_exponent_two() {
    let times = logspace(1.0, 50.0, 12);
    let curve = ProbabilityCurve {
        signal_id: "exact".into(),
        gap: 1.0,
        coupling: 1.0,
        values: times.iter().map(|t| 3e-5 * t * t).collect(),
        times,
        breakdown: vec![false; 12],
    };
    let fit = fit_exponent(&curve, (0.5, 60.0)).unwrap();
    assert!((fit.exponent - 2.0).abs() <= 1e-6);
    assert_relative_eq!(fit.prefactor, 3e-5, max_relative = 1e-6);
    assert!(matches!(
        fit_exponent(&curve, (0.5, 5.0)),
        Err(DynamicsError::InsufficientData { .. })
    ));
}

#[test]
fn corpus_curve_grows_quadratically() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let window = (5.0 * 2.0 * PI / p.gap(), corpus::DYNAMICS_EXTENT);
    let curve = ProbabilityCurve::compute(s, &p, &logspace(window.0, window.1, 40), "dynamics").unwrap();
    let fit = fit_exponent(&curve, window).unwrap();
    assert!((1.95..=2.05).contains(&fit.exponent), "exponent {}", fit.exponent);
    assert!(fit.residual_rms <= 0.05, "residual {}", fit.residual_rms);
}

#[test]
fn detuned_curve_is_reported_without_a_claim() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let detuned = p.with_gap(1.37 * p.gap()).unwrap();
    let window = (5.0 * 2.0 * PI / p.gap(), corpus::DYNAMICS_EXTENT);
    let curve = ProbabilityCurve::compute(s, &detuned, &logspace(window.0, window.1, 40), "detuned").unwrap();
    match fit_exponent(&curve, window) {
        Ok(fit) => assert!(fit.exponent.is_finite()),
        Err(e) => assert!(matches!(e, DynamicsError::InsufficientData { .. })),
    }
}

#[test]
fn matched_gap_dominates_the_scan() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let matched = p.gap();
    let t = 100.0 * PI / matched;
    let gaps = [0.5, 1.2, 1.6, matched, 2.4];
    let scan = detuning_scan(s, &p, &gaps, t).unwrap();
    assert_eq!(scan.argmax(), Some(matched));
    let in_band = scan.points.iter().find(|q| q.gap == 0.5).unwrap();
    assert!(in_band.probability > 0.0);

    let above = detuning_scan(s, &p, &[1.2, 1.6, matched, 2.4], t).unwrap();
    let ratio = above.selectivity(matched).unwrap();
    assert!(ratio >= 100.0, "selectivity {ratio}");
}

#[test]
fn strong_coupling_is_flagged() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle().with_coupling(1.0);
    let t = corpus::DYNAMICS_EXTENT;
    let tr = TransitionSolver::new(s).unwrap().transition(&p, t).unwrap();
    assert!(tr.breakdown && tr.probability > BREAKDOWN_THRESHOLD);
    match transition_probability(s, &p, t) {
        Err(DynamicsError::PerturbationBreakdown { probability, threshold }) => {
            assert_eq!(probability, tr.probability);
            assert_eq!(threshold, BREAKDOWN_THRESHOLD);
        }
        other => panic!("expected breakdown, got {other:?}"),
    }
    let curve = ProbabilityCurve::compute(s, &p, &[1.0, 10.0, t], "strong").unwrap();
    for (v, b) in curve.values.iter().zip(&curve.breakdown) {
        assert!(*v <= BREAKDOWN_THRESHOLD || *b);
    }
}

#[test]
fn probability_settles_after_the_wave_passes() {
    let s = corpus_signal();
    let p = corpus::dynamics_particle();
    let support = s.window().unwrap().reach(1e-3);
    let t1 = support;
    let t2 = 2.0 * t1;
    assert!(t2 <= corpus::DYNAMICS_HALF_SPAN);
    let solver = TransitionSolver::new(s).unwrap();
    let p1 = solver.transition(&p, t1).unwrap();
    let p2 = solver.transition(&p, t2).unwrap();
    assert!(!p1.breakdown && !p2.breakdown);
    assert!(p2.probability / p1.probability <= 1.2, "{} -> {}", p1.probability, p2.probability);
}

#[test]
fn gaps_must_be_positive() {
    assert!(matches!(TwoLevelParticle::new(0.0), Err(DynamicsError::InvalidParticle(_))));
    assert!(matches!(TwoLevelParticle::new(f64::NAN), Err(DynamicsError::InvalidParticle(_))));
    let p = TwoLevelParticle::new(2.0).unwrap();
    assert!(p.above_band(1.0) && !TwoLevelParticle::new(0.5).unwrap().above_band(1.0));
}
