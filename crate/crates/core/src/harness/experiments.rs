use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind, GapSpec, RouteChoice};
use super::output::{csv_string, FigureSeries};
use super::{HarnessError, Payload};
use crate::dynamics::{
    detuning_scan, fit_exponent, fit_sine_amplitude, monochromatic_reference, ExponentFit, ProbabilityCurve,
    ScanPoint, TwoLevelParticle,
};
use crate::field::{CoherentAmplitudes, ModeGrid, DEFAULT_LENGTH, DEFAULT_UV_RATIO};
use crate::ledger::{compute_i3, energy_report, EnergyReport};
use crate::signal::{
    apply_window, instantaneous_frequency, make_real_superosc, sample_asymptotic, sample_bessel, sample_integral,
    spectrum, Branch, LockOffset, SampledSignal, SuperoscPair, SuperoscParams, SynthesisRoute, UniformGrid,
    WindowSpec,
};

const DEFAULT_DELTA: f64 = 0.3;
const DEFAULT_BOOST: f64 = 1.0;
const MAX_DEFAULT_GRID: usize = 2_000_000;
const FREQ_POINTS: usize = 41;
const TRANSITION_POINTS: usize = 40;
const DEFAULT_LADDER: [f64; 3] = [40.0, 100.0, 400.0];

/// What an experiment produced before anything touches the disk.
pub(crate) struct Outcome {
    pub payload: Payload,
    pub files: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub violation: Option<String>,
}

impl Outcome {
    fn new(payload: Payload) -> Self {
        Self {
            payload,
            files: Vec::new(),
            warnings: Vec::new(),
            violation: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SignalInfo {
    pub k0: f64,
    /// `½k₀(1 + cosh A)`.
    pub k_prime: f64,
    pub extent: f64,
    pub growth: (f64, f64),
    pub window: Option<WindowSpec>,
}

fn single_params(cfg: &ExperimentConfig) -> Result<SuperoscParams, HarnessError> {
    let s = &cfg.signal;
    let mut b = SuperoscParams::builder().amplitude(s.amplitude).band_limit(s.band_limit);
    b = match (s.delta, s.inv_delta_sq, s.lock) {
        (Some(d), _, _) => b.delta(d),
        (_, Some(v), _) => b.inv_delta_sq(v),
        (_, _, Some(m)) => b.phase_locked(m, s.offset.unwrap_or(LockOffset::Quarter)),
        _ => b.delta(DEFAULT_DELTA),
    };
    b = match s.cosh_boost {
        Some(c) => b.cosh_boost(c),
        None => b.boost(s.boost.unwrap_or(DEFAULT_BOOST)),
    };
    if let Some(c) = s.window_criterion {
        b = b.window_criterion(c);
    }
    if let Some(z) = s.extent {
        b = b.extent(z);
    }
    Ok(b.build()?)
}

fn default_grid(info: &SignalInfo, k_max: f64) -> Result<UniformGrid, HarnessError> {
    let step = PI / (8.0 * k_max);
    // anchored so that z = 0 is a sample
    let below = (2.0 * info.extent.max(10.0 / info.k0) / step).ceil();
    let above = (1.25 * info.growth.1 / step).ceil();
    if below + above > MAX_DEFAULT_GRID as f64 {
        return Err(super::config::ConfigError::invalid("grid", "default grid too large; give a grid block").into());
    }
    Ok(UniformGrid::new(-below * step, step, (below + above) as usize + 1)?)
}

pub(crate) fn build_signal(cfg: &ExperimentConfig) -> Result<(SampledSignal, SignalInfo), HarnessError> {
    let s = &cfg.signal;
    let base = single_params(cfg)?;
    let k0 = base.band_limit();
    let window = cfg
        .window
        .as_ref()
        .map(|w| match w.kappa {
            Some(k) => WindowSpec::gaussian(k)
                .ok_or_else(|| super::config::ConfigError::invalid("window.kappa", "must be > 0")),
            None => Ok(WindowSpec::for_band(k0)),
        })
        .transpose()?;
    let (signal, info) = if s.pair {
        let m = s.lock.expect("validated");
        let extent = s.extent.unwrap_or(base.extent());
        let pair = SuperoscPair::phase_locked(m, base.boost(), k0, s.amplitude, extent, Branch::Plus)?;
        let info = SignalInfo {
            k0,
            k_prime: pair.local_wavenumber(),
            extent: pair.extent(),
            growth: pair.first().growth_region(),
            window,
        };
        let grid = match cfg.grid {
            Some(g) => UniformGrid::spanning(g.z_min, g.z_max, g.step)?,
            None => default_grid(&info, pair.first().superosc_wavenumber())?,
        };
        let sampled = if s.real {
            make_real_superosc(&pair, pair.local_wavenumber(), grid)?
        } else {
            pair.sample(grid)?
        };
        (sampled, info)
    } else {
        let info = SignalInfo {
            k0,
            k_prime: base.superosc_wavenumber(),
            extent: base.extent(),
            growth: base.growth_region(),
            window,
        };
        let grid = match cfg.grid {
            Some(g) => UniformGrid::spanning(g.z_min, g.z_max, g.step)?,
            None => default_grid(&info, base.superosc_wavenumber().max(k0))?,
        };
        let sampled = match s.route {
            RouteChoice::Bessel => sample_bessel(&base, grid)?,
            RouteChoice::Integral => sample_integral(&base, grid)?,
            RouteChoice::Asymptotic => sample_asymptotic(&base, grid)?,
        };
        (sampled, info)
    };
    let signal = match window {
        Some(w) => apply_window(&signal, w),
        None => signal,
    };
    Ok((signal, info))
}

/// Resolves `"matched"` to `½k₀(1 + cosh A)`.
pub(crate) fn particle(cfg: &ExperimentConfig, info: &SignalInfo) -> Result<TwoLevelParticle, HarnessError> {
    let pb = cfg
        .particle
        .as_ref()
        .ok_or_else(|| super::config::ConfigError::invalid("particle", "block required"))?;
    let gap = match &pb.gap {
        GapSpec::Value(v) => *v,
        GapSpec::Keyword(k) if k == "matched" => info.k_prime,
        GapSpec::Keyword(k) => {
            return Err(super::config::ConfigError::invalid("particle.gap", format!("expected a number or \"matched\", got \"{k}\"")).into())
        }
    };
    Ok(TwoLevelParticle::new(gap)?
        .with_coupling(pb.coupling)
        .with_position(pb.position))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthPayload {
    pub route: SynthesisRoute,
    pub grid: UniformGrid,
    pub ln_scale: f64,
    pub ln_max_abs: f64,
    pub peak_z: f64,
    pub value_at_zero: Option<[f64; 2]>,
    pub predicted_growth_peak: f64,
    pub region_counts: BTreeMap<String, usize>,
    pub boundary_ratio: f64,
    pub series: FigureSeries,
}

fn synth(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, info) = build_signal(cfg)?;
    let g = *s.grid();
    let (peak_i, _) = s
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .fold((0, -1.0), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    let zero = g.nearest(0.0);
    let value_at_zero = (g.z(zero).abs() <= 1e-9 * g.step()).then(|| {
        let v = s.values()[zero] * s.ln_scale().exp();
        [v.re, v.im]
    });
    let series = FigureSeries {
        extent: info.extent,
        growth_start: info.growth.0,
        growth_end: info.growth.1,
        z: g.points().collect(),
        re: s.values().iter().map(|v| v.re).collect(),
        im: s.values().iter().map(|v| v.im).collect(),
        ln_scale: s.ln_scale(),
    };
    let mut region_counts = BTreeMap::new();
    for i in 0..g.len() {
        *region_counts.entry(series.region(i).label().to_owned()).or_insert(0) += 1;
    }
    let csv = {
        let f = s.ln_scale().exp();
        csv_string(
            &["z", "re", "im", "abs", "ln_abs"],
            (0..g.len()).map(|i| {
                let v = s.values()[i];
                vec![g.z(i).into(), (v.re * f).into(), (v.im * f).into(), (v.norm() * f).into(), series.ln_abs(i).into()]
            }),
        )
    };
    let figure = cfg.output.figure.then(|| series.to_csv());
    let payload = SynthPayload {
        route: s.route(),
        grid: g,
        ln_scale: s.ln_scale(),
        ln_max_abs: s.ln_max_abs(),
        peak_z: g.z(peak_i),
        value_at_zero,
        predicted_growth_peak: 0.5 * (info.growth.0 + info.growth.1),
        region_counts,
        boundary_ratio: s.boundary_ratio(),
        series,
    };
    let mut out = Outcome::new(Payload::Synth(payload));
    out.files.push(("synth.csv".into(), csv));
    if let Some(f) = figure {
        out.files.push(("figure.csv".into(), f));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPayload {
    pub k_start: f64,
    pub k_step: f64,
    pub len: usize,
    pub kappa: f64,
    pub band_interval: Option<(f64, f64)>,
    pub fraction_inside: Option<f64>,
    pub leakage: Option<f64>,
    pub band_limited: bool,
    pub parseval_mismatch: f64,
}

fn spectrum_experiment(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, _) = build_signal(cfg)?;
    let spec = spectrum(&s)?;
    let band = spec.band_interval();
    let payload = SpectrumPayload {
        k_start: spec.k_start(),
        k_step: spec.k_step(),
        len: spec.len(),
        kappa: spec.kappa(),
        band_interval: band,
        fraction_inside: band.map(|(lo, hi)| spec.fraction_inside(lo, hi)),
        leakage: spec.leakage(),
        band_limited: spec.is_band_limited(),
        parseval_mismatch: spec.parseval_mismatch(&s),
    };
    let f = spec.ln_scale().exp();
    let csv = csv_string(
        &["k", "re", "im", "ln_abs"],
        spec.values().iter().enumerate().map(|(j, v)| {
            vec![spec.k(j).into(), (v.re * f).into(), (v.im * f).into(), (v.norm().ln() + spec.ln_scale()).into()]
        }),
    );
    let mut out = Outcome::new(Payload::Spectrum(payload));
    out.files.push(("spectrum.csv".into(), csv));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub frequency_ok: bool,
    pub spectral_fraction: f64,
    pub spectral_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqPayload {
    pub target: f64,
    pub extent: f64,
    pub z: Vec<f64>,
    pub k: Vec<f64>,
    pub mean: f64,
    pub max_deviation: f64,
    pub certificate: Option<Certificate>,
}

fn freq_map(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, info) = build_signal(cfg)?;
    let margin = (8.0 * s.grid().step()).max(8.0 * PI / info.k_prime);
    let view = s.restrict(-info.extent - margin, margin)?;
    let z: Vec<f64> = (0..FREQ_POINTS)
        .map(|i| -info.extent * (1.0 - i as f64 / (FREQ_POINTS - 1) as f64))
        .collect();
    let k = z
        .iter()
        .map(|&z| instantaneous_frequency(&view, z))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = k.iter().sum::<f64>() / k.len() as f64;
    let max_deviation = k.iter().map(|k| (k / info.k_prime - 1.0).abs()).fold(0.0, f64::max);
    let certificate = match info.window {
        Some(_) => {
            let spec = spectrum(&s)?;
            let (lo, hi) = spec.band_interval().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
            let spectral_fraction = spec.fraction_inside(lo, hi);
            Some(Certificate {
                frequency_ok: max_deviation <= 0.01,
                spectral_fraction,
                spectral_ok: spectral_fraction >= 0.9999,
            })
        }
        None => None,
    };
    let csv = csv_string(&["z", "k"], z.iter().zip(&k).map(|(&z, &k)| vec![z.into(), k.into()]));
    let mut out = Outcome::new(Payload::FreqMap(FreqPayload {
        target: info.k_prime,
        extent: info.extent,
        z,
        k,
        mean,
        max_deviation,
        certificate,
    }));
    out.files.push(("freq_map.csv".into(), csv));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionPayload {
    pub gap: f64,
    pub coupling: f64,
    pub position: f64,
    pub times: Vec<f64>,
    pub probability: Vec<f64>,
    pub breakdown: Vec<bool>,
    pub fit_window: (f64, f64),
    pub fit: Option<ExponentFit>,
    pub sine_amplitude: Option<f64>,
    pub p_mono: Option<Vec<f64>>,
    pub max_mono_deviation: Option<f64>,
}

fn transition(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, info) = build_signal(cfg)?;
    let p = particle(cfg, &info)?;
    let lo = 5.0 * 2.0 * PI / p.gap();
    let times = match cfg.times(Some(p.gap()))? {
        Some(t) => t,
        None => super::config::ladder("time", lo, info.extent.max(lo), TRANSITION_POINTS, true)?,
    };
    let fit_window = match cfg.time.as_ref().and_then(|t| t.fit_window) {
        Some([a, b]) => (a, b),
        None => (lo, info.extent),
    };
    let curve = ProbabilityCurve::compute(&s, &p, &times, cfg.experiment.name())?;
    let mut warnings = Vec::new();
    if curve.any_breakdown() {
        warnings.push("first-order probability exceeds 0.1 at some times".to_owned());
    }
    let fit = match fit_exponent(&curve, fit_window) {
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("no exponent fit: {e}"));
            None
        }
    };
    let sine_amplitude = if s.is_real() && !s.is_scaled() {
        Some(fit_sine_amplitude(&s, p.gap(), p.position() - info.extent, p.position())?)
    } else {
        None
    };
    let p_mono: Option<Vec<f64>> =
        sine_amplitude.map(|a| times.iter().map(|&t| monochromatic_reference(&p, a, t)).collect());
    let max_mono_deviation = p_mono.as_ref().map(|m| {
        curve
            .times
            .iter()
            .zip(&curve.values)
            .zip(m)
            .filter(|((t, _), _)| (fit_window.0..=fit_window.1).contains(*t))
            .map(|((_, v), m)| (v / m - 1.0).abs())
            .fold(0.0, f64::max)
    });
    let csv = csv_string(
        &["t", "probability", "p_mono", "breakdown"],
        (0..times.len()).map(|i| {
            vec![
                times[i].into(),
                curve.values[i].into(),
                p_mono.as_ref().map_or(f64::NAN, |m| m[i]).into(),
                curve.breakdown[i].into(),
            ]
        }),
    );
    let mut out = Outcome::new(Payload::Transition(TransitionPayload {
        gap: p.gap(),
        coupling: p.coupling(),
        position: p.position(),
        times,
        probability: curve.values,
        breakdown: curve.breakdown,
        fit_window,
        fit,
        sine_amplitude,
        p_mono,
        max_mono_deviation,
    }));
    out.warnings = warnings;
    out.files.push(("transition.csv".into(), csv));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetunePayload {
    pub t: f64,
    pub matched_gap: f64,
    pub points: Vec<ScanPoint>,
    pub argmax: Option<f64>,
    pub selectivity: Option<f64>,
}

fn detune(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, info) = build_signal(cfg)?;
    let p = particle(cfg, &info)?;
    let db = cfg.detune.as_ref().expect("validated");
    let matched = p.gap();
    let gaps: Vec<f64> = match (&db.gaps, &db.offsets) {
        (Some(g), None) => g.clone(),
        (None, Some(o)) => o.iter().map(|x| matched * (1.0 + x)).collect(),
        _ => return Err(super::config::ConfigError::invalid("detune", "give exactly one of gaps or offsets").into()),
    };
    let t = match cfg.times(Some(matched))? {
        Some(v) if v.len() == 1 => v[0],
        Some(_) => return Err(super::config::ConfigError::invalid("time", "detune takes a single time").into()),
        None => info.extent.min(100.0 * PI / matched),
    };
    let scan = detuning_scan(&s, &p, &gaps, t)?;
    let mut out = Outcome::new(Payload::Detune(DetunePayload {
        t,
        matched_gap: matched,
        argmax: scan.argmax(),
        selectivity: scan.selectivity(matched),
        points: scan.points.clone(),
    }));
    if scan.points.iter().any(|p| p.breakdown) {
        out.warnings.push("first-order probability exceeds 0.1 for some gaps".into());
    }
    out.files.push((
        "detune.csv".into(),
        csv_string(
            &["gap", "probability", "breakdown"],
            scan.points.iter().map(|p| vec![p.gap.into(), p.probability.into(), p.breakdown.into()]),
        ),
    ));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyPayload {
    pub gap: f64,
    pub state_modes: usize,
    pub reports: Vec<EnergyReport>,
    /// `I₃(2k_uv)/I₃(k_uv)` per report.
    pub cutoff_sensitivity: Vec<Option<f64>>,
    pub ladder_non_increasing: bool,
}

fn energy(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let (s, info) = build_signal(cfg)?;
    let p = particle(cfg, &info)?;
    let modes = cfg.modes.unwrap_or_default();
    let state_k_max = modes.state_k_max.unwrap_or(1.5 * info.k_prime.max(info.k0));
    let state_grid = ModeGrid::covering(&s, state_k_max, None)?;
    let ca = CoherentAmplitudes::from_signal(&s, &state_grid)?;
    let vacuum = ModeGrid::new(
        modes.length.unwrap_or(DEFAULT_LENGTH / info.k0),
        info.k0,
        Some(modes.k_uv.unwrap_or(DEFAULT_UV_RATIO * info.k0)),
    )?;
    let times = match cfg.times(Some(p.gap()))? {
        Some(t) => t,
        None => DEFAULT_LADDER.iter().map(|n| n * PI / p.gap()).collect(),
    };
    let reports = times
        .par_iter()
        .map(|&t| energy_report(&ca, &p, t, &vacuum))
        .collect::<Result<Vec<_>, _>>()?;
    let doubled = vacuum.with_k_uv(vacuum.k_uv().map(|k| 2.0 * k));
    let cutoff_sensitivity = reports
        .iter()
        .map(|r| {
            if r.vacuous {
                return Ok(None);
            }
            Ok(Some(compute_i3(&doubled, r.gap, r.t, r.denominator)? / (r.i3_over_e * r.gap)))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let ladder_non_increasing = reports.windows(2).all(|w| w[1].residual.abs() <= w[0].residual.abs());
    let mut out = Outcome::new(Payload::Energy(EnergyPayload {
        gap: p.gap(),
        state_modes: state_grid.n_modes(),
        reports: reports.clone(),
        cutoff_sensitivity: cutoff_sensitivity.clone(),
        ladder_non_increasing,
    }));
    for (r, c) in reports.iter().zip(&cutoff_sensitivity) {
        if r.vacuous {
            out.warnings.push(format!("t = {}: field never reaches the particle; conditioning on excitation is vacuous", r.t));
        }
        if let Some(c) = c {
            out.warnings.push(format!("t = {}: I3 changes by a factor {c:.4} when k_uv doubles", r.t));
        }
    }
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.within_tolerance())
        .map(|r| format!("|r| = {:.3e} at Ωt = {:.4}", r.residual.abs(), r.omega_t))
        .collect();
    if !bad.is_empty() {
        out.violation = Some(format!("energy residual above tolerance: {}", bad.join(", ")));
    } else if !ladder_non_increasing {
        out.violation = Some("energy residual increases along the time ladder".into());
    }
    out.files.push((
        "energy.csv".into(),
        csv_string(
            &["t", "omega_t", "e_b", "i2_over_e", "i3_over_e", "residual"],
            reports.iter().map(|r| {
                vec![
                    r.t.into(),
                    r.omega_t.into(),
                    r.e_b.into(),
                    r.i2_over_e.into(),
                    r.i3_over_e.into(),
                    r.residual.into(),
                ]
            }),
        ),
    ));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPayload {
    pub run: ExperimentKind,
    pub axes: Vec<String>,
    pub points: usize,
    pub failures: usize,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepLine {
    pub index: usize,
    pub point: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub(crate) const SWEEP_FILE: &str = "sweep.jsonl";

fn apply_point(base: &ExperimentConfig, point: &BTreeMap<String, f64>) -> ExperimentConfig {
    let mut cfg = base.clone();
    cfg.experiment = base.sweep.as_ref().expect("validated").run;
    cfg.sweep = None;
    for (axis, &v) in point {
        match axis.as_str() {
            "delta" => {
                cfg.signal.delta = Some(v);
                cfg.signal.inv_delta_sq = None;
                cfg.signal.lock = None;
            }
            "boost" => {
                cfg.signal.boost = Some(v);
                cfg.signal.cosh_boost = None;
            }
            "cosh_boost" => {
                cfg.signal.cosh_boost = Some(v);
                cfg.signal.boost = None;
            }
            "length" => {
                let mut m = cfg.modes.unwrap_or_default();
                m.length = Some(v);
                cfg.modes = Some(m);
            }
            "t" => {
                let mut t = cfg.time.take().unwrap_or_default();
                t.values = Some(vec![v]);
                t.phase_over_pi = None;
                t.start = None;
                t.stop = None;
                t.points = None;
                cfg.time = Some(t);
            }
            _ => unreachable!("axes are fixed"),
        }
    }
    cfg
}

fn sweep(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    let sw = cfg.sweep.as_ref().expect("validated");
    let mut axes: Vec<(String, Vec<f64>)> = Vec::new();
    for (name, r) in [
        ("delta", &sw.delta),
        ("boost", &sw.boost),
        ("cosh_boost", &sw.cosh_boost),
        ("length", &sw.length),
        ("t", &sw.t),
    ] {
        if let Some(r) = r {
            axes.push((name.to_owned(), r.resolve(&format!("sweep.{name}"))?));
        }
    }
    let total: usize = if axes.is_empty() { 0 } else { axes.iter().map(|(_, v)| v.len()).product() };
    let points: Vec<BTreeMap<String, f64>> = (0..total)
        .map(|mut idx| {
            let mut point = BTreeMap::new();
            for (name, values) in axes.iter().rev() {
                point.insert(name.clone(), values[idx % values.len()]);
                idx /= values.len();
            }
            point
        })
        .collect();
    let lines: Vec<SweepLine> = points
        .par_iter()
        .enumerate()
        .map(|(index, point)| {
            let inner = apply_point(cfg, point);
            let result = inner.validate().map_err(HarnessError::from).and_then(|_| execute(&inner));
            match result {
                Ok(o) => SweepLine {
                    index,
                    point: point.clone(),
                    error: o.violation,
                    payload: Some(o.payload),
                },
                Err(e) => SweepLine {
                    index,
                    point: point.clone(),
                    payload: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let failures = lines.iter().filter(|l| l.error.is_some()).count();
    let mut jsonl = String::new();
    for l in &lines {
        jsonl.push_str(&serde_json::to_string(l).map_err(HarnessError::serialize)?);
        jsonl.push('\n');
    }
    let mut out = Outcome::new(Payload::Sweep(SweepPayload {
        run: sw.run,
        axes: axes.iter().map(|(n, _)| n.clone()).collect(),
        points: lines.len(),
        failures,
        file: SWEEP_FILE.into(),
    }));
    if failures > 0 {
        out.warnings.push(format!("{failures} of {} sweep points failed", lines.len()));
    }
    out.files.push((SWEEP_FILE.into(), jsonl));
    Ok(out)
}

pub(crate) fn execute(cfg: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    match cfg.experiment {
        ExperimentKind::Synth => synth(cfg),
        ExperimentKind::Spectrum => spectrum_experiment(cfg),
        ExperimentKind::FreqMap => freq_map(cfg),
        ExperimentKind::Transition => transition(cfg),
        ExperimentKind::Detune => detune(cfg),
        ExperimentKind::Energy => energy(cfg),
        ExperimentKind::Sweep => sweep(cfg),
    }
}
