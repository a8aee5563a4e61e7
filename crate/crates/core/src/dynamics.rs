//! First-order excitation of a two-level particle by the classical field.
//!
//! `P(t) = g² |∫₀ᵗ F(z₀ − ct′) e^{iΩt′} dt′|²`, with the field interpolated
//! from its samples by a natural cubic spline and the time integral taken by
//! composite Simpson at a fixed number of points per fastest period.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::{even_panels, simpson, UniformCubicSpline};
use crate::signal::SampledSignal;

/// First-order results above this probability are not trusted.
pub const BREAKDOWN_THRESHOLD: f64 = 0.1;
/// Simpson nodes per period of `Ω + c k_max`.
pub const POINTS_PER_PERIOD: f64 = 16.0;
const MAX_PANELS: usize = 50_000_000;
const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid particle: {0}")]
    InvalidParticle(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("time integral needs {required} panels, above the limit {limit}")]
    GridUnderresolved { required: usize, limit: usize },
    #[error("field needed on [{needed_lo}, {needed_hi}] but sampled on [{available_lo}, {available_hi}]")]
    NotCovered {
        needed_lo: f64,
        needed_hi: f64,
        available_lo: f64,
        available_hi: f64,
    },
    #[error("first-order probability {probability:.4} exceeds {threshold}")]
    PerturbationBreakdown { probability: f64, threshold: f64 },
    #[error("fit window holds {points} usable points, need {required}")]
    InsufficientData { points: usize, required: usize },
}

/// Gap `Ω`, coupling `g = e/(2mc)` and detector position `z₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParticle {
    gap: f64,
    coupling: f64,
    position: f64,
}

impl TwoLevelParticle {
    pub fn new(gap: f64) -> Result<Self, DynamicsError> {
        if !(gap.is_finite() && gap > 0.0) {
            return Err(DynamicsError::InvalidParticle(format!("gap must be > 0, got {gap}")));
        }
        Ok(Self {
            gap,
            coupling: 1.0,
            position: 0.0,
        })
    }
    pub fn with_coupling(mut self, g: f64) -> Self {
        self.coupling = g;
        self
    }
    pub fn with_position(mut self, z0: f64) -> Self {
        self.position = z0;
        self
    }
    pub fn with_gap(self, gap: f64) -> Result<Self, DynamicsError> {
        Ok(Self { gap, ..Self::new(gap)?.with_coupling(self.coupling).with_position(self.position) })
    }
    pub fn gap(&self) -> f64 {
        self.gap
    }
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn position(&self) -> f64 {
        self.position
    }
    /// Whether the gap lies above the band `c k₀`.
    pub fn above_band(&self, k0: f64) -> bool {
        self.gap > k0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// `g² |∫|²`.
    pub probability: f64,
    /// `∫₀ᵗ F(z₀ − ct′) e^{iΩt′} dt′`.
    pub amplitude: Complex64,
    pub breakdown: bool,
}

/// Spline of a sampled field, reusable across times and gaps.
#[derive(Debug, Clone)]
pub struct TransitionSolver {
    re: UniformCubicSpline,
    im: Option<UniformCubicSpline>,
    k_max: f64,
}

impl TransitionSolver {
    pub fn new(s: &SampledSignal) -> Result<Self, DynamicsError> {
        if s.is_scaled() {
            return Err(DynamicsError::InvalidInput("signal magnitudes exceed double range".into()));
        }
        let g = s.grid();
        let re = UniformCubicSpline::new(g.start(), g.step(), s.values().iter().map(|v| v.re).collect());
        let im = (!s.is_real()).then(|| UniformCubicSpline::new(g.start(), g.step(), s.values().iter().map(|v| v.im).collect()));
        Ok(Self { re, im, k_max: s.k_max() })
    }

    fn field(&self, z: f64) -> Complex64 {
        Complex64::new(self.re.eval(z), self.im.as_ref().map_or(0.0, |s| s.eval(z)))
    }

    fn field_derivative(&self, z: f64) -> Complex64 {
        Complex64::new(self.re.derivative(z), self.im.as_ref().map_or(0.0, |s| s.derivative(z)))
    }

    fn panels(&self, gap: f64, t: f64) -> Result<usize, DynamicsError> {
        let fastest = gap.abs() + self.k_max;
        let step = std::f64::consts::TAU / (POINTS_PER_PERIOD * fastest);
        let n = even_panels(t, step);
        if n > MAX_PANELS {
            return Err(DynamicsError::GridUnderresolved {
                required: n,
                limit: MAX_PANELS,
            });
        }
        Ok(n)
    }

    fn check_cover(&self, z0: f64, t: f64) -> Result<(), DynamicsError> {
        let (lo, hi) = (self.re.start(), self.re.end());
        let tol = 1e-9 * (hi - lo);
        if z0 - t < lo - tol || z0 > hi + tol {
            return Err(DynamicsError::NotCovered {
                needed_lo: z0 - t,
                needed_hi: z0,
                available_lo: lo,
                available_hi: hi,
            });
        }
        Ok(())
    }

    /// `∫₀ᵗ F(z₀ − ct′) e^{iΩt′} dt′`.
    pub fn amplitude(&self, particle: &TwoLevelParticle, t: f64) -> Result<Complex64, DynamicsError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(DynamicsError::InvalidInput(format!("time must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let z0 = particle.position();
        self.check_cover(z0, t)?;
        let n = self.panels(particle.gap(), t)?;
        let h = t / n as f64;
        let samples: Vec<Complex64> = (0..=n)
            .map(|j| {
                let tp = j as f64 * h;
                self.field(z0 - tp) * Complex64::from_polar(1.0, particle.gap() * tp)
            })
            .collect();
        Ok(simpson(&samples, h))
    }

    pub fn transition(&self, particle: &TwoLevelParticle, t: f64) -> Result<Transition, DynamicsError> {
        let amplitude = self.amplitude(particle, t)?;
        let probability = particle.coupling().powi(2) * amplitude.norm_sqr();
        Ok(Transition {
            probability,
            amplitude,
            breakdown: probability > BREAKDOWN_THRESHOLD,
        })
    }

    /// Field and its z-derivative at the Simpson nodes of `[0, t]`, with the
    /// node spacing.
    pub fn field_series(&self, particle: &TwoLevelParticle, t: f64) -> Result<(Vec<(f64, f64)>, f64), DynamicsError> {
        let z0 = particle.position();
        self.check_cover(z0, t)?;
        let n = self.panels(particle.gap(), t)?;
        let h = t / n as f64;
        let series = (0..=n)
            .map(|j| {
                let z = z0 - j as f64 * h;
                (self.field(z).re, self.field_derivative(z).re)
            })
            .collect();
        Ok((series, h))
    }
}

/// `P(t)`; an error carrying the value when `P > 0.1`.
pub fn transition_probability(s: &SampledSignal, particle: &TwoLevelParticle, t: f64) -> Result<f64, DynamicsError> {
    let tr = TransitionSolver::new(s)?.transition(particle, t)?;
    if tr.breakdown {
        return Err(DynamicsError::PerturbationBreakdown {
            probability: tr.probability,
            threshold: BREAKDOWN_THRESHOLD,
        });
    }
    Ok(tr.probability)
}

/// `g² a² t²/4`, the resonant result for `F = a sin(Ωz/c)`.
pub fn monochromatic_reference(particle: &TwoLevelParticle, amplitude: f64, t: f64) -> f64 {
    0.25 * (particle.coupling() * amplitude * t).powi(2)
}

/// Least-squares `a` in `F(z) ≈ a sin(kz)` over `[z_lo, z_hi]`.
pub fn fit_sine_amplitude(s: &SampledSignal, k: f64, z_lo: f64, z_hi: f64) -> Result<f64, DynamicsError> {
    let g = s.grid();
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, v) in s.values().iter().enumerate() {
        let z = g.z(i);
        if (z_lo..=z_hi).contains(&z) {
            let b = (k * z).sin();
            num += v.re * b;
            den += b * b;
        }
    }
    if den == 0.0 {
        return Err(DynamicsError::InsufficientData {
            points: 0,
            required: 1,
        });
    }
    Ok(num / den * s.ln_scale().exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCurve {
    pub signal_id: String,
    pub gap: f64,
    pub coupling: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub breakdown: Vec<bool>,
}

impl ProbabilityCurve {
    pub fn compute(
        s: &SampledSignal,
        particle: &TwoLevelParticle,
        times: &[f64],
        signal_id: &str,
    ) -> Result<Self, DynamicsError> {
        let solver = TransitionSolver::new(s)?;
        let points = times
            .par_iter()
            .map(|&t| solver.transition(particle, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            signal_id: signal_id.to_owned(),
            gap: particle.gap(),
            coupling: particle.coupling(),
            times: times.to_vec(),
            values: points.iter().map(|p| p.probability).collect(),
            breakdown: points.iter().map(|p| p.breakdown).collect(),
        })
    }

    pub fn any_breakdown(&self) -> bool {
        self.breakdown.iter().any(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    pub residual_rms: f64,
    pub points: usize,
}

/// Least-squares line through `(ln t, ln P)` for `t` in `window`.
pub fn fit_exponent(curve: &ProbabilityCurve, window: (f64, f64)) -> Result<ExponentFit, DynamicsError> {
    let pts: Vec<(f64, f64)> = curve
        .times
        .iter()
        .zip(&curve.values)
        .filter(|(t, _)| (window.0..=window.1).contains(*t))
        .map(|(&t, &p)| (t, p))
        .collect();
    let usable = pts.iter().filter(|(t, p)| *t > 0.0 && *p > 0.0).count();
    if usable < MIN_FIT_POINTS || usable < pts.len() {
        return Err(DynamicsError::InsufficientData {
            points: usable,
            required: MIN_FIT_POINTS.max(pts.len()),
        });
    }
    let n = pts.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().map(|(t, p)| (t.ln(), p.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(ExponentFit {
        exponent: slope,
        prefactor: intercept.exp(),
        window,
        residual_rms: (rss / n).sqrt(),
        points: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub gap: f64,
    pub probability: f64,
    pub breakdown: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetuningScan {
    pub t: f64,
    pub points: Vec<ScanPoint>,
}

impl DetuningScan {
    /// Gap with the largest probability.
    pub fn argmax(&self) -> Option<f64> {
        self.points
            .iter()
            .max_by(|a, b| a.probability.total_cmp(&b.probability))
            .map(|p| p.gap)
    }

    /// `P(Ω_match) / max P(Ω)` over scanned gaps with `|Ω − Ω_match| ≥ Ω_match/10`.
    pub fn selectivity(&self, matched: f64) -> Option<f64> {
        let p_match = self
            .points
            .iter()
            .find(|p| (p.gap - matched).abs() <= 1e-12 * matched)?
            .probability;
        let other = self
            .points
            .iter()
            .filter(|p| (p.gap - matched).abs() >= 0.1 * matched)
            .map(|p| p.probability)
            .reduce(f64::max)?;
        Some(p_match / other)
    }
}

/// `P` at time `t` for each gap in `gaps`.
pub fn detuning_scan(
    s: &SampledSignal,
    particle: &TwoLevelParticle,
    gaps: &[f64],
    t: f64,
) -> Result<DetuningScan, DynamicsError> {
    let solver = TransitionSolver::new(s)?;
    let points = gaps
        .par_iter()
        .map(|&gap| {
            let p = particle.with_gap(gap)?;
            let tr = solver.transition(&p, t)?;
            Ok(ScanPoint {
                gap,
                probability: tr.probability,
                breakdown: tr.breakdown,
            })
        })
        .collect::<Result<Vec<_>, DynamicsError>>()?;
    Ok(DetuningScan { t, points })
}
