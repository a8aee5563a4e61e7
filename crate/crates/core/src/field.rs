//! Coherent-state description of a band-limited classical field.
//!
//! Mode sums use the half-line `k > 0` with spacing `Δk = 2π/L`. A mode with
//! amplitude `α_k` contributes `√(8πω_k/L³) Im(α_k e^{i(kz−ω_k t)})` to
//! `⟨B_x⟩`, which with `α_k = i√(L/(2πω_k)) F̃(k)` is `(2/L) Re(F̃ e^{i(kz−ωt)})`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::signal::{spectrum_padded, SampledSignal, SignalError, SpectralDensity, UniformGrid};

pub const DEFAULT_LENGTH: f64 = 1e4;
pub const DEFAULT_UV_RATIO: f64 = 50.0;
/// Positive-k spectral energy allowed beyond the highest mode.
pub const UNCOVERED_TOLERANCE: f64 = 1e-4;
/// `|α_k|` above which every supported mode counts as classical.
pub const CLASSICAL_AMPLITUDE: f64 = 10.0;
// modes below this fraction of the peak |F̃| are outside the support
const SUPPORT_FRACTION: f64 = 1e-3;
// re-anchor phasor recurrences this often
const ANCHOR_EVERY: usize = 128;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("invalid mode grid: {0}")]
    InvalidGrid(String),
    #[error("signal must be real-valued")]
    NotReal,
    #[error("signal spans {span} but the mode period is {length}")]
    Truncation { span: f64, length: f64 },
    #[error("signal magnitudes exceed double range (ln scale {ln_scale}); field quantities need an unscaled signal")]
    ScaledSignal { ln_scale: f64 },
    #[error("spectrum grid does not match the mode grid: {0}")]
    GridMismatch(String),
    #[error("{fraction:e} of the positive-k spectral energy lies beyond the highest mode")]
    UncoveredSpectrum { fraction: f64 },
    #[error("lowest mode holds {fraction:.3} of the total occupation")]
    Infrared { fraction: f64 },
    #[error("a UV cutoff is required")]
    CutoffMissing,
}

/// Modes `k_n = n Δk`, `n = 1..=n_modes`, `Δk = 2π/L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    length: f64,
    n_modes: usize,
    k_uv: Option<f64>,
}

impl ModeGrid {
    pub fn new(length: f64, k_max: f64, k_uv: Option<f64>) -> Result<Self, FieldError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(FieldError::InvalidGrid(format!("L must be > 0, got {length}")));
        }
        let dk = 2.0 * PI / length;
        if !(k_max.is_finite() && k_max >= dk) {
            return Err(FieldError::InvalidGrid(format!("k_max {k_max} is below the spacing {dk}")));
        }
        if let Some(uv) = k_uv {
            if !(uv.is_finite() && uv > 0.0) {
                return Err(FieldError::InvalidGrid(format!("k_uv must be > 0, got {uv}")));
            }
        }
        let n_modes = (k_max / dk + 1e-9).floor() as usize;
        Ok(Self { length, n_modes, k_uv })
    }

    /// `L = 10⁴/k₀`, `k_uv = 50k₀`.
    pub fn default_for(k0: f64, k_max: f64) -> Result<Self, FieldError> {
        Self::new(DEFAULT_LENGTH / k0, k_max, Some(DEFAULT_UV_RATIO * k0))
    }

    /// Grid whose period is a power-of-two multiple of the sample spacing and
    /// at least twice the signal span, so translated copies do not wrap.
    pub fn covering(s: &SampledSignal, k_max: f64, k_uv: Option<f64>) -> Result<Self, FieldError> {
        let n = (2 * s.len()).next_power_of_two();
        Self::new(n as f64 * s.grid().step(), k_max, k_uv)
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length
    }
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
    /// Wavenumber of mode `n` (1-based).
    pub fn k(&self, n: usize) -> f64 {
        n as f64 * self.dk()
    }
    /// `ω_k = c k`.
    pub fn omega(&self, n: usize) -> f64 {
        self.k(n)
    }
    pub fn k_max(&self) -> f64 {
        self.k(self.n_modes)
    }
    pub fn k_uv(&self) -> Option<f64> {
        self.k_uv
    }
    pub fn with_length(self, length: f64) -> Result<Self, FieldError> {
        Self::new(length, self.k_max(), self.k_uv)
    }
    pub fn with_k_uv(mut self, k_uv: Option<f64>) -> Self {
        self.k_uv = k_uv;
        self
    }

    /// Trapezoid weight of mode `n` on `[0, k_max]`.
    fn weight(&self, n: usize) -> f64 {
        if n == self.n_modes {
            0.5
        } else {
            1.0
        }
    }
}

/// `Σ_{n≥1} c[n−1] e^{i n θ}`.
fn phasor_sum(coeffs: &[Complex64], theta: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = step;
    for (j, c) in coeffs.iter().enumerate() {
        if j % ANCHOR_EVERY == 0 {
            w = Complex64::from_polar(1.0, (j + 1) as f64 * theta);
        }
        acc += c * w;
        w *= step;
    }
    acc
}

/// Real Fourier-series coefficients `F(z) ≈ A₀ + Σ A_n cos k_n z + B_n sin k_n z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    grid: ModeGrid,
    dc: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FourierCoeffs {
    pub fn grid(&self) -> &ModeGrid {
        &self.grid
    }
    pub fn dc(&self) -> f64 {
        self.dc
    }
    pub fn a(&self) -> &[f64] {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn reconstruct(&self, z: f64) -> f64 {
        let c: Vec<Complex64> = self.a.iter().zip(&self.b).map(|(&a, &b)| Complex64::new(a, -b)).collect();
        self.dc + phasor_sum(&c, self.grid.dk() * z).re
    }
}

fn check_signal(s: &SampledSignal) -> Result<(), FieldError> {
    if s.is_scaled() {
        return Err(FieldError::ScaledSignal { ln_scale: s.ln_scale() });
    }
    if !s.is_real() {
        return Err(FieldError::NotReal);
    }
    Ok(())
}

/// Transform values at `k_n`, `n = 0..=n_modes`.
fn mode_transform(s: &SampledSignal, grid: &ModeGrid) -> Result<Vec<Complex64>, FieldError> {
    let g = s.grid();
    let span = g.end() - g.start();
    if span >= grid.length() {
        return Err(FieldError::Truncation {
            span,
            length: grid.length(),
        });
    }
    let ratio = grid.length() / g.step();
    if (ratio - ratio.round()).abs() <= 1e-9 * ratio {
        let spec = spectrum_padded(s, grid.length())?;
        return (0..=grid.n_modes())
            .map(|n| {
                spec.index_of(grid.k(n))
                    .map(|j| spec.values()[j])
                    .ok_or_else(|| FieldError::GridMismatch(format!("mode {n} beyond the spectrum")))
            })
            .collect();
    }
    if s.window().is_some() && s.boundary_ratio() > 1e-6 {
        return Err(SignalError::TruncationError {
            ratio: s.boundary_ratio(),
            limit: 1e-6,
        }
        .into());
    }
    let conj: Vec<Complex64> = s.values().iter().map(|v| v * g.step()).collect();
    Ok((0..=grid.n_modes())
        .into_par_iter()
        .map(|n| {
            let k = grid.k(n);
            // Σ F_j e^{−ik z_j} Δz = e^{−ik z_0} Σ F_j e^{−ikjΔz}
            let mut acc = Complex64::new(0.0, 0.0);
            let step = Complex64::from_polar(1.0, -k * g.step());
            let mut w = Complex64::new(1.0, 0.0);
            for (j, v) in conj.iter().enumerate() {
                if j % ANCHOR_EVERY == 0 {
                    w = Complex64::from_polar(1.0, -k * g.step() * j as f64);
                }
                acc += v * w;
                w *= step;
            }
            acc * Complex64::from_polar(1.0, -k * g.start())
        })
        .collect())
}

/// `A_n = (2/L)∫F cos k_n z`, `B_n = (2/L)∫F sin k_n z`, `A₀ = (1/L)∫F`.
pub fn fourier_coeffs(s: &SampledSignal, grid: &ModeGrid) -> Result<FourierCoeffs, FieldError> {
    check_signal(s)?;
    let ft = mode_transform(s, grid)?;
    let scale = 2.0 / grid.length();
    Ok(FourierCoeffs {
        grid: *grid,
        dc: ft[0].re / grid.length(),
        a: ft[1..].iter().map(|v| scale * v.re).collect(),
        b: ft[1..].iter().map(|v| -scale * v.im).collect(),
    })
}

/// Product of coherent states, one per mode `k > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitudes {
    grid: ModeGrid,
    alpha: Vec<Complex64>,
    transform: Vec<Complex64>,
    // √(8πω/L³) α, the per-mode B-field phasor
    b_phasor: Vec<Complex64>,
}

/// `α_k = i√(L/(2πω_k)) F̃(k)`.
pub fn amplitudes_from_spectrum(spec: &SpectralDensity, grid: &ModeGrid) -> Result<CoherentAmplitudes, FieldError> {
    if spec.ln_scale() != 0.0 {
        return Err(FieldError::ScaledSignal { ln_scale: spec.ln_scale() });
    }
    if ((spec.k_step() - grid.dk()) / grid.dk()).abs() > 1e-9 {
        return Err(FieldError::GridMismatch(format!(
            "spectrum spacing {} vs mode spacing {}",
            spec.k_step(),
            grid.dk()
        )));
    }
    let mut transform = Vec::with_capacity(grid.n_modes());
    for n in 1..=grid.n_modes() {
        let j = spec
            .index_of(grid.k(n))
            .ok_or_else(|| FieldError::GridMismatch(format!("mode k = {} lies outside the spectrum", grid.k(n))))?;
        transform.push(spec.values()[j]);
    }
    let mut positive = 0.0;
    let mut beyond = 0.0;
    for (j, v) in spec.values().iter().enumerate() {
        let k = spec.k(j);
        if k > 0.0 {
            positive += v.norm_sqr();
            if k > grid.k_max() + 0.5 * grid.dk() {
                beyond += v.norm_sqr();
            }
        }
    }
    if positive > 0.0 && beyond / positive > UNCOVERED_TOLERANCE {
        return Err(FieldError::UncoveredSpectrum {
            fraction: beyond / positive,
        });
    }
    CoherentAmplitudes::from_transform(*grid, transform)
}

impl CoherentAmplitudes {
    /// State generated by a real, unscaled signal; the mode period must be an
    /// integer multiple of the sample spacing.
    pub fn from_signal(s: &SampledSignal, grid: &ModeGrid) -> Result<Self, FieldError> {
        check_signal(s)?;
        let span = s.grid().end() - s.grid().start();
        if span >= grid.length() {
            return Err(FieldError::Truncation {
                span,
                length: grid.length(),
            });
        }
        amplitudes_from_spectrum(&spectrum_padded(s, grid.length())?, grid)
    }

    /// State from `F̃(k_n)`, `n = 1..=n_modes`.
    pub fn from_transform(grid: ModeGrid, transform: Vec<Complex64>) -> Result<Self, FieldError> {
        if transform.len() != grid.n_modes() {
            return Err(FieldError::GridMismatch(format!(
                "{} transform values for {} modes",
                transform.len(),
                grid.n_modes()
            )));
        }
        let l = grid.length();
        let alpha: Vec<Complex64> = transform
            .iter()
            .enumerate()
            .map(|(i, f)| Complex64::i() * (l / (2.0 * PI * grid.omega(i + 1))).sqrt() * f)
            .collect();
        let total: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        if total > 0.0 {
            let fraction = alpha[0].norm_sqr() / total;
            if fraction > 0.5 && grid.n_modes() > 1 {
                return Err(FieldError::Infrared { fraction });
            }
        }
        let b_phasor = alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a * (8.0 * PI * grid.omega(i + 1) / l.powi(3)).sqrt())
            .collect();
        Ok(Self {
            grid,
            alpha,
            transform,
            b_phasor,
        })
    }

    pub fn vacuum(grid: ModeGrid) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
        Self {
            grid,
            alpha: zero.clone(),
            transform: zero.clone(),
            b_phasor: zero,
        }
    }

    pub fn grid(&self) -> &ModeGrid {
        &self.grid
    }
    /// `α` for modes `n = 1..=n_modes`.
    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }
    /// `F̃(k_n)` for modes `n = 1..=n_modes`.
    pub fn transform(&self) -> &[Complex64] {
        &self.transform
    }
    /// `⟨n_k⟩ = |α_k|²` for mode `n` (1-based).
    pub fn occupation(&self, n: usize) -> f64 {
        self.alpha[n - 1].norm_sqr()
    }
    pub fn total_occupation(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }
    pub fn is_vacuum(&self) -> bool {
        self.alpha.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Scales every amplitude, as scaling the generating signal would.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            alpha: self.alpha.iter().map(|a| a * factor).collect(),
            transform: self.transform.iter().map(|a| a * factor).collect(),
            b_phasor: self.b_phasor.iter().map(|a| a * factor).collect(),
        }
    }

    /// Smallest `|α_k|` over the modes carrying the spectrum.
    pub fn min_support_amplitude(&self) -> Option<f64> {
        let peak = self.transform.iter().map(|f| f.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return None;
        }
        self.transform
            .iter()
            .zip(&self.alpha)
            .filter(|(f, _)| f.norm() >= SUPPORT_FRACTION * peak)
            .map(|(_, a)| a.norm())
            .reduce(f64::min)
    }

    /// Every supported mode has `|α_k| ≥ 10`.
    pub fn is_classical(&self) -> bool {
        self.min_support_amplitude().is_some_and(|m| m >= CLASSICAL_AMPLITUDE)
    }

    /// `⟨B_x(z, t)⟩ = Σ √(8πω_k/V)(Re α_k sin(kz−ω_k t) + Im α_k cos(kz−ω_k t))`.
    pub fn expectation_b(&self, z: f64, t: f64) -> f64 {
        // ω_k t = k t with c = 1, so every phase is n Δk (z − t)
        phasor_sum(&self.b_phasor, self.grid.dk() * (z - t)).im
    }

    /// `∂⟨B_x⟩/∂z`.
    pub fn expectation_db_dz(&self, z: f64, t: f64) -> f64 {
        let c: Vec<Complex64> = self
            .b_phasor
            .iter()
            .enumerate()
            .map(|(i, b)| b * Complex64::new(0.0, self.grid.k(i + 1)))
            .collect();
        phasor_sum(&c, self.grid.dk() * (z - t)).im
    }

    /// `⟨B_x⟩` with each mode damped by `e^{−k²σ²/2}`, the factor a Gaussian
    /// particle wavefunction of width σ contributes.
    pub fn expectation_b_smeared(&self, z: f64, t: f64, sigma: f64) -> f64 {
        let c: Vec<Complex64> = self
            .b_phasor
            .iter()
            .enumerate()
            .map(|(i, b)| b * (-0.5 * (self.grid.k(i + 1) * sigma).powi(2)).exp())
            .collect();
        phasor_sum(&c, self.grid.dk() * (z - t)).im
    }

    /// `⟨B_x⟩` at `(z, t)` for every point of `zs`.
    pub fn expectation_b_grid(&self, zs: &UniformGrid, t: f64) -> Vec<f64> {
        let ratio = self.grid.length() / zs.step();
        let n_fft = ratio.round() as usize;
        if (ratio - ratio.round()).abs() <= 1e-9 * ratio && n_fft > self.grid.n_modes() {
            return self.expectation_b_fft(zs, t, n_fft);
        }
        (0..zs.len()).into_par_iter().map(|i| self.expectation_b(zs.z(i), t)).collect()
    }

    fn expectation_b_fft(&self, zs: &UniformGrid, t: f64, n_fft: usize) -> Vec<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
        let dk = self.grid.dk();
        for (i, b) in self.b_phasor.iter().enumerate() {
            let n = i + 1;
            buf[n] = b * Complex64::from_polar(1.0, n as f64 * dk * (zs.start() - t));
        }
        rustfft::FftPlanner::new().plan_fft_inverse(n_fft).process(&mut buf);
        (0..zs.len()).map(|j| buf[j % n_fft].im).collect()
    }

    /// `(⟨B_x⟩, ∂_z⟨B_x⟩)` at `z` for each time in `times`.
    pub fn field_series(&self, z: f64, times: &[f64]) -> Vec<(f64, f64)> {
        let db: Vec<Complex64> = self
            .b_phasor
            .iter()
            .enumerate()
            .map(|(i, b)| b * Complex64::new(0.0, self.grid.k(i + 1)))
            .collect();
        let dk = self.grid.dk();
        times
            .par_iter()
            .map(|&t| {
                let theta = dk * (z - t);
                (phasor_sum(&self.b_phasor, theta).im, phasor_sum(&db, theta).im)
            })
            .collect()
    }
}

/// The two addends of `⟨B_x(z₀,t′)B_x(z₀,t″)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPoint {
    pub product: f64,
    pub vacuum: Complex64,
}

impl TwoPoint {
    pub fn total(&self) -> Complex64 {
        self.vacuum + self.product
    }
}

/// `(1/L²) ∫₀^{W} ω e^{iωτ} dω`.
pub fn vacuum_term(length: f64, omega_uv: f64, tau: f64) -> Complex64 {
    let w = omega_uv;
    let x = w * tau;
    let integral = if x.abs() < 0.1 {
        // Σ (iτ)^n W^{n+2} / (n! (n+2))
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(w * w, 0.0);
        for n in 0..30 {
            sum += term / (n as f64 + 2.0);
            term *= Complex64::new(0.0, x) / (n as f64 + 1.0);
        }
        sum
    } else {
        let e = Complex64::from_polar(1.0, x);
        e * (Complex64::new(0.0, -w / tau) + 1.0 / (tau * tau)) - 1.0 / (tau * tau)
    };
    integral / (length * length)
}

/// Product term `F(z₀−ct′)F(z₀−ct″)` and cutoff vacuum term.
pub fn two_point_function(ca: &CoherentAmplitudes, z0: f64, t1: f64, t2: f64) -> Result<TwoPoint, FieldError> {
    let k_uv = ca.grid().k_uv().ok_or(FieldError::CutoffMissing)?;
    Ok(TwoPoint {
        product: ca.expectation_b(z0, t1) * ca.expectation_b(z0, t2),
        vacuum: vacuum_term(ca.grid().length(), k_uv, t2 - t1),
    })
}

/// `⟨E_b⟩` by the spectral integral and by the mode sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBefore {
    /// `(L²/4π²) ∫₀^{k_max} |F̃|² dk`, trapezoid rule.
    pub spectral: f64,
    /// `Σ ω_k ⟨n_k⟩` with the same weights.
    pub modal: f64,
}

impl EnergyBefore {
    pub fn value(&self) -> f64 {
        self.spectral
    }
    pub fn relative_mismatch(&self) -> f64 {
        if self.spectral == 0.0 && self.modal == 0.0 {
            0.0
        } else {
            ((self.spectral - self.modal) / self.spectral).abs()
        }
    }
}

pub fn energy_before(ca: &CoherentAmplitudes) -> EnergyBefore {
    let g = ca.grid();
    let l = g.length();
    let mut spectral = 0.0;
    let mut modal = 0.0;
    for n in 1..=g.n_modes() {
        let w = g.weight(n);
        spectral += w * ca.transform()[n - 1].norm_sqr();
        modal += w * g.omega(n) * ca.occupation(n);
    }
    EnergyBefore {
        spectral: spectral * l * l / (4.0 * PI * PI) * g.dk(),
        modal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{apply_window, SynthesisRoute, WindowSpec};

    fn windowed(f: impl Fn(f64) -> f64) -> SampledSignal {
        let g = UniformGrid::new(-300.0, 0.25, 2401).unwrap();
        let v: Vec<f64> = g.points().map(f).collect();
        let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap().with_band_limit(1.0);
        apply_window(&s, WindowSpec::gaussian(0.04).unwrap())
    }

    #[test]
    fn phasor_sum_matches_direct() {
        let c: Vec<Complex64> = (0..1000).map(|i| Complex64::new((i as f64).sin(), 0.3)).collect();
        let theta = 0.0123;
        let direct: Complex64 = c
            .iter()
            .enumerate()
            .map(|(i, v)| v * Complex64::from_polar(1.0, (i + 1) as f64 * theta))
            .sum();
        assert!((phasor_sum(&c, theta) - direct).norm() < 1e-11);
    }

    #[test]
    fn cosine_lands_in_a_channel() {
        let grid = ModeGrid::new(1024.0, 1.0, None).unwrap();
        let k1 = grid.k(80);
        let s = windowed(|z| (k1 * z).cos());
        let c = fourier_coeffs(&s, &grid).unwrap();
        let amax = c.a().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bmax = c.b().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(c.a().iter().position(|v| v.abs() == amax), Some(79));
        assert!(bmax <= 1e-6 * amax);
        let s = windowed(|z| (k1 * z).sin());
        let c = fourier_coeffs(&s, &grid).unwrap();
        let amax = c.a().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bmax = c.b().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(amax <= 1e-6 * bmax);
    }

    #[test]
    fn direct_and_fft_transforms_agree() {
        let s = windowed(|z| (0.37 * z).sin());
        let fft = fourier_coeffs(&s, &ModeGrid::new(1024.0, 1.0, None).unwrap()).unwrap();
        let direct = fourier_coeffs(&s, &ModeGrid::new(1024.0 + 1e-3, 1.0, None).unwrap()).unwrap();
        for (a, b) in fft.b().iter().zip(direct.b()) {
            assert!((a - b).abs() < 2e-6);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = windowed(|z| (0.37 * z).sin());
        assert!(matches!(
            fourier_coeffs(&s, &ModeGrid::new(512.0, 1.0, None).unwrap()),
            Err(FieldError::Truncation { .. })
        ));
        let grid = ModeGrid::new(1024.0, 0.2, None).unwrap();
        assert!(matches!(
            CoherentAmplitudes::from_signal(&s, &grid),
            Err(FieldError::UncoveredSpectrum { .. })
        ));
        assert!(ModeGrid::new(100.0, 1e-3, None).is_err());
    }

    #[test]
    fn vacuum_closed_form_limits() {
        let v0 = vacuum_term(10.0, 50.0, 0.0);
        assert!((v0.re - 12.5).abs() < 1e-12 && v0.im == 0.0);
        // series and closed form meet at W tau = 0.1
        let a = vacuum_term(10.0, 50.0, 0.002 * (1.0 - 1e-9));
        let b = vacuum_term(10.0, 50.0, 0.002 * (1.0 + 1e-9));
        assert!((a - b).norm() < 1e-9 * a.norm());
        let ratio = vacuum_term(100.0, 50.0, 1.3) / vacuum_term(10.0, 50.0, 1.3);
        assert!((ratio.re - 1e-2).abs() < 1e-16 && ratio.im.abs() < 1e-16);
    }

    #[test]
    fn vacuum_state() {
        let grid = ModeGrid::new(1000.0, 1.0, Some(50.0)).unwrap();
        let ca = CoherentAmplitudes::vacuum(grid);
        assert!(ca.is_vacuum());
        assert_eq!(ca.expectation_b(1.0, 2.0), 0.0);
        assert_eq!(energy_before(&ca).value(), 0.0);
        let tp = two_point_function(&ca, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(tp.product, 0.0);
        assert!(tp.vacuum.norm() > 0.0);
        assert!(matches!(
            two_point_function(&CoherentAmplitudes::vacuum(grid.with_k_uv(None)), 0.0, 0.0, 1.0),
            Err(FieldError::CutoffMissing)
        ));
    }

    #[test]
    fn infrared_concentration_is_rejected() {
        let grid = ModeGrid::new(100.0, 1.0, None).unwrap();
        let mut t = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
        t[0] = Complex64::new(5.0, 0.0);
        t[3] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            CoherentAmplitudes::from_transform(grid, t),
            Err(FieldError::Infrared { .. })
        ));
    }
}
