use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{SampledSignal, SignalError};

pub const DEFAULT_LEAKAGE_TOLERANCE: f64 = 1e-4;
/// Windowed signals must have decayed to this fraction at the grid edges.
const BOUNDARY_LIMIT: f64 = 1e-6;

/// `F̃(k) ≈ Δz Σ F(z_j) e^{−ikz_j}` on the uniform grid `k_start + j k_step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    k_start: f64,
    k_step: f64,
    values: Vec<Complex64>,
    ln_scale: f64,
    band_limit: Option<f64>,
    kappa: f64,
    real: bool,
    leakage_tolerance: f64,
}

fn transform(s: &SampledSignal, n: usize) -> (Vec<Complex64>, f64, f64) {
    let g = s.grid();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..s.len()].copy_from_slice(s.values());
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dz = g.step();
    let k_step = 2.0 * PI / (n as f64 * dz);
    let half = n / 2;
    // fftshift: index j maps to frequency (j - half) k_step
    let k_start = -(half as f64) * k_step;
    let values = (0..n)
        .map(|j| {
            let src = (j + n - half) % n;
            let k = k_start + j as f64 * k_step;
            buf[src] * Complex64::from_polar(dz, -k * g.start())
        })
        .collect();
    (values, k_start, k_step)
}

fn check_boundary(s: &SampledSignal) -> Result<(), SignalError> {
    if s.window().is_some() {
        let ratio = s.boundary_ratio();
        if !(ratio <= BOUNDARY_LIMIT) {
            return Err(SignalError::TruncationError {
                ratio,
                limit: BOUNDARY_LIMIT,
            });
        }
    }
    Ok(())
}

fn build(s: &SampledSignal, n: usize) -> SpectralDensity {
    let (values, k_start, k_step) = transform(s, n);
    SpectralDensity {
        k_start,
        k_step,
        values,
        ln_scale: s.ln_scale(),
        band_limit: s.band_limit(),
        kappa: s.window().map_or(0.0, |w| w.kappa()),
        real: s.is_real(),
        leakage_tolerance: DEFAULT_LEAKAGE_TOLERANCE,
    }
}

/// Continuous-transform approximation with k-spacing `2π/(n Δz)`.
pub fn spectrum(s: &SampledSignal) -> Result<SpectralDensity, SignalError> {
    check_boundary(s)?;
    Ok(build(s, s.len()))
}

/// Spectrum on the k-grid of spacing `2π/period`, by zero padding.
///
/// `period / Δz` must be an integer no smaller than the sample count.
pub fn spectrum_padded(s: &SampledSignal, period: f64) -> Result<SpectralDensity, SignalError> {
    check_boundary(s)?;
    let ratio = period / s.grid().step();
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * n || (n as usize) < s.len() {
        return Err(SignalError::InvalidGrid(format!(
            "period {period} is not an integer multiple (>= {}) of the spacing {}",
            s.len(),
            s.grid().step()
        )));
    }
    Ok(build(s, n as usize))
}

impl SpectralDensity {
    pub fn k_start(&self) -> f64 {
        self.k_start
    }
    pub fn k_step(&self) -> f64 {
        self.k_step
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn k(&self, j: usize) -> f64 {
        self.k_start + j as f64 * self.k_step
    }
    pub fn k_end(&self) -> f64 {
        self.k(self.len() - 1)
    }
    /// Mantissas; physical values carry a factor `exp(ln_scale())`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn ln_scale(&self) -> f64 {
        self.ln_scale
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn band_limit(&self) -> Option<f64> {
        self.band_limit
    }
    pub fn is_real(&self) -> bool {
        self.real
    }
    pub fn leakage_tolerance(&self) -> f64 {
        self.leakage_tolerance
    }
    pub fn with_leakage_tolerance(mut self, eps: f64) -> Self {
        self.leakage_tolerance = eps;
        self
    }

    /// Index of the grid wavenumber nearest `k`, if on the grid.
    pub fn index_of(&self, k: f64) -> Option<usize> {
        let pos = ((k - self.k_start) / self.k_step).round();
        (pos >= 0.0 && (pos as usize) < self.len()).then_some(pos as usize)
    }

    /// `Σ |F̃|² Δk / 2π` in mantissa units.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.k_step / (2.0 * PI)
    }

    /// Fraction of spectral energy with `k ∈ [lo, hi]`.
    pub fn fraction_inside(&self, lo: f64, hi: f64) -> f64 {
        let mut inside = 0.0;
        let mut total = 0.0;
        for (j, v) in self.values.iter().enumerate() {
            let e = v.norm_sqr();
            total += e;
            if (lo..=hi).contains(&self.k(j)) {
                inside += e;
            }
        }
        inside / total
    }

    /// The interval a band-limited signal occupies after windowing:
    /// `[−κ, k₀+κ]`, or `[−k₀−κ, k₀+κ]` for real signals.
    pub fn band_interval(&self) -> Option<(f64, f64)> {
        let k0 = self.band_limit?;
        let lo = if self.real { -k0 - self.kappa } else { -self.kappa };
        Some((lo, k0 + self.kappa))
    }

    pub fn leakage(&self) -> Option<f64> {
        let (lo, hi) = self.band_interval()?;
        Some(1.0 - self.fraction_inside(lo, hi))
    }

    pub fn is_band_limited(&self) -> bool {
        self.leakage().is_some_and(|l| l <= self.leakage_tolerance)
    }

    /// Relative Parseval mismatch against the sample-domain energy.
    pub fn parseval_mismatch(&self, s: &SampledSignal) -> f64 {
        let sample_energy: f64 = s.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * s.grid().step();
        ((self.energy() - sample_energy) / sample_energy).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{apply_window, SynthesisRoute, UniformGrid, WindowSpec};

    fn windowed_cos() -> SampledSignal {
        let g = UniformGrid::new(-200.0, 0.25, 1601).unwrap();
        let v: Vec<f64> = g.points().map(|z| (0.5 * z).cos()).collect();
        let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap().with_band_limit(1.0);
        apply_window(&s, WindowSpec::gaussian(0.05).unwrap())
    }

    #[test]
    fn cosine_peaks_are_symmetric() {
        let spec = spectrum(&windowed_cos()).unwrap();
        let (jmax, _) = spec
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        assert!((spec.k(jmax).abs() - 0.5).abs() <= spec.k_step());
        let plus = spec.values()[spec.index_of(0.5).unwrap()].norm();
        let minus = spec.values()[spec.index_of(-0.5).unwrap()].norm();
        assert!((plus - minus).abs() < 1e-9 * plus);
        assert!(spec.is_band_limited());
    }

    #[test]
    fn parseval_holds() {
        let s = windowed_cos();
        assert!(spectrum(&s).unwrap().parseval_mismatch(&s) < 1e-12);
        assert!(spectrum_padded(&s, 4096.0 * 0.25).unwrap().parseval_mismatch(&s) < 1e-12);
    }

    #[test]
    fn truncation_is_detected() {
        let g = UniformGrid::new(-20.0, 0.25, 161).unwrap();
        let v: Vec<f64> = g.points().map(|z| (0.5 * z).cos()).collect();
        let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap();
        let w = apply_window(&s, WindowSpec::gaussian(0.05).unwrap());
        assert!(matches!(spectrum(&w), Err(SignalError::TruncationError { .. })));
        assert!(spectrum(&s).is_ok());
    }

    #[test]
    fn padding_needs_integer_period() {
        let s = windowed_cos();
        assert!(spectrum_padded(&s, 1000.1).is_err());
        assert!(spectrum_padded(&s, 100.0).is_err());
        let p = spectrum_padded(&s, 1000.0).unwrap();
        assert!((p.k_step() - 2.0 * PI / 1000.0).abs() < 1e-15);
    }
}
