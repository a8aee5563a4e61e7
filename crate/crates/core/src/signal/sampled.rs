use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SignalError, WindowSpec};

/// Uniform grid `start + i * step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self, SignalError> {
        if len < 2 {
            return Err(SignalError::InvalidGrid(format!("need at least 2 samples, got {len}")));
        }
        if !(step.is_finite() && step > 0.0 && start.is_finite()) {
            return Err(SignalError::InvalidGrid(format!("start {start}, step {step}")));
        }
        Ok(Self { start, step, len })
    }

    /// Grid from `start` with spacing `step` reaching at least `end`.
    pub fn spanning(start: f64, end: f64, step: f64) -> Result<Self, SignalError> {
        if !(end > start) {
            return Err(SignalError::InvalidGrid(format!("empty span [{start}, {end}]")));
        }
        let len = ((end - start) / step - 1e-9).ceil() as usize + 1;
        Self::new(start, step, len)
    }

    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn step(&self) -> f64 {
        self.step
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn end(&self) -> f64 {
        self.z(self.len - 1)
    }
    pub fn z(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.z(i))
    }
    pub fn contains(&self, z: f64) -> bool {
        z >= self.start - 1e-9 * self.step && z <= self.end() + 1e-9 * self.step
    }
    /// Index of the grid point nearest to `z`, clamped to the grid.
    pub fn nearest(&self, z: f64) -> usize {
        let pos = ((z - self.start) / self.step).round();
        (pos.max(0.0) as usize).min(self.len - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthesisRoute {
    Integral,
    Bessel,
    Asymptotic,
    Combined,
    Windowed,
    External,
}

/// Samples on a uniform z-grid.
///
/// Values are stored as mantissas: the signal is `values[i] * exp(ln_scale)`.
/// `ln_scale` is zero unless the signal reaches magnitudes beyond double range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    grid: UniformGrid,
    values: Vec<Complex64>,
    ln_scale: f64,
    route: SynthesisRoute,
    real: bool,
    k_max: f64,
    band_limit: Option<f64>,
    window: Option<WindowSpec>,
}

impl SampledSignal {
    pub fn new(
        grid: UniformGrid,
        values: Vec<Complex64>,
        route: SynthesisRoute,
        k_max: f64,
    ) -> Result<Self, SignalError> {
        Self::with_scale(grid, values, 0.0, route, k_max)
    }

    pub fn from_real(
        grid: UniformGrid,
        values: Vec<f64>,
        route: SynthesisRoute,
        k_max: f64,
    ) -> Result<Self, SignalError> {
        let mut s = Self::new(grid, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), route, k_max)?;
        s.real = true;
        Ok(s)
    }

    pub(crate) fn with_scale(
        grid: UniformGrid,
        values: Vec<Complex64>,
        ln_scale: f64,
        route: SynthesisRoute,
        k_max: f64,
    ) -> Result<Self, SignalError> {
        if values.len() != grid.len() {
            return Err(SignalError::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(SignalError::InvalidGrid(format!("expected k_max must be > 0, got {k_max}")));
        }
        let limit = std::f64::consts::PI / (4.0 * k_max);
        if grid.step() > limit * (1.0 + 1e-12) {
            return Err(SignalError::InvalidGrid(format!(
                "spacing {} exceeds pi/(4 k_max) = {limit}",
                grid.step()
            )));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(SignalError::NonFinite { index });
        }
        if !ln_scale.is_finite() {
            return Err(SignalError::NonFinite { index: 0 });
        }
        Ok(Self {
            grid,
            values,
            ln_scale,
            route,
            real: false,
            k_max,
            band_limit: None,
            window: None,
        })
    }

    pub fn with_band_limit(mut self, k0: f64) -> Self {
        self.band_limit = Some(k0);
        self
    }

    /// Replaces every sample by its imaginary part and marks the signal real.
    pub(crate) fn into_imaginary_part(mut self) -> Self {
        self.real = true;
        for v in &mut self.values {
            *v = Complex64::new(v.im, 0.0);
        }
        self
    }

    pub(crate) fn windowed(mut self, values: Vec<Complex64>, ln_scale: f64, w: WindowSpec) -> Self {
        self.values = values;
        self.ln_scale = ln_scale;
        self.route = SynthesisRoute::Windowed;
        self.window = Some(w);
        self
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }
    /// Sample mantissas; multiply by `exp(ln_scale())` for physical values.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn ln_scale(&self) -> f64 {
        self.ln_scale
    }
    pub fn is_scaled(&self) -> bool {
        self.ln_scale != 0.0
    }
    pub fn route(&self) -> SynthesisRoute {
        self.route
    }
    pub fn is_real(&self) -> bool {
        self.real
    }
    /// Fastest expected local wavenumber.
    pub fn k_max(&self) -> f64 {
        self.k_max
    }
    pub fn band_limit(&self) -> Option<f64> {
        self.band_limit
    }
    pub fn window(&self) -> Option<WindowSpec> {
        self.window
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Largest mantissa magnitude.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Natural log of the largest physical magnitude.
    pub fn ln_max_abs(&self) -> f64 {
        self.max_abs().ln() + self.ln_scale
    }

    /// Physical sample values; `None` when they would overflow.
    pub fn physical_values(&self) -> Option<Vec<Complex64>> {
        if self.ln_max_abs() > 700.0 {
            return None;
        }
        let f = self.ln_scale.exp();
        Some(self.values.iter().map(|v| v * f).collect())
    }

    /// Sub-signal on the grid points inside `[z_lo, z_hi]`, rescaled so its
    /// own maximum is representable.
    pub fn restrict(&self, z_lo: f64, z_hi: f64) -> Result<Self, SignalError> {
        let lo = ((z_lo - self.grid.start()) / self.grid.step() - 1e-9).ceil().max(0.0) as usize;
        let hi_f = ((z_hi - self.grid.start()) / self.grid.step() + 1e-9).floor();
        if hi_f < 0.0 {
            return Err(SignalError::InvalidGrid(format!("[{z_lo}, {z_hi}] misses the grid")));
        }
        let hi = (hi_f as usize).min(self.len() - 1);
        if hi < lo + 1 {
            return Err(SignalError::InvalidGrid(format!("[{z_lo}, {z_hi}] holds fewer than 2 samples")));
        }
        let grid = UniformGrid::new(self.grid.z(lo), self.grid.step(), hi - lo + 1)?;
        let slice = &self.values[lo..=hi];
        let peak = slice.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if self.ln_scale != 0.0 && peak > 0.0 && peak < f64::MIN_POSITIVE {
            return Err(SignalError::DomainError(format!(
                "samples on [{z_lo}, {z_hi}] underflow against the global scale; sample that span on its own"
            )));
        }
        let (values, ln_scale) = if self.ln_scale != 0.0 && peak > 0.0 {
            let shift = peak.ln();
            let inv = peak.recip();
            (slice.iter().map(|v| v * inv).collect(), self.ln_scale + shift)
        } else {
            (slice.to_vec(), self.ln_scale)
        };
        Ok(Self {
            grid,
            values,
            ln_scale,
            ..self.clone()
        })
    }

    /// Largest magnitude outside `[z_lo, z_hi]` relative to the largest inside.
    pub fn tail_ratio(&self, z_lo: f64, z_hi: f64) -> f64 {
        let mut inside: f64 = 0.0;
        let mut outside: f64 = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let z = self.grid.z(i);
            if (z_lo..=z_hi).contains(&z) {
                inside = inside.max(v.norm());
            } else {
                outside = outside.max(v.norm());
            }
        }
        outside / inside
    }

    /// Boundary magnitude relative to the maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let edge = self.values[0].norm().max(self.values[self.len() - 1].norm());
        edge / self.max_abs()
    }
}
