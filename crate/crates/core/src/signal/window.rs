use serde::{Deserialize, Serialize};

use super::SampledSignal;

/// Default kernel half-width as a fraction of k₀.
pub const DEFAULT_KAPPA_RATIO: f64 = 1.0 / 200.0;

/// Gaussian window `h(z) = exp(−κ²z²/2)`; `κ = 0` is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    kappa: f64,
}

impl WindowSpec {
    pub fn gaussian(kappa: f64) -> Option<Self> {
        (kappa.is_finite() && kappa > 0.0).then_some(Self { kappa })
    }

    pub fn identity() -> Self {
        Self { kappa: 0.0 }
    }

    pub fn for_band(k0: f64) -> Self {
        Self { kappa: k0 * DEFAULT_KAPPA_RATIO }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn is_identity(&self) -> bool {
        self.kappa == 0.0
    }

    pub fn h(&self, z: f64) -> f64 {
        (-0.5 * (self.kappa * z).powi(2)).exp()
    }

    /// `|z|` beyond which `h` is below `eps`.
    pub fn reach(&self, eps: f64) -> f64 {
        (-2.0 * eps.ln()).sqrt() / self.kappa
    }
}

/// Pointwise product `F(z) h(z)`.
pub fn apply_window(s: &SampledSignal, w: WindowSpec) -> SampledSignal {
    if w.is_identity() {
        let values = s.values().to_vec();
        return s.clone().windowed(values, s.ln_scale(), w);
    }
    let grid = *s.grid();
    let mut values: Vec<_> = s.values().iter().enumerate().map(|(i, v)| v * w.h(grid.z(i))).collect();
    let mut ln_scale = s.ln_scale();
    if s.is_scaled() {
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak > 0.0 {
            for v in &mut values {
                *v /= peak;
            }
            ln_scale += peak.ln();
        }
    }
    s.clone().windowed(values, ln_scale, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{SynthesisRoute, UniformGrid};
    use num_complex::Complex64;

    #[test]
    fn identity_leaves_values() {
        let g = UniformGrid::new(-1.0, 0.1, 21).unwrap();
        let v: Vec<f64> = g.points().map(|z| z.sin()).collect();
        let s = SampledSignal::from_real(g, v, SynthesisRoute::External, 1.0).unwrap();
        let w = apply_window(&s, WindowSpec::identity());
        assert_eq!(w.values(), s.values());
        assert_eq!(w.route(), SynthesisRoute::Windowed);
    }

    #[test]
    fn gaussian_shape() {
        let w = WindowSpec::gaussian(0.5).unwrap();
        assert_eq!(w.h(0.0), 1.0);
        assert_eq!(w.h(-3.0), w.h(3.0));
        assert!(w.h(1.0) > w.h(2.0));
        assert!((w.h(w.reach(1e-6)) - 1e-6).abs() < 1e-18);
        assert!(WindowSpec::gaussian(0.0).is_none());
    }

    #[test]
    fn scaled_windowing_keeps_unit_peak() {
        let g = UniformGrid::new(-2.0, 0.5, 9).unwrap();
        let v = vec![Complex64::new(1.0, 0.0); 9];
        let s = SampledSignal::with_scale(g, v, 400.0, SynthesisRoute::External, 1.0).unwrap();
        let w = apply_window(&s, WindowSpec::gaussian(1.0).unwrap());
        assert!((w.max_abs() - 1.0).abs() < 1e-15);
        assert!((w.ln_max_abs() - 400.0).abs() < 1e-12);
    }
}
