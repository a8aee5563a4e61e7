use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SignalError;

/// Upper bound on `δ² z_c k₀ cosh A` used when no other value is given.
pub const DEFAULT_WINDOW_CRITERION: f64 = 0.1;
/// Tolerance on `|δ⁻² − (2πm + offset)|` for phase-locked parameters.
pub const PHASE_LOCK_TOLERANCE: f64 = 1e-12;

/// Which of the two phase offsets of a locked pair a parameter set sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LockOffset {
    /// δ⁻² = 2πm + π/4
    Quarter,
    /// δ⁻² = 2πm + 3π/4
    ThreeQuarter,
}

impl LockOffset {
    pub fn radians(self) -> f64 {
        match self {
            LockOffset::Quarter => PI / 4.0,
            LockOffset::ThreeQuarter => 3.0 * PI / 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLock {
    pub m: u32,
    pub offset: LockOffset,
}

impl PhaseLock {
    pub fn inv_delta_sq(self) -> f64 {
        2.0 * PI * self.m as f64 + self.offset.radians()
    }
}

/// Knobs of the analytic superoscillatory family.
///
/// `inv_delta_sq` (δ⁻²) is stored rather than δ so that phase-locked values
/// keep their lock to round-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperoscParams {
    amplitude: f64,
    inv_delta_sq: f64,
    boost: f64,
    band_limit: f64,
    extent: f64,
    phase_lock: Option<PhaseLock>,
}

impl SuperoscParams {
    pub fn builder() -> ParamsBuilder {
        ParamsBuilder::default()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn delta(&self) -> f64 {
        self.inv_delta_sq.recip().sqrt()
    }
    pub fn delta_sq(&self) -> f64 {
        self.inv_delta_sq.recip()
    }
    pub fn inv_delta_sq(&self) -> f64 {
        self.inv_delta_sq
    }
    pub fn boost(&self) -> f64 {
        self.boost
    }
    pub fn band_limit(&self) -> f64 {
        self.band_limit
    }
    /// Length z_c of the superoscillatory window [−z_c, 0].
    pub fn extent(&self) -> f64 {
        self.extent
    }
    pub fn phase_lock(&self) -> Option<PhaseLock> {
        self.phase_lock
    }

    /// `δ² z_c k₀ cosh A`, the smallness parameter of the window.
    pub fn window_criterion(&self) -> f64 {
        self.delta_sq() * self.extent * self.band_limit * self.boost.cosh()
    }

    /// Exponent `sinh A / δ²` of the growth-region amplitude scale.
    pub fn growth_exponent(&self) -> f64 {
        self.boost.sinh() * self.inv_delta_sq
    }

    /// ½k₀(1 + cosh A).
    pub fn superosc_wavenumber(&self) -> f64 {
        0.5 * self.band_limit * (1.0 + self.boost.cosh())
    }

    /// Location 2cosh A/(k₀δ²) of the growth maximum.
    pub fn growth_peak(&self) -> f64 {
        2.0 * self.boost.cosh() * self.inv_delta_sq / self.band_limit
    }

    /// Roots (2/δ²k₀)e^{∓A} bounding the growth region.
    pub fn growth_region(&self) -> (f64, f64) {
        let s = 2.0 * self.inv_delta_sq / self.band_limit;
        (s * (-self.boost).exp(), s * self.boost.exp())
    }

    /// `R(z) = 1 − δ²zk₀cosh A + ¼δ⁴z²k₀²`, the squared Bessel argument times δ⁴.
    pub fn radicand(&self, z: f64) -> f64 {
        let u = self.delta_sq() * z * self.band_limit;
        1.0 - u * self.boost.cosh() + 0.25 * u * u
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self, SignalError> {
        if !amplitude.is_finite() {
            return Err(SignalError::InvalidParams(format!("amplitude {amplitude} is not finite")));
        }
        self.amplitude = amplitude;
        Ok(self)
    }
}

#[derive(Debug, Clone)]
pub struct ParamsBuilder {
    amplitude: f64,
    inv_delta_sq: Option<f64>,
    boost: f64,
    band_limit: f64,
    extent: Option<f64>,
    lock: Option<PhaseLock>,
    criterion: f64,
}

impl Default for ParamsBuilder {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            inv_delta_sq: None,
            boost: 0.0,
            band_limit: 1.0,
            extent: None,
            lock: None,
            criterion: DEFAULT_WINDOW_CRITERION,
        }
    }
}

impl ParamsBuilder {
    pub fn amplitude(mut self, d: f64) -> Self {
        self.amplitude = d;
        self
    }
    pub fn delta(mut self, delta: f64) -> Self {
        self.inv_delta_sq = Some((delta * delta).recip());
        self
    }
    pub fn inv_delta_sq(mut self, v: f64) -> Self {
        self.inv_delta_sq = Some(v);
        self
    }
    /// Sets δ⁻² = 2πm + offset and records the lock.
    pub fn phase_locked(mut self, m: u32, offset: LockOffset) -> Self {
        let lock = PhaseLock { m, offset };
        self.inv_delta_sq = Some(lock.inv_delta_sq());
        self.lock = Some(lock);
        self
    }
    /// Declares a lock without touching δ; `build` checks the tolerance.
    pub fn claim_lock(mut self, m: u32, offset: LockOffset) -> Self {
        self.lock = Some(PhaseLock { m, offset });
        self
    }
    pub fn boost(mut self, a: f64) -> Self {
        self.boost = a;
        self
    }
    pub fn cosh_boost(mut self, c: f64) -> Self {
        self.boost = c.acosh();
        self
    }
    pub fn band_limit(mut self, k0: f64) -> Self {
        self.band_limit = k0;
        self
    }
    pub fn extent(mut self, z_c: f64) -> Self {
        self.extent = Some(z_c);
        self
    }
    pub fn window_criterion(mut self, bound: f64) -> Self {
        self.criterion = bound;
        self
    }

    pub fn build(self) -> Result<SuperoscParams, SignalError> {
        let invalid = |msg: String| Err(SignalError::InvalidParams(msg));
        let inv_delta_sq = match self.inv_delta_sq {
            Some(v) => v,
            None => return invalid("delta is required".into()),
        };
        if !(inv_delta_sq.is_finite() && inv_delta_sq > 1.0) {
            return invalid(format!("delta must lie in (0, 1); got delta^-2 = {inv_delta_sq}"));
        }
        if !(self.boost.is_finite() && self.boost >= 0.0) {
            return invalid(format!("boost A must be finite and >= 0; got {}", self.boost));
        }
        if !(self.band_limit.is_finite() && self.band_limit > 0.0) {
            return invalid(format!("band limit must be > 0; got {}", self.band_limit));
        }
        if !self.amplitude.is_finite() {
            return invalid(format!("amplitude {} is not finite", self.amplitude));
        }
        let extent = self.extent.unwrap_or_else(|| {
            self.criterion / (inv_delta_sq.recip() * self.band_limit * self.boost.cosh())
        });
        if !(extent.is_finite() && extent > 0.0) {
            return invalid(format!("extent z_c must be > 0; got {extent}"));
        }
        let params = SuperoscParams {
            amplitude: self.amplitude,
            inv_delta_sq,
            boost: self.boost,
            band_limit: self.band_limit,
            extent,
            phase_lock: self.lock,
        };
        let criterion = params.window_criterion();
        if criterion > self.criterion * (1.0 + 1e-12) {
            return Err(SignalError::WindowTooLong {
                criterion,
                bound: self.criterion,
            });
        }
        if let Some(lock) = self.lock {
            let target = lock.inv_delta_sq();
            if (inv_delta_sq - target).abs() > PHASE_LOCK_TOLERANCE {
                return Err(SignalError::PhaseLockViolation(format!(
                    "delta^-2 = {inv_delta_sq} misses 2*pi*{} + {:?} = {target}",
                    lock.m, lock.offset
                )));
            }
        }
        Ok(params)
    }
}
