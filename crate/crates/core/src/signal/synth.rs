use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::{LockOffset, PHASE_LOCK_TOLERANCE};
use super::{SampledSignal, SignalError, SuperoscParams, SynthesisRoute, UniformGrid};
use crate::quadrature::integrate_adaptive;
use crate::special::{bessel_i0_ln, bessel_j0};

/// The integral route refuses when `sinh A / δ²` exceeds this.
pub const INTEGRAL_EXPONENT_LIMIT: f64 = 600.0;
/// Largest `ln|F|` returned unscaled.
const LN_OVERFLOW: f64 = 700.0;
/// Integral-route tolerance relative to the integrand's max modulus.
const INTEGRAL_REL_TOL: f64 = 1e-10;
const INTEGRAL_MAX_INTERVALS: usize = 1000;
/// Sampled signals keep unit scale unless their log-magnitude exceeds this.
const SCALE_THRESHOLD: f64 = 300.0;

/// `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub ln_scale: f64,
}

impl ScaledComplex {
    pub fn unscaled(v: Complex64) -> Self {
        Self { mantissa: v, ln_scale: 0.0 }
    }

    pub fn value(self) -> Complex64 {
        self.mantissa * self.ln_scale.exp()
    }

    pub fn ln_abs(self) -> f64 {
        self.mantissa.norm().ln() + self.ln_scale
    }

    /// Mantissa expressed relative to `exp(ln_ref)`.
    pub fn relative_to(self, ln_ref: f64) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * (self.ln_scale - ln_ref).exp()
    }

    fn add(self, other: Self) -> Self {
        let ln = self.ln_scale.max(other.ln_scale);
        Self {
            mantissa: self.relative_to(ln) + other.relative_to(ln),
            ln_scale: ln,
        }
    }

    fn scale(self, c: Complex64) -> Self {
        Self {
            mantissa: self.mantissa * c,
            ln_scale: self.ln_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
}

fn prefactor(p: &SuperoscParams) -> f64 {
    p.amplitude() * (0.5 * PI).sqrt() * p.inv_delta_sq().sqrt()
}

/// Imaginary shift of the α contour and the largest real exponent left on it.
///
/// On `α = β + i s` the integrand's log-modulus is `sin β (Q sinh s + P cosh s)`
/// with `P = a sinh A`, `Q = b − a cosh A`. Periodicity makes the shift exact.
fn contour(p: &SuperoscParams, z: f64) -> (f64, f64) {
    let a = p.inv_delta_sq();
    let b = 0.5 * z * p.band_limit();
    let big_p = a * p.boost().sinh();
    let big_q = b - a * p.boost().cosh();
    if big_p.abs() < big_q.abs() {
        ((-big_p / big_q).atanh(), 0.0)
    } else if big_p == 0.0 {
        (0.0, 0.0)
    } else {
        let s = (-big_q / big_p).atanh();
        let m = (big_q * s.sinh() + big_p * s.cosh()).abs();
        (s, m)
    }
}

/// `F(z)` by adaptive quadrature of the defining integral, scaled.
pub fn synth_integral_scaled(p: &SuperoscParams, z: f64) -> Result<(ScaledComplex, f64, usize), SignalError> {
    let exponent = p.growth_exponent();
    if exponent > INTEGRAL_EXPONENT_LIMIT {
        return Err(SignalError::OverflowRegime {
            exponent,
            limit: INTEGRAL_EXPONENT_LIMIT,
        });
    }
    let a = p.inv_delta_sq();
    let b = 0.5 * z * p.band_limit();
    let boost = Complex64::new(0.0, p.boost());
    let (s, m) = contour(p, z);
    let integrand = |beta: f64| {
        let alpha = Complex64::new(beta, s);
        let phase = Complex64::i() * b * (1.0 + alpha.cos()) - Complex64::i() * a * (alpha - boost).cos();
        (phase - m).exp()
    };
    let target = INTEGRAL_REL_TOL;
    let r = integrate_adaptive(integrand, 0.0, 2.0 * PI, target, INTEGRAL_MAX_INTERVALS).map_err(|e| {
        SignalError::QuadratureNoConvergence {
            z,
            estimate: e.error_estimate,
            target,
        }
    })?;
    let c = p.amplitude() / (2.0 * p.delta() * (2.0 * PI).sqrt());
    Ok((
        ScaledComplex {
            mantissa: r.value * c,
            ln_scale: m,
        },
        r.error_estimate * c.abs(),
        r.intervals,
    ))
}

/// `F(z) = (D/(2δ√(2π))) ∫₀^{2π} dα e^{izk₀(1+cos α)/2} e^{−(i/δ²)cos(α−iA)}`.
pub fn synth_integral(p: &SuperoscParams, z: f64) -> Result<IntegralValue, SignalError> {
    let (v, err, intervals) = synth_integral_scaled(p, z)?;
    let f = v.ln_scale.exp();
    Ok(IntegralValue {
        value: v.mantissa * f,
        error_estimate: err * f,
        intervals,
    })
}

/// Closed form in scaled representation; never overflows.
pub fn synth_bessel_scaled(p: &SuperoscParams, z: f64) -> ScaledComplex {
    let carrier = Complex64::from_polar(prefactor(p), 0.5 * z * p.band_limit());
    let r = p.radicand(z);
    if r >= 0.0 {
        ScaledComplex::unscaled(carrier * bessel_j0(p.inv_delta_sq() * r.sqrt()))
    } else {
        ScaledComplex {
            mantissa: carrier,
            ln_scale: bessel_i0_ln(p.inv_delta_sq() * (-r).sqrt()),
        }
    }
}

/// `(D√π/(√2δ)) e^{izk₀/2} J₀(√R/δ²)`, with `I₀` where `R < 0`.
pub fn synth_bessel(p: &SuperoscParams, z: f64) -> Result<Complex64, SignalError> {
    let v = synth_bessel_scaled(p, z);
    let ln = v.ln_abs();
    if ln > LN_OVERFLOW {
        return Err(SignalError::OverflowRegime {
            exponent: ln,
            limit: LN_OVERFLOW,
        });
    }
    Ok(v.value())
}

/// Asymptotic form `D R^{−1/4} e^{izk₀/2} cos(√R/δ² − π/4)` for `z < 0`.
pub fn synth_asymptotic(p: &SuperoscParams, z: f64) -> Result<Complex64, SignalError> {
    if !(z < 0.0) {
        return Err(SignalError::DomainError(format!("asymptotic form needs z < 0, got {z}")));
    }
    if p.delta() > 0.2 {
        return Err(SignalError::DomainError(format!(
            "asymptotic form needs delta <= 0.2, got {}",
            p.delta()
        )));
    }
    let r = p.radicand(z);
    let envelope = p.amplitude() * r.powf(-0.25) * (p.inv_delta_sq() * r.sqrt() - FRAC_PI_4).cos();
    Ok(Complex64::from_polar(1.0, 0.5 * z * p.band_limit()) * envelope)
}

fn scale_for(values: &[ScaledComplex]) -> f64 {
    let peak = values.iter().map(|v| v.ln_abs()).fold(f64::NEG_INFINITY, f64::max);
    if peak > SCALE_THRESHOLD {
        peak
    } else {
        0.0
    }
}

fn collect_scaled(
    grid: UniformGrid,
    values: Vec<ScaledComplex>,
    route: SynthesisRoute,
    k_max: f64,
) -> Result<SampledSignal, SignalError> {
    let ln = scale_for(&values);
    let mantissas = values.into_iter().map(|v| v.relative_to(ln)).collect();
    SampledSignal::with_scale(grid, mantissas, ln, route, k_max)
}

pub fn sample_bessel(p: &SuperoscParams, grid: UniformGrid) -> Result<SampledSignal, SignalError> {
    let values: Vec<ScaledComplex> = (0..grid.len())
        .into_par_iter()
        .map(|i| synth_bessel_scaled(p, grid.z(i)))
        .collect();
    Ok(collect_scaled(grid, values, SynthesisRoute::Bessel, p.superosc_wavenumber())?.with_band_limit(p.band_limit()))
}

pub fn sample_integral(p: &SuperoscParams, grid: UniformGrid) -> Result<SampledSignal, SignalError> {
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| synth_integral_scaled(p, grid.z(i)).map(|v| v.0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(collect_scaled(grid, values, SynthesisRoute::Integral, p.superosc_wavenumber())?.with_band_limit(p.band_limit()))
}

pub fn sample_asymptotic(p: &SuperoscParams, grid: UniformGrid) -> Result<SampledSignal, SignalError> {
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| synth_asymptotic(p, grid.z(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledSignal::new(grid, values, SynthesisRoute::Asymptotic, p.superosc_wavenumber())?
        .with_band_limit(p.band_limit()))
}

/// Sign in `F₁ ± iF₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Phase-locked combination `F₁ ± iF₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperoscPair {
    first: SuperoscParams,
    second: SuperoscParams,
    branch: Branch,
    m: u32,
}

fn lock_integer(inv_delta_sq: f64, offset: LockOffset) -> Result<u32, SignalError> {
    let m = ((inv_delta_sq - offset.radians()) / (2.0 * PI)).round();
    let target = 2.0 * PI * m + offset.radians();
    if m < 1.0 || (inv_delta_sq - target).abs() > PHASE_LOCK_TOLERANCE {
        return Err(SignalError::PhaseLockViolation(format!(
            "delta^-2 = {inv_delta_sq} is not 2*pi*m + {:?} for an integer m >= 1",
            offset
        )));
    }
    Ok(m as u32)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

/// Combines two phase-locked copies into `F₁ ± iF₂`.
///
/// `p1` must sit on δ⁻² = 2πm + π/4 and `p2` on 2πm + 3π/4 with the same m.
pub fn combine_pair(p1: &SuperoscParams, p2: &SuperoscParams, branch: Branch) -> Result<SuperoscPair, SignalError> {
    let m1 = lock_integer(p1.inv_delta_sq(), LockOffset::Quarter)?;
    let m2 = lock_integer(p2.inv_delta_sq(), LockOffset::ThreeQuarter)?;
    if m1 != m2 {
        return Err(SignalError::PhaseLockViolation(format!("lock integers differ: {m1} vs {m2}")));
    }
    if !same(p1.amplitude().abs(), p2.amplitude().abs()) || !same(p1.boost(), p2.boost()) || !same(p1.band_limit(), p2.band_limit()) {
        return Err(SignalError::InvalidParams("pair members must share |D|, A and k0".into()));
    }
    Ok(SuperoscPair {
        first: *p1,
        second: *p2,
        branch,
        m: m1,
    })
}

impl SuperoscPair {
    /// Pair with δ⁻² locked to `2πm + π/4` and `2πm + 3π/4`.
    pub fn phase_locked(
        m: u32,
        boost: f64,
        band_limit: f64,
        amplitude: f64,
        extent: f64,
        branch: Branch,
    ) -> Result<Self, SignalError> {
        let build = |offset| {
            SuperoscParams::builder()
                .phase_locked(m, offset)
                .boost(boost)
                .band_limit(band_limit)
                .amplitude(amplitude)
                .extent(extent)
                .build()
        };
        combine_pair(&build(LockOffset::Quarter)?, &build(LockOffset::ThreeQuarter)?, branch)
    }

    pub fn first(&self) -> &SuperoscParams {
        &self.first
    }
    pub fn second(&self) -> &SuperoscParams {
        &self.second
    }
    pub fn branch(&self) -> Branch {
        self.branch
    }
    pub fn lock_integer(&self) -> u32 {
        self.m
    }
    pub fn extent(&self) -> f64 {
        self.first.extent().min(self.second.extent())
    }
    pub fn band_limit(&self) -> f64 {
        self.first.band_limit()
    }

    /// ½k₀(1 ± cosh A).
    pub fn local_wavenumber(&self) -> f64 {
        0.5 * self.first.band_limit() * (1.0 + self.branch.sign() * self.first.boost().cosh())
    }

    pub fn eval_scaled(&self, z: f64) -> ScaledComplex {
        let f1 = synth_bessel_scaled(&self.first, z);
        let f2 = synth_bessel_scaled(&self.second, z).scale(Complex64::new(0.0, self.branch.sign()));
        f1.add(f2)
    }

    pub fn eval(&self, z: f64) -> Result<Complex64, SignalError> {
        let v = self.eval_scaled(z);
        if v.ln_abs() > LN_OVERFLOW {
            return Err(SignalError::OverflowRegime {
                exponent: v.ln_abs(),
                limit: LN_OVERFLOW,
            });
        }
        Ok(v.value())
    }

    pub fn sample(&self, grid: UniformGrid) -> Result<SampledSignal, SignalError> {
        let values: Vec<ScaledComplex> = (0..grid.len()).into_par_iter().map(|i| self.eval_scaled(grid.z(i))).collect();
        let k_max = self.first.superosc_wavenumber();
        Ok(collect_scaled(grid, values, SynthesisRoute::Combined, k_max)?.with_band_limit(self.band_limit()))
    }
}

/// Real signal `Im(F₁ + iF₂)`, which is `D sin(k′z)` inside the window.
pub fn make_real_superosc(pair: &SuperoscPair, target: f64, grid: UniformGrid) -> Result<SampledSignal, SignalError> {
    if pair.branch() != Branch::Plus {
        return Err(SignalError::DomainError("the real signal is built on the plus branch".into()));
    }
    let k = pair.local_wavenumber();
    if !((target - k).abs() <= 1e-9 * k) {
        return Err(SignalError::DomainError(format!(
            "target wavenumber {target} differs from k0(1 + cosh A)/2 = {k}"
        )));
    }
    Ok(pair.sample(grid)?.into_imaginary_part())
}
