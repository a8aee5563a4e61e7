//! Energy bookkeeping for a single absorption event.
//!
//! `E_a = I₁ + I₂ + I₃` is the field energy after the particle is found
//! excited. `I₁` equals the energy before, `I₂/E → −1` on resonance and `I₃`
//! is the vacuum contribution, positive and suppressed by `1/t²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{TwoLevelParticle, POINTS_PER_PERIOD};
use crate::field::{energy_before, CoherentAmplitudes, FieldError, ModeGrid};
use crate::quadrature::{even_panels, simpson};

/// `I₂` needs at least two periods of the gap.
pub const MIN_I2_PHASE: f64 = 4.0 * std::f64::consts::PI;
/// The balance needs at least twenty periods of the gap.
pub const MIN_BALANCE_PHASE: f64 = 40.0 * std::f64::consts::PI;
pub const BALANCE_TOLERANCE: f64 = 0.05;
const DEGENERATE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LedgerError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Ωt = {omega_t:.4} is below the required {required:.4}")]
    ShortTime { omega_t: f64, required: f64 },
    #[error("denominator {value:e} is degenerate")]
    DegenerateDenominator { value: f64 },
    #[error("energy residual {residual:e} exceeds {tolerance}", residual = .0.residual, tolerance = BALANCE_TOLERANCE)]
    BalanceViolation(Box<EnergyReport>),
}

fn require_phase(omega: f64, t: f64, required: f64) -> Result<f64, LedgerError> {
    if !(omega.is_finite() && omega > 0.0 && t.is_finite()) {
        return Err(LedgerError::InvalidInput(format!("Ω = {omega}, t = {t}")));
    }
    let omega_t = omega * t;
    if omega_t < required {
        return Err(LedgerError::ShortTime { omega_t, required });
    }
    Ok(omega_t)
}

// N̂ and D̂ at T = Ωt
fn i2_terms(big_t: f64) -> (f64, f64) {
    let s = big_t.sin();
    let s2 = (2.0 * big_t).sin();
    let s4 = s.powi(4);
    let num = 0.25 * big_t * big_t - s2 * s2 / 16.0 - 0.25 * s4;
    let den = 0.25 * s4 + (0.5 * big_t - 0.25 * s2).powi(2);
    (num, den)
}

/// `I₁ = E_b`.
pub fn compute_i1(ca: &CoherentAmplitudes) -> f64 {
    energy_before(ca).value()
}

/// `I₂/E` for a resonant monochromatic drive.
pub fn compute_i2(omega: f64, t: f64) -> Result<f64, LedgerError> {
    let big_t = require_phase(omega, t, MIN_I2_PHASE)?;
    let (num, den) = i2_terms(big_t);
    if den < DEGENERATE {
        return Err(LedgerError::DegenerateDenominator { value: den });
    }
    Ok(-num / den)
}

/// `1 + I₂/E`, evaluated without cancellation.
pub fn i2_deficit(omega: f64, t: f64) -> Result<f64, LedgerError> {
    let big_t = require_phase(omega, t, MIN_I2_PHASE)?;
    let (_, den) = i2_terms(big_t);
    if den < DEGENERATE {
        return Err(LedgerError::DegenerateDenominator { value: den });
    }
    let s = big_t.sin();
    let s2 = (2.0 * big_t).sin();
    Ok((0.5 * s.powi(4) - 0.25 * big_t * s2 + s2 * s2 / 8.0) / den)
}

/// Fourier moments of the field seen by the particle over `[0, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMoments {
    /// `∫ ∂_zB cos Ωt′`, `∫ ∂_zB sin Ωt′`.
    pub c1: f64,
    pub s1: f64,
    /// `∫ B cos Ωt′`, `∫ B sin Ωt′`.
    pub c2: f64,
    pub s2: f64,
}

impl FieldMoments {
    /// `|∫₀ᵗ ⟨B⟩(z₀, t′) e^{iΩt′} dt′|²`.
    pub fn denominator(&self) -> f64 {
        self.c2 * self.c2 + self.s2 * self.s2
    }
}

/// Moments from the coherent-state field at the particle.
pub fn field_moments(ca: &CoherentAmplitudes, particle: &TwoLevelParticle, t: f64) -> Result<FieldMoments, LedgerError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LedgerError::InvalidInput(format!("time must be > 0, got {t}")));
    }
    let omega = particle.gap();
    let fastest = omega + ca.grid().k_max();
    let n = even_panels(t, std::f64::consts::TAU / (POINTS_PER_PERIOD * fastest));
    let h = t / n as f64;
    let times: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
    let series = ca.field_series(particle.position(), &times);
    let (d, b): (Vec<Complex64>, Vec<Complex64>) = times
        .iter()
        .zip(&series)
        .map(|(&tp, &(bv, dv))| {
            let e = Complex64::from_polar(1.0, omega * tp);
            (e * dv, e * bv)
        })
        .unzip();
    let d = simpson(&d, h);
    let b = simpson(&b, h);
    Ok(FieldMoments {
        c1: d.re,
        s1: d.im,
        c2: b.re,
        s2: b.im,
    })
}

/// `I₂/E` from the field moments; `None` when the field never reaches the
/// particle.
pub fn compute_i2_field(m: &FieldMoments, omega: f64) -> Option<f64> {
    let den = m.denominator();
    (den > 0.0).then(|| (m.c1 * m.s2 - m.s1 * m.c2) / (omega * den))
}

/// `I₃ = (1/L²) ∫₀^{k_uv} k² · 4 sin²((Ω+k)t/2)/(Ω+k)² dk / denominator`.
pub fn compute_i3(grid: &ModeGrid, omega: f64, t: f64, denominator: f64) -> Result<f64, LedgerError> {
    let k_uv = grid.k_uv().ok_or(FieldError::CutoffMissing)?;
    if !(denominator > 0.0) {
        return Err(LedgerError::DegenerateDenominator { value: denominator });
    }
    let oscillation = std::f64::consts::TAU / t.max(f64::MIN_POSITIVE);
    let n = even_panels(k_uv, oscillation / POINTS_PER_PERIOD).max(1024);
    let h = k_uv / n as f64;
    let samples: Vec<f64> = (0..=n)
        .map(|j| {
            let k = j as f64 * h;
            let w = omega + k;
            let s = (0.5 * w * t).sin();
            4.0 * k * k * s * s / (w * w)
        })
        .collect();
    Ok(simpson(&samples, h) / (grid.length().powi(2) * denominator))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub t: f64,
    pub gap: f64,
    pub omega_t: f64,
    pub e_b: f64,
    pub e_b_modal: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub e_a: f64,
    pub i2_over_e: f64,
    pub i3_over_e: f64,
    /// `I₂/E` from the field moments.
    pub i2_field_over_e: Option<f64>,
    pub denominator: f64,
    pub state_length: f64,
    pub vacuum_length: f64,
    pub k_uv: f64,
    /// `(E_a − E_b + E)/E`.
    pub residual: f64,
    /// The field never reached the particle; `I₃` is set to zero.
    pub vacuous: bool,
}

impl EnergyReport {
    pub fn within_tolerance(&self) -> bool {
        self.residual.abs() <= BALANCE_TOLERANCE
    }
}

/// Ledger for the state `ca`, with `I₃` taken on `vacuum_grid`. Does not
/// check the residual.
pub fn energy_report(
    ca: &CoherentAmplitudes,
    particle: &TwoLevelParticle,
    t: f64,
    vacuum_grid: &ModeGrid,
) -> Result<EnergyReport, LedgerError> {
    let omega = particle.gap();
    let omega_t = require_phase(omega, t, MIN_BALANCE_PHASE)?;
    let k_uv = vacuum_grid.k_uv().ok_or(FieldError::CutoffMissing)?;
    let before = energy_before(ca);
    let i1 = compute_i1(ca);
    let i2_over_e = compute_i2(omega, t)?;
    let deficit = i2_deficit(omega, t)?;
    let moments = field_moments(ca, particle, t)?;
    let denominator = moments.denominator();
    let vacuous = ca.is_vacuum() || denominator == 0.0;
    let i3_over_e = if vacuous {
        0.0
    } else {
        compute_i3(vacuum_grid, omega, t, denominator)? / omega
    };
    let i2 = i2_over_e * omega;
    let i3 = i3_over_e * omega;
    Ok(EnergyReport {
        t,
        gap: omega,
        omega_t,
        e_b: before.value(),
        e_b_modal: before.modal,
        i1,
        i2,
        i3,
        e_a: i1 + i2 + i3,
        i2_over_e,
        i3_over_e,
        i2_field_over_e: compute_i2_field(&moments, omega),
        denominator,
        state_length: ca.grid().length(),
        vacuum_length: vacuum_grid.length(),
        k_uv,
        // I₁ ≡ E_b, so the residual is formed without the large cancelling terms
        residual: deficit + i3_over_e,
        vacuous,
    })
}

/// [`energy_report`] that fails when `|residual| > 0.05`.
pub fn energy_balance(
    ca: &CoherentAmplitudes,
    particle: &TwoLevelParticle,
    t: f64,
    vacuum_grid: &ModeGrid,
) -> Result<EnergyReport, LedgerError> {
    let r = energy_report(ca, particle, t, vacuum_grid)?;
    if !r.within_tolerance() {
        return Err(LedgerError::BalanceViolation(Box::new(r)));
    }
    Ok(r)
}
