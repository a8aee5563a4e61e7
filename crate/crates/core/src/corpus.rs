//! Named parameter sets used by the tests, the acceptance suite and the CLI
//! fixtures.

use std::f64::consts::PI;

use crate::dynamics::TwoLevelParticle;
use crate::field::{FieldError, ModeGrid, DEFAULT_UV_RATIO};
use crate::signal::{
    apply_window, make_real_superosc, Branch, SampledSignal, SignalError, SuperoscPair, UniformGrid, WindowSpec,
};

/// cosh A = 3, so the window wavenumber is 2k₀.
pub const COSH_BOOST: f64 = 3.0;

/// Certificate pair: m = 40, z_c = 2.5.
pub const CERTIFICATE_M: u32 = 40;
pub const CERTIFICATE_EXTENT: f64 = 2.5;
pub const CERTIFICATE_Z_MIN: f64 = -1600.0;
pub const CERTIFICATE_Z_MAX: f64 = 3500.0;
/// Keeps the two-step phase advance at k′ well below π.
pub const CERTIFICATE_STEP: f64 = PI / 32.0;

/// Dynamics pair: m = 159155 (δ⁻² ≈ 10⁶), z_c = 200, κ = k₀/2000.
pub const DYNAMICS_M: u32 = 159_155;
pub const DYNAMICS_EXTENT: f64 = 200.0;
pub const DYNAMICS_KAPPA: f64 = 1.0 / 2000.0;
pub const DYNAMICS_HALF_SPAN: f64 = 16_000.0;
pub const DYNAMICS_STEP: f64 = 0.25;
/// Keeps first-order validity out to the long-time limit.
pub const DYNAMICS_COUPLING: f64 = 5e-4;

pub fn certificate_pair() -> Result<SuperoscPair, SignalError> {
    SuperoscPair::phase_locked(CERTIFICATE_M, COSH_BOOST.acosh(), 1.0, 1.0, CERTIFICATE_EXTENT, Branch::Plus)
}

pub fn certificate_grid() -> Result<UniformGrid, SignalError> {
    UniformGrid::spanning(CERTIFICATE_Z_MIN, CERTIFICATE_Z_MAX, CERTIFICATE_STEP)
}

/// Windowed complex pair with the default window `κ = k₀/200`.
pub fn certificate_signal() -> Result<SampledSignal, SignalError> {
    let pair = certificate_pair()?;
    let s = pair.sample(certificate_grid()?)?;
    Ok(apply_window(&s, WindowSpec::for_band(pair.band_limit())))
}

pub fn dynamics_pair() -> Result<SuperoscPair, SignalError> {
    SuperoscPair::phase_locked(DYNAMICS_M, COSH_BOOST.acosh(), 1.0, 1.0, DYNAMICS_EXTENT, Branch::Plus)
}

pub fn dynamics_grid() -> Result<UniformGrid, SignalError> {
    UniformGrid::spanning(-DYNAMICS_HALF_SPAN, DYNAMICS_HALF_SPAN, DYNAMICS_STEP)
}

/// Windowed real signal `≈ sin(2k₀z)` on `[−200, 0]`.
pub fn dynamics_signal() -> Result<SampledSignal, SignalError> {
    let pair = dynamics_pair()?;
    let s = make_real_superosc(&pair, pair.local_wavenumber(), dynamics_grid()?)?;
    let w = WindowSpec::gaussian(DYNAMICS_KAPPA).expect("positive kappa");
    Ok(apply_window(&s, w))
}

/// Particle at `z₀ = 0` with gap matched to the window wavenumber.
pub fn dynamics_particle() -> TwoLevelParticle {
    let gap = 0.5 * (1.0 + COSH_BOOST);
    TwoLevelParticle::new(gap)
        .expect("positive gap")
        .with_coupling(DYNAMICS_COUPLING)
}

/// Mode grid for the dynamics corpus state. The sampled span holds no growth
/// region, so the on-grid signal sits near `k′` rather than below `k₀`.
pub fn dynamics_mode_grid(s: &SampledSignal) -> Result<ModeGrid, FieldError> {
    ModeGrid::covering(s, 0.75 * (1.0 + COSH_BOOST), Some(DEFAULT_UV_RATIO))
}
