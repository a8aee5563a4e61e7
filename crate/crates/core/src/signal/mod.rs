//! Construction and analysis of the superoscillatory band-limited function.
//!
//! Three synthesis routes are provided: the defining oscillatory integral, the
//! Bessel closed form and its small-δ asymptotic form. Two phase-locked copies
//! combine into a locally monochromatic wave whose wavenumber exceeds the band
//! limit; a Gaussian window makes the result square-integrable.

mod freq;
mod params;
mod sampled;
mod spectrum;
mod synth;
mod window;

pub use freq::{instantaneous_frequency, zero_crossings};
pub use params::{
    LockOffset, ParamsBuilder, PhaseLock, SuperoscParams, DEFAULT_WINDOW_CRITERION,
    PHASE_LOCK_TOLERANCE,
};
pub use sampled::{SampledSignal, SynthesisRoute, UniformGrid};
pub use spectrum::{spectrum, spectrum_padded, SpectralDensity, DEFAULT_LEAKAGE_TOLERANCE};
pub use synth::{
    combine_pair, make_real_superosc, sample_asymptotic, sample_bessel, sample_integral,
    synth_asymptotic, synth_bessel, synth_bessel_scaled, synth_integral, synth_integral_scaled,
    Branch, IntegralValue, ScaledComplex, SuperoscPair, INTEGRAL_EXPONENT_LIMIT,
};
pub use window::{apply_window, WindowSpec, DEFAULT_KAPPA_RATIO};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignalError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("window criterion delta^2 z_c k0 cosh A = {criterion:.4} exceeds {bound}")]
    WindowTooLong { criterion: f64, bound: f64 },
    #[error("phase lock violated: {0}")]
    PhaseLockViolation(String),
    #[error("quadrature did not converge at z = {z}: error estimate {estimate:e} above target {target:e}")]
    QuadratureNoConvergence { z: f64, estimate: f64, target: f64 },
    #[error("amplitude exponent {exponent:.1} exceeds the representable limit {limit}")]
    OverflowRegime { exponent: f64, limit: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("signal magnitude {magnitude:e} at z = {z} is below {threshold:e}")]
    NodeError { z: f64, magnitude: f64, threshold: f64 },
    #[error("z = {z} is too close to the grid boundary")]
    EdgeError { z: f64 },
    #[error("boundary samples reach {ratio:e} of the maximum (limit {limit:e})")]
    TruncationError { ratio: f64, limit: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
}
