//! C ABI over the superosc core.
//!
//! Objects cross the boundary as opaque pointers created by `so_*_new` or
//! `so_*_sample` and released by the matching `so_*_free`. Every fallible
//! call returns an [`SoStatus`]; the message for the last failure on the
//! calling thread is available through [`so_last_error_message`]. Panics never
//! unwind into C.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use superosc::dynamics::{DynamicsError, TransitionSolver, TwoLevelParticle};
use superosc::ledger::{compute_i2, LedgerError};
use superosc::signal::{sample_bessel, synth_bessel, synth_integral, SampledSignal, SignalError, SuperoscParams, UniformGrid};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Overflow = 4,
    /// First-order probability above 0.1; the value is still written.
    Breakdown = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Parameters of one superoscillatory function.
pub struct SoParams(SuperoscParams);

/// Samples on a uniform grid.
pub struct SoSignal(SampledSignal);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: SoStatus, msg: impl Into<String>) -> SoStatus {
    set_error(msg);
    status
}

fn signal_status(e: &SignalError) -> SoStatus {
    match e {
        SignalError::OverflowRegime { .. } => SoStatus::Overflow,
        SignalError::InvalidParams(_)
        | SignalError::WindowTooLong { .. }
        | SignalError::PhaseLockViolation(_)
        | SignalError::InvalidGrid(_)
        | SignalError::DomainError(_) => SoStatus::InvalidArgument,
        _ => SoStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> SoStatus) -> SoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SoStatus::Panic, "internal panic"),
    }
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(SoStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! out {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => return fail(SoStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn so_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn so_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds parameters from `δ`, `A`, `k₀` and `D`. A non-positive `extent`
/// selects the largest window the criterion admits.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn so_params_new(
    delta: f64,
    boost: f64,
    band_limit: f64,
    amplitude: f64,
    extent: f64,
    out: *mut *mut SoParams,
) -> SoStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        let mut b = SuperoscParams::builder()
            .delta(delta)
            .boost(boost)
            .band_limit(band_limit)
            .amplitude(amplitude);
        if extent > 0.0 {
            b = b.extent(extent);
        }
        match b.build() {
            Ok(p) => {
                *out = Box::into_raw(Box::new(SoParams(p)));
                SoStatus::Ok
            }
            Err(e) => fail(signal_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be null or come from [`so_params_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn so_params_free(p: *mut SoParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Centre of the growth region, `2 cosh A/(k₀δ²)`.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_params_growth_peak(p: *const SoParams, out: *mut f64) -> SoStatus {
    guard(|| {
        let p = deref!(p);
        *out!(out) = p.0.growth_peak();
        SoStatus::Ok
    })
}

/// Closed-form `F(z)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_synth_bessel(p: *const SoParams, z: f64, re: *mut f64, im: *mut f64) -> SoStatus {
    guard(|| {
        let p = deref!(p);
        let (re, im) = (out!(re), out!(im));
        match synth_bessel(&p.0, z) {
            Ok(v) => {
                *re = v.re;
                *im = v.im;
                SoStatus::Ok
            }
            Err(e) => fail(signal_status(&e), e.to_string()),
        }
    })
}

/// `F(z)` by adaptive quadrature; `err` receives the error estimate.
///
/// # Safety
/// All pointers must be valid; `err` may be null.
#[no_mangle]
pub unsafe extern "C" fn so_synth_integral(
    p: *const SoParams,
    z: f64,
    re: *mut f64,
    im: *mut f64,
    err: *mut f64,
) -> SoStatus {
    guard(|| {
        let p = deref!(p);
        let (re, im) = (out!(re), out!(im));
        match synth_integral(&p.0, z) {
            Ok(v) => {
                *re = v.value.re;
                *im = v.value.im;
                if let Some(e) = err.as_mut() {
                    *e = v.error_estimate;
                }
                SoStatus::Ok
            }
            Err(e) => fail(signal_status(&e), e.to_string()),
        }
    })
}

/// Samples the closed form at `start + i·step`, `i < len`.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_signal_sample(
    p: *const SoParams,
    start: f64,
    step: f64,
    len: usize,
    out: *mut *mut SoSignal,
) -> SoStatus {
    guard(|| {
        let p = deref!(p);
        let out = out!(out);
        *out = ptr::null_mut();
        let s = UniformGrid::new(start, step, len).and_then(|g| sample_bessel(&p.0, g));
        match s {
            Ok(s) => {
                *out = Box::into_raw(Box::new(SoSignal(s)));
                SoStatus::Ok
            }
            Err(e) => fail(signal_status(&e), e.to_string()),
        }
    })
}

/// Real signal from caller-owned samples on a uniform grid; `k_max` is the
/// fastest expected wavenumber.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_signal_from_real(
    start: f64,
    step: f64,
    values: *const f64,
    len: usize,
    k_max: f64,
    out: *mut *mut SoSignal,
) -> SoStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        if values.is_null() {
            return fail(SoStatus::NullPointer, "values is null");
        }
        let v = std::slice::from_raw_parts(values, len).to_vec();
        let s = UniformGrid::new(start, step, len)
            .and_then(|g| SampledSignal::from_real(g, v, superosc::signal::SynthesisRoute::External, k_max));
        match s {
            Ok(s) => {
                *out = Box::into_raw(Box::new(SoSignal(s)));
                SoStatus::Ok
            }
            Err(e) => fail(signal_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be null or come from a `so_signal_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn so_signal_free(s: *mut SoSignal) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_signal_len(s: *const SoSignal) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Copies physical sample values. Fails with `BufferTooSmall` when
/// `len < so_signal_len(s)` and with `Overflow` when values exceed double
/// range.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn so_signal_values(s: *const SoSignal, re: *mut f64, im: *mut f64, len: usize) -> SoStatus {
    guard(|| {
        let s = deref!(s);
        if re.is_null() || im.is_null() {
            return fail(SoStatus::NullPointer, "output buffer is null");
        }
        if len < s.0.len() {
            return fail(SoStatus::BufferTooSmall, format!("need {} samples, got {len}", s.0.len()));
        }
        let Some(v) = s.0.physical_values() else {
            return fail(SoStatus::Overflow, "sample magnitudes exceed double range");
        };
        for (i, x) in v.iter().enumerate() {
            *re.add(i) = x.re;
            *im.add(i) = x.im;
        }
        SoStatus::Ok
    })
}

/// First-order probability `P(t)` for a particle with gap `gap`, coupling
/// `coupling` at `position`. Returns `Breakdown` with `out` set when
/// `P > 0.1`.
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_transition_probability(
    s: *const SoSignal,
    gap: f64,
    coupling: f64,
    position: f64,
    t: f64,
    out: *mut f64,
) -> SoStatus {
    guard(|| {
        let s = deref!(s);
        let out = out!(out);
        let result = TwoLevelParticle::new(gap).and_then(|p| {
            let p = p.with_coupling(coupling).with_position(position);
            TransitionSolver::new(&s.0)?.transition(&p, t)
        });
        match result {
            Ok(tr) => {
                *out = tr.probability;
                if tr.breakdown {
                    fail(SoStatus::Breakdown, format!("probability {} exceeds 0.1", tr.probability))
                } else {
                    SoStatus::Ok
                }
            }
            Err(e @ (DynamicsError::InvalidParticle(_) | DynamicsError::InvalidInput(_) | DynamicsError::NotCovered { .. })) => {
                fail(SoStatus::InvalidArgument, e.to_string())
            }
            Err(e) => fail(SoStatus::Numerical, e.to_string()),
        }
    })
}

/// `I₂/E` at gap `omega` and time `t`; requires `Ωt ≥ 4π`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn so_i2_ratio(omega: f64, t: f64, out: *mut f64) -> SoStatus {
    guard(|| {
        let out = out!(out);
        match compute_i2(omega, t) {
            Ok(v) => {
                *out = v;
                SoStatus::Ok
            }
            Err(e @ (LedgerError::ShortTime { .. } | LedgerError::InvalidInput(_))) => {
                fail(SoStatus::InvalidArgument, e.to_string())
            }
            Err(e) => fail(SoStatus::Numerical, e.to_string()),
        }
    })
}
