use std::f64::consts::PI;

use super::{SampledSignal, SignalError};

const NODE_THRESHOLD: f64 = 1e-12;

/// Zero crossings of the real part, located by linear interpolation.
/// Exact zero samples count as crossings.
pub fn zero_crossings(s: &SampledSignal) -> Vec<f64> {
    let g = s.grid();
    let v = s.values();
    let mut out = Vec::new();
    for i in 0..v.len() {
        let a = v[i].re;
        if a == 0.0 {
            out.push(g.z(i));
            continue;
        }
        if i + 1 < v.len() {
            let b = v[i + 1].re;
            if b != 0.0 && (a < 0.0) != (b < 0.0) {
                out.push(g.z(i) + g.step() * a / (a - b));
            }
        }
    }
    out
}

fn phase_slope(s: &SampledSignal, i: usize) -> f64 {
    let v = s.values();
    // arg of the ratio is the unwrapped phase increment over two steps
    (v[i + 1] / v[i - 1]).arg() / (2.0 * s.grid().step())
}

/// Local wavenumber at `z`.
///
/// Complex signals: central difference of the unwrapped phase, linearly
/// interpolated between the two nearest nodes. Real signals: crossing spacing
/// over the six crossings nearest to `z`.
pub fn instantaneous_frequency(s: &SampledSignal, z: f64) -> Result<f64, SignalError> {
    let g = s.grid();
    if !(z >= g.start() && z <= g.end()) {
        return Err(SignalError::EdgeError { z });
    }
    let threshold = NODE_THRESHOLD * s.max_abs();
    if s.is_real() {
        return real_frequency(s, z, threshold);
    }
    let pos = (z - g.start()) / g.step();
    let i = pos.floor() as usize;
    let t = pos - i as f64;
    let (lo, hi) = if t == 0.0 { (i, i) } else { (i, i + 1) };
    if lo < 1 || hi + 1 >= s.len() {
        return Err(SignalError::EdgeError { z });
    }
    for j in [lo - 1, lo, hi, hi + 1] {
        let m = s.values()[j].norm();
        if m <= threshold {
            return Err(SignalError::NodeError {
                z: g.z(j),
                magnitude: m,
                threshold,
            });
        }
    }
    if lo == hi {
        return Ok(phase_slope(s, lo));
    }
    Ok((1.0 - t) * phase_slope(s, lo) + t * phase_slope(s, hi))
}

fn real_frequency(s: &SampledSignal, z: f64, threshold: f64) -> Result<f64, SignalError> {
    let c = zero_crossings(s);
    let j = c.partition_point(|&x| x < z);
    if j < 3 || j + 3 > c.len() {
        return Err(SignalError::EdgeError { z });
    }
    let c = &c[j - 3..j + 3];
    let g = s.grid();
    let lo = g.nearest(c[0]);
    let hi = g.nearest(c[5]);
    let local = s.values()[lo..=hi].iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    if local <= threshold {
        return Err(SignalError::NodeError {
            z,
            magnitude: local,
            threshold,
        });
    }
    // two spans of four half-periods each; an offset alternates single spacings
    Ok(0.5 * (4.0 * PI / (c[4] - c[0]) + 4.0 * PI / (c[5] - c[1])))
}
