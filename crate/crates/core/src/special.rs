//! Bessel functions of order zero on the real line.
//!
//! `J0` uses the power series below [`J0_SERIES_LIMIT`], Miller's backward
//! recurrence up to [`J0_ASYMPTOTIC_LIMIT`] and the Hankel asymptotic expansion
//! above it. `I0` is returned in log space so that the
//! exponentially large values of the growth region stay representable.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Below this argument `J0` is summed from its power series.
pub const J0_SERIES_LIMIT: f64 = 8.0;
/// From this argument on `J0` uses the Hankel expansion.
pub const J0_ASYMPTOTIC_LIMIT: f64 = 25.0;
/// Below this argument `I0` is summed from its power series.
pub const I0_SERIES_LIMIT: f64 = 20.0;

const MAX_TERMS: usize = 400;

/// A real number held as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogReal {
                ln_abs: x.abs().ln(),
                sign: x.signum(),
            }
        }
    }

    /// Plain value; overflows to infinity for `ln_abs > ~709`.
    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        j0_series(x)
    } else if x < J0_ASYMPTOTIC_LIMIT {
        j0_miller(x)
    } else {
        j0_hankel(x)
    }
}

/// Backward recurrence `J_{k-1} = (2k/x) J_k - J_{k+1}` normalised by
/// `J0 + 2 Σ J_{2k} = 1`.
fn j0_miller(x: f64) -> f64 {
    let start = 2 * ((1.5 * x + 40.0) as usize / 2);
    let mut next = 0.0;
    let mut cur: f64 = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
        }
    }
    cur / (norm + cur)
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Hankel coefficients a_k(0) = prod_{j<=k} (2j-1)^2 / (k! 8^k), summed as
/// P and Q until the terms stop decreasing.
fn hankel_pq(x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= odd * odd / (k as f64 * 8.0 * x);
        if term >= prev || term < 1e-18 {
            break;
        }
        prev = term;
        // a_k(0) carries (-1)^k: P gets (-1)^{k/2} |a_k|, Q gets (-1)^{(k+1)/2} |a_k|
        match k % 4 {
            0 => p += term,
            1 => q -= term,
            2 => p -= term,
            _ => q += term,
        }
    }
    (p, q)
}

fn j0_hankel(x: f64) -> f64 {
    let (p, q) = hankel_pq(x);
    let (s, c) = x.sin_cos();
    // cos(x - pi/4) and sin(x - pi/4) without forming x - pi/4
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Natural log of the modified Bessel function `I0(x)`.
pub fn bessel_i0_ln(x: f64) -> f64 {
    let x = x.abs();
    if x < I0_SERIES_LIMIT {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_TERMS {
            let kf = k as f64;
            term *= q / (kf * kf);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        sum.ln()
    } else {
        // I0(x) ~ e^x / sqrt(2 pi x) * sum_k a_k(0) / x^k, all terms positive
        let mut sum = 1.0;
        let mut term: f64 = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..MAX_TERMS {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (k as f64 * 8.0 * x);
            if term >= prev || term < 1e-18 {
                break;
            }
            prev = term;
            sum += term;
        }
        x - 0.5 * (2.0 * PI * x).ln() + sum.ln()
    }
}

pub fn bessel_i0(x: f64) -> f64 {
    bessel_i0_ln(x).exp()
}

/// `J0(sqrt(s))` for a real `s` of either sign.
///
/// `J0(sqrt(s))` is entire in `s`; for `s < 0` it equals `I0(sqrt(-s))`.
pub fn bessel_j0_sqrt(s: f64) -> LogReal {
    if s >= 0.0 {
        LogReal::from_f64(bessel_j0(s.sqrt()))
    } else {
        LogReal {
            ln_abs: bessel_i0_ln((-s).sqrt()),
            sign: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // reference values from mpmath at 30 digits
    const J0_REF: [(f64, f64); 10] = [
        (0.0, 1.0),
        (1.0, 0.765_197_686_557_966_6),
        (4.0, -0.397_149_809_863_847_4),
        (8.0, 0.171_650_807_137_553_9),
        (7.99, 0.173_990_013_127_932_58),
        (11.9, 0.025_049_441_699_589_645),
        (12.1, 0.069_666_773_606_807_31),
        (24.99, 0.095_008_236_967_548_12),
        (27.0, 0.072_741_918_005_887_09),
        (1000.0, 0.024_786_686_152_420_175),
    ];

    #[test]
    fn j0_matches_reference_values() {
        for (x, want) in J0_REF {
            assert_relative_eq!(bessel_j0(x), want, max_relative = 1e-13, epsilon = 1e-16);
        }
    }

    #[test]
    fn j0_first_zero() {
        assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-14);
    }

    #[test]
    fn j0_is_even() {
        assert_eq!(bessel_j0(-3.3), bessel_j0(3.3));
    }

    #[test]
    fn methods_agree_at_the_splits() {
        let x = J0_SERIES_LIMIT;
        assert!((j0_series(x) - j0_miller(x)).abs() < 1e-14);
        let x = J0_ASYMPTOTIC_LIMIT;
        assert!((j0_miller(x) - j0_hankel(x)).abs() < 1e-15);
    }

    #[test]
    fn i0_matches_reference_values() {
        // ln I0(x), mpmath
        let refs = [
            (0.0, 0.0),
            (1.0, 0.235_914_358_507_178_65),
            (13.0, 10.808_605_896_710_524),
            (25.0, 22.476_728_004_999_244),
            (700.0, 695.805_699_998_443_4),
        ];
        for (x, want) in refs {
            assert_relative_eq!(bessel_i0_ln(x), want, max_relative = 1e-12, epsilon = 1e-15);
        }
    }

    #[test]
    fn i0_continuous_across_split() {
        // d/dx ln I0 is below 1, so a 2e-9 step moves the value by less than 2e-9
        let lo = bessel_i0_ln(I0_SERIES_LIMIT - 1e-9);
        let hi = bessel_i0_ln(I0_SERIES_LIMIT + 1e-9);
        assert!((lo - hi).abs() < 2e-9);
    }

    #[test]
    fn sqrt_argument_switches_to_i0() {
        let v = bessel_j0_sqrt(-16.0);
        assert_eq!(v.sign, 1.0);
        assert_relative_eq!(v.value(), bessel_i0(4.0), max_relative = 1e-15);
        assert_relative_eq!(bessel_j0_sqrt(16.0).value(), bessel_j0(4.0));
    }
}
