//! Quadrature and interpolation primitives shared by the physics modules.

use std::collections::BinaryHeap;

use num_complex::Complex64;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("adaptive quadrature stopped at {intervals} intervals with error estimate {error_estimate:e} (target {target:e})")]
pub struct NotConverged {
    pub value: Complex64,
    pub error_estimate: f64,
    pub target: f64,
    pub intervals: usize,
}

fn kronrod21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod (21 point) integration of a complex
/// integrand. Bisects the interval with the largest error estimate until the
/// summed estimate falls below `abs_tol` or `max_intervals` is reached.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult, NotConverged> {
    let (value, err) = kronrod21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    while total_err > abs_tol && heap.len() < max_intervals {
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod21(&f, worst.a, mid);
        let (v2, e2) = kronrod21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
    // re-sum to shed the drift of the running totals
    let value: Complex64 = heap.iter().map(|s| s.value).sum();
    let error_estimate: f64 = heap.iter().map(|s| s.err).sum();
    let intervals = heap.len();
    if error_estimate > abs_tol {
        Err(NotConverged {
            value,
            error_estimate,
            target: abs_tol,
            intervals,
        })
    } else {
        Ok(QuadResult {
            value,
            error_estimate,
            intervals,
        })
    }
}

/// Composite Simpson rule on `n + 1` equally spaced samples (`n` even).
pub fn simpson<T>(samples: &[T], step: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    let n = samples.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "simpson needs an even number of panels");
    let mut acc = samples[0] + samples[n];
    for (i, &v) in samples.iter().enumerate().take(n).skip(1) {
        acc = acc + v * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (step / 3.0)
}

/// Smallest even panel count with at most `max_step` spacing over `length`.
pub fn even_panels(length: f64, max_step: f64) -> usize {
    let n = (length / max_step).ceil().max(2.0) as usize;
    n + n % 2
}

/// Natural cubic spline through samples on a uniform grid.
#[derive(Debug, Clone)]
pub struct UniformCubicSpline {
    start: f64,
    step: f64,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl UniformCubicSpline {
    pub fn new(start: f64, step: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        assert!(n >= 2, "spline needs at least two knots");
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm for m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2
            let inner = n - 2;
            let mut c = vec![0.0; inner];
            let mut d = vec![0.0; inner];
            let scale = 6.0 / (step * step);
            for i in 0..inner {
                let rhs = scale * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
                if i == 0 {
                    c[0] = 1.0 / 4.0;
                    d[0] = rhs / 4.0;
                } else {
                    let denom = 4.0 - c[i - 1];
                    c[i] = 1.0 / denom;
                    d[i] = (rhs - d[i - 1]) / denom;
                }
            }
            m[inner] = d[inner - 1];
            for i in (0..inner - 1).rev() {
                m[i + 1] = d[i] - c[i] * m[i + 2];
            }
        }
        Self { start, step, y, m }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.y.len() - 1) as f64
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let pos = (x - self.start) / self.step;
        let last = self.y.len() - 2;
        let i = (pos.floor().max(0.0) as usize).min(last);
        (i, pos - i as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let h2 = self.step * self.step;
        let a = 1.0 - t;
        a * self.y[i]
            + t * self.y[i + 1]
            + h2 / 6.0 * ((a * a * a - a) * self.m[i] + (t * t * t - t) * self.m[i + 1])
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let h = self.step;
        let a = 1.0 - t;
        (self.y[i + 1] - self.y[i]) / h
            + h / 6.0 * (-(3.0 * a * a - 1.0) * self.m[i] + (3.0 * t * t - 1.0) * self.m[i + 1])
    }
}
