use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::signal::LockOffset;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(field: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.to_owned(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Synth,
    Spectrum,
    FreqMap,
    Transition,
    Detune,
    Energy,
    Sweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Synth => "synth",
            Self::Spectrum => "spectrum",
            Self::FreqMap => "freq-map",
            Self::Transition => "transition",
            Self::Detune => "detune",
            Self::Energy => "energy",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteChoice {
    #[default]
    Bessel,
    Integral,
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalBlock {
    #[serde(default = "one")]
    pub amplitude: f64,
    pub delta: Option<f64>,
    pub inv_delta_sq: Option<f64>,
    /// Phase-lock integer `m`.
    pub lock: Option<u32>,
    pub offset: Option<LockOffset>,
    pub boost: Option<f64>,
    pub cosh_boost: Option<f64>,
    #[serde(default = "one")]
    pub band_limit: f64,
    pub extent: Option<f64>,
    pub window_criterion: Option<f64>,
    /// Phase-locked pair `F₁ + iF₂`; needs `lock`.
    #[serde(default)]
    pub pair: bool,
    /// Keep `Im(F₁ + iF₂)`; needs `pair`.
    #[serde(default)]
    pub real: bool,
    #[serde(default)]
    pub route: RouteChoice,
}

impl Default for SignalBlock {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            delta: None,
            inv_delta_sq: None,
            lock: None,
            offset: None,
            boost: None,
            cosh_boost: None,
            band_limit: 1.0,
            extent: None,
            window_criterion: None,
            pair: false,
            real: false,
            route: RouteChoice::Bessel,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub z_min: f64,
    pub z_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowBlock {
    /// Defaults to `k₀/200`.
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesBlock {
    /// Period of the vacuum grid; defaults to `10⁴/k₀`.
    pub length: Option<f64>,
    /// Defaults to `50k₀`.
    pub k_uv: Option<f64>,
    /// Highest mode of the state grid; defaults to `1.5 max(k′, k₀)`.
    pub state_k_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapSpec {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleBlock {
    pub gap: GapSpec,
    #[serde(default = "one")]
    pub coupling: f64,
    #[serde(default)]
    pub position: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeBlock {
    pub values: Option<Vec<f64>>,
    /// Times given as `Ωt/π`.
    pub phase_over_pi: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    #[serde(default)]
    pub log: bool,
    pub fit_window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuneBlock {
    /// Relative offsets `Ω = Ω_match (1 + offset)`.
    pub offsets: Option<Vec<f64>>,
    pub gaps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    #[serde(default)]
    pub log: bool,
}

impl RangeSpec {
    pub fn resolve(&self, field: &str) -> Result<Vec<f64>, ConfigError> {
        if let Some(v) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.points.is_some() {
                return Err(ConfigError::invalid(field, "give either values or start/stop/points"));
            }
            return Ok(v.clone());
        }
        match (self.start, self.stop, self.points) {
            (Some(a), Some(b), Some(n)) => ladder(field, a, b, n, self.log),
            _ => Err(ConfigError::invalid(field, "needs values or start, stop and points")),
        }
    }
}

pub(crate) fn ladder(field: &str, a: f64, b: f64, n: usize, log: bool) -> Result<Vec<f64>, ConfigError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(ConfigError::invalid(field, "range ends must be finite"));
    }
    if log && !(a > 0.0 && b > 0.0) {
        return Err(ConfigError::invalid(field, "log ladders need positive ends"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let (a, b) = if log { (a.ln(), b.ln()) } else { (a, b) };
    Ok((0..n)
        .map(|i| {
            let x = a + (b - a) * i as f64 / (n - 1) as f64;
            if log {
                x.exp()
            } else {
                x
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    /// Experiment run at every point.
    pub run: ExperimentKind,
    pub delta: Option<RangeSpec>,
    pub boost: Option<RangeSpec>,
    pub cosh_boost: Option<RangeSpec>,
    pub length: Option<RangeSpec>,
    pub t: Option<RangeSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<String>,
    /// Emit the region-labelled figure series with `synth`.
    #[serde(default)]
    pub figure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Reserved; no experiment draws random numbers.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub signal: SignalBlock,
    pub grid: Option<GridBlock>,
    pub window: Option<WindowBlock>,
    pub modes: Option<ModesBlock>,
    pub particle: Option<ParticleBlock>,
    pub time: Option<TimeBlock>,
    pub detune: Option<DetuneBlock>,
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_owned(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Checks block presence and cross-field constraints.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.signal;
        let n_delta = [s.delta.is_some(), s.inv_delta_sq.is_some(), s.lock.is_some() && !s.pair]
            .iter()
            .filter(|&&b| b)
            .count();
        if n_delta > 1 {
            return Err(ConfigError::invalid("signal.delta", "give one of delta, inv_delta_sq or lock"));
        }
        if s.boost.is_some() && s.cosh_boost.is_some() {
            return Err(ConfigError::invalid("signal.boost", "give boost or cosh_boost, not both"));
        }
        if s.pair && s.lock.is_none() {
            return Err(ConfigError::invalid("signal.lock", "a pair needs the lock integer"));
        }
        if s.pair && (s.delta.is_some() || s.inv_delta_sq.is_some() || s.offset.is_some()) {
            return Err(ConfigError::invalid("signal.pair", "a pair fixes delta through lock"));
        }
        if s.real && !s.pair {
            return Err(ConfigError::invalid("signal.real", "the real signal is built from a pair"));
        }
        if s.pair && s.route != RouteChoice::Bessel {
            return Err(ConfigError::invalid("signal.route", "pairs use the closed form"));
        }
        self.validate_blocks(self.experiment)
    }

    fn validate_blocks(&self, kind: ExperimentKind) -> Result<(), ConfigError> {
        let need = |present: bool, block: &str| {
            if present {
                Ok(())
            } else {
                Err(ConfigError::invalid(block, format!("block required by {}", kind.name())))
            }
        };
        match kind {
            ExperimentKind::Synth | ExperimentKind::FreqMap => Ok(()),
            ExperimentKind::Spectrum => need(self.window.is_some(), "window"),
            ExperimentKind::Transition => need(self.particle.is_some(), "particle"),
            ExperimentKind::Detune => {
                need(self.particle.is_some(), "particle")?;
                need(self.detune.is_some(), "detune")
            }
            ExperimentKind::Energy => {
                need(self.particle.is_some(), "particle")?;
                need(self.window.is_some(), "window")?;
                if !self.signal.real {
                    return Err(ConfigError::invalid("signal.real", "energy needs a real signal"));
                }
                Ok(())
            }
            ExperimentKind::Sweep => {
                let sw = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| ConfigError::invalid("sweep", "block required by sweep"))?;
                if sw.run == ExperimentKind::Sweep {
                    return Err(ConfigError::invalid("sweep.run", "sweeps do not nest"));
                }
                if sw.boost.is_some() && sw.cosh_boost.is_some() {
                    return Err(ConfigError::invalid("sweep.boost", "give boost or cosh_boost, not both"));
                }
                if sw.delta.is_some() && self.signal.pair {
                    return Err(ConfigError::invalid("sweep.delta", "a pair fixes delta through lock"));
                }
                for (name, r) in [
                    ("sweep.delta", &sw.delta),
                    ("sweep.boost", &sw.boost),
                    ("sweep.cosh_boost", &sw.cosh_boost),
                    ("sweep.length", &sw.length),
                    ("sweep.t", &sw.t),
                ] {
                    if let Some(r) = r {
                        r.resolve(name)?;
                    }
                }
                self.validate_blocks(sw.run)
            }
        }
    }

    /// Time points from the time block; `Ωt/π` entries need the gap.
    pub fn times(&self, gap: Option<f64>) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(tb) = &self.time else { return Ok(None) };
        let given = [tb.values.is_some(), tb.phase_over_pi.is_some(), tb.start.is_some() || tb.stop.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given > 1 {
            return Err(ConfigError::invalid("time", "give one of values, phase_over_pi or start/stop/points"));
        }
        let times = if let Some(v) = &tb.values {
            v.clone()
        } else if let Some(v) = &tb.phase_over_pi {
            let omega = gap.ok_or_else(|| ConfigError::invalid("time.phase_over_pi", "needs a particle gap"))?;
            v.iter().map(|x| x * std::f64::consts::PI / omega).collect()
        } else if let (Some(a), Some(b)) = (tb.start, tb.stop) {
            let n = tb.points.ok_or_else(|| ConfigError::invalid("time.points", "required with start/stop"))?;
            ladder("time", a, b, n, tb.log)?
        } else {
            return Ok(None);
        };
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(ConfigError::invalid("time", "times must be finite and non-negative"));
        }
        Ok(Some(times))
    }
}
