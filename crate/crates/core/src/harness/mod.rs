//! Reproducible experiment driver behind the `superosc` binary.
//!
//! A run reads one TOML config, executes the named experiment and writes
//! `<experiment>.json` (the [`RunRecord`]), `<experiment>.payload.json` (the
//! payload alone, byte-stable across runs) and any CSV series.

mod config;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{
    ConfigError, DetuneBlock, ExperimentConfig, ExperimentKind, GapSpec, GridBlock, ModesBlock, OutputBlock,
    ParticleBlock, RangeSpec, RouteChoice, SignalBlock, SweepBlock, TimeBlock, WindowBlock,
};
pub use experiments::{
    Certificate, DetunePayload, EnergyPayload, FreqPayload, SpectrumPayload, SweepLine, SweepPayload, SynthPayload,
    TransitionPayload,
};
pub use output::{csv_string, emit_figure_data, fmt_float, Cell, FigureSeries, Region};

use crate::dynamics::DynamicsError;
use crate::field::FieldError;
use crate::ledger::LedgerError;
use crate::signal::SignalError;

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
/// Overrides the configured output directory.
pub const OUT_ENV: &str = "SUPEROSC_OUT";
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{message}")]
    Core { message: String, validation: bool },
    #[error("assertion failed: {message}")]
    Assertion { message: String, record: Box<RunRecord> },
    #[error("record has no {0} payload")]
    MissingPayload(String),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub(crate) fn serialize(e: serde_json::Error) -> Self {
        Self::Serialize(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_INVALID,
            Self::Core { validation: true, .. } => EXIT_INVALID,
            Self::Assertion { .. } => EXIT_ASSERTION,
            _ => EXIT_FAILURE,
        }
    }
}

fn signal_is_validation(e: &SignalError) -> bool {
    matches!(
        e,
        SignalError::InvalidParams(_)
            | SignalError::WindowTooLong { .. }
            | SignalError::PhaseLockViolation(_)
            | SignalError::InvalidGrid(_)
    )
}

impl From<SignalError> for HarnessError {
    fn from(e: SignalError) -> Self {
        Self::Core {
            validation: signal_is_validation(&e),
            message: format!("signal: {e}"),
        }
    }
}

impl From<FieldError> for HarnessError {
    fn from(e: FieldError) -> Self {
        let validation = match &e {
            FieldError::Signal(s) => signal_is_validation(s),
            FieldError::InvalidGrid(_) | FieldError::NotReal | FieldError::CutoffMissing => true,
            _ => false,
        };
        Self::Core {
            validation,
            message: format!("field: {e}"),
        }
    }
}

impl From<DynamicsError> for HarnessError {
    fn from(e: DynamicsError) -> Self {
        Self::Core {
            validation: matches!(e, DynamicsError::InvalidParticle(_) | DynamicsError::InvalidInput(_)),
            message: format!("dynamics: {e}"),
        }
    }
}

impl From<LedgerError> for HarnessError {
    fn from(e: LedgerError) -> Self {
        match e {
            LedgerError::Field(f) => f.into(),
            e => Self::Core {
                validation: matches!(e, LedgerError::ShortTime { .. } | LedgerError::InvalidInput(_)),
                message: format!("ledger: {e}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Synth(SynthPayload),
    Spectrum(SpectrumPayload),
    FreqMap(FreqPayload),
    Transition(TransitionPayload),
    Detune(DetunePayload),
    Energy(EnergyPayload),
    Sweep(SweepPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub experiment: ExperimentKind,
    pub config_hash: String,
    pub wall_clock_seconds: f64,
    pub payload: Payload,
    pub warnings: Vec<String>,
}

/// SHA-256 of the parsed config; independent of key order and formatting.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let canonical = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(canonical))
}

/// `--out`, then `SUPEROSC_OUT`, then the config, then `out`.
pub fn resolve_out_dir(cli: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    cfg.output
        .dir
        .as_deref()
        .map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), PathBuf::from)
}

/// In-memory result of one experiment.
#[derive(Debug, Clone)]
pub struct Executed {
    pub record: RunRecord,
    /// `(file name, contents)` for the CSV and JSON-lines series.
    pub files: Vec<(String, String)>,
    /// Set when a checked property failed; outputs are still produced.
    pub violation: Option<String>,
}

impl Executed {
    pub fn payload_json(&self) -> Result<String, HarnessError> {
        let mut s = serde_json::to_string_pretty(&self.record.payload).map_err(HarnessError::serialize)?;
        s.push('\n');
        Ok(s)
    }

    pub fn record_json(&self) -> Result<String, HarnessError> {
        let mut s = serde_json::to_string_pretty(&self.record).map_err(HarnessError::serialize)?;
        s.push('\n');
        Ok(s)
    }

    /// Writes the record, the payload and the series under `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
        let name = self.record.experiment.name();
        let mut written = Vec::new();
        let mut put = |file: String, contents: &str| -> Result<(), HarnessError> {
            let path = dir.join(file);
            output::write_file(&path, contents)?;
            written.push(path);
            Ok(())
        };
        put(format!("{name}.json"), &self.record_json()?)?;
        put(format!("{name}.payload.json"), &self.payload_json()?)?;
        for (file, contents) in &self.files {
            put(file.clone(), contents)?;
        }
        Ok(written)
    }
}

/// Runs the experiment without touching the disk.
pub fn execute(cfg: &ExperimentConfig) -> Result<Executed, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let outcome = experiments::execute(cfg)?;
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        experiment: cfg.experiment,
        config_hash: config_hash(cfg),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        payload: outcome.payload,
        warnings: outcome.warnings,
    };
    Ok(Executed {
        record,
        files: outcome.files,
        violation: outcome.violation,
    })
}

/// Loads `config`, runs it and writes all outputs. A failed check yields
/// [`HarnessError::Assertion`] after the outputs are written.
pub fn run(config: &Path, out: Option<&Path>) -> Result<(RunRecord, PathBuf), HarnessError> {
    let cfg = ExperimentConfig::load(config)?;
    let dir = resolve_out_dir(out, &cfg);
    let done = execute(&cfg)?;
    done.write(&dir)?;
    match done.violation {
        Some(message) => Err(HarnessError::Assertion {
            message,
            record: Box::new(done.record),
        }),
        None => Ok((done.record, dir)),
    }
}
