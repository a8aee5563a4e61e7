use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use superosc::harness::{self, ExperimentConfig, ExperimentKind, HarnessError, EXIT_INVALID};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    Synth,
    Spectrum,
    FreqMap,
    Transition,
    Detune,
    Energy,
    Sweep,
}

impl From<Experiment> for ExperimentKind {
    fn from(e: Experiment) -> Self {
        match e {
            Experiment::Synth => Self::Synth,
            Experiment::Spectrum => Self::Spectrum,
            Experiment::FreqMap => Self::FreqMap,
            Experiment::Transition => Self::Transition,
            Experiment::Detune => Self::Detune,
            Experiment::Energy => Self::Energy,
            Experiment::Sweep => Self::Sweep,
        }
    }
}

/// Superoscillatory field experiments.
#[derive(Debug, Parser)]
#[command(name = "superosc", version)]
struct Cli {
    /// Must match the config's `experiment` key.
    experiment: Experiment,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides SUPEROSC_OUT and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    let cfg = ExperimentConfig::load(&cli.config)?;
    let wanted = ExperimentKind::from(cli.experiment);
    if cfg.experiment != wanted {
        return Err(harness::ConfigError::Invalid {
            field: "experiment".into(),
            message: format!("config runs {}, command line asked for {}", cfg.experiment.name(), wanted.name()),
        }
        .into());
    }
    let dir = harness::resolve_out_dir(cli.out.as_deref(), &cfg);
    let done = harness::execute(&cfg)?;
    let written = done.write(&dir)?;
    for w in &done.record.warnings {
        log::warn!("{w}");
    }
    if !cli.quiet {
        for p in &written {
            println!("{}", p.display());
        }
    }
    match done.violation {
        Some(message) => Err(HarnessError::Assertion {
            message,
            record: Box::new(done.record),
        }),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("superosc: cannot size the worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("superosc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
