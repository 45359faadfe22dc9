//! Command-line front end. All inverse temperatures are the dimensionless
//! product `J beta` and fields are given as `h / J`; presets use `J = 1` and
//! system files are read in units of `J`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::build_protocol_circuit;
use crate::error::Error;
use crate::ising::{Preset, SpinSystem};
use crate::par::{self, Execution};
use crate::qasm::{export_qasm, parse_angle};
use crate::sim::NoiseConfig;
use crate::zeros::{self, LocusModel, SweepMode};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 1;

const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Parser)]
#[command(
    name = "fisherzeros",
    version,
    about = "Locate purely imaginary Fisher zeros of Ising clusters by circuit simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate |Z|^2 over a J*beta grid as CSV.
    Sweep(RunArgs),
    /// Report zeros found by sweep and refinement as JSON lines.
    Zeros {
        #[command(flatten)]
        run: RunArgs,
        /// Also emit refined minima that failed certification.
        #[arg(long)]
        all: bool,
    },
    /// Solve the closed-form zero locus over an h*beta grid.
    Locus {
        #[arg(long)]
        model: String,
        /// h*beta grid: start stop step (accepts `pi` forms such as 8pi, pi/10).
        #[arg(long, num_args = 3, value_names = ["START", "STOP", "STEP"], allow_negative_numbers = true)]
        grid: Option<Vec<String>>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the protocol circuit at one J*beta.
    ExportQasm {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, allow_negative_numbers = true)]
        jbeta: String,
        #[arg(long, value_enum, default_value_t = CircuitFormat::Qasm)]
        format: CircuitFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitFormat {
    Qasm,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Shots,
    Noisy,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct SystemSource {
    /// Preset cluster: chain3, triangle3 or lagos7.
    #[arg(long)]
    system: Option<String>,
    /// JSON system file {"n_sites", "bonds": [[i, j, J], ...], "field"}.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    #[command(flatten)]
    source: SystemSource,
    /// Field in units of the coupling (presets only).
    #[arg(
        long = "h-over-j",
        default_value_t = 0.0,
        allow_negative_numbers = true,
        conflicts_with = "config"
    )]
    h_over_j: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// J*beta grid: start stop step (accepts `pi` forms such as 8pi, pi/10).
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "STEP"], allow_negative_numbers = true)]
    grid: Option<Vec<String>>,
    /// Defaults to `noisy` with --noise, `shots` with --shots, else `exact`.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, env = "FISHERZEROS_SEED", default_value_t = 0)]
    seed: u64,
    /// JSON noise file {"depol_2q", "depol_1q", "readout_flip"}.
    #[arg(long)]
    noise: Option<PathBuf>,
    /// Worker threads for the sweep (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Fully resolved sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SpinSystem,
    pub grid: Vec<f64>,
    pub mode: SweepMode,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooManySites { .. } => EXIT_CAP,
            _ => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

impl SystemArgs {
    fn resolve(&self) -> Result<SpinSystem, CliError> {
        if let Some(path) = &self.source.config {
            return SpinSystem::from_json(&read_file(path)?).map_err(|e| CliError::config(e.to_string()));
        }
        let name = self.source.system.as_deref().unwrap_or_default();
        let preset: Preset = name.parse()?;
        if preset == Preset::Lagos7 && self.h_over_j != 0.0 {
            eprintln!("note: lagos7 is field-free; ignoring --h-over-j {}", self.h_over_j);
        }
        Ok(SpinSystem::preset(preset, 1.0, self.h_over_j)?)
    }
}

fn parse_grid(values: &Option<Vec<String>>) -> Result<Vec<f64>, CliError> {
    match values {
        None => Ok(zeros::default_grid()),
        Some(v) => {
            let nums = v.iter().map(|s| parse_angle(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(zeros::jbeta_grid(nums[0], nums[1], nums[2])?)
        }
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let system = self.system.resolve()?;
        let grid = parse_grid(&self.grid)?;
        let mode = self.mode.unwrap_or(if self.noise.is_some() {
            ModeArg::Noisy
        } else if self.shots.is_some() {
            ModeArg::Shots
        } else {
            ModeArg::Exact
        });
        let shots = self.shots.unwrap_or(DEFAULT_SHOTS);
        if shots == 0 && mode != ModeArg::Exact {
            return Err(Error::ZeroShots.into());
        }
        let mode = match mode {
            ModeArg::Exact => SweepMode::Exact,
            ModeArg::Shots => SweepMode::Shots { shots, seed: self.seed },
            ModeArg::Noisy => {
                let noise = match &self.noise {
                    Some(path) => {
                        NoiseConfig::from_json(&read_file(path)?).map_err(|e| CliError::config(e.to_string()))?
                    }
                    None => NoiseConfig::default(),
                };
                SweepMode::Noisy {
                    noise,
                    shots,
                    seed: self.seed,
                }
            }
        };
        if self.threads == Some(0) {
            return Err(CliError::config("--threads must be at least 1"));
        }
        Ok(RunConfig {
            system,
            grid,
            mode,
            threads: self.threads,
            output: self.output.clone(),
        })
    }
}

fn emit(output: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let records = par::with_threads(cfg.threads, || {
        zeros::sweep_with(&cfg.system, 1.0, &cfg.grid, cfg.mode, Execution::default())
    })?;
    let mut buf = Vec::new();
    zeros::write_csv(&records, &mut buf).map_err(|e| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    emit(&cfg.output, stdout, &buf)
}

pub fn cmd_zeros(cfg: &RunConfig, keep_uncertified: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    let reports = par::with_threads(cfg.threads, || {
        zeros::find_zeros(
            &cfg.system,
            1.0,
            &cfg.grid,
            cfg.mode,
            keep_uncertified,
            Execution::default(),
        )
    })?;
    let mut buf = Vec::new();
    for r in &reports {
        serde_json::to_writer(&mut buf, r).expect("report serializes");
        buf.push(b'\n');
    }
    emit(&cfg.output, stdout, &buf)
}

pub fn cmd_locus(
    model: LocusModel,
    hbeta_grid: &[f64],
    output: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let join = |items: Vec<String>| items.join(";");
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    };
    w.write_record(["hbeta", "kind", "roots", "jbeta"]).map_err(io_err)?;
    for &hb in hbeta_grid {
        let sol = model.solve(hb);
        let roots = join(
            sol.roots
                .iter()
                .map(|r| {
                    format!(
                        "{}:{}",
                        serde_json::to_value(r.branch).unwrap().as_str().unwrap(),
                        r.cosine
                    )
                })
                .collect(),
        );
        let jb = join(model.jbeta_values(&sol).iter().map(|x| x.to_string()).collect());
        w.write_record([hb.to_string(), sol.kind.to_string(), roots, jb])
            .map_err(io_err)?;
    }
    let buf = w.into_inner().map_err(|e| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    emit(output, stdout, &buf)
}

pub fn cmd_export_qasm(
    system: &SpinSystem,
    jbeta: f64,
    format: CircuitFormat,
    output: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if !jbeta.is_finite() {
        return Err(CliError::config(format!("J*beta must be finite, got {jbeta}")));
    }
    let circuit = build_protocol_circuit(system, jbeta);
    let text = match format {
        CircuitFormat::Qasm => export_qasm(&circuit),
        CircuitFormat::Json => circuit.to_json() + "\n",
    };
    emit(output, stdout, text.as_bytes())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
                return Ok(());
            }
            return Err(CliError::config(e.to_string()));
        }
    };
    match cli.command {
        Command::Sweep(run) => cmd_sweep(&run.resolve()?, stdout),
        Command::Zeros { run, all } => cmd_zeros(&run.resolve()?, all, stdout),
        Command::Locus { model, grid, output } => {
            let model: LocusModel = model.parse()?;
            cmd_locus(model, &parse_grid(&grid)?, &output, stdout)
        }
        Command::ExportQasm {
            system,
            jbeta,
            format,
            output,
        } => {
            let sys = system.resolve()?;
            cmd_export_qasm(&sys, parse_angle(&jbeta)?, format, &output, stdout)
        }
    }
}
