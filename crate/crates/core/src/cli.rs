//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 configuration error,
//! 3 expression parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, AcDrive};
use crate::config::PascalineConfig;
use crate::config_file::{to_config_text, ConfigOverrides};
use crate::device::MemristorParams;
use crate::expr::{evaluate, parse_expression};
use crate::machine::Machine;
use crate::sim::TraceOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pascaline",
    version,
    about = "Memristive adding machine simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a +/- chain on the simulated machine.
    Eval {
        expr: String,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the machine trace as CSV.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Add trace rows on a uniform grid, milliseconds.
        #[arg(long, value_name = "MS")]
        sample_ms: Option<f64>,
    },
    /// Drive a single device with a sine wave and export the I-V loop.
    Hysteresis {
        #[arg(long, value_name = "V")]
        amplitude: f64,
        #[arg(long, value_name = "HZ")]
        freq: f64,
        #[arg(long, default_value_t = 3)]
        cycles: usize,
        #[arg(long, default_value_t = 2)]
        warmup: usize,
        /// Integrator step in seconds; default period/2000.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Press one digit's button repeatedly and export the trace.
    PulseTrain {
        /// 1-based digit, least significant is 1.
        #[arg(long)]
        digit: usize,
        #[arg(long)]
        count: u32,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "MS", default_value_t = 1.0)]
        sample_ms: f64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write every reference trace into a directory.
    Figures {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Check a configuration and list every violated constraint.
    ValidateConfig {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

/// Machine settings shared by the simulation commands. Per-digit lists are
/// comma separated, least significant digit first.
#[derive(Debug, Args, Default, Clone)]
pub struct ConfigArgs {
    /// Configuration file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Radix of every digit.
    #[arg(long, conflicts_with = "bases")]
    pub base: Option<u32>,
    /// Per-digit radices.
    #[arg(long, value_name = "LIST")]
    pub bases: Option<String>,
    #[arg(long)]
    pub digits: Option<usize>,
    /// Programming pulse width(s), milliseconds.
    #[arg(long, value_name = "MS|LIST")]
    pub pulse_width: Option<String>,
    /// Comparator threshold(s), volts.
    #[arg(long, value_name = "V|LIST")]
    pub v_t: Option<String>,
    /// Echo the effective configuration to stderr.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Parse(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Other(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Parse(m) | Failure::Other(m) => m,
        }
    }
}

fn other(e: impl std::fmt::Display) -> Failure {
    Failure::Other(e.to_string())
}

impl ConfigArgs {
    fn overrides(&self) -> Result<ConfigOverrides, Failure> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
                ConfigOverrides::parse(&text)
                    .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
            }
            None => ConfigOverrides::default(),
        };
        let mut flags = ConfigOverrides {
            digits: self.digits,
            ..Default::default()
        };
        let set = |o: &mut ConfigOverrides, key: &str, value: &Option<String>| {
            if let Some(v) = value {
                o.set(key, v)
                    .map_err(|m| Failure::Config(format!("--{key}: {m}")))?;
            }
            Ok::<_, Failure>(())
        };
        if let Some(b) = self.base {
            flags.bases = Some(vec![b]);
        }
        set(&mut flags, "bases", &self.bases)?;
        set(&mut flags, "pulse_width_ms", &self.pulse_width)?;
        set(&mut flags, "v_t", &self.v_t)?;
        Ok(file.overlay(flags))
    }

    /// Effective configuration, validated.
    pub fn resolve(&self, err: &mut dyn Write) -> Result<PascalineConfig, i32> {
        let cfg = self.resolve_unchecked(err).map_err(|f| report(err, &f))?;
        let violations = cfg.validate();
        if !violations.is_empty() {
            for v in &violations {
                let _ = writeln!(err, "{v}");
            }
            return Err(EXIT_CONFIG);
        }
        Ok(cfg)
    }

    fn resolve_unchecked(&self, err: &mut dyn Write) -> Result<PascalineConfig, Failure> {
        let cfg = self
            .overrides()?
            .resolve()
            .map_err(|e| Failure::Config(e.to_string()))?;
        if self.verbose {
            let _ = write!(err, "{}", to_config_text(&cfg));
        }
        Ok(cfg)
    }
}

fn report(err: &mut dyn Write, f: &Failure) -> i32 {
    let _ = writeln!(err, "error: {}", f.message());
    f.code()
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    execute(cli.command, out, err)
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match command {
        Command::Eval {
            expr,
            config,
            trace,
            sample_ms,
        } => {
            let cfg = match config.resolve(err) {
                Ok(c) => c,
                Err(code) => return code,
            };
            finish(eval(&expr, cfg, trace.as_deref(), sample_ms, out), err)
        }
        Command::Hysteresis {
            amplitude,
            freq,
            cycles,
            warmup,
            dt,
            out: path,
        } => {
            let mut drive = AcDrive::new(amplitude, freq);
            drive.cycles = cycles;
            drive.warmup_cycles = warmup;
            if let Some(dt) = dt {
                drive.dt = dt;
            }
            finish(hysteresis(drive, path.as_deref(), out, err), err)
        }
        Command::PulseTrain {
            digit,
            count,
            out: path,
            sample_ms,
            config,
        } => {
            let cfg = match config.resolve(err) {
                Ok(c) => c,
                Err(code) => return code,
            };
            finish(
                pulse_train(cfg, digit, count, sample_ms, path.as_deref(), out, err),
                err,
            )
        }
        Command::Figures { out: dir } => finish(figures(&dir, out), err),
        Command::ValidateConfig { config } => validate(&config, out, err),
    }
}

fn finish(r: Result<(), Failure>, err: &mut dyn Write) -> i32 {
    match r {
        Ok(()) => EXIT_OK,
        Err(f) => report(err, &f),
    }
}

fn eval(
    text: &str,
    cfg: PascalineConfig,
    trace: Option<&Path>,
    sample_ms: Option<f64>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let options = TraceOptions {
        sample_dt: sample_ms.map(|ms| ms * 1e-3),
    };
    let mut machine =
        Machine::with_options(cfg, options).map_err(|e| Failure::Config(e.to_string()))?;
    let expr = parse_expression(text, machine.system()).map_err(|e| {
        let pad = " ".repeat(e.position.saturating_sub(1));
        Failure::Parse(format!("{e}\n  {text}\n  {pad}^"))
    })?;
    let result = evaluate(&expr, &mut machine).map_err(other)?;
    writeln!(out, "{}", result.render(machine.system())).map_err(other)?;
    if let Some(path) = trace {
        write_file(path, &machine.trace().to_csv())?;
    }
    Ok(())
}

fn hysteresis(
    drive: AcDrive,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let iv = analysis::hysteresis_run(&MemristorParams::default(), drive).map_err(other)?;
    let area = analysis::mean_loop_area(&iv).map_err(other)?;
    let csv = iv.to_csv();
    let summary = format!(
        "{} Hz, {} V: mean loop area {:.6e} V*A over {} cycles",
        drive.frequency, drive.amplitude, area, iv.cycles
    );
    emit(path, &csv, &summary, out, err)
}

/// CSV to the file when given (summary on stdout), else CSV on stdout and
/// the summary on stderr.
fn emit(
    path: Option<&Path>,
    csv: &str,
    summary: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            write_file(p, csv)?;
            writeln!(out, "{summary}").map_err(other)?;
            writeln!(out, "wrote {}", p.display()).map_err(other)
        }
        None => {
            write!(out, "{csv}").map_err(other)?;
            writeln!(err, "{summary}").map_err(other)
        }
    }
}

fn pulse_train(
    cfg: PascalineConfig,
    digit: usize,
    count: u32,
    sample_ms: f64,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    if digit == 0 {
        return Err(Failure::Other("--digit is 1-based".into()));
    }
    let sample = (sample_ms > 0.0).then_some(sample_ms * 1e-3);
    let train = analysis::pulse_train(cfg, digit - 1, count, sample).map_err(other)?;
    let mut summary = String::new();
    for (k, c) in train.comparisons.iter().enumerate() {
        summary.push_str(&format!(
            "pulse {}: V_M = {:.4} V, R = {:.1} ohm{}\n",
            k + 1,
            c.v_m,
            c.resistance,
            if c.fired { " -> reset" } else { "" }
        ));
    }
    let resets = train.reset_pulses();
    summary.push_str(&format!(
        "{} reset(s), on pulse(s) {:?}",
        resets.len(),
        resets
    ));
    emit(path, &train.trace.to_csv(), &summary, out, err)
}

fn figures(dir: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let written = analysis::write_figures(dir).map_err(other)?;
    for p in written {
        writeln!(out, "{}", p.display()).map_err(other)?;
    }
    Ok(())
}

fn validate(args: &ConfigArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match args.resolve_unchecked(err) {
        Ok(c) => c,
        Err(f) => return report(err, &f),
    };
    let violations = cfg.validate();
    if violations.is_empty() {
        let _ = writeln!(out, "configuration is valid");
        for i in 0..cfg.n_digits() {
            let range = cfg.admissible_threshold_range(i).expect("valid config");
            let _ = writeln!(
                out,
                "digit {}: radix {}, max_base {}, v_t {:.4} V in {range}",
                i + 1,
                cfg.digits[i].radix,
                cfg.max_base(i).expect("digit exists"),
                cfg.digits[i].v_t
            );
        }
        EXIT_OK
    } else {
        for v in &violations {
            let _ = writeln!(out, "{v}");
        }
        EXIT_CONFIG
    }
}
