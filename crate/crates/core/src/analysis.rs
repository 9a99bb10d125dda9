//! Experiment drivers: AC hysteresis sweeps, pulse-train response of a single
//! digit, and the arithmetic waveforms, each exported as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::PascalineConfig;
use crate::device::{DeviceError, MemristorParams};
use crate::machine::{AddOutcome, Machine, MachineError, SubtractOutcome};
use crate::radix::RadixSystem;
use crate::sim::{ComparatorSample, TraceOptions};
use crate::trace::{sig9, Trace};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{0}")]
    InvalidInput(String),
    #[error("step {dt} s is too coarse; at {frequency} Hz it must not exceed {max} s")]
    StepTooCoarse { dt: f64, frequency: f64, max: f64 },
    #[error(
        "trace does not cover whole cycles: {samples} samples for {cycles} cycles of {per_cycle}"
    )]
    PartialCycle {
        samples: usize,
        cycles: usize,
        per_cycle: usize,
    },
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Drive settings for an AC sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcDrive {
    pub amplitude: f64,
    pub frequency: f64,
    pub cycles: usize,
    pub warmup_cycles: usize,
    /// Largest acceptable integrator step, seconds.
    pub dt: f64,
}

impl AcDrive {
    /// 2 warm-up plus 3 recorded cycles at 2000 steps per period.
    pub fn new(amplitude: f64, frequency: f64) -> Self {
        AcDrive {
            amplitude,
            frequency,
            cycles: 3,
            warmup_cycles: 2,
            dt: 1.0 / (2000.0 * frequency),
        }
    }
}

/// Frequencies of the reference sweep, Hz.
pub const SWEEP_FREQUENCIES: [f64; 3] = [5.0, 20.0, 80.0];
pub const SWEEP_AMPLITUDE: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvSample {
    pub t: f64,
    pub v: f64,
    pub i: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvTrace {
    pub samples: Vec<IvSample>,
    pub samples_per_cycle: usize,
    pub cycles: usize,
}

impl IvTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,v_V,i_A,r_ohm\n");
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{}",
                sig9(s.t),
                sig9(s.v),
                sig9(s.i),
                sig9(s.r)
            )
            .unwrap();
        }
        out
    }
}

/// Drive a fresh device at `r_min` with `amplitude * sin(2 pi f t)` using the
/// fixed-step integrator. The step is shrunk to an even divisor of the
/// period so every half cycle starts on a sample.
pub fn hysteresis_run(params: &MemristorParams, drive: AcDrive) -> Result<IvTrace, AnalysisError> {
    params.validate()?;
    let AcDrive {
        amplitude,
        frequency,
        cycles,
        warmup_cycles,
        dt,
    } = drive;
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(AnalysisError::InvalidInput(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    if !(frequency > 0.0 && frequency.is_finite()) {
        return Err(AnalysisError::InvalidInput(format!(
            "frequency must be positive, got {frequency}"
        )));
    }
    if cycles == 0 {
        return Err(AnalysisError::InvalidInput(
            "at least one cycle must be recorded".into(),
        ));
    }
    let period = 1.0 / frequency;
    let max = period / 1000.0;
    if !(dt > 0.0) || dt > max * (1.0 + 1e-12) {
        return Err(AnalysisError::StepTooCoarse { dt, frequency, max });
    }
    let mut per_cycle = (period / dt).ceil() as usize;
    per_cycle += per_cycle % 2;
    let half = per_cycle / 2;
    let step = period / per_cycle as f64;

    let first = warmup_cycles * per_cycle;
    let last = (warmup_cycles + cycles) * per_cycle;
    let mut state = params.reset_state();
    let mut samples = Vec::with_capacity(last - first + 1);
    for n in 0..=last {
        let v = if n % half == 0 {
            0.0
        } else {
            let phase = (n % per_cycle) as f64 / per_cycle as f64;
            amplitude * (2.0 * PI * phase).sin()
        };
        if n >= first {
            samples.push(IvSample {
                t: n as f64 * step,
                v,
                i: state.current(v),
                r: state.resistance(),
            });
        }
        if n < last {
            state = params.step(state, v, step)?;
        }
    }
    Ok(IvTrace {
        samples,
        samples_per_cycle: per_cycle,
        cycles,
    })
}

/// Enclosed I-V area of each recorded cycle, V*A.
///
/// The loop is pinched at the origin, so each half cycle closes on itself.
/// The two lobes circulate in opposite senses; the shoelace area of each lobe
/// is taken separately and their magnitudes are summed.
pub fn loop_area(iv: &IvTrace) -> Result<Vec<f64>, AnalysisError> {
    let per_cycle = iv.samples_per_cycle;
    if per_cycle < 2
        || !per_cycle.is_multiple_of(2)
        || iv.samples.len() != iv.cycles * per_cycle + 1
    {
        return Err(AnalysisError::PartialCycle {
            samples: iv.samples.len(),
            cycles: iv.cycles,
            per_cycle,
        });
    }
    let half = per_cycle / 2;
    let areas = (0..iv.cycles)
        .map(|c| {
            let start = c * per_cycle;
            let lobe_a = shoelace(&iv.samples[start..=start + half]);
            let lobe_b = shoelace(&iv.samples[start + half..=start + per_cycle]);
            lobe_a.abs() + lobe_b.abs()
        })
        .collect();
    Ok(areas)
}

pub fn mean_loop_area(iv: &IvTrace) -> Result<f64, AnalysisError> {
    let a = loop_area(iv)?;
    Ok(a.iter().sum::<f64>() / a.len() as f64)
}

fn shoelace(points: &[IvSample]) -> f64 {
    let n = points.len();
    let mut twice = 0.0;
    for k in 0..n {
        let p = points[k];
        let q = points[(k + 1) % n];
        twice += p.v * q.i - q.v * p.i;
    }
    0.5 * twice
}

/// Response of one digit to a train of button presses.
#[derive(Debug, Clone)]
pub struct PulseTrain {
    pub trace: Trace,
    /// Comparator decisions on the driven digit, one per pulse.
    pub comparisons: Vec<ComparatorSample>,
}

impl PulseTrain {
    /// 1-based pulse numbers on which the digit reset.
    pub fn reset_pulses(&self) -> Vec<usize> {
        self.comparisons
            .iter()
            .enumerate()
            .filter(|(_, c)| c.fired)
            .map(|(k, _)| k + 1)
            .collect()
    }
}

/// Press `digit` (zero-based) `count` times on a fresh machine.
pub fn pulse_train(
    config: PascalineConfig,
    digit: usize,
    count: u32,
    sample_dt: Option<f64>,
) -> Result<PulseTrain, AnalysisError> {
    let mut m = Machine::with_options(config, TraceOptions { sample_dt })?;
    if digit >= m.config().n_digits() {
        return Err(AnalysisError::InvalidInput(format!(
            "digit {} does not exist; the machine has {} digits",
            digit + 1,
            m.config().n_digits()
        )));
    }
    m.press(digit, count)?;
    m.settle()?;
    // one quiet gap after the train so the final level is visible
    let comparisons = m
        .simulator()
        .comparisons()
        .iter()
        .filter(|c| c.digit == digit)
        .copied()
        .collect();
    let mut sim = m.simulator().clone();
    let tail = sim.now() + sim.config().inter_press_gap;
    sim.idle_until(tail).map_err(MachineError::from)?;
    Ok(PulseTrain {
        trace: sim.into_trace(),
        comparisons,
    })
}

/// Single-digit base-5 setup: 10 ms pulses and a 0.8 V threshold.
pub fn base5_config() -> PascalineConfig {
    PascalineConfig::uniform(1, 5, 0.010).with_v_t(0.8)
}

/// Uniform grid used for the exported figure traces.
pub const FIGURE_SAMPLE_DT: f64 = 1e-3;

#[derive(Debug)]
pub struct FigureBundle {
    /// `(file name, CSV contents)`, in a fixed order.
    pub files: Vec<(String, String)>,
    pub base5: PulseTrain,
    pub addition: AddOutcome,
    pub subtraction: SubtractOutcome,
    pub loop_areas: Vec<(f64, f64)>,
}

/// Regenerate every reference trace.
pub fn figure_bundle() -> Result<FigureBundle, AnalysisError> {
    let mut files = Vec::new();

    let base5 = pulse_train(base5_config(), 0, 5, Some(FIGURE_SAMPLE_DT))?;
    files.push(("fig2d.csv".to_string(), base5.trace.to_csv()));

    let dec = RadixSystem::uniform(10, 4).expect("decimal system");
    let num = |v| dec.from_value(v).expect("fits four digits");
    let options = TraceOptions {
        sample_dt: Some(FIGURE_SAMPLE_DT),
    };

    let mut m = Machine::with_options(PascalineConfig::default(), options)?;
    let addition = m.add(&num(1642), &num(373))?;
    files.push(("fig3a.csv".to_string(), m.trace().to_csv()));

    let mut m = Machine::with_options(PascalineConfig::default(), options)?;
    let subtraction = m.subtract(&num(2015), &num(373))?;
    files.push(("fig3b.csv".to_string(), m.trace().to_csv()));

    let params = MemristorParams::default();
    let mut loop_areas = Vec::new();
    for f in SWEEP_FREQUENCIES {
        let iv = hysteresis_run(&params, AcDrive::new(SWEEP_AMPLITUDE, f))?;
        loop_areas.push((f, mean_loop_area(&iv)?));
        files.push((format!("fig2c_{f}Hz.csv"), iv.to_csv()));
    }

    Ok(FigureBundle {
        files,
        base5,
        addition,
        subtraction,
        loop_areas,
    })
}

/// Write the bundle into `dir`, creating it if needed.
pub fn write_figures(dir: &Path) -> Result<Vec<PathBuf>, AnalysisError> {
    std::fs::create_dir_all(dir).map_err(|source| AnalysisError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let bundle = figure_bundle()?;
    let mut written = Vec::new();
    for (name, csv) in bundle.files {
        let path = dir.join(name);
        std::fs::write(&path, csv).map_err(|source| AnalysisError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

/// Number of full-width programming pulses that take a device from `r_min`
/// to `r_max` with no comparator attached.
pub fn saturation_pulses(params: &MemristorParams, pulse_width: f64, limit: u32) -> Option<u32> {
    let mut s = params.reset_state();
    for k in 1..=limit {
        s = params.advance(s, crate::circuit::PROGRAM_AMPLITUDE, pulse_width);
        if s.resistance() >= params.r_max {
            return Some(k);
        }
    }
    None
}
