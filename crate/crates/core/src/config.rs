//! Machine configuration: per-digit radix, pulse width and comparator
//! threshold, plus the quantities derived from them.
//!
//! A digit programmed `k` times from rest sits at
//! `min(r_min + k * delta_r, r_max)`, where `delta_r = beta * pulse_width * (2.5 - V_T)`.
//! Everything here (level spacing, largest usable radix, the window of
//! thresholds that wraps a digit on exactly its radix-th pulse) follows from
//! that ladder of levels and the readout divider.

use std::fmt;

use thiserror::Error;

use crate::circuit::{divider_voltage, reset_duration_required, RAIL};
use crate::device::MemristorParams;
use crate::radix::{RadixSystem, DIGIT_CHARS};

/// Relative slack used when a level count lands on an integer boundary.
const LEVEL_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("digit index {0} out of range")]
    NoSuchDigit(usize),
    #[error("radix {radix} exceeds the largest base {max_base} reachable at this pulse width")]
    EmptyThresholdRange { radix: u32, max_base: u32 },
    #[error("configuration is invalid:\n{}", list(.0))]
    Invalid(Vec<Violation>),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitConfig {
    pub radix: u32,
    /// Programming pulse width in seconds.
    pub pulse_width: f64,
    /// Comparator threshold in volts.
    pub v_t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PascalineConfig {
    pub params: MemristorParams,
    /// Series readout resistor, ohm.
    pub r_series: f64,
    /// Reset one-shot width, seconds.
    pub reset_width: f64,
    /// Spacing of button presses during number entry, seconds.
    pub inter_press_gap: f64,
    /// Least significant digit first.
    pub digits: Vec<DigitConfig>,
}

pub const DEFAULT_R_SERIES: f64 = 10e3;
/// 10 kOhm * 10 uF.
pub const DEFAULT_RESET_WIDTH: f64 = 0.100;
pub const DEFAULT_INTER_PRESS_GAP: f64 = 0.150;
pub const DEFAULT_PULSE_WIDTH: f64 = 0.006;

impl Default for PascalineConfig {
    /// Four decimal digits programmed with 6 ms pulses.
    fn default() -> Self {
        PascalineConfig::uniform(4, 10, DEFAULT_PULSE_WIDTH)
    }
}

/// Half-open window `[low, high)` of comparator thresholds. A threshold in
/// the window lets the digit pass `radix - 1` pulses and wrap on the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRange {
    pub low: f64,
    pub high: f64,
}

impl ThresholdRange {
    pub fn contains(&self, v_t: f64) -> bool {
        v_t >= self.low && v_t < self.high
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }
}

impl fmt::Display for ThresholdRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.4}, {:.4}) V", self.low, self.high)
    }
}

impl PascalineConfig {
    /// `n_digits` identical digits with default electronics and each
    /// threshold at the middle of its admissible window.
    pub fn uniform(n_digits: usize, radix: u32, pulse_width: f64) -> Self {
        Self::mixed(&vec![radix; n_digits], &vec![pulse_width; n_digits])
    }

    /// Per-digit radices and pulse widths, least significant first.
    pub fn mixed(radices: &[u32], pulse_widths: &[f64]) -> Self {
        assert_eq!(radices.len(), pulse_widths.len());
        let mut cfg = PascalineConfig {
            params: MemristorParams::default(),
            r_series: DEFAULT_R_SERIES,
            reset_width: DEFAULT_RESET_WIDTH,
            inter_press_gap: DEFAULT_INTER_PRESS_GAP,
            digits: radices
                .iter()
                .zip(pulse_widths)
                .map(|(&radix, &pulse_width)| DigitConfig {
                    radix,
                    pulse_width,
                    v_t: f64::NAN,
                })
                .collect(),
        };
        cfg.center_thresholds();
        cfg
    }

    /// Set every threshold to the same value.
    pub fn with_v_t(mut self, v_t: f64) -> Self {
        for d in &mut self.digits {
            d.v_t = v_t;
        }
        self
    }

    /// Move each threshold to the middle of its admissible window. Digits
    /// whose radix cannot be reached get the readout at `r_max`.
    pub fn center_thresholds(&mut self) {
        for i in 0..self.digits.len() {
            self.digits[i].v_t = self.default_v_t(i);
        }
    }

    pub fn default_v_t(&self, i: usize) -> f64 {
        match self.admissible_threshold_range(i) {
            Ok(range) => range.midpoint(),
            Err(_) => self.readout_at(self.params.r_max),
        }
    }

    pub fn n_digits(&self) -> usize {
        self.digits.len()
    }

    pub fn radices(&self) -> Vec<u32> {
        self.digits.iter().map(|d| d.radix).collect()
    }

    pub fn radix_system(&self) -> Result<RadixSystem, crate::radix::RadixError> {
        RadixSystem::new(self.radices())
    }

    fn digit(&self, i: usize) -> Result<&DigitConfig, ConfigError> {
        self.digits.get(i).ok_or(ConfigError::NoSuchDigit(i))
    }

    /// Magnitude of the drive above threshold during a programming pulse.
    pub fn overdrive(&self) -> f64 {
        RAIL - self.params.v_threshold
    }

    /// Memristance gained per programming pulse on digit `i`, ohm.
    pub fn delta_r_per_pulse(&self, i: usize) -> Result<f64, ConfigError> {
        let d = self.digit(i)?;
        Ok(self.params.beta * d.pulse_width * self.overdrive())
    }

    /// Pulses needed to drive digit `i` from `r_min` to `r_max`: the largest
    /// base that digit can hold.
    pub fn max_base(&self, i: usize) -> Result<u32, ConfigError> {
        let dr = self.delta_r_per_pulse(i)?;
        Ok(max_base_for(&self.params, dr))
    }

    /// Memristance after `k` pulses from rest on digit `i`.
    pub fn level_resistance(&self, i: usize, k: u32) -> Result<f64, ConfigError> {
        let dr = self.delta_r_per_pulse(i)?;
        Ok((self.params.r_min + f64::from(k) * dr).min(self.params.r_max))
    }

    pub fn readout_at(&self, r: f64) -> f64 {
        divider_voltage(r, self.r_series)
    }

    /// Window of thresholds for which digit `i` resets on exactly its
    /// radix-th pulse.
    pub fn admissible_threshold_range(&self, i: usize) -> Result<ThresholdRange, ConfigError> {
        let d = *self.digit(i)?;
        let max_base = self.max_base(i)?;
        if d.radix > max_base {
            return Err(ConfigError::EmptyThresholdRange {
                radix: d.radix,
                max_base,
            });
        }
        let below = self.level_resistance(i, d.radix.saturating_sub(1))?;
        let at = self.level_resistance(i, d.radix)?;
        Ok(ThresholdRange {
            low: self.readout_at(below),
            high: self.readout_at(at),
        })
    }

    /// Pulse number (from rest) on which a comparator at `v_t` first fires,
    /// or `None` if the readout never exceeds it.
    pub fn firing_pulse(&self, i: usize, v_t: f64) -> Result<Option<u32>, ConfigError> {
        let top = self.max_base(i)?;
        for k in 1..=top {
            if self.readout_at(self.level_resistance(i, k)?) > v_t {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Memristance that encodes digit value `d` on position `i`.
    pub fn digit_to_resistance(&self, i: usize, d: u32) -> Result<f64, ConfigError> {
        Ok(self.params.r_min + f64::from(d) * self.delta_r_per_pulse(i)?)
    }

    /// Worst-case time for the carry chain to come to rest after a press.
    pub fn settle_timeout(&self) -> f64 {
        let max_pulse = self
            .digits
            .iter()
            .map(|d| d.pulse_width)
            .fold(0.0, f64::max);
        let max_radix = self.digits.iter().map(|d| d.radix).max().unwrap_or(2);
        self.n_digits() as f64 * (self.reset_width + max_pulse) * f64::from(max_radix)
    }

    /// Every broken invariant, in digit order. Empty means the machine can be
    /// built.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let global = |kind| Violation { digit: None, kind };
        if let Err(e) = self.params.validate() {
            out.push(global(ViolationKind::Device(e.to_string())));
            return out;
        }
        if self.digits.is_empty() {
            out.push(global(ViolationKind::NoDigits));
        }
        for (field, value) in [
            ("r_series", self.r_series),
            ("reset_width", self.reset_width),
            ("inter_press_gap", self.inter_press_gap),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                out.push(global(ViolationKind::NotPositive { field, value }));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..self.digits.len() {
            self.validate_digit(i, &mut out);
        }
        out
    }

    fn validate_digit(&self, i: usize, out: &mut Vec<Violation>) {
        let d = self.digits[i];
        let mut push = |kind| {
            out.push(Violation {
                digit: Some(i),
                kind,
            })
        };
        if !(d.pulse_width > 0.0 && d.pulse_width.is_finite()) {
            push(ViolationKind::NotPositive {
                field: "pulse_width",
                value: d.pulse_width,
            });
            return;
        }
        if d.radix < 2 {
            push(ViolationKind::RadixTooSmall { radix: d.radix });
            return;
        }
        if d.radix as usize > DIGIT_CHARS.len() {
            push(ViolationKind::RadixNotPrintable { radix: d.radix });
        }
        let max_base = self.max_base(i).expect("index in range");
        if d.radix > max_base {
            push(ViolationKind::RadixExceedsMaxBase {
                radix: d.radix,
                max_base,
            });
            return;
        }
        let range = self.admissible_threshold_range(i).expect("radix reachable");
        if !range.contains(d.v_t) {
            push(ViolationKind::ThresholdOutsideRange {
                v_t: d.v_t,
                radix: d.radix,
                range,
                fires_on: self.firing_pulse(i, d.v_t).expect("index in range"),
            });
        }
        let r_fire = self.level_resistance(i, d.radix).expect("index in range");
        let required = reset_duration_required(&self.params, r_fire);
        if self.reset_width < required {
            push(ViolationKind::ResetTooShort {
                reset_width: self.reset_width,
                required,
            });
        }
    }

    /// Build a validated config or report what is wrong with it.
    pub fn validated(self) -> Result<Self, ConfigError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(ConfigError::Invalid(v))
        }
    }
}

/// `ceil((r_max - r_min) / delta_r)`.
pub fn max_base_for(params: &MemristorParams, delta_r: f64) -> u32 {
    if !(delta_r > 0.0) {
        return u32::MAX;
    }
    let ratio = (params.r_max - params.r_min) / delta_r;
    (ratio * (1.0 - LEVEL_EPS))
        .ceil()
        .clamp(1.0, f64::from(u32::MAX)) as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Zero-based digit index, `None` for machine-wide settings.
    pub digit: Option<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    Device(String),
    NoDigits,
    NotPositive {
        field: &'static str,
        value: f64,
    },
    RadixTooSmall {
        radix: u32,
    },
    RadixNotPrintable {
        radix: u32,
    },
    RadixExceedsMaxBase {
        radix: u32,
        max_base: u32,
    },
    ThresholdOutsideRange {
        v_t: f64,
        radix: u32,
        range: ThresholdRange,
        fires_on: Option<u32>,
    },
    ResetTooShort {
        reset_width: f64,
        required: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.digit {
            Some(i) => write!(f, "digit {}: ", i + 1)?,
            None => write!(f, "machine: ")?,
        }
        match &self.kind {
            ViolationKind::Device(msg) => write!(f, "{msg}"),
            ViolationKind::NoDigits => write!(f, "at least one digit is required"),
            ViolationKind::NotPositive { field, value } => {
                write!(f, "{field} must be positive, got {value}")
            }
            ViolationKind::RadixTooSmall { radix } => {
                write!(f, "radix {radix} is below 2; admissible radices are 2..")
            }
            ViolationKind::RadixNotPrintable { radix } => write!(
                f,
                "radix {radix} has no digit symbols; admissible radices are 2..={}",
                DIGIT_CHARS.len()
            ),
            ViolationKind::RadixExceedsMaxBase { radix, max_base } => write!(
                f,
                "radix {radix} exceeds max_base {max_base} for this pulse width; admissible radices are 2..={max_base}"
            ),
            ViolationKind::ThresholdOutsideRange {
                v_t,
                radix,
                range,
                fires_on,
            } => {
                write!(
                    f,
                    "v_t = {v_t:.4} V outside admissible range {range} for radix {radix}; "
                )?;
                match fires_on {
                    Some(k) => write!(f, "reset would fire on pulse {k}"),
                    None => write!(f, "reset would never fire"),
                }
            }
            ViolationKind::ResetTooShort {
                reset_width,
                required,
            } => write!(
                f,
                "reset width {:.1} ms cannot return the device to r_min; admissible widths are >= {:.1} ms",
                reset_width * 1e3,
                required * 1e3
            ),
        }
    }
}
