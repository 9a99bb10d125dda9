//! Line-oriented `key = value` configuration files.
//!
//! ```text
//! # four decimal digits, 6 ms programming pulses
//! digits = 4
//! bases = 10
//! pulse_width_ms = 6
//! v_t = 0.9
//! ```
//!
//! Per-digit keys (`bases`, `pulse_width_ms`, `v_t`) take either one value
//! for every digit or a comma-separated list, least significant digit first.
//! Digits without an explicit `v_t` get the middle of their threshold window.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::config::{DigitConfig, PascalineConfig};
use crate::device::MemristorParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{key} lists {got} values for {digits} digits")]
    ListLength {
        key: &'static str,
        got: usize,
        digits: usize,
    },
    #[error("digits must be at least 1")]
    NoDigits,
}

pub const KEYS: [&str; 11] = [
    "digits",
    "bases",
    "pulse_width_ms",
    "v_t",
    "beta",
    "v_threshold",
    "r_min",
    "r_max",
    "r_series",
    "reset_width_ms",
    "inter_press_gap_ms",
];

/// Partial settings. Later layers override earlier ones key by key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub digits: Option<usize>,
    pub bases: Option<Vec<u32>>,
    pub pulse_width_ms: Option<Vec<f64>>,
    pub v_t: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub v_threshold: Option<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_series: Option<f64>,
    pub reset_width_ms: Option<f64>,
    pub inter_press_gap_ms: Option<f64>,
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<T>()
                .map_err(|_| format!("cannot parse '{item}'"))
        })
        .collect()
}

fn parse_one<T: FromStr>(value: &str) -> Result<T, String> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| format!("cannot parse '{}'", value.trim()))
}

impl ConfigOverrides {
    pub fn parse(text: &str) -> Result<Self, ConfigFileError> {
        let mut out = ConfigOverrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ConfigFileError::Syntax {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected 'key = value', got '{line}'")))?;
            out.set(key.trim(), value).map_err(syntax)?;
        }
        Ok(out)
    }

    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "digits" => self.digits = Some(parse_one(value)?),
            "bases" => self.bases = Some(parse_list(value)?),
            "pulse_width_ms" => self.pulse_width_ms = Some(parse_list(value)?),
            "v_t" => self.v_t = Some(parse_list(value)?),
            "beta" => self.beta = Some(parse_one(value)?),
            "v_threshold" => self.v_threshold = Some(parse_one(value)?),
            "r_min" => self.r_min = Some(parse_one(value)?),
            "r_max" => self.r_max = Some(parse_one(value)?),
            "r_series" => self.r_series = Some(parse_one(value)?),
            "reset_width_ms" => self.reset_width_ms = Some(parse_one(value)?),
            "inter_press_gap_ms" => self.inter_press_gap_ms = Some(parse_one(value)?),
            other => {
                return Err(format!(
                    "unknown key '{other}' (known keys: {})",
                    KEYS.join(", ")
                ))
            }
        }
        Ok(())
    }

    /// `other` wins wherever it sets a key.
    pub fn overlay(self, other: ConfigOverrides) -> Self {
        ConfigOverrides {
            digits: other.digits.or(self.digits),
            bases: other.bases.or(self.bases),
            pulse_width_ms: other.pulse_width_ms.or(self.pulse_width_ms),
            v_t: other.v_t.or(self.v_t),
            beta: other.beta.or(self.beta),
            v_threshold: other.v_threshold.or(self.v_threshold),
            r_min: other.r_min.or(self.r_min),
            r_max: other.r_max.or(self.r_max),
            r_series: other.r_series.or(self.r_series),
            reset_width_ms: other.reset_width_ms.or(self.reset_width_ms),
            inter_press_gap_ms: other.inter_press_gap_ms.or(self.inter_press_gap_ms),
        }
    }

    /// Fill unset keys from the defaults. The digit count comes from
    /// `digits`, else the longest per-digit list, else 4.
    pub fn resolve(&self) -> Result<PascalineConfig, ConfigFileError> {
        let defaults = PascalineConfig::default();
        let longest = [
            self.bases.as_ref().map(Vec::len),
            self.pulse_width_ms.as_ref().map(Vec::len),
            self.v_t.as_ref().map(Vec::len),
        ]
        .into_iter()
        .flatten()
        .max();
        let n = self
            .digits
            .or(longest.filter(|&l| l > 1))
            .unwrap_or(defaults.n_digits());
        if n == 0 {
            return Err(ConfigFileError::NoDigits);
        }
        let bases = spread("bases", self.bases.as_deref(), n, 10)?;
        let widths = spread(
            "pulse_width_ms",
            self.pulse_width_ms.as_deref(),
            n,
            defaults.digits[0].pulse_width * 1e3,
        )?;
        let thresholds = match &self.v_t {
            Some(v) => Some(spread("v_t", Some(v), n, f64::NAN)?),
            None => None,
        };
        let d = MemristorParams::default();
        let mut cfg = PascalineConfig {
            params: MemristorParams {
                alpha: d.alpha,
                beta: self.beta.unwrap_or(d.beta),
                v_threshold: self.v_threshold.unwrap_or(d.v_threshold),
                r_min: self.r_min.unwrap_or(d.r_min),
                r_max: self.r_max.unwrap_or(d.r_max),
            },
            r_series: self.r_series.unwrap_or(defaults.r_series),
            reset_width: self
                .reset_width_ms
                .map_or(defaults.reset_width, |ms| ms * 1e-3),
            inter_press_gap: self
                .inter_press_gap_ms
                .map_or(defaults.inter_press_gap, |ms| ms * 1e-3),
            digits: bases
                .iter()
                .zip(&widths)
                .map(|(&radix, &ms)| DigitConfig {
                    radix,
                    pulse_width: ms * 1e-3,
                    v_t: f64::NAN,
                })
                .collect(),
        };
        match thresholds {
            Some(v) => {
                for (d, v_t) in cfg.digits.iter_mut().zip(v) {
                    d.v_t = v_t;
                }
            }
            None => cfg.center_thresholds(),
        }
        Ok(cfg)
    }
}

fn spread<T: Copy>(
    key: &'static str,
    values: Option<&[T]>,
    n: usize,
    default: T,
) -> Result<Vec<T>, ConfigFileError> {
    match values {
        None => Ok(vec![default; n]),
        Some([one]) => Ok(vec![*one; n]),
        Some(list) if list.len() == n => Ok(list.to_vec()),
        Some(list) => Err(ConfigFileError::ListLength {
            key,
            got: list.len(),
            digits: n,
        }),
    }
}

fn join<T>(items: impl Iterator<Item = T>, f: impl Fn(T) -> String) -> String {
    items.map(f).collect::<Vec<_>>().join(", ")
}

/// Render a config in file form; parsing the text back gives the same config.
pub fn to_config_text(cfg: &PascalineConfig) -> String {
    let mut s = String::new();
    let p = &cfg.params;
    writeln!(s, "digits = {}", cfg.n_digits()).unwrap();
    writeln!(
        s,
        "bases = {}",
        join(cfg.digits.iter(), |d| d.radix.to_string())
    )
    .unwrap();
    writeln!(
        s,
        "pulse_width_ms = {}",
        join(cfg.digits.iter(), |d| (d.pulse_width * 1e3).to_string())
    )
    .unwrap();
    writeln!(
        s,
        "v_t = {}",
        join(cfg.digits.iter(), |d| d.v_t.to_string())
    )
    .unwrap();
    writeln!(s, "beta = {}", p.beta).unwrap();
    writeln!(s, "v_threshold = {}", p.v_threshold).unwrap();
    writeln!(s, "r_min = {}", p.r_min).unwrap();
    writeln!(s, "r_max = {}", p.r_max).unwrap();
    writeln!(s, "r_series = {}", cfg.r_series).unwrap();
    writeln!(s, "reset_width_ms = {}", cfg.reset_width * 1e3).unwrap();
    writeln!(s, "inter_press_gap_ms = {}", cfg.inter_press_gap * 1e3).unwrap();
    s
}
