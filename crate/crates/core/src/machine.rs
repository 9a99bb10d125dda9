//! The multi-digit machine: number entry, readout, addition and
//! complement subtraction, all carried out in the memristor states.

use thiserror::Error;

use crate::circuit::DigitBlock;
use crate::config::{ConfigError, PascalineConfig};
use crate::radix::{Numeral, RadixError, RadixSystem};
use crate::sim::{ButtonPress, Event, SimError, Simulator, TraceOptions, Until};
use crate::trace::Trace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MachineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Radix(#[from] RadixError),
    #[error(transparent)]
    Readout(#[from] crate::circuit::CircuitError),
    #[error(
        "digit {} holds {resistance:.1} ohm, which is not a programmed level",
        digit + 1
    )]
    Corrupted { digit: usize, resistance: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddOutcome {
    pub result: Numeral,
    pub carry_out: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubtractOutcome {
    /// Complement of the minuend, entered first.
    pub complemented_minuend: Numeral,
    /// What the wheels hold after the subtrahend was added.
    pub wheel_sum: Numeral,
    /// Complement of `wheel_sum`. Equal to the difference when it is
    /// non-negative, otherwise its radix complement.
    pub readout: Numeral,
    pub negative: bool,
    /// `|a - b|`; for negative results this is `capacity - readout`.
    pub magnitude: Numeral,
}

/// Decode one block's memristance to the nearest level.
pub fn read_digit(config: &PascalineConfig, block: &DigitBlock) -> Result<u32, MachineError> {
    let i = block.index();
    let dr = config.delta_r_per_pulse(i)?;
    let r = block.resistance();
    let steps = ((r - config.params.r_min) / dr).round();
    let corrupted = MachineError::Corrupted {
        digit: i,
        resistance: r,
    };
    if !(steps >= 0.0) || steps >= f64::from(block.radix()) {
        return Err(corrupted);
    }
    let d = steps as u32;
    let residual = (r - config.digit_to_resistance(i, d)?).abs();
    if residual >= dr / 2.0 {
        return Err(corrupted);
    }
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct Machine {
    sim: Simulator,
    system: RadixSystem,
}

impl Machine {
    pub fn new(config: PascalineConfig) -> Result<Self, MachineError> {
        Self::with_options(config, TraceOptions::default())
    }

    pub fn with_options(
        config: PascalineConfig,
        options: TraceOptions,
    ) -> Result<Self, MachineError> {
        let config = config.validated()?;
        let system = config.radix_system()?;
        Ok(Machine {
            sim: Simulator::new(config, options)?,
            system,
        })
    }

    pub fn config(&self) -> &PascalineConfig {
        self.sim.config()
    }

    pub fn system(&self) -> &RadixSystem {
        &self.system
    }

    pub fn simulator(&self) -> &Simulator {
        &self.sim
    }

    pub fn trace(&self) -> &Trace {
        self.sim.trace()
    }

    pub fn events(&self) -> &[Event] {
        self.sim.events()
    }

    pub fn carry_out_count(&self) -> usize {
        self.sim.carry_outs().len()
    }

    /// All devices at rest and nothing scheduled.
    pub fn is_clear(&self) -> bool {
        let r_min = self.config().params.r_min;
        self.sim.is_idle() && self.sim.blocks().iter().all(|b| b.resistance() == r_min)
    }

    /// Wait one press gap, then return every digit to zero.
    pub fn clear(&mut self) -> Result<(), MachineError> {
        if self.is_clear() {
            return Ok(());
        }
        let t = self.sim.now() + self.config().inter_press_gap;
        self.sim.idle_until(t)?;
        self.sim.clear()?;
        Ok(())
    }

    /// Queue `count` presses on `digit`, one gap apart, starting one gap from
    /// now. Nothing is simulated until [`Machine::settle`].
    pub fn press(&mut self, digit: usize, count: u32) -> Result<(), MachineError> {
        let gap = self.config().inter_press_gap;
        let start = self.sim.now() + gap;
        for k in 0..count {
            self.sim.schedule(ButtonPress {
                time: start + gap * f64::from(k),
                digit,
            })?;
        }
        Ok(())
    }

    /// Press each digit's button `digits[i]` times, least significant digit
    /// first, and let any carries run out.
    pub fn enter_number(&mut self, n: &Numeral) -> Result<(), MachineError> {
        self.system.check(n)?;
        let gap = self.config().inter_press_gap;
        let start = self.sim.now() + gap;
        let mut slot = 0u32;
        for (digit, &count) in n.digits().iter().enumerate() {
            for _ in 0..count {
                self.sim.schedule(ButtonPress {
                    time: start + gap * f64::from(slot),
                    digit,
                })?;
                slot += 1;
            }
        }
        self.settle()
    }

    pub fn settle(&mut self) -> Result<(), MachineError> {
        self.sim.run(Until::Quiescence)?;
        Ok(())
    }

    /// Readout voltage of every digit, least significant first.
    pub fn readout_voltages(&self) -> Result<Vec<f64>, MachineError> {
        self.sim
            .blocks()
            .iter()
            .map(|b| b.readout_voltage().map_err(MachineError::from))
            .collect()
    }

    pub fn read(&self) -> Result<Numeral, MachineError> {
        if !self.sim.is_idle() {
            return Err(SimError::Busy.into());
        }
        let digits = self
            .sim
            .blocks()
            .iter()
            .map(|b| read_digit(self.config(), b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Numeral::from_digits(digits))
    }

    /// Clear, enter `a`, enter `b` on top, read the wheels.
    pub fn add(&mut self, a: &Numeral, b: &Numeral) -> Result<AddOutcome, MachineError> {
        self.system.check(a)?;
        self.system.check(b)?;
        self.clear()?;
        let before = self.carry_out_count();
        self.enter_number(a)?;
        self.enter_number(b)?;
        Ok(AddOutcome {
            result: self.read()?,
            carry_out: self.carry_out_count() > before,
        })
    }

    /// `a - b` as the complement of `complement(a) + b`. A carry out of the
    /// addition means `b > a`.
    pub fn subtract(&mut self, a: &Numeral, b: &Numeral) -> Result<SubtractOutcome, MachineError> {
        let complemented_minuend = self.system.complement(a)?;
        let sum = self.add(&complemented_minuend, b)?;
        let readout = self.system.complement(&sum.result)?;
        let negative = sum.carry_out;
        let magnitude = if negative {
            self.system.radix_complement(&readout)?
        } else {
            readout.clone()
        };
        Ok(SubtractOutcome {
            complemented_minuend,
            wheel_sum: sum.result,
            readout,
            negative,
            magnitude,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(v: u128) -> Numeral {
        RadixSystem::uniform(10, 4).unwrap().from_value(v).unwrap()
    }

    fn machine() -> Machine {
        Machine::new(PascalineConfig::default()).unwrap()
    }

    #[test]
    fn enter_and_read_back() {
        let mut m = machine();
        m.enter_number(&dec(1642)).unwrap();
        assert_eq!(m.read().unwrap(), dec(1642));
        let r = m.simulator().resistances();
        assert!((r[0] - 1967.2).abs() < 1e-9);
        assert!((r[1] - 2934.4).abs() < 1e-9);
    }

    #[test]
    fn addition_example() {
        let out = machine().add(&dec(1642), &dec(373)).unwrap();
        assert_eq!(
            out,
            AddOutcome {
                result: dec(2015),
                carry_out: false
            }
        );
    }

    #[test]
    fn cascaded_carry() {
        let out = machine().add(&dec(999), &dec(1)).unwrap();
        assert_eq!(out.result, dec(1000));
        assert!(!out.carry_out);
    }

    #[test]
    fn wraparound_sets_carry_out() {
        let out = machine().add(&dec(9999), &dec(1)).unwrap();
        assert_eq!(out.result, dec(0));
        assert!(out.carry_out);
    }

    #[test]
    fn subtraction_example() {
        let out = machine().subtract(&dec(2015), &dec(373)).unwrap();
        assert_eq!(out.complemented_minuend, dec(7984));
        assert_eq!(out.wheel_sum, dec(8357));
        assert_eq!(out.readout, dec(1642));
        assert!(!out.negative);
    }

    #[test]
    fn negative_difference() {
        let out = machine().subtract(&dec(373), &dec(2015)).unwrap();
        assert!(out.negative);
        assert_eq!(out.magnitude, dec(1642));
        assert_eq!(out.readout, dec(8358));
    }

    #[test]
    fn subtract_zero_is_identity() {
        let mut m = machine();
        for v in [0, 1, 4321, 9999] {
            let out = m.subtract(&dec(v), &dec(0)).unwrap();
            assert_eq!(out.readout, dec(v));
            assert!(!out.negative);
        }
    }

    #[test]
    fn operations_reuse_one_machine() {
        let mut m = machine();
        assert_eq!(m.add(&dec(5), &dec(5)).unwrap().result, dec(10));
        assert_eq!(m.add(&dec(1), &dec(2)).unwrap().result, dec(3));
        let ts: Vec<f64> = m.trace().rows().iter().map(|r| r.t).collect();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_foreign_numerals() {
        let mut m = machine();
        assert!(matches!(
            m.enter_number(&Numeral::from_digits(vec![10, 0, 0, 0])),
            Err(MachineError::Radix(RadixError::DigitOutOfRange { .. }))
        ));
        assert!(m.add(&Numeral::zero(3), &dec(1)).is_err());
    }

    #[test]
    fn corrupted_level_detected() {
        let cfg = PascalineConfig::default();
        let mut b = DigitBlock::new(
            0,
            cfg.params,
            cfg.r_series,
            crate::circuit::PulseGenerator::new(0.006),
            crate::circuit::ResetCircuit::new(0.9, 0.1),
            10,
        );
        let p = cfg.params;
        b.set_device(crate::device::MemristorState::new(&p, 1483.6 + 230.0).unwrap());
        assert_eq!(read_digit(&cfg, &b).unwrap(), 1);
        // nearest level is 10, which a decimal digit cannot hold
        b.set_device(crate::device::MemristorState::new(&p, 6000.0).unwrap());
        assert!(matches!(
            read_digit(&cfg, &b),
            Err(MachineError::Corrupted { digit: 0, .. })
        ));
    }

    #[test]
    fn invalid_config_is_refused() {
        let cfg = PascalineConfig::default().with_v_t(0.8);
        assert!(matches!(
            Machine::new(cfg),
            Err(MachineError::Config(ConfigError::Invalid(_)))
        ));
    }
}
