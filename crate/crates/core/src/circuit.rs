//! Behavioral models of the per-digit electronics.
//!
//! A [`DigitBlock`] is one memristor with its series readout resistor to the
//! +2.5 V rail, a one-shot programming pulse generator and a comparator-driven
//! reset circuit. All voltages are relative to the 2.5 V virtual ground.

use thiserror::Error;

use crate::device::{MemristorParams, MemristorState};

/// Half of the 5 V supply: the rail seen from the virtual ground.
pub const RAIL: f64 = 2.5;
/// Programming amplitude across the device.
pub const PROGRAM_AMPLITUDE: f64 = -RAIL;
/// Reset amplitude across the device.
pub const RESET_AMPLITUDE: f64 = RAIL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("readout is undefined while digit {digit} is being driven")]
    ReadoutDuringDrive { digit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorPhase {
    Idle,
    Emitting { until: f64 },
}

/// One-shot programming pulse source. Triggers that arrive while a pulse is
/// in progress are counted and replayed later.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseGenerator {
    pulse_width: f64,
    phase: GeneratorPhase,
    pending: u32,
}

impl PulseGenerator {
    pub fn new(pulse_width: f64) -> Self {
        PulseGenerator {
            pulse_width,
            phase: GeneratorPhase::Idle,
            pending: 0,
        }
    }

    pub fn pulse_width(&self) -> f64 {
        self.pulse_width
    }

    pub fn phase(&self) -> GeneratorPhase {
        self.phase
    }

    pub fn pending(&self) -> u32 {
        self.pending
    }

    pub fn is_idle(&self) -> bool {
        self.phase == GeneratorPhase::Idle
    }

    pub fn trigger(&mut self) {
        self.pending += 1;
    }

    /// Output voltage, or `None` while disconnected.
    pub fn output(&self) -> Option<f64> {
        match self.phase {
            GeneratorPhase::Idle => None,
            GeneratorPhase::Emitting { .. } => Some(PROGRAM_AMPLITUDE),
        }
    }

    fn start(&mut self, t: f64) -> f64 {
        debug_assert!(self.is_idle() && self.pending > 0);
        self.pending -= 1;
        let until = t + self.pulse_width;
        self.phase = GeneratorPhase::Emitting { until };
        until
    }

    fn finish(&mut self) {
        self.phase = GeneratorPhase::Idle;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResetPhase {
    Armed,
    Firing { until: f64 },
}

/// Comparator plus monostable. Fires a fixed-width +2.5 V pulse when the
/// readout voltage exceeds `v_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResetCircuit {
    v_t: f64,
    reset_width: f64,
    phase: ResetPhase,
}

impl ResetCircuit {
    pub fn new(v_t: f64, reset_width: f64) -> Self {
        ResetCircuit {
            v_t,
            reset_width,
            phase: ResetPhase::Armed,
        }
    }

    pub fn v_t(&self) -> f64 {
        self.v_t
    }

    pub fn reset_width(&self) -> f64 {
        self.reset_width
    }

    pub fn phase(&self) -> ResetPhase {
        self.phase
    }

    pub fn is_armed(&self) -> bool {
        self.phase == ResetPhase::Armed
    }

    fn rearm(&mut self) {
        self.phase = ResetPhase::Armed;
    }
}

/// Emitted on the rising edge of a reset pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrySignal {
    pub from_digit: usize,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DigitBlock {
    index: usize,
    device: MemristorState,
    params: MemristorParams,
    r_series: f64,
    generator: PulseGenerator,
    reset: ResetCircuit,
    radix: u32,
}

impl DigitBlock {
    /// A block with its memristor at `r_min`.
    pub fn new(
        index: usize,
        params: MemristorParams,
        r_series: f64,
        generator: PulseGenerator,
        reset: ResetCircuit,
        radix: u32,
    ) -> Self {
        DigitBlock {
            index,
            device: params.reset_state(),
            params,
            r_series,
            generator,
            reset,
            radix,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn device(&self) -> MemristorState {
        self.device
    }

    pub fn params(&self) -> &MemristorParams {
        &self.params
    }

    pub fn r_series(&self) -> f64 {
        self.r_series
    }

    pub fn generator(&self) -> &PulseGenerator {
        &self.generator
    }

    pub fn reset_circuit(&self) -> &ResetCircuit {
        &self.reset
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn resistance(&self) -> f64 {
        self.device.resistance()
    }

    pub fn is_quiescent(&self) -> bool {
        self.generator.is_idle() && self.reset.is_armed()
    }

    /// Voltage across the memristor in the divider from the +2.5 V rail.
    pub fn readout_voltage(&self) -> Result<f64, CircuitError> {
        if !self.is_quiescent() {
            return Err(CircuitError::ReadoutDuringDrive { digit: self.index });
        }
        Ok(self.sense_voltage())
    }

    /// Divider voltage regardless of drive state; what the comparator sees.
    pub fn sense_voltage(&self) -> f64 {
        divider_voltage(self.device.resistance(), self.r_series)
    }

    /// Voltage forced across the device by the generator or reset circuit.
    pub fn drive_voltage(&self) -> f64 {
        if let ResetPhase::Firing { .. } = self.reset.phase {
            RESET_AMPLITUDE
        } else {
            self.generator.output().unwrap_or(0.0)
        }
    }

    /// Node voltage as it would appear on a scope probe across the device.
    pub fn probe_voltage(&self) -> f64 {
        if self.is_quiescent() {
            self.sense_voltage()
        } else {
            self.drive_voltage()
        }
    }

    /// Apply one complete programming pulse outside of any event schedule.
    pub fn apply_program_pulse(&mut self) {
        self.device =
            self.params
                .advance(self.device, PROGRAM_AMPLITUDE, self.generator.pulse_width);
    }

    /// Comparator decision at the end of a programming pulse. On a crossing
    /// the reset circuit starts firing at `t` and the carry is returned.
    pub fn check_and_fire_reset(&mut self, t: f64) -> Option<CarrySignal> {
        if !self.reset.is_armed() || !self.generator.is_idle() {
            return None;
        }
        if self.sense_voltage() > self.reset.v_t {
            self.reset.phase = ResetPhase::Firing {
                until: t + self.reset.reset_width,
            };
            Some(CarrySignal {
                from_digit: self.index,
                time: t,
            })
        } else {
            None
        }
    }

    /// Integrate the device under its present drive for `dt` seconds.
    pub fn advance(&mut self, dt: f64) {
        self.device = self.resistance_after(dt);
    }

    /// State the device would reach after `dt` seconds without changing it.
    pub fn resistance_after(&self, dt: f64) -> MemristorState {
        self.params.advance(self.device, self.drive_voltage(), dt)
    }

    pub(crate) fn can_start_pulse(&self) -> bool {
        self.is_quiescent() && self.generator.pending > 0
    }

    pub(crate) fn trigger(&mut self) {
        self.generator.trigger();
    }

    pub(crate) fn start_pulse(&mut self, t: f64) -> f64 {
        self.generator.start(t)
    }

    pub(crate) fn end_pulse(&mut self) {
        self.generator.finish();
    }

    pub(crate) fn end_reset(&mut self) {
        self.reset.rearm();
    }

    /// Put the device back to `r_min` and drop queued triggers.
    pub(crate) fn clear(&mut self) {
        self.device = self.params.reset_state();
        self.generator = PulseGenerator::new(self.generator.pulse_width);
        self.reset.rearm();
    }

    #[cfg(test)]
    pub(crate) fn set_device(&mut self, state: MemristorState) {
        self.device = state;
    }
}

/// `RAIL * r / (r + r_series)`.
pub fn divider_voltage(r: f64, r_series: f64) -> f64 {
    RAIL * r / (r + r_series)
}

/// Shortest reset pulse that brings a device at `r_at_reset` down to `r_min`.
pub fn reset_duration_required(params: &MemristorParams, r_at_reset: f64) -> f64 {
    let rate = -params.unclipped_rate(RESET_AMPLITUDE);
    ((r_at_reset - params.r_min) / rate).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(pulse_width: f64, v_t: f64) -> DigitBlock {
        DigitBlock::new(
            0,
            MemristorParams::default(),
            10e3,
            PulseGenerator::new(pulse_width),
            ResetCircuit::new(v_t, 0.1),
            5,
        )
    }

    fn with_r(mut b: DigitBlock, r: f64) -> DigitBlock {
        b.set_device(MemristorState::new(b.params(), r).unwrap());
        b
    }

    #[test]
    fn readout_divider() {
        let b = block(0.01, 0.8);
        assert!((b.readout_voltage().unwrap() - 2.5 / 11.0).abs() < 1e-12);
        let b = with_r(block(0.01, 0.8), 10_000.0);
        assert_eq!(b.readout_voltage().unwrap(), 1.25);
        let b = with_r(block(0.01, 0.8), 5030.0);
        assert!((b.readout_voltage().unwrap() - 0.836_660).abs() < 1e-6);
    }

    #[test]
    fn readout_rejected_mid_pulse() {
        let mut b = block(0.01, 0.8);
        b.trigger();
        b.start_pulse(0.0);
        assert_eq!(
            b.readout_voltage(),
            Err(CircuitError::ReadoutDuringDrive { digit: 0 })
        );
        assert_eq!(b.drive_voltage(), -2.5);
    }

    #[test]
    fn program_pulse_steps() {
        let mut b = block(0.006, 0.9);
        b.apply_program_pulse();
        assert!((b.resistance() - 1483.6).abs() < 1e-9);
        let mut b = block(0.010, 0.8);
        b.apply_program_pulse();
        assert!((b.resistance() - 1806.0).abs() < 1e-9);
        let mut b = with_r(block(0.006, 0.9), 10_000.0);
        b.apply_program_pulse();
        assert_eq!(b.resistance(), 10_000.0);
    }

    #[test]
    fn base5_comparator_fires_on_fifth_pulse() {
        let mut b = block(0.010, 0.8);
        for _ in 0..4 {
            b.apply_program_pulse();
            assert!(b.check_and_fire_reset(0.0).is_none());
        }
        assert!((b.resistance() - 4224.0).abs() < 1e-9);
        assert!((b.sense_voltage() - 0.742_407).abs() < 1e-6);
        b.apply_program_pulse();
        let carry = b.check_and_fire_reset(0.5).expect("fifth pulse resets");
        assert_eq!(
            carry,
            CarrySignal {
                from_digit: 0,
                time: 0.5
            }
        );
        assert_eq!(b.drive_voltage(), 2.5);
        b.advance(0.1);
        assert_eq!(b.resistance(), 1000.0);
    }

    #[test]
    fn fresh_block_never_resets_above_rest_voltage() {
        let mut b = block(0.010, 0.3);
        assert!(b.check_and_fire_reset(0.0).is_none());
    }

    #[test]
    fn reset_duration() {
        let p = MemristorParams::default();
        assert!((reset_duration_required(&p, 5836.0) - 0.060).abs() < 1e-12);
        assert_eq!(reset_duration_required(&p, 1000.0), 0.0);
        assert!((reset_duration_required(&p, 10_000.0) - 9000.0 / 80_600.0).abs() < 1e-12);
    }

    #[test]
    fn readout_is_monotone_in_pulses() {
        let mut b = block(0.006, 2.0);
        let mut last = b.readout_voltage().unwrap();
        for _ in 0..18 {
            b.apply_program_pulse();
            let v = b.readout_voltage().unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn quiescent_block_is_constant() {
        let mut b = with_r(block(0.006, 0.9), 3210.0);
        b.advance(1e3);
        assert_eq!(b.resistance(), 3210.0);
    }
}
