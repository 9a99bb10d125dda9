//! Deterministic event-driven transient engine.
//!
//! Every drive in the machine is piecewise constant, so between two events
//! each device is advanced with the exact constant-drive update and no
//! time step is involved. Events at equal times are ordered by digit index,
//! then by [`EventKind`] in declaration order.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::circuit::{DigitBlock, PulseGenerator, ResetCircuit, ResetPhase};
use crate::config::{ConfigError, PascalineConfig};
use crate::trace::{DigitSample, Trace, TraceRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("carry chain still active at t = {time} s (deadline {deadline} s)")]
    Unsettled { time: f64, deadline: f64 },
    #[error("event at t = {time} s is earlier than the simulation clock {now} s")]
    InThePast { time: f64, now: f64 },
    #[error("no digit {0}")]
    NoSuchDigit(usize),
    #[error("sample interval must be positive, got {0}")]
    BadSampleInterval(f64),
    #[error("machine is not idle")]
    Busy,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    ButtonTrigger,
    PulseStart,
    PulseEnd,
    ResetStart,
    ResetEnd,
    CarryTrigger,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    /// Zero-based digit index.
    pub digit: usize,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy)]
struct Queued {
    event: Event,
    seq: u64,
}

impl Queued {
    fn key(&self) -> impl Ord + '_ {
        (
            TotalF64(self.event.time),
            self.event.digit,
            self.event.kind,
            self.seq,
        )
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TotalF64(f64);

impl Eq for TotalF64 {}

impl PartialOrd for TotalF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TotalF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// An external trigger on a digit's pulse generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ButtonPress {
    pub time: f64,
    pub digit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Until {
    /// Run until no events remain; errors past the settle deadline.
    Quiescence,
    /// Process events up to and including this time, then stop there.
    Time(f64),
}

/// One comparator decision at the end of a programming pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparatorSample {
    pub time: f64,
    pub digit: usize,
    pub v_m: f64,
    pub resistance: f64,
    pub fired: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceOptions {
    /// Extra rows on a uniform grid between event boundaries.
    pub sample_dt: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Simulator {
    config: PascalineConfig,
    blocks: Vec<DigitBlock>,
    queue: BinaryHeap<Reverse<Queued>>,
    seq: u64,
    now: f64,
    last_input: f64,
    sample_dt: Option<f64>,
    trace: Trace,
    log: Vec<Event>,
    comparisons: Vec<ComparatorSample>,
    carry_outs: Vec<f64>,
}

impl Simulator {
    pub fn new(config: PascalineConfig, options: TraceOptions) -> Result<Self, SimError> {
        let config = config.validated()?;
        if let Some(dt) = options.sample_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(SimError::BadSampleInterval(dt));
            }
        }
        let blocks = config
            .digits
            .iter()
            .enumerate()
            .map(|(i, d)| {
                DigitBlock::new(
                    i,
                    config.params,
                    config.r_series,
                    PulseGenerator::new(d.pulse_width),
                    ResetCircuit::new(d.v_t, config.reset_width),
                    d.radix,
                )
            })
            .collect();
        let mut sim = Simulator {
            trace: Trace::new(config.n_digits()),
            config,
            blocks,
            queue: BinaryHeap::new(),
            seq: 0,
            now: 0.0,
            last_input: 0.0,
            sample_dt: options.sample_dt,
            log: Vec::new(),
            comparisons: Vec::new(),
            carry_outs: Vec::new(),
        };
        sim.record_row();
        Ok(sim)
    }

    pub fn config(&self) -> &PascalineConfig {
        &self.config
    }

    pub fn blocks(&self) -> &[DigitBlock] {
        &self.blocks
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    /// Processed events: triggers as they arrive, pulse and reset edges as
    /// they happen.
    pub fn events(&self) -> &[Event] {
        &self.log
    }

    pub fn comparisons(&self) -> &[ComparatorSample] {
        &self.comparisons
    }

    /// Times at which the most significant digit reset with nowhere to send
    /// its carry.
    pub fn carry_outs(&self) -> &[f64] {
        &self.carry_outs
    }

    pub fn is_idle(&self) -> bool {
        self.queue.is_empty() && self.blocks.iter().all(DigitBlock::is_quiescent)
    }

    pub fn resistances(&self) -> Vec<f64> {
        self.blocks.iter().map(DigitBlock::resistance).collect()
    }

    pub fn schedule(&mut self, press: ButtonPress) -> Result<(), SimError> {
        if press.digit >= self.blocks.len() {
            return Err(SimError::NoSuchDigit(press.digit));
        }
        if !(press.time >= self.now) {
            return Err(SimError::InThePast {
                time: press.time,
                now: self.now,
            });
        }
        self.last_input = self.last_input.max(press.time);
        self.push(press.time, press.digit, EventKind::ButtonTrigger);
        Ok(())
    }

    pub fn run(&mut self, until: Until) -> Result<(), SimError> {
        let limit = match until {
            Until::Time(t) => Some(t),
            Until::Quiescence => None,
        };
        let deadline = self.last_input.max(self.now) + self.config.settle_timeout();
        while let Some(Reverse(next)) = self.queue.peek().copied() {
            let t = next.event.time;
            if limit.is_some_and(|l| t > l) {
                break;
            }
            if limit.is_none() && t > deadline {
                return Err(SimError::Unsettled { time: t, deadline });
            }
            self.queue.pop();
            self.advance_to(t);
            self.handle(next.event);
            let more_now = self
                .queue
                .peek()
                .is_some_and(|Reverse(q)| q.event.time == t);
            if !more_now {
                self.record_row();
            }
        }
        if let Some(l) = limit {
            if l > self.now {
                self.advance_to(l);
                self.record_row();
            }
        }
        Ok(())
    }

    /// Let time pass with nothing scheduled.
    pub fn idle_until(&mut self, t: f64) -> Result<(), SimError> {
        if !self.queue.is_empty() {
            return Err(SimError::Busy);
        }
        self.run(Until::Time(t))
    }

    /// Return every device to rest at the current time, as a manual clear of
    /// the wheels. Only allowed while idle.
    pub fn clear(&mut self) -> Result<(), SimError> {
        if !self.is_idle() {
            return Err(SimError::Busy);
        }
        for b in &mut self.blocks {
            b.clear();
        }
        self.record_row();
        Ok(())
    }

    fn push(&mut self, time: f64, digit: usize, kind: EventKind) {
        let seq = self.seq;
        self.seq += 1;
        self.queue.push(Reverse(Queued {
            event: Event { time, digit, kind },
            seq,
        }));
    }

    fn advance_to(&mut self, t: f64) {
        let dt = t - self.now;
        if dt <= 0.0 {
            return;
        }
        if let Some(step) = self.sample_dt {
            let mut k = (self.now / step).floor() + 1.0;
            loop {
                let ts = k * step;
                if ts >= t {
                    break;
                }
                if ts > self.now {
                    let row = self.row_after(ts - self.now, ts);
                    self.trace.record(row);
                }
                k += 1.0;
            }
        }
        for b in &mut self.blocks {
            b.advance(dt);
        }
        self.now = t;
    }

    fn handle(&mut self, ev: Event) {
        let t = ev.time;
        let d = ev.digit;
        match ev.kind {
            EventKind::ButtonTrigger | EventKind::CarryTrigger => {
                self.log.push(ev);
                self.blocks[d].trigger();
                self.push(t, d, EventKind::PulseStart);
            }
            EventKind::PulseStart => {
                if self.blocks[d].can_start_pulse() {
                    let end = self.blocks[d].start_pulse(t);
                    self.log.push(ev);
                    self.push(end, d, EventKind::PulseEnd);
                }
            }
            EventKind::PulseEnd => {
                self.log.push(ev);
                let block = &mut self.blocks[d];
                block.end_pulse();
                let v_m = block.sense_voltage();
                let resistance = block.resistance();
                let fired = block.check_and_fire_reset(t).is_some();
                self.comparisons.push(ComparatorSample {
                    time: t,
                    digit: d,
                    v_m,
                    resistance,
                    fired,
                });
                if fired {
                    self.push(t, d, EventKind::ResetStart);
                } else if self.blocks[d].generator().pending() > 0 {
                    self.push(t, d, EventKind::PulseStart);
                }
            }
            EventKind::ResetStart => {
                self.log.push(ev);
                let until = match self.blocks[d].reset_circuit().phase() {
                    ResetPhase::Firing { until } => until,
                    ResetPhase::Armed => unreachable!("reset start without firing"),
                };
                self.push(until, d, EventKind::ResetEnd);
                if d + 1 < self.blocks.len() {
                    self.push(t, d + 1, EventKind::CarryTrigger);
                } else {
                    self.carry_outs.push(t);
                }
            }
            EventKind::ResetEnd => {
                self.log.push(ev);
                self.blocks[d].end_reset();
                if self.blocks[d].generator().pending() > 0 {
                    self.push(t, d, EventKind::PulseStart);
                }
            }
        }
    }

    fn sample(b: &DigitBlock, resistance: f64) -> DigitSample {
        let pulse = !b.generator().is_idle();
        let reset = !b.reset_circuit().is_armed();
        let v_m = if pulse || reset {
            b.drive_voltage()
        } else {
            crate::circuit::divider_voltage(resistance, b.r_series())
        };
        DigitSample {
            v_m,
            resistance,
            pulse,
            reset,
        }
    }

    fn row_after(&self, dt: f64, t: f64) -> TraceRow {
        TraceRow {
            t,
            digits: self
                .blocks
                .iter()
                .map(|b| Self::sample(b, b.resistance_after(dt).resistance()))
                .collect(),
        }
    }

    fn record_row(&mut self) {
        let row = TraceRow {
            t: self.now,
            digits: self
                .blocks
                .iter()
                .map(|b| Self::sample(b, b.resistance()))
                .collect(),
        };
        self.trace.record(row);
    }
}

/// Run a fresh machine on `schedule` and return its trace.
pub fn run(
    config: PascalineConfig,
    schedule: &[ButtonPress],
    until: Until,
    options: TraceOptions,
) -> Result<Trace, SimError> {
    Ok(simulate(config, schedule, until, options)?.into_trace())
}

/// Like [`run`] but keeps the whole simulator for inspection.
pub fn simulate(
    config: PascalineConfig,
    schedule: &[ButtonPress],
    until: Until,
    options: TraceOptions,
) -> Result<Simulator, SimError> {
    let mut sim = Simulator::new(config, options)?;
    let mut sorted = schedule.to_vec();
    sorted.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.digit.cmp(&b.digit)));
    for p in sorted {
        sim.schedule(p)?;
    }
    sim.run(until)?;
    Ok(sim)
}

/// Run the same inputs twice and compare the CSV bytes of both traces.
pub fn replay_identical(
    config: &PascalineConfig,
    schedule: &[ButtonPress],
    until: Until,
    options: TraceOptions,
) -> Result<bool, SimError> {
    let a = run(config.clone(), schedule, until, options)?.to_csv();
    let b = run(config.clone(), schedule, until, options)?.to_csv();
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base5() -> PascalineConfig {
        PascalineConfig::uniform(1, 5, 0.010).with_v_t(0.8)
    }

    fn presses(digit: usize, n: usize, gap: f64) -> Vec<ButtonPress> {
        (0..n)
            .map(|k| ButtonPress {
                time: gap * (k + 1) as f64,
                digit,
            })
            .collect()
    }

    #[test]
    fn empty_schedule_is_constant() {
        let t = run(
            PascalineConfig::default(),
            &[],
            Until::Time(1.0),
            TraceOptions {
                sample_dt: Some(0.1),
            },
        )
        .unwrap();
        let first = &t.rows()[0].digits;
        assert!(t.rows().iter().all(|r| &r.digits == first));
        assert_eq!(t.rows().last().unwrap().t, 1.0);
    }

    #[test]
    fn base5_train_resets_on_fifth() {
        let sim = simulate(
            base5(),
            &presses(0, 5, 0.15),
            Until::Quiescence,
            TraceOptions::default(),
        )
        .unwrap();
        let fired: Vec<bool> = sim.comparisons().iter().map(|c| c.fired).collect();
        assert_eq!(fired, vec![false, false, false, false, true]);
        assert_eq!(sim.resistances(), vec![1000.0]);
        assert_eq!(sim.carry_outs().len(), 1);
        let v: Vec<f64> = sim.comparisons().iter().map(|c| c.v_m).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn cascade_orders_resets() {
        let cfg = PascalineConfig::default();
        let sched = [ButtonPress {
            time: 0.1,
            digit: 0,
        }];
        let mut sim = Simulator::new(cfg, TraceOptions::default()).unwrap();
        // 0999
        for idx in 0..3 {
            let r = sim.config.digit_to_resistance(idx, 9).unwrap();
            let p = *sim.blocks[idx].params();
            sim.blocks[idx].set_device(crate::device::MemristorState::new(&p, r).unwrap());
        }
        for p in sched {
            sim.schedule(p).unwrap();
        }
        sim.run(Until::Quiescence).unwrap();
        let resets: Vec<f64> = sim
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::ResetStart)
            .map(|e| e.time)
            .collect();
        assert_eq!(resets.len(), 3);
        assert!(resets.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn queued_trigger_during_reset_is_not_lost() {
        // press again 20 ms after the wrap, while the reset is still firing
        let mut sched = presses(0, 5, 0.15);
        sched.push(ButtonPress {
            time: 0.75 + 0.010 + 0.020,
            digit: 0,
        });
        let sim = simulate(base5(), &sched, Until::Quiescence, TraceOptions::default()).unwrap();
        let r = sim.resistances()[0];
        assert!((r - 1806.0).abs() < 1e-9, "{r}");
        let starts = sim
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::PulseStart)
            .count();
        assert_eq!(starts, 6);
    }

    #[test]
    fn sampling_does_not_change_final_state() {
        let sched = presses(0, 4, 0.15);
        let a = simulate(base5(), &sched, Until::Quiescence, TraceOptions::default()).unwrap();
        let b = simulate(
            base5(),
            &sched,
            Until::Quiescence,
            TraceOptions {
                sample_dt: Some(7e-4),
            },
        )
        .unwrap();
        assert_eq!(a.resistances(), b.resistances());
        assert!(b.trace().len() > a.trace().len());
        let ts: Vec<f64> = b.trace().rows().iter().map(|r| r.t).collect();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_schedule() {
        let mut sim = Simulator::new(base5(), TraceOptions::default()).unwrap();
        assert_eq!(
            sim.schedule(ButtonPress {
                time: 0.0,
                digit: 3
            }),
            Err(SimError::NoSuchDigit(3))
        );
        sim.run(Until::Time(1.0)).unwrap();
        assert!(matches!(
            sim.schedule(ButtonPress {
                time: 0.5,
                digit: 0
            }),
            Err(SimError::InThePast { .. })
        ));
        assert!(Simulator::new(
            base5(),
            TraceOptions {
                sample_dt: Some(0.0)
            }
        )
        .is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = PascalineConfig::uniform(4, 10, 0.006).with_v_t(0.8);
        assert!(matches!(
            Simulator::new(cfg, TraceOptions::default()),
            Err(SimError::Config(ConfigError::Invalid(_)))
        ));
    }

    #[test]
    fn simultaneous_presses_are_canonical() {
        let cfg = PascalineConfig::default();
        let a = [
            ButtonPress {
                time: 0.1,
                digit: 0,
            },
            ButtonPress {
                time: 0.1,
                digit: 2,
            },
        ];
        let b = [a[1], a[0]];
        let ta = run(cfg.clone(), &a, Until::Quiescence, TraceOptions::default()).unwrap();
        let tb = run(cfg, &b, Until::Quiescence, TraceOptions::default()).unwrap();
        assert_eq!(ta.to_csv(), tb.to_csv());
    }
}
