//! Threshold-type memristive device.
//!
//! The memristance `R` is the only state variable. Its rate of change is
//!
//! ```text
//! dR/dt = -(beta*v + (alpha - beta)/2 * (|v + V_T| - |v - V_T|))
//! ```
//!
//! restricted to `[r_min, r_max]`. With `alpha = 0` the device is frozen for
//! `|v| <= V_T` and moves at `-beta*(v - V_T*sign(v))` above threshold, so a
//! negative drive raises the memristance and a positive drive lowers it.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("drive voltage must be finite, got {0}")]
    NonFiniteVoltage(f64),
    #[error("duration must be a finite non-negative number of seconds, got {0}")]
    InvalidDuration(f64),
    #[error("integrator step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("resistance {resistance} ohm outside [{r_min}, {r_max}]")]
    ResistanceOutOfRange {
        resistance: f64,
        r_min: f64,
        r_max: f64,
    },
    #[error("invalid device parameters: {0}")]
    InvalidParams(&'static str),
}

/// Device constants. Rates are in ohm per volt-second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorParams {
    pub alpha: f64,
    pub beta: f64,
    pub v_threshold: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for MemristorParams {
    /// The emulated device used by the four-digit machine.
    fn default() -> Self {
        MemristorParams {
            alpha: 0.0,
            beta: 62e3,
            v_threshold: 1.2,
            r_min: 1e3,
            r_max: 10e3,
        }
    }
}

impl MemristorParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        let all_finite = [
            self.alpha,
            self.beta,
            self.v_threshold,
            self.r_min,
            self.r_max,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !all_finite {
            return Err(DeviceError::InvalidParams("all parameters must be finite"));
        }
        if self.r_min <= 0.0 {
            return Err(DeviceError::InvalidParams("r_min must be positive"));
        }
        if self.r_max <= self.r_min {
            return Err(DeviceError::InvalidParams("r_max must exceed r_min"));
        }
        if self.v_threshold <= 0.0 {
            return Err(DeviceError::InvalidParams("v_threshold must be positive"));
        }
        if self.beta <= 0.0 {
            return Err(DeviceError::InvalidParams("beta must be positive"));
        }
        if self.alpha < 0.0 {
            return Err(DeviceError::InvalidParams("alpha must be non-negative"));
        }
        Ok(())
    }

    /// Rate without rail clipping.
    pub fn unclipped_rate(&self, v: f64) -> f64 {
        // piecewise form of the expression in the module docs; exact zero in
        // the dead zone when alpha = 0
        let vt = self.v_threshold;
        let f = if v.abs() <= vt {
            self.alpha * v
        } else {
            let edge = vt.copysign(v);
            self.beta * (v - edge) + self.alpha * edge
        };
        -f
    }

    /// State derivative at drive `v`, zero wherever the rail would be crossed.
    pub fn dr_dt(&self, state: MemristorState, v: f64) -> Result<f64, DeviceError> {
        check_voltage(v)?;
        let rate = self.unclipped_rate(v);
        let r = state.resistance;
        if (r >= self.r_max && rate > 0.0) || (r <= self.r_min && rate < 0.0) {
            Ok(0.0)
        } else {
            Ok(rate)
        }
    }

    /// Exact update for a drive held constant over `duration` seconds.
    pub fn integrate_const(
        &self,
        state: MemristorState,
        v: f64,
        duration: f64,
    ) -> Result<MemristorState, DeviceError> {
        check_voltage(v)?;
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(DeviceError::InvalidDuration(duration));
        }
        Ok(self.advance(state, v, duration))
    }

    /// One forward-Euler step of length `dt`, clamped to the rails afterwards.
    pub fn step(
        &self,
        state: MemristorState,
        v: f64,
        dt: f64,
    ) -> Result<MemristorState, DeviceError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(DeviceError::NonPositiveStep(dt));
        }
        let rate = self.dr_dt(state, v)?;
        Ok(self.clamped(state.resistance + rate * dt))
    }

    /// Unchecked constant-drive update; callers guarantee finite inputs.
    pub(crate) fn advance(&self, state: MemristorState, v: f64, duration: f64) -> MemristorState {
        if duration == 0.0 {
            return state;
        }
        let rate = self.unclipped_rate(v);
        if rate == 0.0 {
            return state;
        }
        self.clamped(state.resistance + rate * duration)
    }

    fn clamped(&self, r: f64) -> MemristorState {
        MemristorState {
            resistance: r.clamp(self.r_min, self.r_max),
        }
    }

    /// The state right after a full reset.
    pub fn reset_state(&self) -> MemristorState {
        MemristorState {
            resistance: self.r_min,
        }
    }
}

fn check_voltage(v: f64) -> Result<(), DeviceError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(DeviceError::NonFiniteVoltage(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorState {
    resistance: f64,
}

impl MemristorState {
    pub fn new(params: &MemristorParams, resistance: f64) -> Result<Self, DeviceError> {
        if !(resistance >= params.r_min && resistance <= params.r_max) {
            return Err(DeviceError::ResistanceOutOfRange {
                resistance,
                r_min: params.r_min,
                r_max: params.r_max,
            });
        }
        Ok(MemristorState { resistance })
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }

    /// Ohmic current through the device. Zero drive always gives zero current.
    pub fn current(&self, v: f64) -> f64 {
        v / self.resistance
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> MemristorParams {
        MemristorParams::default()
    }

    fn at(r: f64) -> MemristorState {
        MemristorState::new(&p(), r).unwrap()
    }

    #[test]
    fn rate_below_threshold_is_zero() {
        assert_eq!(p().dr_dt(at(5000.0), 1.0).unwrap(), 0.0);
        assert_eq!(p().dr_dt(at(5000.0), -1.2).unwrap(), 0.0);
    }

    #[test]
    fn rate_above_threshold() {
        let rate = p().dr_dt(at(5000.0), -2.5).unwrap();
        assert!((rate - 80_600.0).abs() < 1e-6, "{rate}");
        let rate = p().dr_dt(at(5000.0), 2.5).unwrap();
        assert!((rate + 80_600.0).abs() < 1e-6, "{rate}");
    }

    #[test]
    fn rate_clipped_at_rails() {
        assert_eq!(p().dr_dt(at(1000.0), 2.5).unwrap(), 0.0);
        assert_eq!(p().dr_dt(at(10_000.0), -2.5).unwrap(), 0.0);
        // moving away from a rail is allowed
        assert!(p().dr_dt(at(1000.0), -2.5).unwrap() > 0.0);
    }

    #[test]
    fn non_finite_voltage_rejected() {
        assert!(matches!(
            p().dr_dt(at(5000.0), f64::NAN),
            Err(DeviceError::NonFiniteVoltage(_))
        ));
        assert!(p().integrate_const(at(5000.0), f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn integrate_const_examples() {
        let r = p()
            .integrate_const(at(1000.0), -2.5, 0.006)
            .unwrap()
            .resistance();
        assert!((r - 1483.6).abs() < 1e-9, "{r}");
        let r = p()
            .integrate_const(at(9800.0), -2.5, 0.010)
            .unwrap()
            .resistance();
        assert_eq!(r, 10_000.0);
        let r = p()
            .integrate_const(at(5836.0), 2.5, 0.100)
            .unwrap()
            .resistance();
        assert_eq!(r, 1000.0);
    }

    #[test]
    fn negative_duration_rejected() {
        assert!(matches!(
            p().integrate_const(at(1000.0), -2.5, -1e-3),
            Err(DeviceError::InvalidDuration(_))
        ));
    }

    #[test]
    fn euler_step_examples() {
        assert_eq!(p().step(at(4321.0), 0.0, 0.5).unwrap(), at(4321.0));
        let r = p().step(at(1000.0), -2.5, 1e-3).unwrap().resistance();
        assert!((r - 1080.6).abs() < 1e-9, "{r}");
        let mut s = at(1000.0);
        for _ in 0..6 {
            s = p().step(s, -2.5, 1e-3).unwrap();
        }
        assert!((s.resistance() - 1483.6).abs() < 1e-9);
        assert!(p().step(s, -2.5, 0.0).is_err());
    }

    #[test]
    fn ohmic_current() {
        assert_eq!(at(7000.0).current(0.0), 0.0);
        assert!((at(1000.0).current(2.5) - 2.5e-3).abs() < 1e-15);
        assert!((at(10_000.0).current(-1.0) + 1e-4).abs() < 1e-15);
    }

    #[test]
    fn state_outside_rails_rejected() {
        assert!(MemristorState::new(&p(), 999.0).is_err());
        assert!(MemristorState::new(&p(), 10_001.0).is_err());
    }

    #[test]
    fn nonzero_alpha_is_continuous_at_threshold() {
        let params = MemristorParams { alpha: 1e3, ..p() };
        let below = params.unclipped_rate(-1.2 + 1e-9);
        let above = params.unclipped_rate(-1.2 - 1e-9);
        assert!((below - above).abs() < 1e-3);
        assert!((params.unclipped_rate(-1.0) - 1e3).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn stays_between_rails(r0 in 1000.0f64..10_000.0, drives in prop::collection::vec((-5.0f64..5.0, 0.0f64..0.2), 0..20)) {
            let params = p();
            let mut s = at(r0);
            for (v, d) in drives {
                s = params.integrate_const(s, v, d).unwrap();
                prop_assert!(s.resistance() >= params.r_min && s.resistance() <= params.r_max);
                s = params.step(s, v, d.max(1e-6)).unwrap();
                prop_assert!(s.resistance() >= params.r_min && s.resistance() <= params.r_max);
            }
        }

        #[test]
        fn dead_zone(r0 in 1000.0f64..10_000.0, v in -1.2f64..=1.2, d in 0.0f64..100.0) {
            prop_assert_eq!(p().integrate_const(at(r0), v, d).unwrap(), at(r0));
        }

        #[test]
        fn antisymmetric_pulses_cancel(r0 in 1000.0f64..10_000.0, v in 1.3f64..5.0, d in 0.0f64..0.05) {
            let params = p();
            let delta = params.unclipped_rate(-v) * d;
            prop_assume!(r0 + delta <= params.r_max);
            let up = params.integrate_const(at(r0), -v, d).unwrap();
            let back = params.integrate_const(up, v, d).unwrap();
            prop_assert!((back.resistance() - r0).abs() < 1e-9);
        }

        #[test]
        fn euler_matches_exact_for_constant_drive(r0 in 1000.0f64..10_000.0, v in -5.0f64..5.0, n in 1usize..200, dt in 1e-5f64..1e-3) {
            let params = p();
            let mut s = at(r0);
            for _ in 0..n {
                s = params.step(s, v, dt).unwrap();
            }
            let exact = params.integrate_const(at(r0), v, dt * n as f64).unwrap();
            prop_assert!((s.resistance() - exact.resistance()).abs() <= 1e-9);
        }
    }
}
