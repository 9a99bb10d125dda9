use pascaline::machine::read_digit;
use pascaline::sim::{simulate, Simulator};
use pascaline::{ButtonPress, EventKind, Machine, PascalineConfig, TraceOptions, Until};
use proptest::prelude::*;

const WIDTHS: [f64; 4] = [0.004, 0.006, 0.008, 0.010];

fn config_strategy() -> impl Strategy<Value = PascalineConfig> {
    prop::collection::vec((2u32..=12, 0usize..4), 1..=4).prop_map(|digits| {
        let radices: Vec<u32> = digits.iter().map(|d| d.0).collect();
        let widths: Vec<f64> = digits.iter().map(|d| WIDTHS[d.1]).collect();
        let mut cfg = PascalineConfig::mixed(&radices, &widths);
        cfg.reset_width = 0.120;
        cfg
    })
}

fn schedule_strategy() -> impl Strategy<Value = Vec<(u32, usize)>> {
    // (time in ms, digit selector)
    prop::collection::vec((0u32..3000, 0usize..4), 0..16)
}

fn presses(cfg: &PascalineConfig, raw: &[(u32, usize)]) -> Vec<ButtonPress> {
    raw.iter()
        .map(|&(ms, d)| ButtonPress {
            time: ms as f64 * 1e-3,
            digit: d % cfg.n_digits(),
        })
        .collect()
}

fn count(sim: &Simulator, kind: EventKind) -> usize {
    sim.events().iter().filter(|e| e.kind == kind).count()
}

fn wheel_value(sim: &Simulator) -> u128 {
    let cfg = sim.config();
    let mut value = 0u128;
    let mut weight = 1u128;
    for (i, block) in sim.blocks().iter().enumerate() {
        value += read_digit(cfg, block).unwrap() as u128 * weight;
        weight *= cfg.digits[i].radix as u128;
    }
    value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn events_are_conserved(cfg in config_strategy(), raw in schedule_strategy()) {
        let schedule = presses(&cfg, &raw);
        let sim = simulate(cfg, &schedule, Until::Quiescence, TraceOptions::default()).unwrap();
        let buttons = count(&sim, EventKind::ButtonTrigger);
        let carries = count(&sim, EventKind::CarryTrigger);
        prop_assert_eq!(buttons, schedule.len());
        prop_assert_eq!(count(&sim, EventKind::PulseStart), buttons + carries);
        prop_assert_eq!(count(&sim, EventKind::PulseEnd), buttons + carries);
        prop_assert_eq!(count(&sim, EventKind::ResetStart), carries + sim.carry_outs().len());
        prop_assert_eq!(count(&sim, EventKind::ResetEnd), count(&sim, EventKind::ResetStart));
        prop_assert!(sim.is_idle());
    }

    #[test]
    fn events_are_causal(cfg in config_strategy(), raw in schedule_strategy()) {
        let schedule = presses(&cfg, &raw);
        let sim = simulate(cfg.clone(), &schedule, Until::Quiescence, TraceOptions::default()).unwrap();
        let log = sim.events();
        prop_assert!(log.windows(2).all(|w| w[0].time <= w[1].time));
        for d in 0..cfg.n_digits() {
            let starts: Vec<f64> = log.iter().filter(|e| e.digit == d && e.kind == EventKind::PulseStart).map(|e| e.time).collect();
            let ends: Vec<f64> = log.iter().filter(|e| e.digit == d && e.kind == EventKind::PulseEnd).map(|e| e.time).collect();
            for (s, e) in starts.iter().zip(&ends) {
                prop_assert!((e - s - cfg.digits[d].pulse_width).abs() < 1e-12);
            }
            // a pulse never starts while the previous one or a reset is active
            for (next, prev_end) in starts.iter().skip(1).zip(&ends) {
                prop_assert!(next >= prev_end);
            }
        }
        let rows = sim.trace().rows();
        prop_assert!(rows.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn wheels_match_integer_sum(cfg in config_strategy(), raw in schedule_strategy()) {
        let schedule = presses(&cfg, &raw);
        let system = cfg.radix_system().unwrap();
        let weights: Vec<u128> = (0..cfg.n_digits())
            .map(|i| cfg.digits[..i].iter().map(|d| d.radix as u128).product())
            .collect();
        let total: u128 = schedule.iter().map(|p| weights[p.digit]).sum();
        let sim = simulate(cfg, &schedule, Until::Quiescence, TraceOptions::default()).unwrap();
        prop_assert_eq!(wheel_value(&sim), total % system.capacity());
        prop_assert_eq!(sim.carry_outs().len() as u128, total / system.capacity());
    }

    #[test]
    fn sampling_does_not_change_state(cfg in config_strategy(), raw in schedule_strategy(), dt_ms in 1u32..20) {
        let schedule = presses(&cfg, &raw);
        let plain = simulate(cfg.clone(), &schedule, Until::Quiescence, TraceOptions::default()).unwrap();
        let sampled = simulate(cfg, &schedule, Until::Quiescence, TraceOptions { sample_dt: Some(dt_ms as f64 * 1e-3) }).unwrap();
        prop_assert_eq!(plain.resistances(), sampled.resistances());
        prop_assert_eq!(plain.events(), sampled.events());
    }

    #[test]
    fn thresholds_inside_window_count_to_radix(pw_idx in 0usize..4, frac in 0.0f64..1.0, radix_frac in 0.0f64..1.0) {
        let pw = WIDTHS[pw_idx];
        let probe = PascalineConfig::uniform(1, 2, pw);
        let max = probe.max_base(0).unwrap();
        let radix = 2 + ((max - 2) as f64 * radix_frac) as u32;
        let mut cfg = PascalineConfig::uniform(1, radix, pw);
        cfg.reset_width = 0.200;
        let range = cfg.admissible_threshold_range(0).unwrap();
        let v_t = range.low + frac * (range.high - range.low);
        prop_assume!(range.contains(v_t));
        let cfg = cfg.with_v_t(v_t);
        prop_assert!(cfg.validate().is_empty());
        prop_assert_eq!(cfg.firing_pulse(0, v_t).unwrap(), Some(radix));

        let mut m = Machine::new(cfg).unwrap();
        m.press(0, radix).unwrap();
        m.settle().unwrap();
        let fired: Vec<usize> = m.simulator().comparisons().iter().enumerate()
            .filter(|(_, c)| c.fired).map(|(k, _)| k + 1).collect();
        prop_assert_eq!(fired, vec![radix as usize]);
        prop_assert_eq!(m.carry_out_count(), 1);
    }

    #[test]
    fn thresholds_outside_window_are_rejected(pw_idx in 0usize..4, radix in 2u32..=8, below in prop::bool::ANY, margin in 1e-4f64..0.05) {
        let pw = WIDTHS[pw_idx];
        let mut cfg = PascalineConfig::uniform(1, radix, pw);
        cfg.reset_width = 0.200;
        let range = cfg.admissible_threshold_range(0).unwrap();
        let v_t = if below { range.low - margin } else { range.high + margin };
        prop_assert!(!cfg.with_v_t(v_t).validate().is_empty());
    }
}
