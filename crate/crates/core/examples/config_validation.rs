//! Threshold windows and the diagnostics produced for bad settings.

use pascaline::PascalineConfig;

fn main() {
    let cases = [
        (
            "decimal, 6 ms, 0.8 V",
            PascalineConfig::uniform(4, 10, 0.006).with_v_t(0.8),
        ),
        (
            "decimal, 6 ms, centred",
            PascalineConfig::uniform(4, 10, 0.006),
        ),
        (
            "base 5, 10 ms, 0.8 V",
            PascalineConfig::uniform(1, 5, 0.010).with_v_t(0.8),
        ),
        ("base 16, 10 ms", PascalineConfig::uniform(1, 16, 0.010)),
    ];
    for (name, cfg) in cases {
        let violations = cfg.validate();
        if violations.is_empty() {
            println!(
                "{name}: ok, window {}",
                cfg.admissible_threshold_range(0).unwrap()
            );
        } else {
            println!("{name}: rejected");
            for v in violations {
                println!("  {v}");
            }
        }
    }
}
