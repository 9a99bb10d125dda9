//! Largest radix a digit can hold for each programming pulse width, checked
//! against a direct simulation of pulses from r_min to r_max.

use pascaline::analysis::saturation_pulses;
use pascaline::{MemristorParams, PascalineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = MemristorParams::default();
    println!(
        "{:>6} {:>10} {:>9} {:>10}",
        "pw ms", "dR ohm", "max_base", "simulated"
    );
    for ms in [2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0] {
        let cfg = PascalineConfig::uniform(1, 2, ms * 1e-3);
        let sim = saturation_pulses(&params, ms * 1e-3, 10_000).unwrap_or(0);
        println!(
            "{ms:>6} {:>10.1} {:>9} {sim:>10}",
            cfg.delta_r_per_pulse(0)?,
            cfg.max_base(0)?
        );
    }
    Ok(())
}
