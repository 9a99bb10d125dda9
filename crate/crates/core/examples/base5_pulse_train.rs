//! Five presses on a single base-5 digit with 10 ms pulses and a 0.8 V
//! comparator. The fifth pulse crosses the threshold and resets the device.

use pascaline::analysis::{base5_config, pulse_train};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let train = pulse_train(base5_config(), 0, 5, Some(1e-3))?;
    for (k, c) in train.comparisons.iter().enumerate() {
        let mark = if c.fired { "  reset" } else { "" };
        println!(
            "pulse {}: V_M = {:.6} V, R = {:8.1} ohm{mark}",
            k + 1,
            c.v_m,
            c.resistance
        );
    }
    println!("{} trace rows; pass a path to save them", train.trace.len());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, train.trace.to_csv())?;
        println!("wrote {path}");
    }
    Ok(())
}
