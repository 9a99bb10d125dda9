//! Sine-driven I-V loops at several frequencies; the loop narrows as the
//! frequency rises and vanishes below the threshold voltage.

use pascaline::analysis::{hysteresis_run, mean_loop_area, AcDrive};
use pascaline::MemristorParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = MemristorParams::default();
    println!(
        "{:>8} {:>8} {:>14} {:>10} {:>10}",
        "amp V", "freq Hz", "area V*A", "R min", "R max"
    );
    for (amp, f) in [
        (2.5, 5.0),
        (2.5, 20.0),
        (2.5, 80.0),
        (2.5, 320.0),
        (1.0, 20.0),
    ] {
        let iv = hysteresis_run(&params, AcDrive::new(amp, f))?;
        let (lo, hi) = iv.samples.iter().fold((f64::MAX, f64::MIN), |(lo, hi), s| {
            (lo.min(s.r), hi.max(s.r))
        });
        println!(
            "{amp:>8} {f:>8} {:>14.6e} {lo:>10.1} {hi:>10.1}",
            mean_loop_area(&iv)?
        );
    }
    Ok(())
}
