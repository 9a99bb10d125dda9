//! Add two four-digit decimal numbers on the simulated wheels.
//!
//! cargo run --example decimal_addition -- 1642 373

use pascaline::{Machine, PascalineConfig, RadixSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u128> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (a, b) = match args[..] {
        [a, b] => (a, b),
        _ => (1642, 373),
    };
    let dec = RadixSystem::uniform(10, 4)?;
    let mut machine = Machine::new(PascalineConfig::default())?;
    let sum = machine.add(&dec.from_value(a)?, &dec.from_value(b)?)?;
    println!("{a} + {b} = {}", dec.format(&sum.result)?);
    println!("carry out: {}", sum.carry_out);
    println!(
        "readout voltages (LSD first): {:?}",
        machine.readout_voltages()?
    );
    println!("simulated time: {:.3} s", machine.simulator().now());
    Ok(())
}
