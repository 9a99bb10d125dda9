//! Subtraction by complementing the minuend, adding, and complementing back.

use pascaline::{Machine, PascalineConfig, RadixSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dec = RadixSystem::uniform(10, 4)?;
    let mut machine = Machine::new(PascalineConfig::default())?;
    for (a, b) in [(2015, 373), (373, 2015), (500, 500)] {
        let d = machine.subtract(&dec.from_value(a)?, &dec.from_value(b)?)?;
        println!("{a} - {b}");
        println!(
            "  complement of minuend: {}",
            dec.format(&d.complemented_minuend)?
        );
        println!("  after adding {b}:      {}", dec.format(&d.wheel_sum)?);
        println!("  complemented readout:  {}", dec.format(&d.readout)?);
        if d.negative {
            println!("  negative, magnitude {}", dec.format(&d.magnitude)?);
        }
    }
    Ok(())
}
