//! Mixed-radix register with radices 12, 20 and 10. The base-20 digit needs
//! shorter pulses to fit twenty levels between r_min and r_max.

use pascaline::{Machine, PascalineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = PascalineConfig::mixed(&[12, 20, 10], &[0.006, 0.004, 0.006]);
    for i in 0..config.n_digits() {
        println!(
            "digit {}: radix {:2}, max_base {:2}, threshold window {}",
            i + 1,
            config.digits[i].radix,
            config.max_base(i)?,
            config.admissible_threshold_range(i)?
        );
    }
    let mut machine = Machine::new(config)?;
    let system = machine.system().clone();
    let a = system.from_value(1000)?;
    let b = system.from_value(1234)?;
    let sum = machine.add(&a, &b)?;
    println!("capacity {}", system.capacity());
    println!(
        "{} + {} = {} (value {})",
        system.format(&a)?,
        system.format(&b)?,
        system.format(&sum.result)?,
        system.value(&sum.result)?
    );
    Ok(())
}
