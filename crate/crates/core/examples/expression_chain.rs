//! Left-to-right +/- chains, in any radix the machine is built with.

use pascaline::{evaluate, parse_expression, Machine, PascalineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs = [
        (PascalineConfig::default(), "2015-373"),
        (PascalineConfig::default(), "100-30-20+5-1"),
        (PascalineConfig::default(), "373-2015"),
        (PascalineConfig::uniform(3, 12, 0.006), "ab9+1"),
        (PascalineConfig::uniform(6, 2, 0.006), "101101-110"),
    ];
    for (config, text) in runs {
        let mut machine = Machine::new(config)?;
        let expr = parse_expression(text, machine.system())?;
        let result = evaluate(&expr, &mut machine)?;
        println!("{text:>14} = {}", result.render(machine.system()));
    }
    Ok(())
}
