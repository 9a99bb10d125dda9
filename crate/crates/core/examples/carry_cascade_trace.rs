//! 0999 + 1: one press ripples three resets up the chain. Prints the event
//! log of the final addition.

use pascaline::{EventKind, Machine, PascalineConfig, RadixSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dec = RadixSystem::uniform(10, 4)?;
    let mut machine = Machine::new(PascalineConfig::default())?;
    machine.enter_number(&dec.from_value(999)?)?;
    let start = machine.events().len();
    machine.press(0, 1)?;
    machine.settle()?;
    for e in &machine.events()[start..] {
        let note = match e.kind {
            EventKind::ResetStart => "  comparator fired",
            EventKind::CarryTrigger => "  carry into next digit",
            _ => "",
        };
        println!(
            "t = {:.3} s  digit {}  {:?}{note}",
            e.time,
            e.digit + 1,
            e.kind
        );
    }
    println!("wheels: {}", dec.format(&machine.read()?)?);
    Ok(())
}
