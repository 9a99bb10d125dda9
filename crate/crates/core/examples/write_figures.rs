//! Export every reference trace as CSV into a directory (default `figures`).

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    for path in pascaline::analysis::write_figures(dir.as_ref())? {
        println!("{}", path.display());
    }
    Ok(())
}
