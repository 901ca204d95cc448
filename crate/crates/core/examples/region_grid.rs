//! Print the decision region for fixed r as CSV, plus a character map.
//!
//! ```text
//! cargo run --example region_grid -- 2 > grid.csv
//! ```
//!
//! The optional argument is `r` (decimal or `inf`, default 2).

use uncond::classify::{region_grid, write_csv, GridSpec, Verdict};
use uncond::Exponent;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r: Exponent = std::env::args().nth(1).as_deref().unwrap_or("2").parse()?;
    let spec = GridSpec {
        r,
        p_range: (1.0, 6.0),
        q_range: (1.0, 6.0),
        step: 0.25,
        include_infinity: false,
    };
    let grid = region_grid(&spec)?;
    write_csv(std::io::stdout().lock(), &grid)?;

    // q grows to the right, p grows downward
    let side = ((spec.q_range.1 - spec.q_range.0) / spec.step).round() as usize + 1;
    eprintln!("r = {r}   P preserves, x does not, ? open, . not applicable");
    for row in grid.chunks(side) {
        let line: String = row
            .iter()
            .map(|c| match c.verdict {
                Verdict::Preserves => 'P',
                Verdict::NotPreserves => 'x',
                Verdict::Unknown => '?',
                Verdict::NotApplicable => '.',
            })
            .collect();
        eprintln!("p={:<5} {line}", row[0].p.to_string());
    }
    Ok(())
}
