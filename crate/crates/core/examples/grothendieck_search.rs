//! Lower bounds on the Grothendieck constant from random sign-refined families.

use uncond::lemma_lab::grothendieck_search;
use uncond::Config;

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    for (n, dim) in [(2, 2), (3, 3), (4, 4), (6, 6), (8, 4)] {
        let s = grothendieck_search(n, dim, 300, 2024, &cfg)?;
        println!(
            "n = {n}, dim = {dim}: best ratio {:.6} (configured upper bound {})",
            s.best.ratio, s.best.bound
        );
    }
    Ok(())
}
