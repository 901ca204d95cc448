//! Unconditionality quotients of hand-written families.

use uncond::unconditionality::{subset_max_norm, unconditionality_quotient, Family, Mode};
use uncond::{Config, Exponent, ExponentTriple};

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    let t = ExponentTriple::new(Exponent::Infinity, Exponent::TWO, Exponent::TWO);

    let pair = Family::from_rows(vec![vec![1.0, 1.0], vec![1.0, -1.0]])?;
    let q = unconditionality_quotient(&pair, &pair, t, Mode::Exhaustive, &cfg)?;
    println!(
        "Hadamard pair, {t}: quotient {:.6} (subset {})",
        q.quotient,
        q.subset.to_hex()
    );

    // a longer family where the randomized mode has to do real work
    let n = 20;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| (0..6).map(|j| ((k * 7 + j * 3) % 5) as f64 - 2.0).collect())
        .collect();
    let x = Family::from_rows(rows)?;
    let exact = subset_max_norm(&x, Exponent::TWO, Mode::Exhaustive, &cfg)?;
    let approx = subset_max_norm(
        &x,
        Exponent::TWO,
        Mode::Randomized {
            budget: 64,
            seed: 1,
        },
        &cfg,
    )?;
    println!(
        "n = {n}: exhaustive subset max {:.6}, randomized {:.6} (certified: {})",
        exact.value, approx.value, approx.certified
    );
    Ok(())
}
