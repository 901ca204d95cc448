//! Sylvester-Hadamard counterexamples for ℓ_∞ × ℓ_2 → ℓ_2.
//!
//! For growing C the witness size n grows like 2 log₂ C, and for small n the
//! exact quotient of the family is computed as a cross-check.

use uncond::witness::{hadamard_witness, sylvester};
use uncond::{Config, Exponent, ExponentTriple};

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    let t = ExponentTriple::new(Exponent::Infinity, Exponent::TWO, Exponent::TWO);
    println!(
        "{:>8} {:>3} {:>10} {:>12}",
        "C", "n", "certified", "exhaustive"
    );
    for c in [1.0, 2.0, 4.0, 10.0, 100.0, 1e4] {
        let w = hadamard_witness(t, c, &cfg)?;
        let exact = w
            .exhaustive_quotient
            .map_or("-".to_string(), |q| format!("{q:.6}"));
        println!(
            "{c:>8} {:>3} {:>10.4} {exact:>12}",
            w.n,
            w.certified_ratio_log2.exp2()
        );
    }

    let h = sylvester(3)?;
    println!("\nH_8 (rows are the family; + is 1, - is -1):");
    for row in h.rows() {
        let s: String = row.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect();
        println!("  {s}");
    }
    println!("orthogonal rows: {}", h.is_hadamard());
    Ok(())
}
