//! The harmonic tail witness for r < q: the sequence m^{-1/r} has unbounded
//! ℓ_r partial norms while its ℓ_q tails go to zero.

use uncond::witness::tail_witness;
use uncond::Exponent;

fn main() -> uncond::Result<()> {
    let cases = [(2.0, 1.0), (4.0, 2.0), (f64::INFINITY, 1.0)];
    for (q, r) in cases {
        let (q, r) = (Exponent::new(q)?, Exponent::new(r)?);
        println!("q = {q}, r = {r}");
        for b in [1.5, 2.0, 3.0, 5.0] {
            match tail_witness(q, r, b) {
                Ok(w) => println!(
                    "  B = {b:<4} N = {:<8} partial l_r norm {:.6}  l_q tail <= {:.6}",
                    w.n, w.partial_r_norm, w.tail_q_bound
                ),
                Err(e) => println!("  B = {b:<4} {e}"),
            }
        }
    }
    Ok(())
}
