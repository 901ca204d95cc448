//! The subset-sum constants: 2 for real scalars, 4 (sharp: π) for complex.

use uncond::lemma_lab::{complex_subset_ratio, real_subset_ratio, roots_of_unity, ComplexMethod};
use uncond::Config;

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    for x in [vec![1.0, -1.0], vec![3.0, -4.0, 5.0], vec![1.0, 1.0]] {
        println!("real {x:?}: ratio {}", real_subset_ratio(&x)?.ratio);
    }
    println!(
        "\nroots of unity: ratio approaches pi = {}",
        std::f64::consts::PI
    );
    for n in [2, 3, 4, 8, 16, 64, 256, 4096] {
        let method = if n <= 16 {
            ComplexMethod::Exact
        } else {
            ComplexMethod::HalfPlane
        };
        let r = complex_subset_ratio(&roots_of_unity(n), method, &cfg)?;
        println!(
            "  n = {n:<5} ratio {:.9}  certified {}",
            r.ratio, r.certified
        );
    }
    Ok(())
}
