//! The ℓ_p–ℓ_q sandwich on random vectors, with its tightest observed slacks.

use uncond::lemma_lab::sandwich_sweep;
use uncond::Exponent;

fn main() -> uncond::Result<()> {
    let e = |v: f64| Exponent::new(v).unwrap();
    let pairs = [
        (e(1.0), e(2.0)),
        (e(1.0), e(8.0)),
        (e(2.0), e(3.0)),
        (e(1.5), e(1.6)),
    ];
    let report = sandwich_sweep(&[2, 5, 10, 100], &pairs, 5_000, 3)?;
    println!("violations: {}", report.violations);
    for p in &report.pairs {
        println!(
            "p = {:<4} q = {:<4} lower slack {:.3e}  upper slack {:.3e}",
            p.p.to_string(),
            p.q.to_string(),
            p.min_lower_slack,
            p.min_upper_slack
        );
    }
    Ok(())
}
