//! Seeded search for large unconditionality quotients on a preserving, an
//! open and a non-preserving triple.

use uncond::unconditionality::quotient_lower_bound_search;
use uncond::{Config, Exponent, ExponentTriple};

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    let e = |v: f64| Exponent::new(v).unwrap();
    let triples = [
        ExponentTriple::new(e(2.0), e(2.0), e(2.0)),
        ExponentTriple::new(e(3.0), e(3.0), e(3.0)),
        ExponentTriple::new(Exponent::Infinity, e(2.0), e(2.0)),
    ];
    for t in triples {
        for n in [2, 4, 8] {
            let s = quotient_lower_bound_search(t, n, 4, 64, 42, &cfg)?;
            println!(
                "{:<12} n = {n}  best quotient {:.4}  (restart {}, {} evaluations)",
                t.to_string(),
                s.best.quotient,
                s.restart,
                s.evaluations
            );
        }
    }
    Ok(())
}
