//! Classify a few exponent triples and back each verdict with evidence.
//!
//! ```text
//! cargo run --example classify_triples
//! ```

use uncond::classify::{classify, cross_validate};
use uncond::{Config, Exponent, ExponentTriple};

fn main() -> uncond::Result<()> {
    let cfg = Config::default();
    let inf = Exponent::Infinity;
    let e = |v: f64| Exponent::new(v).unwrap();
    let triples = [
        ExponentTriple::new(e(2.0), e(2.0), e(2.0)),
        ExponentTriple::new(e(1.0), e(1.0), inf),
        ExponentTriple::new(e(2.0), e(2.0), e(1.0)),
        ExponentTriple::new(e(3.0), e(2.0), e(2.0)),
        ExponentTriple::new(e(3.0), e(3.0), e(3.0)),
        ExponentTriple::new(e(3.0), e(3.0), e(1.0)),
    ];
    for t in triples {
        let c = classify(t)?;
        print!(
            "{:<14} {:<14} {:<18} margin {:.4}",
            t.to_string(),
            c.verdict.to_string(),
            c.clause.tag(),
            c.margin
        );
        if t.holder_valid() {
            let cv = cross_validate(t, 32, 7, &cfg)?;
            if let Some(w) = cv.hadamard_witnesses.last() {
                print!("  witness n={} beats C={}", w.n, w.c);
            }
            if let Some(w) = cv.tail_witnesses.last() {
                print!("  tail reaches B={} at N={}", w.b, w.n);
            }
            if let Some(s) = &cv.search {
                print!("  searched quotient {:.4}", s.best_quotient);
                if let Some(b) = s.bound {
                    print!(" (bound {b})");
                }
            }
        }
        println!();
    }
    Ok(())
}
