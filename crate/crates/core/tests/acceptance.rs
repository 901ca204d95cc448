//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every criterion has a pinned tolerance and a wall-clock limit. Oracles are
//! written out here rather than taken from the library wherever the library
//! result is what is being checked.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use uncond::classify::{classify, Clause, Verdict};
use uncond::config::{Config, DEFAULT_K_G_UPPER};
use uncond::gray::gray_code;
use uncond::lemma_lab::{
    complex_subset_ratio, grothendieck_ratio, grothendieck_search, real_subset_max,
    real_subset_ratio, roots_of_unity, ComplexMethod,
};
use uncond::seqspace::lp_norm;
use uncond::unconditionality::{
    hilbert_bound_check, subset_max_norm, unconditionality_quotient, Family, Mode,
};
use uncond::witness::{
    exact_facts, hadamard_witness, partial_r_norm, sylvester, tail_q_bound, tail_witness,
    witness_inequality_holds,
};
use uncond::{Error, Exponent, ExponentTriple, FinSeq};

/// A failure the suite cannot turn green without breaking a stated rule
/// elsewhere. Printed as FAIL but does not fail the process.
struct KnownRed(String);

enum Failure {
    Hard(String),
    Known(KnownRed),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Hard(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Self {
        Failure::Hard(s.to_string())
    }
}

type Outcome = Result<String, Failure>;

const INF: Exponent = Exponent::Infinity;

fn e(v: f64) -> Exponent {
    Exponent::new(v).unwrap()
}

fn t(p: Exponent, q: Exponent, r: Exponent) -> ExponentTriple {
    ExponentTriple::new(p, q, r)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(20_240_601);
    r.set_stream(stream);
    r
}

fn normal_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

/// 1. Hadamard witness exactness.
fn hadamard_exactness() -> Outcome {
    let cfg = Config::default();
    let w = hadamard_witness(t(INF, e(2.0), e(2.0)), 1.0, &cfg).map_err(|e| e.to_string())?;
    ensure(w.n == 1, || format!("C=1 gave n={}", w.n))?;
    let eq = w
        .exhaustive_quotient
        .ok_or("no exhaustive quotient for n=1")?;
    ensure((eq - 2f64.sqrt()).abs() <= 1e-12, || {
        format!("quotient {eq} != sqrt 2")
    })?;

    let exps = [e(1.0), e(2.0), e(3.0), INF];
    for n in 0..=10u32 {
        let h = sylvester(n).map_err(|e| e.to_string())?;
        let size = 1i64 << n;
        // oracle: Σ_k a_k x_k with a_k = x_k = row k, summed in integers
        let mut sum = vec![0i64; h.size()];
        for row in h.rows() {
            for (s, &v) in sum.iter_mut().zip(row) {
                *s += (v as i64) * (v as i64);
            }
        }
        ensure(sum.iter().all(|&v| v == size), || {
            format!("n={n}: product sum not constant 2^n")
        })?;
        ensure(
            h.rows()
                .iter()
                .all(|r| r.iter().all(|&s| s == 1 || s == -1)),
            || format!("n={n}: entry outside ±1"),
        )?;
        let facts = exact_facts(&h).map_err(|e| e.to_string())?;
        ensure(
            facts.product_value == size
                && facts.product_support == size as u64
                && facts.row_support == size as u64,
            || format!("n={n}: exact facts {facts:?}"),
        )?;
        let nf = n as f64;
        for &x in &exps {
            let want_num = nf * (1.0 + x.reciprocal());
            let want_row = nf * x.reciprocal();
            ensure(facts.log2_product_norm(x) == want_num, || {
                format!(
                    "n={n}, r={x}: log2 numerator {} != {want_num}",
                    facts.log2_product_norm(x)
                )
            })?;
            ensure(facts.log2_row_norm(x) == want_row, || {
                format!(
                    "n={n}, p={x}: log2 row norm {} != {want_row}",
                    facts.log2_row_norm(x)
                )
            })?;
        }
    }
    Ok("n=1, quotient=sqrt 2; integer facts exact for n<=10, p,r in {1,2,3,inf}".into())
}

/// Naive subset max: every subset summed from scratch, first maximum in Gray order.
fn naive_subset_max(rows: &[Vec<f64>], q: Exponent) -> (f64, u64) {
    let n = rows.len();
    let dim = rows.first().map_or(0, Vec::len);
    let mut best = (f64::NEG_INFINITY, 0u64);
    for i in 0..(1u64 << n) {
        let mask = gray_code(i);
        let mut s = vec![0.0; dim];
        for (k, row) in rows.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                for (a, b) in s.iter_mut().zip(row) {
                    *a += b;
                }
            }
        }
        let v = lp_norm(&s, q);
        if v > best.0 {
            best = (v, mask);
        }
    }
    best
}

/// 2. Claim bound on the Hadamard family.
fn claim_bound() -> Outcome {
    let cfg = Config::default();
    let qs = [1.0, 1.5, 2.0, 3.0, 4.0];
    for n in 0..=4u32 {
        let h = sylvester(n).map_err(|e| e.to_string())?;
        let fam = h.to_family();
        let rows = fam.to_rows();
        for &qv in &qs {
            let q = e(qv);
            let got =
                subset_max_norm(&fam, q, Mode::Exhaustive, &cfg).map_err(|e| e.to_string())?;
            let (naive, _) = naive_subset_max(&rows, q);
            ensure(got.value == naive, || {
                format!("n={n}, q={qv}: walk {} vs naive {naive}", got.value)
            })?;
            let q2 = qv.min(2.0);
            let bound = (n as f64 * (0.5 + 1.0 / q2)).exp2();
            ensure(got.value <= bound * (1.0 + 1e-9), || {
                format!("n={n}, q={qv}: {} > {bound}", got.value)
            })?;
            if qv >= 2.0 {
                ensure(got.value == (1u64 << n) as f64, || {
                    format!("n={n}, q={qv}: {} != 2^n", got.value)
                })?;
            }
        }
    }
    Ok("n<=4, q in {1,1.5,2,3,4}: within bound, = 2^n for q>=2".into())
}

/// 3. Minimal witness size for C = 10.
fn minimal_n() -> Outcome {
    let cfg = Config::default();
    let tr = t(INF, e(2.0), e(2.0));
    let w = hadamard_witness(tr, 10.0, &cfg).map_err(|e| e.to_string())?;
    // oracle: ratio is 2^{n(1 + 1/2) - n(0 + 1/2 + 1/2)} = 2^{n/2}
    let oracle_n = (1u32..).find(|&n| (n as f64 / 2.0).exp2() > 10.0).unwrap();
    ensure(w.n == 7 && oracle_n == 7, || {
        format!("n={} (oracle {oracle_n})", w.n)
    })?;
    let ratio = w.certified_ratio_log2.exp2();
    ensure(
        (ratio - 11.313708498984761).abs() <= 1e-12 && ratio > 10.0,
        || format!("certified ratio {ratio}"),
    )?;
    ensure(!witness_inequality_holds(tr, 10.0, 6), || {
        "n=6 satisfies the inequality".into()
    })?;
    Ok(format!("n=7, certified ratio {ratio:.4}, n=6 fails"))
}

/// 4. Classifier decision table and lattice consistency.
fn decision_table() -> Outcome {
    let table: [(ExponentTriple, Verdict, Option<Clause>); 6] = [
        (t(e(2.0), e(2.0), e(2.0)), Verdict::Preserves, None),
        (t(e(1.0), e(1.0), INF), Verdict::Preserves, None),
        (
            t(INF, e(2.0), e(1.0)),
            Verdict::NotPreserves,
            Some(Clause::TargetBelowSource),
        ),
        (
            t(e(3.0), e(2.0), e(2.0)),
            Verdict::NotPreserves,
            Some(Clause::StrictExponentGap),
        ),
        (t(e(3.0), e(3.0), e(3.0)), Verdict::Unknown, None),
        (t(e(3.0), e(3.0), e(1.0)), Verdict::NotApplicable, None),
    ];
    // (inf, 2, 1) has 1/r = 1 > 1/p + 1/q = 1/2, so multiplication does not
    // map into l_1 and a Hölder-invalid triple must be NotApplicable.
    let contradictory = t(INF, e(2.0), e(1.0));
    let mut mismatches = Vec::new();
    let mut only_contradictory = true;
    for (tr, verdict, clause) in table {
        let c = classify(tr).map_err(|e| e.to_string())?;
        if c.verdict != verdict || clause.is_some_and(|cl| cl != c.clause) {
            only_contradictory &= tr == contradictory && c.verdict == Verdict::NotApplicable;
            mismatches.push(format!(
                "{tr}: got {}[{}], expected {verdict}{}; 1/r - 1/p - 1/q = {:+}",
                c.verdict,
                c.clause.tag(),
                clause.map(|c| format!("[{}]", c.tag())).unwrap_or_default(),
                tr.r.reciprocal() - tr.p.reciprocal() - tr.q.reciprocal(),
            ));
        }
    }

    // lattice in reciprocal space: 1/p, 1/q, 1/r in {0, 1/28, ..., 1}
    let m = 28;
    let mut points = 0usize;
    for i in 0..=m {
        for j in 0..=m {
            for k in 0..=m {
                let ex = |s: usize| {
                    if s == 0 {
                        INF
                    } else {
                        Exponent::new(m as f64 / s as f64).unwrap()
                    }
                };
                let tr = t(ex(i), ex(j), ex(k));
                if !tr.holder_valid() {
                    continue;
                }
                points += 1;
                match classify(tr) {
                    Ok(_) => {}
                    Err(err @ Error::InternalInconsistency(_)) => {
                        return Err(err.to_string().into())
                    }
                    Err(err) => return Err(format!("{tr}: {err}").into()),
                }
            }
        }
    }
    ensure(points >= 10_000, || {
        format!("lattice has only {points} valid points")
    })?;
    if mismatches.is_empty() {
        return Ok(format!(
            "6/6 table rows; {points} valid lattice points, no inconsistency"
        ));
    }
    let detail = format!(
        "{} table row(s) differ: {}; {points} valid lattice points, no inconsistency",
        mismatches.len(),
        mismatches.join("; ")
    );
    if only_contradictory {
        Err(Failure::Known(KnownRed(format!(
            "{detail}; expected row contradicts NotApplicable <=> Hölder fails"
        ))))
    } else {
        Err(Failure::Hard(detail))
    }
}

/// 5. Real and complex subset-sum constants.
fn subset_constants() -> Outcome {
    let cfg = Config::default();
    let mut r = rng(5);
    let mut worst_real = 0.0f64;
    for _ in 0..10_000 {
        let n = r.gen_range(1..=16);
        let x: Vec<f64> = (0..n).map(|_| r.sample(StandardNormal)).collect();
        let rep = real_subset_ratio(&x).map_err(|e| e.to_string())?;
        ensure(rep.ratio <= 2.0, || {
            format!("real ratio {} > 2 on {x:?}", rep.ratio)
        })?;
        worst_real = worst_real.max(rep.ratio);
        // oracle: exhaustive enumeration of |Σ_F x_k|
        let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![v]).collect();
        let fam = Family::from_rows(rows).map_err(|e| e.to_string())?;
        let ex = subset_max_norm(&fam, Exponent::ONE, Mode::Exhaustive, &cfg)
            .map_err(|e| e.to_string())?;
        let (split, _) = real_subset_max(&x);
        ensure((split - ex.value).abs() <= 1e-12 * ex.value, || {
            format!("split {split} vs enumeration {} on {x:?}", ex.value)
        })?;
    }
    let tight = real_subset_ratio(&[1.0, -1.0]).map_err(|e| e.to_string())?;
    ensure(tight.ratio == 2.0, || {
        format!("(1,-1) ratio {}", tight.ratio)
    })?;

    let mut worst_complex = 0.0f64;
    for _ in 0..1_000 {
        let n = r.gen_range(1..=14);
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
            .collect();
        let rep =
            complex_subset_ratio(&z, ComplexMethod::Exact, &cfg).map_err(|e| e.to_string())?;
        ensure(rep.ratio <= 4.0, || {
            format!("complex ratio {} > 4", rep.ratio)
        })?;
        worst_complex = worst_complex.max(rep.ratio);
    }
    let roots = complex_subset_ratio(&roots_of_unity(64), ComplexMethod::HalfPlane, &cfg)
        .map_err(|e| e.to_string())?;
    // oracle: the best subset is a half circle of 32 roots, |Σ| = 1/sin(π/64)
    let oracle = 64.0 * (PI / 64.0).sin();
    ensure((roots.ratio - oracle).abs() <= 1e-9, || {
        format!("roots ratio {} vs {oracle}", roots.ratio)
    })?;
    ensure(roots.ratio >= 3.0 && roots.ratio <= PI + 1e-9, || {
        format!("roots ratio {}", roots.ratio)
    })?;
    Ok(format!(
        "max real {worst_real:.6}, max complex {worst_complex:.6}, 64 roots {:.6}",
        roots.ratio
    ))
}

/// 6. Grothendieck lower bounds.
fn grothendieck() -> Outcome {
    let cfg = Config::default();
    ensure(cfg.k_g_upper == 1.8 && DEFAULT_K_G_UPPER == 1.8, || {
        "K_G upper bound is not 1.8".into()
    })?;
    let fam =
        Family::from_rows(vec![vec![1.0, 1.0], vec![1.0, -1.0]]).map_err(|e| e.to_string())?;
    let r = grothendieck_ratio(&fam, &cfg).map_err(|e| e.to_string())?;
    ensure((r.ratio - 2f64.sqrt()).abs() <= 1e-12, || {
        format!("pair ratio {}", r.ratio)
    })?;

    let s = grothendieck_search(2, 2, 1_000, 1, &cfg).map_err(|e| e.to_string())?;
    ensure(s.best.ratio >= 2f64.sqrt() - 1e-9, || {
        format!("search best {}", s.best.ratio)
    })?;
    let mut worst = s.best.ratio;
    let mut violations = s.violations;
    for (n, dim, seed) in [(3, 3, 2), (4, 4, 3), (6, 5, 4)] {
        let s = grothendieck_search(n, dim, 200, seed, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(s.best.ratio);
        violations += s.violations;
    }
    ensure(violations == 0 && worst <= 1.8 + 1e-9, || {
        format!("{violations} families above K_G upper bound (max {worst})")
    })?;
    Ok(format!(
        "pair sqrt 2, search {:.9}, max over searches {worst:.6}",
        s.best.ratio
    ))
}

/// 7. Hilbert-space multiplier inequality.
fn hilbert_inequality() -> Outcome {
    let cfg = Config::default();
    let qs = [e(1.0), e(1.5), e(2.0), e(3.0)];
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let n = r.gen_range(1..=12);
        let dim = r.gen_range(1..=16);
        let q = qs[i % qs.len()];
        let a = Family::from_rows(normal_rows(&mut r, n, dim)).map_err(|e| e.to_string())?;
        let x = Family::from_rows(normal_rows(&mut r, n, dim)).map_err(|e| e.to_string())?;
        let chk = hilbert_bound_check(&a, &x, q, 1.8, &cfg).map_err(|e| e.to_string())?;
        // oracle for the right-hand side
        let amax = a
            .vectors()
            .iter()
            .map(|v| v.norm(Exponent::TWO))
            .fold(0.0, f64::max);
        let (fmax, _) = naive_subset_max(&x.to_rows(), q);
        let rhs = 2.0 * 1.8 * amax * fmax;
        ensure((chk.rhs - rhs).abs() <= 1e-9 * rhs, || {
            format!("rhs {} vs oracle {rhs}", chk.rhs)
        })?;
        ensure(chk.holds && chk.lhs <= rhs, || {
            format!("violation: {} > {rhs}", chk.lhs)
        })?;
        worst = worst.max(chk.lhs / rhs);
    }
    Ok(format!(
        "10000 families, zero violations, max lhs/rhs {worst:.4}"
    ))
}

/// 8. Sup-norm target constant.
fn sup_norm_constant() -> Outcome {
    let cfg = Config::default();
    let exps = [e(1.0), e(1.5), e(2.0), e(3.0), INF];
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let n = r.gen_range(1..=10);
        let dim = r.gen_range(1..=8);
        let tr = t(exps[i % 5], exps[(i / 5) % 5], INF);
        let a = Family::from_rows(normal_rows(&mut r, n, dim)).map_err(|e| e.to_string())?;
        let x = Family::from_rows(normal_rows(&mut r, n, dim)).map_err(|e| e.to_string())?;
        let qr = unconditionality_quotient(&a, &x, tr, Mode::Exhaustive, &cfg)
            .map_err(|e| e.to_string())?;
        ensure(qr.quotient <= 4.0 + 1e-9, || {
            format!("{tr}: quotient {}", qr.quotient)
        })?;
        worst = worst.max(qr.quotient);
    }
    Ok(format!("10000 families, max quotient {worst:.4}"))
}

/// 9. Harmonic tail witness.
fn tail() -> Outcome {
    let (q, r1) = (e(2.0), e(1.0));
    for b in [1.0, 2.0, 5.0, 8.0] {
        let w = tail_witness(q, r1, b).map_err(|e| e.to_string())?;
        // oracle: direct summation of the harmonic series
        let mut h = 0.0;
        let mut n = 0u64;
        while h < b {
            n += 1;
            h += 1.0 / n as f64;
        }
        ensure(w.n == n, || format!("B={b}: N={} vs oracle {n}", w.n))?;
        ensure(partial_r_norm(r1, w.n) >= b, || format!("B={b}: N fails"))?;
        ensure(w.n == 1 || partial_r_norm(r1, w.n - 1) < b, || {
            format!("B={b}: N-1 passes")
        })?;
        if b == 5.0 {
            ensure(w.n == 83, || format!("B=5: N={}", w.n))?;
        }
    }
    for m in 1..2_000u64 {
        ensure(partial_r_norm(r1, m + 1) > partial_r_norm(r1, m), || {
            format!("partial norm not increasing at {m}")
        })?;
        ensure(tail_q_bound(q, r1, m + 1) < tail_q_bound(q, r1, m), || {
            format!("tail bound not decreasing at {m}")
        })?;
    }
    // the bound dominates a long explicit tail
    let direct: f64 = (84..2_000_000u64)
        .map(|m| (m as f64).powi(-2))
        .sum::<f64>()
        .sqrt();
    ensure(tail_q_bound(q, r1, 83) >= direct, || {
        "tail bound below explicit tail".into()
    })?;
    Ok("N=83 for B=5; minimal for B in {1,2,5,8}; monotone".into())
}

/// 10. Gray-code walk against naive enumeration.
fn oracle_equivalence() -> Outcome {
    let cfg = Config::default();
    let qs = [e(1.0), e(2.0), e(3.0), INF];
    let mut r = rng(10);
    for i in 0..1_000 {
        let n = r.gen_range(1..=12);
        let dim = r.gen_range(1..=6);
        // small integers keep every sum exact, so ties are real ties
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| r.gen_range(-2i32..=2) as f64).collect())
            .collect();
        let q = qs[i % qs.len()];
        let fam = Family::new(
            rows.iter()
                .map(|v| FinSeq::new(v.clone()).unwrap())
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let got = subset_max_norm(&fam, q, Mode::Exhaustive, &cfg).map_err(|e| e.to_string())?;
        let (value, mask) = naive_subset_max(&rows, q);
        ensure(got.value.to_bits() == value.to_bits(), || {
            format!("case {i}: value {} vs {value}", got.value)
        })?;
        ensure(got.argmax.as_u64() == mask, || {
            format!("case {i}: argmax {:#x} vs {mask:#x}", got.argmax.as_u64())
        })?;
    }
    Ok("1000 families, values and argmax bitwise equal".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "hadamard witness exactness",
            limit: Duration::from_secs(1),
            run: hadamard_exactness,
        },
        Criterion {
            id: 2,
            name: "claim bound on hadamard family",
            limit: Duration::from_secs(10),
            run: claim_bound,
        },
        Criterion {
            id: 3,
            name: "minimal witness size",
            limit: Duration::from_secs(1),
            run: minimal_n,
        },
        Criterion {
            id: 4,
            name: "classifier decision table",
            limit: Duration::from_secs(5),
            run: decision_table,
        },
        Criterion {
            id: 5,
            name: "subset-sum constants 2, 4, pi",
            limit: Duration::from_secs(60),
            run: subset_constants,
        },
        Criterion {
            id: 6,
            name: "grothendieck lower bounds",
            limit: Duration::from_secs(30),
            run: grothendieck,
        },
        Criterion {
            id: 7,
            name: "hilbert multiplier inequality",
            limit: Duration::from_secs(120),
            run: hilbert_inequality,
        },
        Criterion {
            id: 8,
            name: "sup-norm target constant 4",
            limit: Duration::from_secs(60),
            run: sup_norm_constant,
        },
        Criterion {
            id: 9,
            name: "harmonic tail witness",
            limit: Duration::from_secs(1),
            run: tail,
        },
        Criterion {
            id: 10,
            name: "gray walk vs naive enumeration",
            limit: Duration::from_secs(30),
            run: oracle_equivalence,
        },
    ];
    let mut failed = 0;
    let mut known = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(Failure::Hard(d)) => (false, d),
            Err(Failure::Known(KnownRed(d))) => {
                known += 1;
                (false, format!("[known red] {d}"))
            }
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {:<32} {:>8.3}s / {:>3}s  {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    println!(
        "{} of {} criteria pass; {known} known red",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == known {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
