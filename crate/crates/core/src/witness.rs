//! Explicit families showing that a multiplication does not preserve
//! unconditional convergence.
//!
//! Two constructions:
//!
//! * [`hadamard_witness`]: take the rows of the Sylvester matrix of order
//!   `2^n` as both the multipliers `a_k` and the series terms `x_k`. Every
//!   coordinate of `Σ_k a_k x_k` equals `2^n`, while the rows are orthogonal,
//!   which keeps every subset sum small in ℓ_q. When
//!   `1/2 + 1/r > 1/p + 1/min{2,q}` the ratio grows like a positive power of
//!   `2^n` and beats any fixed constant `C`.
//! * [`tail_witness`]: the sequence `x(m) = m^{-1/r}` is in ℓ_q but not in ℓ_r
//!   when `r < q`, so `Σ x(m) e_m` converges unconditionally in ℓ_q while its
//!   ℓ_r partial sums are unbounded.
//!
//! All comparisons that decide `n` are made on base-2 logarithms, since
//! `2^{n(1+1/r)}` leaves the binary64 range long before `n` becomes large.

use serde::Serialize;

use crate::config::{Config, EPS_CMP, EPS_NUM};
use crate::error::{Error, Result};
use crate::seqspace::{lp_norm, Exponent, ExponentTriple, FinSeq};
use crate::unconditionality::{unconditionality_quotient, Family, Mode};

/// Largest Sylvester order `2^n` that [`sylvester`] will build.
pub const MAX_SYLVESTER_LOG: u32 = 12;

/// Largest `n` a witness certificate may use.
pub const MAX_WITNESS_LOG: u32 = 40;

/// Cap on the number of terms [`tail_witness`] sums.
pub const MAX_TAIL_TERMS: u64 = 1_000_000_000;

/// Explicitly summed tail terms before the integral bound takes over.
const TAIL_EXPLICIT_TERMS: u64 = 4096;

/// A `2^n × 2^n` matrix with entries `±1` and mutually orthogonal rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    log_size: u32,
    rows: Vec<Vec<i8>>,
}

/// The Sylvester matrix `H_{2^n}`: `H_1 = [1]`, `H_{2m} = [[H_m, H_m], [H_m, −H_m]]`.
pub fn sylvester(n: u32) -> Result<HadamardMatrix> {
    if n > MAX_SYLVESTER_LOG {
        return Err(Error::Precondition(format!(
            "Sylvester order 2^{n} exceeds the cap 2^{MAX_SYLVESTER_LOG}"
        )));
    }
    let mut rows: Vec<Vec<i8>> = vec![vec![1]];
    for _ in 0..n {
        let m = rows.len();
        let mut next = Vec::with_capacity(2 * m);
        for row in &rows {
            let mut r = row.clone();
            r.extend_from_slice(row);
            next.push(r);
        }
        for row in &rows {
            let mut r = row.clone();
            r.extend(row.iter().map(|s| -s));
            next.push(r);
        }
        rows = next;
    }
    let h = HadamardMatrix { log_size: n, rows };
    if !h.is_hadamard() {
        return Err(Error::InternalInconsistency(format!(
            "Sylvester construction of order 2^{n} failed the orthogonality check"
        )));
    }
    Ok(h)
}

impl HadamardMatrix {
    /// Checks the defining properties exactly; `None` if `rows` is not a
    /// square ±1 matrix with orthogonal rows of power-of-two order.
    pub fn from_rows(rows: Vec<Vec<i8>>) -> Option<Self> {
        let size = rows.len();
        if !size.is_power_of_two() {
            return None;
        }
        let h = HadamardMatrix {
            log_size: size.trailing_zeros(),
            rows,
        };
        h.is_hadamard().then_some(h)
    }

    pub fn log_size(&self) -> u32 {
        self.log_size
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.rows[i][j]
    }

    /// Integer inner product of rows `i` and `k`.
    pub fn row_dot(&self, i: usize, k: usize) -> i64 {
        self.rows[i]
            .iter()
            .zip(&self.rows[k])
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum()
    }

    /// Square, entries exactly ±1, distinct rows orthogonal.
    pub fn is_hadamard(&self) -> bool {
        let size = self.rows.len();
        if self.rows.iter().any(|r| r.len() != size) {
            return false;
        }
        if self.rows.iter().flatten().any(|&s| s != 1 && s != -1) {
            return false;
        }
        // For ±1 rows, <u, v> = size - 2·#{j : u_j ≠ v_j}.
        let words = size.div_ceil(64);
        let packed: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|row| {
                let mut w = vec![0u64; words];
                for (j, &s) in row.iter().enumerate() {
                    if s < 0 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        (0..size).all(|i| {
            (i + 1..size).all(|k| {
                let differ: u32 = packed[i]
                    .iter()
                    .zip(&packed[k])
                    .map(|(a, b)| (a ^ b).count_ones())
                    .sum();
                2 * differ as usize == size
            })
        })
    }

    /// `Σ_k s_{k,·}` as integers.
    pub fn column_sums(&self) -> Vec<i64> {
        let mut acc = vec![0i64; self.size()];
        for row in &self.rows {
            for (a, &s) in acc.iter_mut().zip(row) {
                *a += s as i64;
            }
        }
        acc
    }

    /// `Σ_k s_{k,·} s_{k,·}`: the coordinatewise product sum of the witness
    /// family, as integers.
    pub fn product_sum(&self) -> Vec<i64> {
        let mut acc = vec![0i64; self.size()];
        for row in &self.rows {
            for (a, &s) in acc.iter_mut().zip(row) {
                *a += (s as i64) * (s as i64);
            }
        }
        acc
    }

    pub fn to_family(&self) -> Family {
        let vectors = self
            .rows
            .iter()
            .map(|r| FinSeq::new(r.iter().map(|&s| s as f64).collect()).expect("±1 entries"))
            .collect();
        Family::with_len(vectors, self.size()).expect("square matrix")
    }

    /// Row-major, one bit per entry, most significant bit first within each
    /// byte; a set bit means −1. The final byte is zero-padded.
    pub fn to_packed_bits(&self) -> Vec<u8> {
        let size = self.size();
        let mut out = vec![0u8; (size * size).div_ceil(8)];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                if s < 0 {
                    let bit = i * size + j;
                    out[bit / 8] |= 0x80 >> (bit % 8);
                }
            }
        }
        out
    }

    /// Inverse of [`to_packed_bits`](Self::to_packed_bits) for order `2^log_size`.
    pub fn from_packed_bits(log_size: u32, bytes: &[u8]) -> Result<Self> {
        if log_size > MAX_SYLVESTER_LOG {
            return Err(Error::Precondition(format!(
                "order 2^{log_size} exceeds the cap 2^{MAX_SYLVESTER_LOG}"
            )));
        }
        let size = 1usize << log_size;
        let expected = (size * size).div_ceil(8);
        if bytes.len() != expected {
            return Err(Error::LengthMismatch {
                left: expected,
                right: bytes.len(),
            });
        }
        let rows = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        let bit = i * size + j;
                        if bytes[bit / 8] & (0x80 >> (bit % 8)) != 0 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        HadamardMatrix::from_rows(rows)
            .ok_or_else(|| Error::Precondition("packed matrix is not a Hadamard matrix".into()))
    }
}

impl Serialize for HadamardMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

/// Certificate that no constant `C` satisfies the unconditionality inequality
/// for a triple, built from a Sylvester family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    #[serde(rename = "C")]
    pub c: f64,
    pub n: u32,
    pub family_size: u64,
    /// `n(1 + 1/r)`: log₂ of `‖Σ_k a_k x_k‖_r`.
    pub log2_numerator: f64,
    /// `n(1/p + 1/2 + 1/q'')`: log₂ of the bound on `max‖a_k‖_p · max_F‖Σ_F x_k‖_q`.
    pub log2_denominator_bound: f64,
    pub certified_ratio_log2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive_quotient: Option<f64>,
    pub minimality_checked: bool,
}

/// `1/2 + 1/r` and `1/p + 1/min{2,q}`.
pub fn strict_clause_sides(t: ExponentTriple) -> (f64, f64) {
    (
        0.5 + t.r.reciprocal(),
        t.p.reciprocal() + t.q.capped_at_two().reciprocal(),
    )
}

fn log2_sides(t: ExponentTriple, n: u32) -> (f64, f64) {
    let nf = n as f64;
    let num = nf * (1.0 + t.r.reciprocal());
    let den = nf * (t.p.reciprocal() + 0.5 + t.q.capped_at_two().reciprocal());
    (num, den)
}

/// `2^{n(1+1/r)} > C · 2^{n(1/p+1/2+1/q'')}`, evaluated on logarithms.
pub fn witness_inequality_holds(t: ExponentTriple, c: f64, n: u32) -> bool {
    let (num, den) = log2_sides(t, n);
    num > c.log2() + den
}

/// Exact facts about the materialized Sylvester family of order `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactFacts {
    /// Common value of every coordinate of `Σ_k a_k x_k`.
    pub product_value: i64,
    /// Number of coordinates of `Σ_k a_k x_k` (all of them nonzero).
    pub product_support: u64,
    /// Number of ±1 entries in each row.
    pub row_support: u64,
}

impl ExactFacts {
    /// log₂ of `‖Σ_k a_k x_k‖_r` for a constant vector: `log₂(value) + log₂(support)/r`.
    pub fn log2_product_norm(&self, r: Exponent) -> f64 {
        (self.product_value as f64).log2() + (self.product_support as f64).log2() * r.reciprocal()
    }

    /// log₂ of `‖a_k‖_p` for a row of ±1 entries: `log₂(support)/p`.
    pub fn log2_row_norm(&self, p: Exponent) -> f64 {
        (self.row_support as f64).log2() * p.reciprocal()
    }
}

/// Verifies in integer arithmetic that `Σ_k s_{k,j}^2 = 2^n` for every `j`
/// and that every row has `2^n` entries of modulus one.
pub fn exact_facts(h: &HadamardMatrix) -> Result<ExactFacts> {
    let size = h.size() as i64;
    let prod = h.product_sum();
    if prod.iter().any(|&v| v != size) {
        return Err(Error::InternalInconsistency(
            "Sylvester product sum is not constant 2^n".into(),
        ));
    }
    if h.rows()
        .iter()
        .any(|r| r.len() != h.size() || r.iter().any(|&s| s.abs() != 1))
    {
        return Err(Error::InternalInconsistency(
            "Sylvester row has an entry other than ±1".into(),
        ));
    }
    Ok(ExactFacts {
        product_value: size,
        product_support: prod.len() as u64,
        row_support: h.size() as u64,
    })
}

/// Builds the Sylvester witness against a constant `C`.
///
/// `n` is the least positive integer with
/// `n(1 + 1/r) > log₂C + n(1/p + 1/2 + 1/q'')`, `q'' = min{2, q}`. The family
/// is materialized and checked in integer arithmetic when `n ≤ 12`; when the
/// family has at most `cfg.n_exh` members the exact quotient is also computed
/// and must be at least the certified ratio.
pub fn hadamard_witness(t: ExponentTriple, c: f64, cfg: &Config) -> Result<WitnessReport> {
    t.require_holder_valid()?;
    if t.r.is_infinite() {
        return Err(Error::Precondition("Hadamard witness needs r < inf".into()));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Precondition(format!(
            "C must be positive and finite, got {c}"
        )));
    }
    let (lhs, rhs) = strict_clause_sides(t);
    if lhs <= rhs + EPS_CMP {
        return Err(Error::StrictClauseNotSatisfied { lhs, rhs });
    }

    let log2c = c.log2();
    let rate = lhs - rhs;
    let estimate = if log2c <= 0.0 {
        1.0
    } else {
        (log2c / rate).floor() + 1.0
    };
    if estimate > MAX_WITNESS_LOG as f64 + 1.0 {
        return Err(Error::ConstantTooLarge {
            needed: estimate.min(u64::MAX as f64) as u64,
            cap: MAX_WITNESS_LOG,
        });
    }
    let mut n = (estimate as u32).max(1);
    while n > 1 && witness_inequality_holds(t, c, n - 1) {
        n -= 1;
    }
    while !witness_inequality_holds(t, c, n) {
        n += 1;
        if n > MAX_WITNESS_LOG {
            return Err(Error::ConstantTooLarge {
                needed: n as u64,
                cap: MAX_WITNESS_LOG,
            });
        }
    }
    if n > MAX_WITNESS_LOG {
        return Err(Error::ConstantTooLarge {
            needed: n as u64,
            cap: MAX_WITNESS_LOG,
        });
    }
    let minimality_checked = n == 1 || !witness_inequality_holds(t, c, n - 1);
    if !minimality_checked {
        return Err(Error::InternalInconsistency(format!(
            "witness size n = {n} is not minimal"
        )));
    }

    let (log2_numerator, log2_denominator_bound) = log2_sides(t, n);
    let certified_ratio_log2 = log2_numerator - log2_denominator_bound;

    let mut exhaustive_quotient = None;
    if n <= MAX_SYLVESTER_LOG {
        let h = sylvester(n)?;
        let facts = exact_facts(&h)?;
        if (facts.log2_product_norm(t.r) - log2_numerator).abs() > EPS_CMP * log2_numerator.max(1.0)
        {
            return Err(Error::InternalInconsistency(
                "product norm differs from 2^{n(1+1/r)}".into(),
            ));
        }
        if (1usize << n) <= cfg.n_exh {
            let fam = h.to_family();
            let qr = unconditionality_quotient(&fam, &fam, t, Mode::Exhaustive, cfg)?;
            let certified = certified_ratio_log2.exp2();
            if qr.quotient < certified * (1.0 - EPS_NUM) {
                return Err(Error::InternalInconsistency(format!(
                    "exhaustive quotient {} is below the certified ratio {certified}",
                    qr.quotient
                )));
            }
            exhaustive_quotient = Some(qr.quotient);
        }
    }

    Ok(WitnessReport {
        p: t.p,
        q: t.q,
        r: t.r,
        c,
        n,
        family_size: 1u64 << n,
        log2_numerator,
        log2_denominator_bound,
        certified_ratio_log2,
        exhaustive_quotient,
        minimality_checked,
    })
}

/// Result of [`tail_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailWitness {
    pub q: Exponent,
    pub r: Exponent,
    #[serde(rename = "B")]
    pub b: f64,
    /// Least `N` with `‖Σ_{m≤N} x(m) e_m‖_r ≥ B`.
    #[serde(rename = "N")]
    pub n: u64,
    pub partial_r_norm: f64,
    /// Upper bound on `‖Σ_{m>N} x(m) e_m‖_q`.
    pub tail_q_bound: f64,
}

/// `‖Σ_{m≤N} m^{-1/r} e_m‖_r = (Σ_{m≤N} 1/m)^{1/r}`.
pub fn partial_r_norm(r: Exponent, n: u64) -> f64 {
    let h: f64 = (1..=n).map(|m| 1.0 / m as f64).sum();
    h.powf(r.reciprocal())
}

/// Upper bound on `‖Σ_{m>N} m^{-1/r} e_m‖_q` for `r < q`.
///
/// For finite `q`, with `s = q/r > 1`, the tail `Σ_{m>N} m^{-s}` is summed
/// explicitly for 4096 terms and the remainder is bounded by
/// `∫_{N+4096}^∞ t^{-s} dt`. For `q = ∞` the tail norm is `(N+1)^{-1/r}`.
pub fn tail_q_bound(q: Exponent, r: Exponent, n: u64) -> f64 {
    let inv_r = r.reciprocal();
    match q {
        Exponent::Infinity => ((n + 1) as f64).powf(-inv_r),
        Exponent::Finite(qv) => {
            let s = qv * inv_r;
            let stop = n + TAIL_EXPLICIT_TERMS;
            let explicit: f64 = (n + 1..=stop).map(|m| (m as f64).powf(-s)).sum();
            let integral = (stop as f64).powf(1.0 - s) / (s - 1.0);
            (explicit + integral).powf(1.0 / qv)
        }
    }
}

/// Smallest `N` at which the ℓ_r partial norms of `Σ m^{-1/r} e_m` reach `B`,
/// together with the ℓ_q tail bound beyond `N`.
pub fn tail_witness(q: Exponent, r: Exponent, b: f64) -> Result<TailWitness> {
    if !r.lt_strict(q) {
        return Err(Error::Precondition(format!(
            "tail witness needs r < q, got q = {q}, r = {r}"
        )));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::Precondition(format!(
            "B must be positive and finite, got {b}"
        )));
    }
    let inv_r = r.reciprocal();
    // H_N <= 1 + ln N
    if b.powf(1.0 / inv_r) > 1.0 + (MAX_TAIL_TERMS as f64).ln() {
        return Err(Error::TailTooLong {
            b,
            cap: MAX_TAIL_TERMS,
        });
    }
    let mut h = 0.0f64;
    let mut n = 0u64;
    let norm = loop {
        n += 1;
        if n > MAX_TAIL_TERMS {
            return Err(Error::TailTooLong {
                b,
                cap: MAX_TAIL_TERMS,
            });
        }
        h += 1.0 / n as f64;
        let norm = h.powf(inv_r);
        if norm >= b {
            break norm;
        }
    };
    Ok(TailWitness {
        q,
        r,
        b,
        n,
        partial_r_norm: norm,
        tail_q_bound: tail_q_bound(q, r, n),
    })
}

/// The first `len` terms `m^{-1/r}`, `m = 1..=len`, as a sequence.
pub fn tail_sequence(r: Exponent, len: usize) -> FinSeq {
    let inv_r = r.reciprocal();
    FinSeq::new((1..=len).map(|m| (m as f64).powf(-inv_r)).collect()).expect("finite terms")
}

/// ℓ_p norm of a Sylvester row, as a float (for cross-checks against the
/// exact log₂ value).
pub fn row_norm(h: &HadamardMatrix, k: usize, p: Exponent) -> f64 {
    let row: Vec<f64> = h.rows()[k].iter().map(|&s| s as f64).collect();
    lp_norm(&row, p)
}
