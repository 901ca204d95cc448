//! Decision table for coordinatewise multiplication `ℓ_p × ℓ_q → ℓ_r`.
//!
//! For a Hölder-valid triple the multiplication
//!
//! * preserves unconditional convergence when `r = ∞`, or when `p ≤ 2` and `q ≤ r`;
//! * does not preserve it when `r < q`, or when `1/2 + 1/r > 1/p + 1/min{2,q}`.
//!
//! Triples covered by neither rule (for instance `p = q = r ∈ (2, ∞)`) are
//! reported as [`Verdict::Unknown`]. Strict inequalities need a margin larger
//! than [`EPS_CMP`]; exact equality falls to the non-strict side.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, EPS_CMP};
use crate::error::{Error, Result};
use crate::seqspace::{Exponent, ExponentTriple};
use crate::unconditionality::quotient_lower_bound_search;
use crate::witness::{hadamard_witness, tail_witness, TailWitness, WitnessReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Preserves,
    NotPreserves,
    Unknown,
    NotApplicable,
}

/// Which rule decided the verdict. Serialized with the citation tags used in
/// the JSON and CSV outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    #[serde(rename = "T1.4-1-rInf")]
    SupNormTarget,
    #[serde(rename = "T1.4-1-pLe2qLeR")]
    SmallMultiplierExponent,
    #[serde(rename = "T1.4-2-rLtQ")]
    TargetBelowSource,
    #[serde(rename = "T1.4-2-strict")]
    StrictExponentGap,
    HolderInvalid,
    Open,
}

impl Clause {
    pub fn tag(self) -> &'static str {
        match self {
            Clause::SupNormTarget => "T1.4-1-rInf",
            Clause::SmallMultiplierExponent => "T1.4-1-pLe2qLeR",
            Clause::TargetBelowSource => "T1.4-2-rLtQ",
            Clause::StrictExponentGap => "T1.4-2-strict",
            Clause::HolderInvalid => "HolderInvalid",
            Clause::Open => "Open",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Preserves => "Preserves",
            Verdict::NotPreserves => "NotPreserves",
            Verdict::Unknown => "Unknown",
            Verdict::NotApplicable => "NotApplicable",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
    pub verdict: Verdict,
    pub clause: Clause,
    /// Smallest distance, in reciprocal coordinates, to any boundary used by
    /// the rules: `1/p+1/q = 1/r`, `1/p = 1/2`, `1/q = 1/r` and
    /// `1/2+1/r = 1/p+1/min{2,q}`.
    pub margin: f64,
}

impl Classification {
    pub fn triple(&self) -> ExponentTriple {
        ExponentTriple::new(self.p, self.q, self.r)
    }
}

fn boundary_margin(t: ExponentTriple) -> f64 {
    let (ip, iq, ir) = (t.p.reciprocal(), t.q.reciprocal(), t.r.reciprocal());
    let iq2 = t.q.capped_at_two().reciprocal();
    [ip + iq - ir, ip - 0.5, iq - ir, 0.5 + ir - ip - iq2]
        .into_iter()
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min)
}

pub fn classify(t: ExponentTriple) -> Result<Classification> {
    let margin = boundary_margin(t);
    let make = |verdict, clause| Classification {
        p: t.p,
        q: t.q,
        r: t.r,
        verdict,
        clause,
        margin,
    };
    if !t.holder_valid() {
        return Ok(make(Verdict::NotApplicable, Clause::HolderInvalid));
    }

    let r_inf = t.r.is_infinite();
    let small_p = t.p.le_tol(Exponent::TWO) && t.q.le_tol(t.r);
    let r_below_q = t.r.lt_strict(t.q);
    let (lhs, rhs) = crate::witness::strict_clause_sides(t);
    let strict_gap = lhs > rhs + EPS_CMP;

    let preserves = r_inf || small_p;
    let not_preserves = r_below_q || strict_gap;
    if preserves && not_preserves {
        return Err(Error::InternalInconsistency(format!(
            "both a preserving and a non-preserving rule fire for {t}"
        )));
    }
    Ok(if r_inf {
        make(Verdict::Preserves, Clause::SupNormTarget)
    } else if small_p {
        make(Verdict::Preserves, Clause::SmallMultiplierExponent)
    } else if r_below_q {
        make(Verdict::NotPreserves, Clause::TargetBelowSource)
    } else if strict_gap {
        make(Verdict::NotPreserves, Clause::StrictExponentGap)
    } else {
        make(Verdict::Unknown, Clause::Open)
    })
}

/// A lattice of `(p, q)` values for a fixed `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r: Exponent,
    pub p_range: (f64, f64),
    pub q_range: (f64, f64),
    pub step: f64,
    /// Append `∞` to both axes.
    pub include_infinity: bool,
}

/// Largest finite lattice coordinate accepted by [`region_grid`].
pub const GRID_MAX: f64 = 64.0;

fn axis(range: (f64, f64), step: f64) -> Result<Vec<Exponent>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || lo < 1.0 || hi > GRID_MAX {
        return Err(Error::Precondition(format!(
            "grid range [{lo}, {hi}] must lie within [1, {GRID_MAX}]"
        )));
    }
    let mut out = Vec::new();
    if lo <= hi {
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        out.extend((0..count).map(|i| Exponent::Finite(lo + i as f64 * step)));
    }
    Ok(out)
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<ExponentTriple>> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Precondition(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        let mut ps = axis(self.p_range, self.step)?;
        let mut qs = axis(self.q_range, self.step)?;
        if ps.is_empty() || qs.is_empty() {
            return Ok(Vec::new());
        }
        if self.include_infinity {
            ps.push(Exponent::Infinity);
            qs.push(Exponent::Infinity);
        }
        Ok(ps
            .iter()
            .flat_map(|&p| qs.iter().map(move |&q| ExponentTriple::new(p, q, self.r)))
            .collect())
    }
}

/// Classifies every lattice point, `p` outer and `q` inner.
pub fn region_grid(spec: &GridSpec) -> Result<Vec<Classification>> {
    spec.points()?.into_par_iter().map(classify).collect()
}

pub const CSV_HEADER: &str = "p,q,r,verdict,clause,margin";

pub fn write_csv<W: Write>(mut w: W, grid: &[Classification]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for c in grid {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            c.p,
            c.q,
            c.r,
            c.verdict,
            c.clause.tag(),
            c.margin
        )?;
    }
    Ok(())
}

/// Family size and ambient dimension used by the search in [`cross_validate`].
pub const CROSS_SEARCH_N: usize = 4;
pub const CROSS_SEARCH_DIM: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct SearchEvidence {
    pub n: usize,
    pub dim: usize,
    pub budget: usize,
    pub seed: u64,
    pub best_quotient: f64,
    /// Known upper bound on every quotient for a preserving triple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    #[serde(flatten)]
    pub classification: Classification,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hadamard_witnesses: Vec<WitnessReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tail_witnesses: Vec<TailWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchEvidence>,
    /// Ladder rungs whose construction exceeds desk-scale limits.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub beyond_desk_scale: Vec<String>,
}

/// Constants against which non-preservation via the exponent gap is certified.
pub const WITNESS_LADDER: [f64; 3] = [1.0, 10.0, 100.0];
/// Targets for the divergent partial sums when `r < q`.
pub const TAIL_LADDER: [f64; 2] = [2.0, 5.0];

/// Backs a verdict with constructions or search evidence.
///
/// A non-preserving verdict must be reproduced by witnesses; a preserving
/// verdict must keep every searched quotient under the known constant (4 for
/// `r = ∞`, `2·K_G` otherwise). A failure is an internal inconsistency.
pub fn cross_validate(
    t: ExponentTriple,
    budget: usize,
    seed: u64,
    cfg: &Config,
) -> Result<CrossValidation> {
    t.require_holder_valid()?;
    let classification = classify(t)?;
    let mut out = CrossValidation {
        classification,
        hadamard_witnesses: Vec::new(),
        tail_witnesses: Vec::new(),
        search: None,
        beyond_desk_scale: Vec::new(),
    };
    let inconsistent = |what: String| Error::InternalInconsistency(what);
    match classification.clause {
        Clause::StrictExponentGap => {
            for c in WITNESS_LADDER {
                match hadamard_witness(t, c, cfg) {
                    Ok(w) => out.hadamard_witnesses.push(w),
                    Err(e) if e.is_capacity() => out.beyond_desk_scale.push(e.to_string()),
                    Err(e) => {
                        return Err(inconsistent(format!(
                            "Hadamard witness for C = {c} failed: {e}"
                        )))
                    }
                }
            }
        }
        Clause::TargetBelowSource => {
            for b in TAIL_LADDER {
                match tail_witness(t.q, t.r, b) {
                    Ok(w) => out.tail_witnesses.push(w),
                    Err(e) if e.is_capacity() => out.beyond_desk_scale.push(e.to_string()),
                    Err(e) => {
                        return Err(inconsistent(format!(
                            "tail witness for B = {b} failed: {e}"
                        )))
                    }
                }
            }
        }
        Clause::SupNormTarget | Clause::SmallMultiplierExponent | Clause::Open => {
            let found = quotient_lower_bound_search(
                t,
                CROSS_SEARCH_N,
                CROSS_SEARCH_DIM,
                budget,
                seed,
                cfg,
            )?;
            let bound = match classification.clause {
                Clause::SupNormTarget => Some(4.0),
                Clause::SmallMultiplierExponent => Some(2.0 * cfg.k_g_upper),
                _ => None,
            };
            let best = found.best.quotient;
            if let Some(b) = bound {
                if best > b * (1.0 + crate::config::EPS_NUM) {
                    return Err(inconsistent(format!(
                        "searched quotient {best} exceeds the bound {b} for a preserving triple"
                    )));
                }
            }
            out.search = Some(SearchEvidence {
                n: CROSS_SEARCH_N,
                dim: CROSS_SEARCH_DIM,
                budget,
                seed,
                best_quotient: best,
                bound,
            });
        }
        Clause::HolderInvalid => unreachable!("validity checked above"),
    }
    Ok(out)
}
