//! Unconditionality quotients of finite families.
//!
//! For families `a_0, …, a_{n-1}` and `x_0, …, x_{n-1}` the quotient
//!
//! ```text
//!   ‖Σ_k a_k x_k‖_r  /  ( max_k ‖a_k‖_p · max_{F ⊆ n} ‖Σ_{k∈F} x_k‖_q )
//! ```
//!
//! is a lower bound for any constant `C` in the unconditionality inequality
//! of the action `ℓ_p × ℓ_q → ℓ_r`. The maximum over subsets is computed
//! exactly by a Gray-code walk (one vector update per step) when `n` is at
//! most [`Config::n_exh`], or bounded from below by randomized hill
//! climbing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::action::multiply;
use crate::config::{Config, EPS_NUM};
use crate::error::{Error, Result};
use crate::gray::{gray_argmax, GrayState, Subset};
use crate::seqspace::{lp_norm, Exponent, ExponentTriple, FinSeq};

/// An ordered family of sequences sharing one ambient length.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    vectors: Vec<FinSeq>,
    ambient_len: usize,
}

impl Family {
    /// The ambient length is taken from the first vector (0 for an empty family).
    pub fn new(vectors: Vec<FinSeq>) -> Result<Self> {
        let ambient_len = vectors.first().map_or(0, FinSeq::len);
        Family::with_len(vectors, ambient_len)
    }

    pub fn with_len(vectors: Vec<FinSeq>, ambient_len: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_len) {
            return Err(Error::LengthMismatch {
                left: ambient_len,
                right: v.len(),
            });
        }
        Ok(Family {
            vectors,
            ambient_len,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let vectors = rows
            .into_iter()
            .map(FinSeq::new)
            .collect::<Result<Vec<_>>>()?;
        Family::new(vectors)
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_len
    }

    pub fn vectors(&self) -> &[FinSeq] {
        &self.vectors
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().all(FinSeq::is_zero)
    }

    /// `max_k ‖v_k‖_p` (0 for an empty family).
    pub fn max_norm(&self, p: Exponent) -> f64 {
        self.vectors.iter().map(|v| v.norm(p)).fold(0.0, f64::max)
    }

    /// `Σ_{k∈F} v_k`, summed in index order.
    pub fn subset_sum(&self, subset: &Subset) -> Vec<f64> {
        let mut acc = vec![0.0; self.ambient_len];
        for k in subset.indices() {
            for (s, x) in acc.iter_mut().zip(self.vectors[k].entries()) {
                *s += x;
            }
        }
        acc
    }

    /// `Σ_k ε_k v_k` with `ε_k = -1` for `k` in `negative`, `+1` otherwise.
    pub fn signed_sum(&self, negative: &Subset) -> Vec<f64> {
        let mut acc = vec![0.0; self.ambient_len];
        for (k, v) in self.vectors.iter().enumerate() {
            let sign = if negative.contains(k) { -1.0 } else { 1.0 };
            for (s, x) in acc.iter_mut().zip(v.entries()) {
                *s += sign * x;
            }
        }
        acc
    }

    /// Applies the same coordinate permutation to every vector:
    /// coordinate `j` of the result is coordinate `perm[j]` of the input.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Family> {
        if perm.len() != self.ambient_len {
            return Err(Error::LengthMismatch {
                left: self.ambient_len,
                right: perm.len(),
            });
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| FinSeq::new(perm.iter().map(|&j| v.entries()[j]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Family::with_len(vectors, self.ambient_len)
    }

    pub fn scaled(&self, c: f64) -> Family {
        Family {
            vectors: self.vectors.iter().map(|v| v.scaled(c)).collect(),
            ambient_len: self.ambient_len,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|v| v.entries().to_vec()).collect()
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vectors.serialize(s)
    }
}

/// How the maximum over subsets is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// All `2^n` subsets; the result is certified.
    Exhaustive,
    /// `budget` random restarts refined by single-flip hill climbing; a lower bound.
    Randomized { budget: usize, seed: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Randomized { .. } => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Randomized { seed, .. } => Some(*seed),
        }
    }
}

/// Result of a maximization over subsets or sign patterns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetMaxResult {
    pub value: f64,
    #[serde(rename = "subset_bitmask")]
    pub argmax: Subset,
    pub certified: bool,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A lower bound on the unconditionality constant from one pair of families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientResult {
    pub quotient: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Argmax of the subset maximum in the denominator.
    #[serde(rename = "subset_bitmask")]
    pub subset: Subset,
    pub certified: bool,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

struct SubsetWalk<'a> {
    fam: &'a Family,
    q: Exponent,
    sum: Vec<f64>,
}

impl GrayState for SubsetWalk<'_> {
    fn reset(&mut self, mask: u64) {
        self.sum.iter_mut().for_each(|s| *s = 0.0);
        for (k, v) in self.fam.vectors.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                for (s, x) in self.sum.iter_mut().zip(v.entries()) {
                    *s += x;
                }
            }
        }
    }

    fn flip(&mut self, k: usize, now_set: bool) {
        let v = self.fam.vectors[k].entries();
        if now_set {
            self.sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        } else {
            self.sum.iter_mut().zip(v).for_each(|(s, x)| *s -= x);
        }
    }

    fn score(&self) -> f64 {
        lp_norm(&self.sum, self.q)
    }
}

struct SignWalk<'a> {
    fam: &'a Family,
    q: Exponent,
    sum: Vec<f64>,
}

impl GrayState for SignWalk<'_> {
    fn reset(&mut self, mask: u64) {
        self.sum.iter_mut().for_each(|s| *s = 0.0);
        for (k, v) in self.fam.vectors.iter().enumerate() {
            let sign = if (mask >> k) & 1 == 1 { -1.0 } else { 1.0 };
            for (s, x) in self.sum.iter_mut().zip(v.entries()) {
                *s += sign * x;
            }
        }
    }

    fn flip(&mut self, k: usize, now_negative: bool) {
        let v = self.fam.vectors[k].entries();
        if now_negative {
            self.sum.iter_mut().zip(v).for_each(|(s, x)| *s -= 2.0 * x);
        } else {
            self.sum.iter_mut().zip(v).for_each(|(s, x)| *s += 2.0 * x);
        }
    }

    fn score(&self) -> f64 {
        lp_norm(&self.sum, self.q)
    }
}

fn require_exhaustive(n: usize, cfg: &Config) -> Result<()> {
    if n > cfg.n_exh {
        Err(Error::TooLargeForExhaustive {
            n,
            limit: cfg.n_exh,
        })
    } else {
        Ok(())
    }
}

/// `max_{F ⊆ n} ‖Σ_{k∈F} x_k‖_q`.
///
/// Exhaustive mode walks all subsets in Gray-code order; the reported argmax
/// is the first maximizer in that order.
pub fn subset_max_norm(
    fam: &Family,
    q: Exponent,
    mode: Mode,
    cfg: &Config,
) -> Result<SubsetMaxResult> {
    let n = fam.size();
    match mode {
        Mode::Exhaustive => {
            require_exhaustive(n, cfg)?;
            let best = gray_argmax(n, || SubsetWalk {
                fam,
                q,
                sum: vec![0.0; fam.ambient_len],
            });
            Ok(SubsetMaxResult {
                value: best.value,
                argmax: Subset::from_mask(best.mask(), n),
                certified: true,
                mode: mode.name(),
                seed: None,
            })
        }
        Mode::Randomized { budget, seed } => {
            if budget == 0 {
                return Err(Error::EmptyBudget);
            }
            let (value, argmax) = randomized_subset_max(fam, q, budget, seed);
            Ok(SubsetMaxResult {
                value,
                argmax,
                certified: false,
                mode: mode.name(),
                seed: Some(seed),
            })
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn hill_climb(fam: &Family, q: Exponent, rng: &mut ChaCha8Rng) -> (f64, Subset) {
    let n = fam.size();
    let mut subset = Subset::empty(n);
    for k in 0..n {
        if rng.gen::<bool>() {
            subset.insert(k);
        }
    }
    let mut sum = fam.subset_sum(&subset);
    let mut value = lp_norm(&sum, q);
    let mut order: Vec<usize> = (0..n).collect();
    let mut candidate = vec![0.0; fam.ambient_len];
    loop {
        order.shuffle(rng);
        let mut improved = false;
        for &k in &order {
            let sign = if subset.contains(k) { -1.0 } else { 1.0 };
            for ((c, s), x) in candidate.iter_mut().zip(&sum).zip(fam.vectors[k].entries()) {
                *c = s + sign * x;
            }
            let v = lp_norm(&candidate, q);
            if v > value * (1.0 + 1e-15) {
                subset.toggle(k);
                std::mem::swap(&mut sum, &mut candidate);
                value = v;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    (lp_norm(&fam.subset_sum(&subset), q), subset)
}

fn randomized_subset_max(fam: &Family, q: Exponent, budget: usize, seed: u64) -> (f64, Subset) {
    let runs: Vec<(f64, Subset)> = (0..budget as u64)
        .into_par_iter()
        .map(|i| hill_climb(fam, q, &mut stream_rng(seed, i)))
        .collect();
    let mut best = (f64::NEG_INFINITY, Subset::empty(fam.size()));
    for (v, s) in runs {
        if v > best.0 {
            best = (v, s);
        }
    }
    best
}

/// `max_{ε ∈ {−1,1}^n} ‖Σ_k ε_k x_k‖_q`, exhaustively.
///
/// The argmax bitmask marks the indices with sign −1.
pub fn sign_max_norm(fam: &Family, q: Exponent, cfg: &Config) -> Result<SubsetMaxResult> {
    let n = fam.size();
    require_exhaustive(n, cfg)?;
    let best = gray_argmax(n, || SignWalk {
        fam,
        q,
        sum: vec![0.0; fam.ambient_len],
    });
    Ok(SubsetMaxResult {
        value: best.value,
        argmax: Subset::from_mask(best.mask(), n),
        certified: true,
        mode: Mode::Exhaustive.name(),
        seed: None,
    })
}

fn check_pair(avec: &Family, xvec: &Family) -> Result<()> {
    if avec.size() != xvec.size() {
        return Err(Error::LengthMismatch {
            left: avec.size(),
            right: xvec.size(),
        });
    }
    if avec.ambient_len() != xvec.ambient_len() {
        return Err(Error::LengthMismatch {
            left: avec.ambient_len(),
            right: xvec.ambient_len(),
        });
    }
    Ok(())
}

/// `Σ_k a_k x_k` (coordinatewise products).
pub fn product_sum(avec: &Family, xvec: &Family) -> Result<FinSeq> {
    check_pair(avec, xvec)?;
    let mut acc = vec![0.0; avec.ambient_len()];
    for (a, x) in avec.vectors().iter().zip(xvec.vectors()) {
        let ax = multiply(a, x)?;
        for (s, v) in acc.iter_mut().zip(ax.entries()) {
            *s += v;
        }
    }
    FinSeq::new(acc)
}

pub fn unconditionality_quotient(
    avec: &Family,
    xvec: &Family,
    t: ExponentTriple,
    mode: Mode,
    cfg: &Config,
) -> Result<QuotientResult> {
    check_pair(avec, xvec)?;
    t.require_holder_valid()?;
    let numerator = product_sum(avec, xvec)?.norm(t.r);
    let max_a = avec.max_norm(t.p);
    if max_a == 0.0 || xvec.is_zero() {
        return Err(Error::Degenerate("all a_k or all x_k are zero"));
    }
    let sm = subset_max_norm(xvec, t.q, mode, cfg)?;
    let denominator = max_a * sm.value;
    if denominator == 0.0 {
        return Err(Error::Degenerate("zero denominator"));
    }
    Ok(QuotientResult {
        quotient: numerator / denominator,
        numerator,
        denominator,
        subset: sm.argmax,
        certified: sm.certified,
        mode: sm.mode,
        seed: sm.seed,
    })
}

/// Result of [`quotient_lower_bound_search`].
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub triple: ExponentTriple,
    pub n: usize,
    pub dim: usize,
    pub budget: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub best: QuotientResult,
    /// Restart that produced the best family.
    pub restart: usize,
    /// Number of quotient evaluations.
    pub evaluations: usize,
    /// Running best after each restart; nondecreasing.
    pub history: Vec<f64>,
    pub a_family: Family,
    pub x_family: Family,
}

struct Candidate {
    quotient: Option<QuotientResult>,
    a: Vec<Vec<f64>>,
    x: Vec<Vec<f64>>,
    evaluations: usize,
}

fn candidate_value(c: &Option<QuotientResult>) -> f64 {
    c.as_ref().map_or(f64::NEG_INFINITY, |r| r.quotient)
}

fn draw_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize, lattice: bool) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    if lattice {
                        rng.gen_range(-1i32..=1) as f64
                    } else {
                        rng.sample(StandardNormal)
                    }
                })
                .collect()
        })
        .collect()
}

fn evaluate(
    a: &[Vec<f64>],
    x: &[Vec<f64>],
    t: ExponentTriple,
    cfg: &Config,
) -> Option<QuotientResult> {
    let af = Family::from_rows(a.to_vec()).ok()?;
    let xf = Family::from_rows(x.to_vec()).ok()?;
    unconditionality_quotient(&af, &xf, t, Mode::Exhaustive, cfg).ok()
}

fn search_restart(
    t: ExponentTriple,
    n: usize,
    dim: usize,
    lattice: bool,
    rng: &mut ChaCha8Rng,
    cfg: &Config,
) -> Candidate {
    let mut a = draw_rows(rng, n, dim, lattice);
    let mut x = draw_rows(rng, n, dim, lattice);
    let mut best = evaluate(&a, &x, t, cfg);
    let mut evaluations = 1;
    for _ in 0..2 * n * dim {
        let target_a = rng.gen::<bool>();
        let k = rng.gen_range(0..n);
        let j = rng.gen_range(0..dim);
        let rows = if target_a { &mut a } else { &mut x };
        let old = rows[k][j];
        rows[k][j] = if lattice {
            let choices: Vec<f64> = [-1.0, 0.0, 1.0].into_iter().filter(|&v| v != old).collect();
            choices[rng.gen_range(0..choices.len())]
        } else {
            old + 0.5 * rng.sample::<f64, _>(StandardNormal)
        };
        let trial = evaluate(&a, &x, t, cfg);
        evaluations += 1;
        if candidate_value(&trial) > candidate_value(&best) {
            best = trial;
        } else {
            let rows = if target_a { &mut a } else { &mut x };
            rows[k][j] = old;
        }
    }
    Candidate {
        quotient: best,
        a,
        x,
        evaluations,
    }
}

/// Seeded random search for families with a large unconditionality quotient.
///
/// Restarts alternate between entries drawn from `{−1, 0, 1}` and standard
/// normal entries; each restart is refined by `2·n·dim` single-coordinate
/// perturbations that are kept only when they increase the quotient. Restart
/// `i` draws from ChaCha stream `i` of `seed`, so the outcome does not depend
/// on thread scheduling.
pub fn quotient_lower_bound_search(
    t: ExponentTriple,
    n: usize,
    dim: usize,
    budget: usize,
    seed: u64,
    cfg: &Config,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    if n == 0 || dim == 0 {
        return Err(Error::Precondition(
            "search needs n >= 1 and dim >= 1".into(),
        ));
    }
    require_exhaustive(n, cfg)?;
    t.require_holder_valid()?;

    let runs: Vec<Candidate> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            search_restart(t, n, dim, i % 2 == 0, &mut rng, cfg)
        })
        .collect();

    let mut history = Vec::with_capacity(budget);
    let mut best_idx: Option<usize> = None;
    let mut running = f64::NEG_INFINITY;
    for (i, run) in runs.iter().enumerate() {
        let v = candidate_value(&run.quotient);
        if v > running {
            running = v;
            best_idx = Some(i);
        }
        history.push(running);
    }
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let best_idx = best_idx.ok_or(Error::Degenerate("every sampled family was degenerate"))?;
    let best = runs.into_iter().nth(best_idx).expect("index in range");
    Ok(SearchOutcome {
        triple: t,
        n,
        dim,
        budget,
        seed,
        best: best.quotient.expect("best restart has a quotient"),
        restart: best_idx,
        evaluations,
        history,
        a_family: Family::from_rows(best.a)?,
        x_family: Family::from_rows(best.x)?,
    })
}

/// Both sides of the Hilbert-multiplier bound
/// `‖Σ a_k x_k‖_q ≤ 2K·max_k‖a_k‖_2·max_F‖Σ_{k∈F} x_k‖_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the bound satisfied by any action whose multiplier space is ℓ_2
/// with its standard basis, here `ℓ_2 × ℓ_q → ℓ_q`. The basis expansion of
/// `x ∈ ℓ_q` converges unconditionally to `x`, so the constant in front is
/// `2K` with `K` an upper bound for the Grothendieck constant.
pub fn hilbert_bound_check(
    avec: &Family,
    xvec: &Family,
    q: Exponent,
    k: f64,
    cfg: &Config,
) -> Result<BoundCheck> {
    check_pair(avec, xvec)?;
    require_exhaustive(xvec.size(), cfg)?;
    let lhs = product_sum(avec, xvec)?.norm(q);
    let max_a = avec.max_norm(Exponent::TWO);
    let sm = subset_max_norm(xvec, q, Mode::Exhaustive, cfg)?;
    let rhs = 2.0 * k * max_a * sm.value;
    Ok(BoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + EPS_NUM),
    })
}
