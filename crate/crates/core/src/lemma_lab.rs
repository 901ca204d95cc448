//! Numerical checks of the scalar inequalities behind the main results.
//!
//! * Real subset sums: `Σ|x_k| ≤ 2·max_F |Σ_{k∈F} x_k|`, sharp at `(c, −c)`.
//! * Complex subset sums: the same with constant 4; the sharp constant is π.
//! * The ℓ_p–ℓ_q sandwich `‖v‖_q ≤ ‖v‖_p ≤ n^{1/p−1/q}‖v‖_q`.
//! * Grothendieck ratios `Σ‖x_k‖_2 / max_ε ‖Σ ε_k x_k‖_1`, each a lower bound
//!   for the Grothendieck constant.

use std::f64::consts::PI;

use log::error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, EPS_NUM};
use crate::error::{Error, Result};
use crate::gray::{gray_argmax, GrayState, Subset};
use crate::seqspace::{norm_sandwich_check, sandwich_slack, Exponent, FinSeq};
use crate::unconditionality::{sign_max_norm, Family};

/// Sharp constant for complex subset sums.
pub const SHARP_COMPLEX_CONSTANT: f64 = PI;

/// The input that produced a ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RatioWitness {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
    Family(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub bound: f64,
    /// `bound − ratio`; negative only if the inequality failed.
    pub slack: f64,
    pub witness: RatioWitness,
    pub certified: bool,
    /// Best possible constant, when known and smaller than `bound`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp_bound: Option<f64>,
}

impl RatioReport {
    fn new(ratio: f64, bound: f64, witness: RatioWitness, certified: bool) -> Self {
        RatioReport {
            ratio,
            bound,
            slack: bound - ratio,
            witness,
            certified,
            sharp_bound: None,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.slack >= -EPS_NUM * self.bound
    }
}

/// `max_F |Σ_{k∈F} x_k|` for real `x`, attained by the nonnegative or the
/// negative entries.
pub fn real_subset_max(x: &[f64]) -> (f64, Subset) {
    let n = x.len();
    let pos: f64 = x.iter().filter(|&&v| v >= 0.0).sum();
    let neg: f64 = x.iter().filter(|&&v| v < 0.0).sum();
    let pick_pos = pos >= -neg;
    let mut s = Subset::empty(n);
    for (k, &v) in x.iter().enumerate() {
        if (v >= 0.0) == pick_pos {
            s.insert(k);
        }
    }
    (if pick_pos { pos } else { -neg }, s)
}

/// `Σ|x_k| / max_F |Σ_{k∈F} x_k|`, at most 2.
pub fn real_subset_ratio(x: &[f64]) -> Result<RatioReport> {
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry { index });
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("all entries are zero"));
    }
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    let (best, _) = real_subset_max(x);
    Ok(RatioReport::new(
        total / best,
        2.0,
        RatioWitness::Real(x.to_vec()),
        true,
    ))
}

struct ComplexWalk<'a> {
    z: &'a [Complex64],
    sum: Complex64,
}

impl GrayState for ComplexWalk<'_> {
    fn reset(&mut self, mask: u64) {
        self.sum = self
            .z
            .iter()
            .enumerate()
            .filter(|(k, _)| (mask >> k) & 1 == 1)
            .map(|(_, z)| z)
            .sum();
    }

    fn flip(&mut self, k: usize, now_set: bool) {
        if now_set {
            self.sum += self.z[k];
        } else {
            self.sum -= self.z[k];
        }
    }

    fn score(&self) -> f64 {
        self.sum.norm()
    }
}

/// Exact `max_F |Σ_{k∈F} z_k|` by Gray-code enumeration.
pub fn complex_subset_max_exact(z: &[Complex64], cfg: &Config) -> Result<(f64, Subset)> {
    let n = z.len();
    if n > cfg.n_exh {
        return Err(Error::TooLargeForExhaustive {
            n,
            limit: cfg.n_exh,
        });
    }
    let best = gray_argmax(n, || ComplexWalk {
        z,
        sum: Complex64::new(0.0, 0.0),
    });
    Ok((best.value, Subset::from_mask(best.mask(), n)))
}

/// `max_F |Σ_{k∈F} z_k|` over half-plane subsets `{k : Re(e^{−iθ} z_k) > 0}`.
///
/// The subset only changes when `θ` crosses `arg z_k ± π/2`, so one `θ`
/// strictly between each pair of consecutive critical angles covers every
/// half-plane subset. An optimal subset always has this form, since adding a
/// point orthogonal to the current sum increases its modulus.
pub fn complex_subset_max_half_plane(z: &[Complex64]) -> (f64, Subset) {
    let n = z.len();
    let mut crit: Vec<f64> = z
        .iter()
        .filter(|w| w.norm() > 0.0)
        .flat_map(|w| {
            let a = w.arg();
            [a + PI / 2.0, a - PI / 2.0]
        })
        .map(|a| a.rem_euclid(2.0 * PI))
        .collect();
    if crit.is_empty() {
        return (0.0, Subset::empty(n));
    }
    crit.sort_by(f64::total_cmp);
    crit.dedup();
    let mut best = (0.0, Subset::empty(n));
    for i in 0..crit.len() {
        let a = crit[i];
        let b = if i + 1 < crit.len() {
            crit[i + 1]
        } else {
            crit[0] + 2.0 * PI
        };
        let theta = 0.5 * (a + b);
        let dir = Complex64::from_polar(1.0, -theta);
        let mut s = Subset::empty(n);
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, w) in z.iter().enumerate() {
            if (dir * w).re > 0.0 {
                s.insert(k);
                sum += w;
            }
        }
        let v = sum.norm();
        if v > best.0 {
            best = (v, s);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexMethod {
    /// Enumerate all subsets; requires `n ≤ n_exh`.
    Exact,
    /// Scan half-plane subsets; certified only when enumeration agrees.
    HalfPlane,
}

/// `Σ|z_k| / max_F |Σ_{k∈F} z_k|`, at most 4 (sharp constant π).
pub fn complex_subset_ratio(
    z: &[Complex64],
    method: ComplexMethod,
    cfg: &Config,
) -> Result<RatioReport> {
    if let Some(index) = z
        .iter()
        .position(|w| !(w.re.is_finite() && w.im.is_finite()))
    {
        return Err(Error::NonFiniteEntry { index });
    }
    if z.iter().all(|w| w.re == 0.0 && w.im == 0.0) {
        return Err(Error::Degenerate("all entries are zero"));
    }
    let total: f64 = z.iter().map(|w| w.norm()).sum();
    let (best, certified) = match method {
        ComplexMethod::Exact => (complex_subset_max_exact(z, cfg)?.0, true),
        ComplexMethod::HalfPlane => {
            let (v, _) = complex_subset_max_half_plane(z);
            let certified = z.len() <= cfg.n_exh && {
                let (exact, _) = complex_subset_max_exact(z, cfg)?;
                (exact - v).abs() <= EPS_NUM * exact
            };
            (v, certified)
        }
    };
    let witness = RatioWitness::Complex(z.iter().map(|w| [w.re, w.im]).collect());
    let mut report = RatioReport::new(total / best, 4.0, witness, certified);
    report.sharp_bound = Some(SHARP_COMPLEX_CONSTANT);
    Ok(report)
}

/// The `n`-th roots of unity.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

fn log_if_violated(report: &RatioReport, what: &str) {
    if !report.within_bound() {
        error!(
            "critical finding: {what} ratio {} exceeds the configured bound {}",
            report.ratio, report.bound
        );
    }
}

/// `Σ_k ‖x_k‖_2 / max_ε ‖Σ_k ε_k x_k‖_1`; a lower bound on the Grothendieck
/// constant, compared against `cfg.k_g_upper`.
pub fn grothendieck_ratio(fam: &Family, cfg: &Config) -> Result<RatioReport> {
    if fam.is_zero() {
        return Err(Error::Degenerate("all vectors are zero"));
    }
    let total: f64 = fam.vectors().iter().map(|v| v.norm(Exponent::TWO)).sum();
    let sm = sign_max_norm(fam, Exponent::ONE, cfg)?;
    let report = RatioReport::new(
        total / sm.value,
        cfg.k_g_upper,
        RatioWitness::Family(fam.to_rows()),
        true,
    );
    log_if_violated(&report, "Grothendieck");
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct GrothendieckSearch {
    pub n: usize,
    pub dim: usize,
    pub budget: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub best: RatioReport,
    /// Running best after each restart; nondecreasing.
    pub history: Vec<f64>,
    /// Number of ratio evaluations whose value exceeded the configured bound.
    pub violations: usize,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ratio_of(rows: &[Vec<f64>], cfg: &Config) -> Option<RatioReport> {
    let fam = Family::from_rows(rows.to_vec()).ok()?;
    grothendieck_ratio(&fam, cfg).ok()
}

fn value(r: &Option<RatioReport>) -> f64 {
    r.as_ref().map_or(f64::NEG_INFINITY, |r| r.ratio)
}

/// Seeded search for families with a large Grothendieck ratio.
///
/// Restarts alternate `{−1, 0, 1}` and standard normal entries; each restart
/// is refined by sweeps that flip the sign of one coordinate at a time and
/// keep the flip when the ratio increases.
pub fn grothendieck_search(
    n: usize,
    dim: usize,
    budget: usize,
    seed: u64,
    cfg: &Config,
) -> Result<GrothendieckSearch> {
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    if n == 0 || dim == 0 {
        return Err(Error::Precondition(
            "search needs n >= 1 and dim >= 1".into(),
        ));
    }
    if n > cfg.n_exh {
        return Err(Error::TooLargeForExhaustive {
            n,
            limit: cfg.n_exh,
        });
    }
    const MAX_SWEEPS: usize = 4;

    let runs: Vec<(Option<RatioReport>, usize)> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let lattice = i % 2 == 0;
            let mut rows: Vec<Vec<f64>> = (0..n)
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
                .collect();
            let mut best = ratio_of(&rows, cfg);
            let mut violations = usize::from(best.as_ref().is_some_and(|r| !r.within_bound()));
            for _ in 0..MAX_SWEEPS {
                let mut improved = false;
                for k in 0..n {
                    for j in 0..dim {
                        if rows[k][j] == 0.0 {
                            continue;
                        }
                        rows[k][j] = -rows[k][j];
                        let trial = ratio_of(&rows, cfg);
                        if trial.as_ref().is_some_and(|r| !r.within_bound()) {
                            violations += 1;
                        }
                        if value(&trial) > value(&best) {
                            best = trial;
                            improved = true;
                        } else {
                            rows[k][j] = -rows[k][j];
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            (best, violations)
        })
        .collect();

    let mut history = Vec::with_capacity(budget);
    let mut best: Option<RatioReport> = None;
    let mut violations = 0;
    for (r, v) in runs {
        violations += v;
        if value(&r) > value(&best) {
            best = r;
        }
        history.push(value(&best));
    }
    let best = best.ok_or(Error::Degenerate("every sampled family was degenerate"))?;
    Ok(GrothendieckSearch {
        n,
        dim,
        budget,
        seed,
        best,
        history,
        violations,
    })
}

/// Per-pair result of [`sandwich_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichPairReport {
    pub p: Exponent,
    pub q: Exponent,
    pub trials: usize,
    pub lower_violations: usize,
    pub upper_violations: usize,
    /// Smallest observed `1 − ‖v‖_q/‖v‖_p`.
    pub min_lower_slack: f64,
    /// Smallest observed `1 − ‖v‖_p/(n^{1/p−1/q}‖v‖_q)`.
    pub min_upper_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub seed: u64,
    pub violations: usize,
    pub pairs: Vec<SandwichPairReport>,
}

/// Runs the norm sandwich on `trials` random normal vectors per `(p, q)`
/// pair, cycling through `dims` for the vector length.
pub fn sandwich_sweep(
    dims: &[usize],
    pairs: &[(Exponent, Exponent)],
    trials: usize,
    seed: u64,
) -> Result<SandwichReport> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Precondition(
            "dims must be nonempty and positive".into(),
        ));
    }
    let mut reports = Vec::with_capacity(pairs.len());
    for (idx, &(p, q)) in pairs.iter().enumerate() {
        // validates the pair even when trials == 0
        norm_sandwich_check(&FinSeq::zeros(1), p, q)?;
        let mut rng = stream_rng(seed, idx as u64);
        let mut rep = SandwichPairReport {
            p,
            q,
            trials,
            lower_violations: 0,
            upper_violations: 0,
            min_lower_slack: f64::INFINITY,
            min_upper_slack: f64::INFINITY,
        };
        for t in 0..trials {
            let dim = dims[t % dims.len()];
            let v = FinSeq::new((0..dim).map(|_| rng.sample(StandardNormal)).collect())?;
            let check = norm_sandwich_check(&v, p, q)?;
            rep.lower_violations += usize::from(!check.lower_ok);
            rep.upper_violations += usize::from(!check.upper_ok);
            if let Some((lo, up)) = sandwich_slack(&v, p, q)? {
                rep.min_lower_slack = rep.min_lower_slack.min(lo);
                rep.min_upper_slack = rep.min_upper_slack.min(up);
            }
        }
        reports.push(rep);
    }
    let violations = reports
        .iter()
        .map(|r| r.lower_violations + r.upper_violations)
        .sum();
    Ok(SandwichReport {
        seed,
        violations,
        pairs: reports,
    })
}

/// Worst case observed for one subset-sum constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSummary {
    pub trials: usize,
    pub max_ratio: f64,
    pub bound: f64,
    /// Trials whose ratio exceeded `bound`.
    pub violations: usize,
    /// Trials whose ratio exceeded the sharp constant, when one is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub above_sharp: Option<usize>,
    /// A fixed input showing the constant is approached or attained.
    pub extremal: RatioReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaBattery {
    pub seed: u64,
    pub real: ConstantSummary,
    pub complex: ConstantSummary,
    pub sandwich: SandwichReport,
}

/// Longest random real input in [`lemma_battery`].
pub const BATTERY_REAL_MAX_LEN: usize = 16;
/// Longest random complex input in [`lemma_battery`]; enumerated exactly.
pub const BATTERY_COMPLEX_MAX_LEN: usize = 14;

/// Seeded run of the subset-sum constants and the norm sandwich.
///
/// Real inputs have length `1..=16` and complex inputs `1..=14`, with
/// standard normal entries; the sandwich uses `trials` vectors per pair.
pub fn lemma_battery(trials: usize, seed: u64, cfg: &Config) -> Result<LemmaBattery> {
    let real_runs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let n = rng.gen_range(1..=BATTERY_REAL_MAX_LEN);
            let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            real_subset_ratio(&x).map(|r| r.ratio)
        })
        .collect::<Result<_>>()?;
    let complex_runs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0x9e37_79b9_7f4a_7c15, i as u64);
            let n = rng.gen_range(1..=BATTERY_COMPLEX_MAX_LEN);
            let z: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            complex_subset_ratio(&z, ComplexMethod::Exact, cfg).map(|r| r.ratio)
        })
        .collect::<Result<_>>()?;

    let over = |v: &[f64], b: f64| v.iter().filter(|&&r| r > b + EPS_NUM).count();
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let real = ConstantSummary {
        trials,
        max_ratio: max(&real_runs),
        bound: 2.0,
        violations: over(&real_runs, 2.0),
        above_sharp: None,
        extremal: real_subset_ratio(&[1.0, -1.0])?,
    };
    let complex = ConstantSummary {
        trials,
        max_ratio: max(&complex_runs),
        bound: 4.0,
        violations: over(&complex_runs, 4.0),
        above_sharp: Some(over(&complex_runs, SHARP_COMPLEX_CONSTANT)),
        extremal: complex_subset_ratio(&roots_of_unity(64), ComplexMethod::HalfPlane, cfg)?,
    };
    let pairs = [
        (Exponent::ONE, Exponent::TWO),
        (Exponent::ONE, Exponent::Finite(4.0)),
        (Exponent::Finite(1.5), Exponent::Finite(3.0)),
        (Exponent::TWO, Exponent::Finite(6.0)),
    ];
    let sandwich = sandwich_sweep(&[1, 2, 3, 8, 17, 64], &pairs, trials, seed)?;
    Ok(LemmaBattery {
        seed,
        real,
        complex,
        sandwich,
    })
}
