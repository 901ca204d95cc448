//! Finitely supported sequences, extended exponents and ℓ_p norms.
//!
//! A [`FinSeq`] is a dense vector identified with the element of ℓ_p that is
//! supported on its first `len()` coordinates. Exponents live in `[1, ∞]` and
//! keep `∞` as a separate variant so that its reciprocal is exactly zero.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::{EPS_CMP, EPS_NUM};
use crate::error::{Error, Result};

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Builds a finite exponent, or `Infinity` when `value` is `+inf`.
    pub fn new(value: f64) -> Result<Self> {
        if value == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if value.is_finite() && value >= 1.0 {
            Ok(Exponent::Finite(value))
        } else {
            Err(Error::InvalidExponent(value.to_string()))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, with `1/∞ = 0` exactly.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinity => 0.0,
        }
    }

    /// The finite value, if any.
    pub fn value(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinity => None,
        }
    }

    /// The dual exponent `p*` with `1/p + 1/p* = 1`.
    pub fn dual(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(v) => Exponent::Finite(v / (v - 1.0)),
        }
    }

    /// `min{2, q}`.
    pub fn capped_at_two(self) -> Exponent {
        match self {
            Exponent::Finite(v) if v < 2.0 => Exponent::Finite(v),
            _ => Exponent::TWO,
        }
    }

    /// `self <= other` up to [`EPS_CMP`] in reciprocal space.
    pub fn le_tol(self, other: Exponent) -> bool {
        self.reciprocal() + EPS_CMP >= other.reciprocal()
    }

    /// `self < other` with a reciprocal margin larger than [`EPS_CMP`].
    pub fn lt_strict(self, other: Exponent) -> bool {
        self.reciprocal() > other.reciprocal() + EPS_CMP
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidExponent(t.to_string()))?;
                Exponent::new(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(v) => s.serialize_f64(*v),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl<'de> Visitor<'de> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(ExponentVisitor)
    }
}

/// A finitely supported real sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FinSeq(Vec<f64>);

impl FinSeq {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(FinSeq(entries))
    }

    pub fn zeros(len: usize) -> Self {
        FinSeq(vec![0.0; len])
    }

    /// The standard unit vector `e_index` of ambient length `len`.
    pub fn unit(index: usize, len: usize) -> Self {
        let mut v = vec![0.0; len];
        v[index] = 1.0;
        FinSeq(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn norm(&self, p: Exponent) -> f64 {
        lp_norm(&self.0, p)
    }

    pub fn scaled(&self, c: f64) -> FinSeq {
        FinSeq(self.0.iter().map(|x| c * x).collect())
    }
}

impl TryFrom<Vec<f64>> for FinSeq {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        FinSeq::new(v)
    }
}

impl From<FinSeq> for Vec<f64> {
    fn from(v: FinSeq) -> Vec<f64> {
        v.0
    }
}

/// An ordered exponent triple `(p, q, r)` for `ℓ_p × ℓ_q → ℓ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple {
    pub p: Exponent,
    pub q: Exponent,
    pub r: Exponent,
}

impl ExponentTriple {
    pub fn new(p: Exponent, q: Exponent, r: Exponent) -> Self {
        ExponentTriple { p, q, r }
    }

    /// `1/p + 1/q - 1/r`; nonnegative exactly when the triple is Hölder-valid.
    pub fn holder_slack(&self) -> f64 {
        self.p.reciprocal() + self.q.reciprocal() - self.r.reciprocal()
    }

    pub fn holder_valid(&self) -> bool {
        self.holder_slack() >= -EPS_CMP
    }

    pub fn require_holder_valid(&self) -> Result<()> {
        if self.holder_valid() {
            Ok(())
        } else {
            Err(Error::HolderInvalid {
                p: self.p.to_string(),
                q: self.q.to_string(),
                r: self.r.to_string(),
            })
        }
    }
}

impl fmt::Display for ExponentTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.r)
    }
}

/// ℓ_p norm of a slice.
///
/// Finite exponents other than 1 are evaluated as `m·(Σ(|v_k|/m)^p)^{1/p}`
/// with `m = max|v_k|`, which stays finite for large `p`.
pub fn lp_norm(v: &[f64], p: Exponent) -> f64 {
    let m = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => m,
        Exponent::Finite(1.0) => v.iter().map(|x| x.abs()).sum(),
        Exponent::Finite(2.0) => {
            let s: f64 = v.iter().map(|x| (x / m) * (x / m)).sum();
            m * s.sqrt()
        }
        Exponent::Finite(e) => {
            let s: f64 = v.iter().map(|x| (x.abs() / m).powf(e)).sum();
            m * s.powf(1.0 / e)
        }
    }
}

/// Outcome of [`norm_sandwich_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichCheck {
    pub lower_ok: bool,
    pub upper_ok: bool,
}

fn sandwich_pre(v: &FinSeq, p: Exponent, q: Exponent) -> Result<(f64, f64)> {
    let (pv, qv) = match (p, q) {
        (Exponent::Finite(pv), Exponent::Finite(qv)) => (pv, qv),
        _ => {
            return Err(Error::Precondition(
                "norm sandwich needs finite exponents 1 <= p <= q < inf".into(),
            ))
        }
    };
    if pv > qv {
        return Err(Error::Precondition(format!(
            "norm sandwich needs p <= q, got p = {pv}, q = {qv}"
        )));
    }
    if v.is_empty() {
        return Err(Error::Precondition(
            "norm sandwich needs at least one coordinate".into(),
        ));
    }
    Ok((pv, qv))
}

/// The factor `n^{1/p - 1/q}` in the upper half of the sandwich.
pub fn sandwich_factor(n: usize, p: f64, q: f64) -> f64 {
    (n as f64).powf(1.0 / p - 1.0 / q)
}

/// Checks `‖v‖_q ≤ ‖v‖_p ≤ n^{1/p-1/q}‖v‖_q` up to a relative [`EPS_NUM`].
pub fn norm_sandwich_check(v: &FinSeq, p: Exponent, q: Exponent) -> Result<SandwichCheck> {
    let (pv, qv) = sandwich_pre(v, p, q)?;
    let np = v.norm(p);
    let nq = v.norm(q);
    let factor = sandwich_factor(v.len(), pv, qv);
    Ok(SandwichCheck {
        lower_ok: nq <= np * (1.0 + EPS_NUM),
        upper_ok: np <= factor * nq * (1.0 + EPS_NUM),
    })
}

/// Relative slack on both sides of the sandwich: `1 - ‖v‖_q/‖v‖_p` and
/// `1 - ‖v‖_p/(n^{1/p-1/q}‖v‖_q)`. Zero means the side is tight; `None` for
/// the zero vector.
pub fn sandwich_slack(v: &FinSeq, p: Exponent, q: Exponent) -> Result<Option<(f64, f64)>> {
    let (pv, qv) = sandwich_pre(v, p, q)?;
    if v.is_zero() {
        return Ok(None);
    }
    let np = v.norm(p);
    let nq = v.norm(q);
    let factor = sandwich_factor(v.len(), pv, qv);
    Ok(Some((1.0 - nq / np, 1.0 - np / (factor * nq))))
}
