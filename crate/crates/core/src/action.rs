//! Coordinatewise multiplication `ℓ_p × ℓ_q → ℓ_r`.

use crate::config::EPS_NUM;
use crate::error::{Error, Result};
use crate::seqspace::{ExponentTriple, FinSeq};

/// The bilinear action `(a, x) ↦ ax` for a Hölder-valid triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplicationAction {
    triple: ExponentTriple,
}

impl MultiplicationAction {
    /// Fails with [`Error::HolderInvalid`] when `1/r > 1/p + 1/q`.
    pub fn new(triple: ExponentTriple) -> Result<Self> {
        triple.require_holder_valid()?;
        Ok(MultiplicationAction { triple })
    }

    pub fn triple(&self) -> ExponentTriple {
        self.triple
    }

    pub fn apply(&self, a: &FinSeq, x: &FinSeq) -> Result<FinSeq> {
        multiply(a, x)
    }

    /// `‖ax‖_r ≤ ‖a‖_p·‖x‖_q` up to a relative [`EPS_NUM`].
    pub fn holder_bound_check(&self, a: &FinSeq, x: &FinSeq) -> Result<bool> {
        holder_bound_check(a, x, self.triple)
    }
}

/// Coordinatewise product of two sequences of equal length.
pub fn multiply(a: &FinSeq, x: &FinSeq) -> Result<FinSeq> {
    if a.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: x.len(),
        });
    }
    FinSeq::new(
        a.entries()
            .iter()
            .zip(x.entries())
            .map(|(s, t)| s * t)
            .collect(),
    )
}

pub fn holder_bound_check(a: &FinSeq, x: &FinSeq, t: ExponentTriple) -> Result<bool> {
    t.require_holder_valid()?;
    let ax = multiply(a, x)?;
    Ok(ax.norm(t.r) <= a.norm(t.p) * x.norm(t.q) * (1.0 + EPS_NUM))
}
