//! Ramanujan's original smallest-root method for `Σ_{k≥1} A_k z^k = 1`.
//!
//! Expanding `1 / (1 - Σ A_k z^k) = Σ P_k z^{k-1}` gives `P_1 = 1` and the
//! convolution `P_n = Σ_{j=1}^{n-1} A_j P_{n-j}`. When one root has strictly
//! smallest modulus, `P_n / P_{n+1}` tends to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Σ_{k=1}^{K} A_k z^k = 1`; coefficients beyond `K` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesEquation<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> PowerSeriesEquation<S> {
    /// `coeffs[0]` is `A_1`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.iter().all(S::is_zero) {
            return Err(Error::InvalidParameter("at least one A_k must be nonzero".into()));
        }
        Ok(PowerSeriesEquation { coeffs })
    }

    /// `A_k` for `k ≥ 1`.
    pub fn coeff(&self, k: usize) -> S {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i)).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }
}

/// `P_1..=P_{n_max}`; the returned vector is indexed from zero, so `v[0] = P_1`.
pub fn p_sequence<S: Scalar>(eq: &PowerSeriesEquation<S>, n_max: usize) -> Vec<S> {
    let mut p: Vec<S> = Vec::with_capacity(n_max);
    if n_max == 0 {
        return p;
    }
    p.push(S::one());
    let k_max = eq.coeffs.len();
    for n in 2..=n_max {
        let s = (1..n.min(k_max + 1)).fold(S::zero(), |acc, j| acc + eq.coeffs[j - 1].clone() * p[n - j - 1].clone());
        p.push(s);
    }
    p
}

/// `P_n / P_{n+1}` for `n = 1..n_max`; `None` where `P_{n+1} = 0`.
pub fn root_convergents<S: Scalar>(eq: &PowerSeriesEquation<S>, n_max: usize) -> Result<Vec<Option<S>>> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("need n_max >= 2 for a ratio".into()));
    }
    let p = p_sequence(eq, n_max);
    Ok(p.windows(2).map(|w| w[0].checked_div(&w[1]).ok()).collect())
}

/// Symptoms of a missing unique smallest root, read off the tail of a
/// convergent list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationDiagnostic {
    /// Some convergent in the window has a different sign than the last one.
    pub sign_changes: bool,
    /// `|Δ|` between successive convergents fails to shrink somewhere.
    pub non_contracting: bool,
    /// Undefined entries (zero `P_{n+1}`) inside the window.
    pub undefined_entries: bool,
}

impl OscillationDiagnostic {
    pub fn suspicious(&self) -> bool {
        self.sign_changes || self.non_contracting || self.undefined_entries
    }
}

pub const OSCILLATION_WINDOW: usize = 5;

pub fn oscillation_diagnostic<S: Scalar>(convergents: &[Option<S>]) -> OscillationDiagnostic {
    let start = convergents.len().saturating_sub(OSCILLATION_WINDOW);
    let window = &convergents[start..];
    let undefined_entries = window.iter().any(Option::is_none);
    let values: Vec<&S> = window.iter().flatten().collect();
    let zero = S::zero();
    let sign = |x: &S| {
        if *x > zero {
            1
        } else if *x < zero {
            -1
        } else {
            0
        }
    };
    let sign_changes = values.last().map(|last| values.iter().any(|v| sign(v) != sign(last))).unwrap_or(false);
    let deltas: Vec<S> = values.windows(2).map(|w| (w[1].clone() - w[0].clone()).abs()).collect();
    let non_contracting = deltas.windows(2).any(|w| w[1] > w[0] && !w[0].is_zero());
    OscillationDiagnostic { sign_changes, non_contracting, undefined_entries }
}
