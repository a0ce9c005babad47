//! Generalized Ramanujan root approximation.
//!
//! For `f` with a simple zero `α` and a point `z` near it, the sequence
//! `T_k(z) = P_k(z) f(z)^{k+1}` (with `P_k` the k-th derivative of `1/f`)
//! satisfies `T_0 = 1` and
//!
//! ```text
//! T_n = -Σ_{k<n} C(n,k) T_k f^{n-k-1} f^{(n-k)}
//! ```
//!
//! and `z + n f T_{n-1}/T_n` tends to `α` as `n` grows. Used as an update
//! rule with fixed `n` it is an iteration of order `n + 1`: Newton for
//! `n = 1`, Halley for `n = 2`.
//!
//! Internally the sequence is kept factorial-scaled, `t_k = T_k / k!`, which
//! turns the binomial recursion into a plain convolution with the Taylor
//! coefficients `a_j = f^(j)/j!`:
//!
//! ```text
//! t_n = -Σ_{k<n} t_k f^{n-k-1} a_{n-k}
//! ```
//!
//! and the step into `z + f t_{n-1}/t_n`. The `n!` growth of `T_n` cancels,
//! so float evaluation stays in range for large `n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{binomial, factorial, Jet};
use crate::oracle::DerivativeOracle;
use crate::scalar::Scalar;

/// Factorial-scaled T-sequence at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TSequence<S> {
    point: S,
    f_value: S,
    scaled: Vec<S>,
}

impl<S: Scalar> TSequence<S> {
    /// Runs the scaled recursion up to order `n` on an existing jet.
    pub fn from_jet(jet: &Jet<S>, n: usize) -> Result<Self> {
        if jet.order() < n {
            return Err(Error::OracleOrderInsufficient { required: n, available: jet.order() });
        }
        let f = jet.value().clone();
        let mut f_pow = Vec::with_capacity(n.max(1));
        f_pow.push(S::one());
        for i in 1..n {
            f_pow.push(f_pow[i - 1].clone() * f.clone());
        }
        let mut t = Vec::with_capacity(n + 1);
        t.push(S::one());
        for m in 1..=n {
            let s = (0..m)
                .fold(S::zero(), |acc, k| acc + t[k].clone() * f_pow[m - k - 1].clone() * jet.coeff(m - k).clone());
            t.push(-s);
        }
        Ok(TSequence { point: jet.point().clone(), f_value: f, scaled: t })
    }

    pub fn point(&self) -> &S {
        &self.point
    }

    pub fn f_value(&self) -> &S {
        &self.f_value
    }

    pub fn order(&self) -> usize {
        self.scaled.len() - 1
    }

    /// `t_k = T_k / k!`.
    pub fn scaled(&self, k: usize) -> &S {
        &self.scaled[k]
    }

    pub fn scaled_values(&self) -> &[S] {
        &self.scaled
    }

    /// `T_k = k! t_k`.
    pub fn unscaled(&self, k: usize) -> S {
        S::from_bigint(&factorial(k)) * self.scaled[k].clone()
    }

    /// `P_k = T_k / f^{k+1}`, the k-th derivative of `1/f`.
    pub fn p_value(&self, k: usize) -> Result<S> {
        let denom = self.f_value.powu(k as u32 + 1);
        self.unscaled(k).checked_div(&denom).map_err(|_| Error::DivisionByZeroAtPoint)
    }

    /// `z + f t_{n-1}/t_n`; `z` itself when `f(z) = 0`.
    pub fn approximant(&self, n: usize) -> Result<S> {
        assert!(n >= 1 && n <= self.order(), "approximant order {n} outside 1..={}", self.order());
        if self.f_value.is_zero() {
            return Ok(self.point.clone());
        }
        let ratio = self.scaled[n - 1].checked_div(&self.scaled[n]).map_err(|_| Error::StepUndefined { order: n })?;
        Ok(self.point.clone() + self.f_value.clone() * ratio)
    }

    /// `|n+1 - (n+1) t_{n-1} t_{n+1} / t_n^2|`, needs order `n + 1`.
    pub fn convergence_indicator(&self, n: usize) -> Result<S> {
        assert!(n >= 1 && n < self.order(), "indicator order {n} needs a sequence of order {}", n + 1);
        let t_n = &self.scaled[n];
        let ratio = (self.scaled[n - 1].clone() * self.scaled[n + 1].clone())
            .checked_div(&(t_n.clone() * t_n.clone()))
            .map_err(|_| Error::StepUndefined { order: n })?;
        let k = S::from_i64(n as i64 + 1);
        Ok((k.clone() - k * ratio).abs())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("method order must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn t_sequence<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S, n: usize) -> Result<TSequence<S>> {
    TSequence::from_jet(&oracle.jet(z, n)?, n)
}

/// One generalized Ramanujan step of order `n` from `z`.
pub fn approximant_step<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S, n: usize) -> Result<S> {
    check_order(n)?;
    t_sequence(oracle, z, n)?.approximant(n)
}

/// Approximants of orders `1..=n_max` from a single shared T-sequence.
/// Entries where `t_n = 0` are `None`.
pub fn convergent_table<S: Scalar, O: DerivativeOracle<S> + ?Sized>(
    oracle: &O,
    z: &S,
    n_max: usize,
) -> Result<Vec<Option<S>>> {
    check_order(n_max)?;
    let ts = t_sequence(oracle, z, n_max)?;
    Ok((1..=n_max).map(|n| ts.approximant(n).ok()).collect())
}

pub fn convergence_indicator<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S, n: usize) -> Result<S> {
    check_order(n)?;
    t_sequence(oracle, z, n + 1)?.convergence_indicator(n)
}

/// Newton's step `z - f/f'`, written out directly.
pub fn reference_newton_step<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S) -> Result<S> {
    let jet = oracle.jet(z, 1)?;
    let f = jet.value().clone();
    let df = jet.derivative(1);
    let delta = f.checked_div(&df).map_err(|_| Error::StepUndefined { order: 1 })?;
    Ok(z.clone() - delta)
}

/// Halley's step `z - (f/f') / (1 - f f'' / (2 f'^2))`, written out directly.
pub fn reference_halley_step<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S) -> Result<S> {
    let jet = oracle.jet(z, 2)?;
    let f = jet.value().clone();
    let df = jet.derivative(1);
    let d2f = jet.derivative(2);
    let undefined = |_| Error::StepUndefined { order: 2 };
    let newton = f.checked_div(&df).map_err(undefined)?;
    let two = S::from_i64(2);
    let correction = (f * d2f).checked_div(&(two * df.clone() * df)).map_err(undefined)?;
    let denom = S::one() - correction;
    Ok(z.clone() - newton.checked_div(&denom).map_err(undefined)?)
}

/// Unscaled `P_0..=P_n` straight from the Leibniz recursion on `P f = 1`.
///
/// Divides by `f(z)` at every level and loses accuracy in float mode as `z`
/// approaches the root; kept for cross-checking [`TSequence`].
pub fn p_sequence_unscaled<S: Scalar, O: DerivativeOracle<S> + ?Sized>(oracle: &O, z: &S, n: usize) -> Result<Vec<S>> {
    let jet = oracle.jet(z, n)?;
    if jet.order() < n {
        return Err(Error::OracleOrderInsufficient { required: n, available: jet.order() });
    }
    let f = jet.value().clone();
    let inv_f = f.recip().map_err(|_| Error::DivisionByZeroAtPoint)?;
    let derivs: Vec<S> = (0..=n).map(|j| jet.derivative(j)).collect();
    let mut p = vec![inv_f.clone()];
    for m in 1..=n {
        let s = (0..m)
            .fold(S::zero(), |acc, k| acc + S::from_bigint(&binomial(m, k)) * p[k].clone() * derivs[m - k].clone());
        p.push(-(inv_f.clone() * s));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<S> {
    pub order: usize,
    pub max_iterations: usize,
    pub residual_tolerance: S,
    pub step_tolerance: S,
    pub check_condition: bool,
}

pub const DEFAULT_RESIDUAL_TOLERANCE: &str = "1e-14";
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

impl<S: Scalar> SolverConfig<S> {
    /// Residual tolerance 1e-14, step tolerance 0, 100 iterations.
    pub fn new(order: usize) -> Self {
        SolverConfig {
            order,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            residual_tolerance: S::parse(DEFAULT_RESIDUAL_TOLERANCE).expect("valid literal"),
            step_tolerance: S::zero(),
            check_condition: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.order)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive".into()));
        }
        if self.residual_tolerance < S::zero() || self.step_tolerance < S::zero() {
            return Err(Error::InvalidParameter("tolerances must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminationReason {
    ResidualMet,
    StepMet,
    MaxIterations,
    StepUndefined,
}

impl TerminationReason {
    pub fn converged(self) -> bool {
        matches!(self, TerminationReason::ResidualMet | TerminationReason::StepMet)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord<S> {
    pub index: usize,
    pub z: S,
    pub residual: S,
    pub condition: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace<S> {
    pub order: usize,
    pub iterates: Vec<IterationRecord<S>>,
    pub termination: TerminationReason,
}

impl<S: Scalar> IterationTrace<S> {
    pub fn last(&self) -> &IterationRecord<S> {
        self.iterates.last().expect("trace holds at least z_0")
    }

    pub fn root(&self) -> &S {
        &self.last().z
    }

    /// Number of steps taken.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Iterates `z_{m+1} = z_m + f(z_m) t_{n-1}(z_m) / t_n(z_m)` with fixed `n`.
///
/// Stops when `|f(z_m)| <= residual_tolerance` (or `f(z_m) = 0`), when
/// `|z_m - z_{m-1}| <= step_tolerance`, after `max_iterations` steps, or when
/// `t_n` vanishes. Only oracle failures are returned as errors.
pub fn iterate<S: Scalar, O: DerivativeOracle<S> + ?Sized>(
    oracle: &O,
    z0: &S,
    config: &SolverConfig<S>,
) -> Result<IterationTrace<S>> {
    config.validate()?;
    let n = config.order;
    let jet_order = if config.check_condition { n + 1 } else { n };
    let mut iterates = Vec::new();
    let mut z = z0.clone();
    let mut previous: Option<S> = None;

    let termination = loop {
        let ts = t_sequence(oracle, &z, jet_order)?;
        let residual = ts.f_value().clone();
        let condition = if config.check_condition { ts.convergence_indicator(n).ok() } else { None };
        iterates.push(IterationRecord { index: iterates.len(), z: z.clone(), residual: residual.clone(), condition });

        if residual.is_zero() || residual.abs() <= config.residual_tolerance {
            break TerminationReason::ResidualMet;
        }
        if let Some(prev) = &previous {
            if (z.clone() - prev.clone()).abs() <= config.step_tolerance {
                break TerminationReason::StepMet;
            }
        }
        if iterates.len() > config.max_iterations {
            break TerminationReason::MaxIterations;
        }
        match ts.approximant(n) {
            Ok(next) => {
                previous = Some(std::mem::replace(&mut z, next));
            }
            Err(_) => break TerminationReason::StepUndefined,
        }
    };
    Ok(IterationTrace { order: n, iterates, termination })
}

/// Estimates the order of convergence `p` in `ε_{m+1} ~ ε_m^p` from the last
/// three consecutive iterates whose errors against `root` are resolvable.
///
/// In float mode errors below `64 u max(1, |root|)` are treated as noise and
/// skipped; in rational mode only exact zeros and values that underflow
/// binary64 are skipped.
pub fn empirical_order<S: Scalar>(trace: &IterationTrace<S>, root: &S) -> Result<f64> {
    let floor = S::unit_roundoff().map(|u| 64.0 * u * root.to_f64().abs().max(1.0)).unwrap_or(0.0);
    let log_errors: Vec<Option<f64>> = trace
        .iterates
        .iter()
        .map(|rec| {
            let e = (rec.z.clone() - root.clone()).abs().to_f64();
            (e.is_finite() && e > floor).then(|| e.ln())
        })
        .collect();
    for w in log_errors.windows(3).rev() {
        if let [Some(a), Some(b), Some(c)] = *w {
            let denom = b - a;
            if denom != 0.0 {
                return Ok((c - b) / denom);
            }
        }
    }
    Err(Error::InsufficientData(format!(
        "need three consecutive iterates with resolvable error, trace has {}",
        trace.iterates.len()
    )))
}

/// Least-squares slope of `log |step(root + h) - root|` against `log |h|`
/// for one order-`n` step. The slope estimates `n + 1`.
///
/// Offsets whose error is zero or below the binary64 range are dropped.
pub fn step_error_slope<S: Scalar, O: DerivativeOracle<S> + ?Sized>(
    oracle: &O,
    root: &S,
    n: usize,
    offsets: &[S],
) -> Result<f64> {
    check_order(n)?;
    let mut points = Vec::with_capacity(offsets.len());
    for h in offsets {
        let z = root.clone() + h.clone();
        let e = (approximant_step(oracle, &z, n)? - root.clone()).abs().to_f64();
        let x = h.abs().to_f64();
        if e > 0.0 && e.is_finite() && x > 0.0 {
            points.push((x.ln(), e.ln()));
        }
    }
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} of {} offsets gave a resolvable step error",
            points.len(),
            offsets.len()
        )));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("offsets must differ in magnitude".into()));
    }
    Ok(sxy / sxx)
}
