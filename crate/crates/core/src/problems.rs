//! Curated equations with reference roots and default starting points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::oracle::{DerivativeOracle, Expr};
use crate::reference;
use crate::scalar::{parse_ratio, ratio_to_decimal, Scalar, ScalarMode};

/// Digits kept in generated reference strings.
pub const REFERENCE_DIGITS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub oracle: Expr,
    pub default_start: BigRational,
    /// Decimal expansion of the root.
    pub reference_root: String,
    pub modes: Vec<ScalarMode>,
}

impl Problem {
    pub fn start<S: Scalar>(&self) -> S {
        S::from_ratio(&self.default_start)
    }

    pub fn reference_value(&self) -> BigRational {
        parse_ratio(&self.reference_root).expect("reference roots are valid decimals")
    }

    pub fn reference<S: Scalar>(&self) -> S {
        S::from_ratio(&self.reference_value())
    }

    pub fn supports_mode(&self, mode: ScalarMode) -> bool {
        self.modes.contains(&mode)
    }

    pub fn description(&self) -> String {
        format!("{} = 0", self.oracle)
    }
}

impl<S: Scalar> DerivativeOracle<S> for Problem {
    fn jet(&self, z: &S, order: usize) -> Result<Jet<S>> {
        self.oracle.eval_jet(z, order)
    }

    fn supports(&self, mode: ScalarMode) -> bool {
        self.supports_mode(mode)
    }
}

fn both_modes() -> Vec<ScalarMode> {
    vec![ScalarMode::Float, ScalarMode::Rational]
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `z^m - a` started at the integer `c`; exact in rational mode.
pub fn mth_root_problem(m: u32, a: &BigRational, c: i64) -> Result<Problem> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("root degree m = {m}, need m >= 2")));
    }
    if !a.is_positive() {
        return Err(Error::InvalidParameter(format!("radicand a = {a}, need a > 0")));
    }
    if c < 1 {
        return Err(Error::InvalidParameter(format!("start c = {c}, need c >= 1")));
    }
    let root = reference::nth_root(a, m, REFERENCE_DIGITS)?;
    Ok(Problem {
        name: format!("root{m}_{}", fmt_ratio(a)),
        oracle: Expr::var().pow(m) - Expr::constant(a.clone()),
        default_start: BigRational::from_integer(BigInt::from(c)),
        reference_root: ratio_to_decimal(&root, REFERENCE_DIGITS),
        modes: both_modes(),
    })
}

/// `log(1 + z) - a` started at 0; its root is `e^a - 1`.
pub fn log_problem(a: &BigRational) -> Result<Problem> {
    let root = reference::exp(a, REFERENCE_DIGITS + 5) - BigRational::one();
    Ok(Problem {
        name: format!("log1p_{}", fmt_ratio(a)),
        oracle: Expr::var().ln_1p() - Expr::constant(a.clone()),
        default_start: BigRational::zero(),
        reference_root: ratio_to_decimal(&root, REFERENCE_DIGITS),
        modes: both_modes(),
    })
}

/// `e^z - b` started at 0; its root is `log b`. The Taylor jet at 0 is
/// `[1 - b, 1, 1/2!, 1/3!, …]`, so rational convergents are exact.
pub fn log_value_problem(b: &BigRational) -> Result<Problem> {
    if !b.is_positive() {
        return Err(Error::InvalidParameter(format!("log of {b}, need b > 0")));
    }
    let root = reference::ln(b, REFERENCE_DIGITS + 5)?;
    Ok(Problem {
        name: format!("logvalue_{}", fmt_ratio(b)),
        oracle: Expr::var().exp() - Expr::constant(b.clone()),
        default_start: BigRational::zero(),
        reference_root: ratio_to_decimal(&root, REFERENCE_DIGITS),
        modes: both_modes(),
    })
}

fn half() -> Expr {
    Expr::constant(BigRational::new(1.into(), 2.into()))
}

fn float_only(name: &str, oracle: Expr, start: i64, root: &str) -> Problem {
    Problem {
        name: name.to_string(),
        oracle,
        default_start: BigRational::from_integer(start.into()),
        reference_root: root.to_string(),
        modes: vec![ScalarMode::Float],
    }
}

pub const NAMED_PROBLEMS: [&str; 5] = ["cubic_2_5", "exp3", "sin_half", "cos_fixed", "sqrt2"];

/// Registered problems by name. Reference roots are 30-digit values checked
/// against an independent bisection in the tests.
pub fn named_problem(name: &str) -> Result<Problem> {
    let p = match name {
        "cubic_2_5" => Problem {
            name: name.into(),
            oracle: Expr::var().pow(3) - Expr::int(2) * Expr::var() - Expr::int(5),
            default_start: BigRational::from_integer(2.into()),
            reference_root: "2.094551481542326591482386540579".into(),
            modes: both_modes(),
        },
        "exp3" => float_only(name, Expr::var().exp() - Expr::int(3), 1, "1.098612288668109691395245236923"),
        "sin_half" => float_only(name, Expr::var() - Expr::var().sin() - half(), 1, "1.497300389095892314681521540948"),
        "cos_fixed" => float_only(name, Expr::var() - Expr::var().cos(), 0, "0.739085133215160641655312087674"),
        "sqrt2" => mth_root_problem(2, &BigRational::from_integer(2.into()), 1)?,
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(p)
}

pub fn registry() -> Vec<Problem> {
    NAMED_PROBLEMS.iter().map(|n| named_problem(n).expect("registered")).collect()
}
