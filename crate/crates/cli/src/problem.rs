use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use ramroot_core::problems::{log_problem, log_value_problem, mth_root_problem, named_problem, Problem};
use ramroot_core::scalar::parse_ratio;
use ramroot_core::{Error, Expr, Polynomial, Result, ScalarMode};

use crate::args::ProblemArgs;

/// A resolved problem plus the start actually used.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub problem: Problem,
    pub start: BigRational,
    /// Whether the reference root is meaningful (not for inline polynomials).
    pub has_reference: bool,
}

fn parse(label: &str, s: &str) -> Result<BigRational> {
    parse_ratio(s).map_err(|_| Error::InvalidParameter(format!("{label}: cannot parse `{s}`")))
}

fn require<'a>(label: &str, v: &'a Option<String>) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidParameter(format!("missing --{label}")))
}

pub fn resolve(args: &ProblemArgs) -> Result<Resolved> {
    let (problem, has_reference) = match (&args.problem, &args.poly) {
        (Some(name), None) => (family_or_named(name, args)?, true),
        (None, Some(coeffs)) => (inline_polynomial(coeffs)?, false),
        _ => return Err(Error::InvalidParameter("give exactly one of --problem or --poly".into())),
    };
    let start = match &args.start {
        Some(s) => parse("--start", s)?,
        None if has_reference => problem.default_start.clone(),
        None => return Err(Error::InvalidParameter("--poly needs --start".into())),
    };
    Ok(Resolved { problem, start, has_reference })
}

fn family_or_named(name: &str, args: &ProblemArgs) -> Result<Problem> {
    match name {
        "sqrt" | "root" => {
            let m = if name == "sqrt" {
                match args.m {
                    None | Some(2) => 2,
                    Some(m) => return Err(Error::InvalidParameter(format!("sqrt has m = 2, got --m {m}"))),
                }
            } else {
                args.m.ok_or_else(|| Error::InvalidParameter("missing --m".into()))?
            };
            let a = parse("--a", require("a", &args.a)?)?;
            let c = args.c.ok_or_else(|| Error::InvalidParameter("missing --c".into()))?;
            mth_root_problem(m, &a, c)
        }
        "log" => log_problem(&parse("--a", require("a", &args.a)?)?),
        "logvalue" => log_value_problem(&parse("--b", require("b", &args.b)?)?),
        other => named_problem(other),
    }
}

fn inline_polynomial(coeffs: &[String]) -> Result<Problem> {
    let parsed = coeffs.iter().map(|c| parse("--poly", c)).collect::<Result<Vec<_>>>()?;
    let poly = Polynomial::new(parsed)?;
    let mut terms = poly.coeffs().iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let magnitude = c.abs();
        let term = match k {
            0 => Expr::constant(magnitude),
            _ => {
                let power = if k == 1 { Expr::var() } else { Expr::var().pow(k as u32) };
                if magnitude.is_one() {
                    power
                } else {
                    Expr::constant(magnitude) * power
                }
            }
        };
        (c.is_negative(), term)
    });
    let oracle = match terms.next() {
        None => Expr::int(0),
        Some((negative, first)) => {
            let lead = if negative { -first } else { first };
            terms.fold(lead, |acc, (negative, t)| if negative { acc - t } else { acc + t })
        }
    };
    Ok(Problem {
        name: "poly".into(),
        oracle,
        default_start: BigRational::zero(),
        reference_root: String::new(),
        modes: vec![ScalarMode::Float, ScalarMode::Rational],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ramroot_core::DerivativeOracle;

    fn args() -> ProblemArgs {
        ProblemArgs { problem: None, poly: None, start: None, m: None, a: None, c: None, b: None }
    }

    #[test]
    fn inline_matches_polynomial_jet() {
        let mut a = args();
        a.poly = Some(vec!["-5".into(), "-2".into(), "0".into(), "1".into()]);
        a.start = Some("2".into());
        let r = resolve(&a).unwrap();
        let from_expr = r.problem.jet(&2.5f64, 4).unwrap();
        let from_poly = Polynomial::from_ints(&[-5, -2, 0, 1]).jet(&2.5f64, 4).unwrap();
        assert_eq!(from_expr, from_poly);
        assert!(!r.has_reference);
        assert_eq!(r.problem.description(), "z^3 - 2*z - 5 = 0");
    }

    #[test]
    fn families() {
        let mut a = args();
        a.problem = Some("sqrt".into());
        a.a = Some("2".into());
        a.c = Some(1);
        assert_eq!(resolve(&a).unwrap().problem.name, "root2_2");
        a.m = Some(3);
        assert!(resolve(&a).is_err());
        a.problem = Some("root".into());
        assert_eq!(resolve(&a).unwrap().problem.name, "root3_2");
        let mut a = args();
        a.problem = Some("logvalue".into());
        assert!(resolve(&a).is_err());
        a.b = Some("3/2".into());
        assert_eq!(resolve(&a).unwrap().problem.name, "logvalue_3/2");
    }

    #[test]
    fn inline_needs_start() {
        let mut a = args();
        a.poly = Some(vec!["1".into(), "1".into()]);
        assert!(resolve(&a).is_err());
    }
}
