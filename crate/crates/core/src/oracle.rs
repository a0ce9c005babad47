//! Derivative oracles: anything that can hand out the Taylor jet of `f` at a
//! point.

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::{binomial, elementary_jet, ElementaryKind, Jet};
use crate::scalar::{Scalar, ScalarMode};

/// Supplies `f(z), f'(z)/1!, …, f^(N)(z)/N!`.
///
/// Implementations must return a jet whose value coefficient is `f(z)`, and a
/// lower-order request must be a prefix of a higher-order one.
pub trait DerivativeOracle<S: Scalar> {
    fn jet(&self, z: &S, order: usize) -> Result<Jet<S>>;

    /// Whether the oracle can be evaluated at all in the given scalar mode.
    fn supports(&self, _mode: ScalarMode) -> bool {
        true
    }
}

impl<S: Scalar, T: DerivativeOracle<S> + ?Sized> DerivativeOracle<S> for &T {
    fn jet(&self, z: &S, order: usize) -> Result<Jet<S>> {
        (**self).jet(z, order)
    }

    fn supports(&self, mode: ScalarMode) -> bool {
        (**self).supports(mode)
    }
}

/// Expression tree over `z`, rational constants, the four field operations
/// and the elementary kinds. Evaluated by jet arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Const(BigRational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Apply(ElementaryKind, Box<Expr>),
}

impl Expr {
    pub fn var() -> Self {
        Expr::Var
    }

    pub fn int(n: i64) -> Self {
        Expr::Const(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn constant(r: BigRational) -> Self {
        Expr::Const(r)
    }

    pub fn apply(self, kind: ElementaryKind) -> Self {
        Expr::Apply(kind, Box::new(self))
    }

    pub fn sin(self) -> Self {
        self.apply(ElementaryKind::Sin)
    }

    pub fn cos(self) -> Self {
        self.apply(ElementaryKind::Cos)
    }

    pub fn exp(self) -> Self {
        self.apply(ElementaryKind::Exp)
    }

    pub fn ln_1p(self) -> Self {
        self.apply(ElementaryKind::Log1p)
    }

    pub fn pow(self, m: u32) -> Self {
        self.apply(ElementaryKind::Power(m))
    }

    pub fn eval_jet<S: Scalar>(&self, z: &S, order: usize) -> Result<Jet<S>> {
        match self {
            Expr::Var => Ok(Jet::variable(z.clone(), order)),
            Expr::Const(c) => Ok(Jet::constant(z.clone(), S::from_ratio(c), order)),
            Expr::Neg(a) => Ok(a.eval_jet(z, order)?.neg()),
            Expr::Add(a, b) => a.eval_jet(z, order)?.add(&b.eval_jet(z, order)?),
            Expr::Sub(a, b) => a.eval_jet(z, order)?.sub(&b.eval_jet(z, order)?),
            Expr::Mul(a, b) => a.eval_jet(z, order)?.mul(&b.eval_jet(z, order)?),
            Expr::Div(a, b) => a.eval_jet(z, order)?.div(&b.eval_jet(z, order)?),
            Expr::Apply(kind, inner) => match (kind, inner.as_ref()) {
                (_, Expr::Var) => elementary_jet(*kind, z, order),
                _ => inner.eval_jet(z, order)?.apply(*kind),
            },
        }
    }

    /// Plain binary64 evaluation, independent of the jet machinery.
    pub fn eval_f64(&self, z: f64) -> f64 {
        match self {
            Expr::Var => z,
            Expr::Const(c) => f64::from_ratio(c),
            Expr::Neg(a) => -a.eval_f64(z),
            Expr::Add(a, b) => a.eval_f64(z) + b.eval_f64(z),
            Expr::Sub(a, b) => a.eval_f64(z) - b.eval_f64(z),
            Expr::Mul(a, b) => a.eval_f64(z) * b.eval_f64(z),
            Expr::Div(a, b) => a.eval_f64(z) / b.eval_f64(z),
            Expr::Apply(kind, a) => {
                let x = a.eval_f64(z);
                match kind {
                    ElementaryKind::Sin => x.sin(),
                    ElementaryKind::Cos => x.cos(),
                    ElementaryKind::Exp => x.exp(),
                    ElementaryKind::Log1p => x.ln_1p(),
                    ElementaryKind::Power(m) => x.powi(*m as i32),
                }
            }
        }
    }

    fn is_transcendental(&self) -> bool {
        match self {
            Expr::Var | Expr::Const(_) => false,
            Expr::Neg(a) => a.is_transcendental(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_transcendental() || b.is_transcendental()
            }
            Expr::Apply(ElementaryKind::Power(_), a) => a.is_transcendental(),
            Expr::Apply(..) => true,
        }
    }

    /// True when the expression only uses field operations and powers, so
    /// rational evaluation is exact at every point.
    pub fn is_rational_everywhere(&self) -> bool {
        !self.is_transcendental()
    }
}

impl<S: Scalar> DerivativeOracle<S> for Expr {
    fn jet(&self, z: &S, order: usize) -> Result<Jet<S>> {
        self.eval_jet(z, order)
    }
}

/// Builds a derivative oracle from an expression.
pub fn oracle_from_expression(expr: Expr) -> Expr {
    expr
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => f.write_str("z"),
            Expr::Const(c) if c.is_negative() => write!(f, "({})", fmt_ratio(c)),
            Expr::Const(c) => f.write_str(&fmt_ratio(c)),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Sub(a, b) => match b.as_ref() {
                Expr::Add(..) | Expr::Sub(..) => write!(f, "{a} - ({b})"),
                _ => write!(f, "{a} - {b}"),
            },
            Expr::Mul(a, b) => write!(f, "{}*{}", paren(a), paren(b)),
            Expr::Div(a, b) => write!(f, "{}/{}", paren(a), paren(b)),
            Expr::Apply(ElementaryKind::Power(m), a) => write!(f, "{}^{m}", paren(a)),
            Expr::Apply(kind, a) => write!(f, "{kind}({a})"),
        }
    }
}

fn paren(e: &Expr) -> String {
    match e {
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(_) => format!("({e})"),
        _ => e.to_string(),
    }
}

/// Polynomial with rational coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("polynomial needs at least one coefficient".into()));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect()).expect("non-empty")
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval<S: Scalar>(&self, z: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * z.clone() + S::from_ratio(c))
    }

    /// `p(z + h)` as a polynomial in `h`.
    pub fn shift(&self, c: &BigRational) -> Polynomial {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); n];
        let mut c_pow = vec![BigRational::one(); n];
        for i in 1..n {
            c_pow[i] = &c_pow[i - 1] * c;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let b = BigRational::from_integer(binomial(i, j));
                *slot += a * b * &c_pow[i - j];
            }
        }
        Polynomial { coeffs: out }
    }
}

impl<S: Scalar> DerivativeOracle<S> for Polynomial {
    fn jet(&self, z: &S, order: usize) -> Result<Jet<S>> {
        // Repeated synthetic division: each pass peels off one Taylor
        // coefficient about z.
        let mut work: Vec<S> = self.coeffs.iter().map(S::from_ratio).collect();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(S::zero());
                continue;
            }
            let mut acc = S::zero();
            let mut quotient = vec![S::zero(); work.len().saturating_sub(1)];
            for i in (0..work.len()).rev() {
                acc = acc * z.clone() + work[i].clone();
                if i > 0 {
                    quotient[i - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = quotient;
        }
        Ok(Jet::new(z.clone(), out))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                f.write_str(&fmt_ratio(&mag))?;
            }
            match i {
                0 => {}
                1 if show_coeff => f.write_str("*z")?,
                1 => f.write_str("z")?,
                _ if show_coeff => write!(f, "*z^{i}")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Wraps a closure producing float jets. Float mode only.
pub struct FnOracle<F> {
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(f64, usize) -> Result<Jet<f64>>,
{
    pub fn new(f: F) -> Self {
        FnOracle { f }
    }
}

impl<F> DerivativeOracle<f64> for FnOracle<F>
where
    F: Fn(f64, usize) -> Result<Jet<f64>>,
{
    fn jet(&self, z: &f64, order: usize) -> Result<Jet<f64>> {
        (self.f)(*z, order)
    }

    fn supports(&self, mode: ScalarMode) -> bool {
        mode == ScalarMode::Float
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn ints(cs: &[i64]) -> Vec<Rational> {
        cs.iter().map(|&c| Rational::from(c)).collect()
    }

    fn cubic() -> Expr {
        Expr::var().pow(3) - Expr::int(2) * Expr::var() - Expr::int(5)
    }

    #[test]
    fn cubic_expression_jet() {
        let j = oracle_from_expression(cubic()).jet(&Rational::from(2), 3).unwrap();
        assert_eq!(j.coeffs(), ints(&[-1, 10, 6, 1]).as_slice());
        let p = Polynomial::from_ints(&[-5, -2, 0, 1]);
        assert_eq!(p.jet(&Rational::from(2), 3).unwrap(), j);
        assert_eq!(p.jet(&Rational::from(2), 5).unwrap().coeffs()[4..], ints(&[0, 0])[..]);
    }

    #[test]
    fn exp_minus_three_matches_finite_differences() {
        let e = Expr::var().exp() - Expr::int(3);
        let j: Jet<f64> = e.jet(&1.0, 1).unwrap();
        let e1 = std::f64::consts::E;
        assert!((j.value() - (e1 - 3.0)).abs() < 1e-15);
        let h = 1e-5;
        let fd = (e.eval_f64(1.0 + h) - e.eval_f64(1.0 - h)) / (2.0 * h);
        assert!((j.coeff(1) - fd).abs() < 1e-8);
        assert!((j.coeff(1) - e1).abs() < 1e-15);
    }

    #[test]
    fn constant_expression() {
        let j: Jet<Rational> = Expr::int(7).jet(&Rational::from(-4), 2).unwrap();
        assert_eq!(j.coeffs(), ints(&[7, 0, 0]).as_slice());
    }

    #[test]
    fn composed_transcendentals() {
        // sin(z^2) about 0.3 against finite differences
        let e = Expr::var().pow(2).sin();
        let x = 0.3;
        let j: Jet<f64> = e.jet(&x, 2).unwrap();
        let h = 1e-4;
        let g = |t: f64| (t * t).sin();
        assert!((j.coeff(1) - (g(x + h) - g(x - h)) / (2.0 * h)).abs() < 1e-7);
        assert!((2.0 * j.coeff(2) - (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)).abs() < 1e-5);

        // log(1 + e^z - 1) = z
        let e = (Expr::var().exp() - Expr::int(1)).ln_1p();
        let j: Jet<f64> = e.jet(&0.7, 6).unwrap();
        assert!((j.value() - 0.7).abs() < 1e-15);
        assert!((j.coeff(1) - 1.0).abs() < 1e-14);
        for k in 2..=6 {
            assert!((*j.coeff(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn division_by_zero_at_point_propagates() {
        let e = Expr::int(1) / Expr::var();
        assert_eq!(e.jet(&Rational::zero(), 2), Err(Error::DivisionByZeroAtPoint));
    }

    #[test]
    fn rational_mode_rejects_transcendental_points() {
        let e = Expr::var() - Expr::var().cos();
        assert!(matches!(e.jet(&Rational::from(1), 2), Err(Error::UnsupportedInRationalMode(_))));
        assert!(e.jet(&Rational::zero(), 2).is_ok());
        assert!(!e.is_rational_everywhere());
        assert!(cubic().is_rational_everywhere());
    }

    #[test]
    fn fn_oracle_is_float_only() {
        let o = FnOracle::new(|z: f64, n| Ok(Jet::variable(z, n)));
        assert!(o.supports(ScalarMode::Float));
        assert!(!o.supports(ScalarMode::Rational));
        assert_eq!(*o.jet(&2.0, 1).unwrap().value(), 2.0);
    }

    #[test]
    fn display_forms() {
        assert_eq!(cubic().to_string(), "z^3 - 2*z - 5");
        assert_eq!(Polynomial::from_ints(&[-5, -2, 0, 1]).to_string(), "z^3 - 2*z - 5");
        assert_eq!(Polynomial::from_ints(&[-1, 1, 0, 1]).to_string(), "z^3 + z - 1");
        assert_eq!((Expr::var() - Expr::var().cos()).to_string(), "z - cos(z)");
    }

    proptest! {
        #[test]
        fn polynomial_jet_matches_shift(cs in prop::collection::vec(-9i64..9, 1..7), c in -5i64..5) {
            let p = Polynomial::from_ints(&cs);
            let point = BigRational::from_integer(c.into());
            let shifted = p.shift(&point);
            let j: Jet<Rational> = p.jet(&Rational::from(c), p.degree()).unwrap();
            for (k, coeff) in shifted.coeffs().iter().enumerate() {
                prop_assert_eq!(j.coeff(k).as_ratio(), coeff);
            }
        }

        #[test]
        fn expression_prefix_consistency(x in -0.5f64..2.0, big in 1usize..10, small in 0usize..10) {
            let small = small.min(big);
            let e = Expr::var() - Expr::var().sin() - Expr::constant(BigRational::new(1.into(), 2.into()));
            let hi: Jet<f64> = e.jet(&x, big).unwrap();
            let lo: Jet<f64> = e.jet(&x, small).unwrap();
            prop_assert_eq!(hi.truncate(small), lo);
        }
    }
}
