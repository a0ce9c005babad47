//! Truncated univariate Taylor arithmetic.
//!
//! A [`Jet`] of order `N` at point `z` stores the Taylor coefficients
//! `f^(j)(z) / j!` for `j = 0..=N`. Binary operations require both operands
//! to be expanded about the same point and truncate to the smaller order.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn inv_int<S: Scalar>(k: usize) -> S {
    S::from_ratio(&BigRational::new(BigInt::one(), BigInt::from(k)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    point: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    /// Panics if `coeffs` is empty.
    pub fn new(point: S, coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least the value coefficient");
        Jet { point, coeffs }
    }

    pub fn constant(point: S, value: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = value;
        Jet { point, coeffs }
    }

    /// The identity function `z ↦ z` expanded about `point`.
    pub fn variable(point: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = point.clone();
        if order >= 1 {
            coeffs[1] = S::one();
        }
        Jet { point, coeffs }
    }

    pub fn point(&self) -> &S {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &S {
        &self.coeffs[j]
    }

    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    /// `f^(j)(z)`, i.e. `j!` times the stored coefficient.
    pub fn derivative(&self, j: usize) -> S {
        S::from_bigint(&factorial(j)) * self.coeffs[j].clone()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Jet { point: self.point.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    fn check_point(&self, other: &Self) -> Result<usize> {
        if self.point != other.point {
            return Err(Error::MismatchedPoint);
        }
        Ok(self.order().min(other.order()))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Result<Self> {
        let n = self.check_point(other)?;
        let coeffs = (0..=n).map(|j| op(self.coeffs[j].clone(), other.coeffs[j].clone())).collect();
        Ok(Jet { point: self.point.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet { point: self.point.clone(), coeffs: self.coeffs.iter().map(|a| c.clone() * a.clone()).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check_point(other)?;
        let coeffs = (0..=n)
            .map(|k| (0..=k).fold(S::zero(), |acc, i| acc + self.coeffs[i].clone() * other.coeffs[k - i].clone()))
            .collect();
        Ok(Jet { point: self.point.clone(), coeffs })
    }

    /// Jet of `1 / f`; its coefficient `n` is `D^n(1/f)(z) / n!`.
    pub fn reciprocal(&self) -> Result<Self> {
        let head = self.coeffs[0].recip().map_err(|_| Error::DivisionByZeroAtPoint)?;
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(head.clone());
        for n in 1..self.coeffs.len() {
            let s = (1..=n).fold(S::zero(), |acc, k| acc + self.coeffs[k].clone() * out[n - k].clone());
            out.push(-(head.clone() * s));
        }
        Ok(Jet { point: self.point.clone(), coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.reciprocal()?)
    }

    pub fn powu(&self, m: u32) -> Result<Self> {
        let mut acc = Jet::constant(self.point.clone(), S::one(), self.order());
        for _ in 0..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `exp ∘ self`, from `w' = u' w`.
    pub fn exp(&self) -> Result<Self> {
        let u = &self.coeffs;
        let mut w = vec![u[0].exp()?];
        for k in 1..u.len() {
            let s = (1..=k).fold(S::zero(), |acc, j| acc + S::from_i64(j as i64) * u[j].clone() * w[k - j].clone());
            w.push(inv_int::<S>(k) * s);
        }
        Ok(Jet { point: self.point.clone(), coeffs: w })
    }

    /// `(sin ∘ self, cos ∘ self)`, from `s' = u' c` and `c' = -u' s`.
    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        let u = &self.coeffs;
        let (s0, c0) = u[0].sin_cos()?;
        let mut s = vec![s0];
        let mut c = vec![c0];
        for k in 1..u.len() {
            let (mut ds, mut dc) = (S::zero(), S::zero());
            for j in 1..=k {
                let ju = S::from_i64(j as i64) * u[j].clone();
                ds = ds + ju.clone() * c[k - j].clone();
                dc = dc + ju * s[k - j].clone();
            }
            let inv = inv_int::<S>(k);
            s.push(inv.clone() * ds);
            c.push(-(inv * dc));
        }
        Ok((Jet { point: self.point.clone(), coeffs: s }, Jet { point: self.point.clone(), coeffs: c }))
    }

    /// `log(1 + self)`, from `(1 + u) w' = u'`.
    pub fn ln_1p(&self) -> Result<Self> {
        let u = &self.coeffs;
        let mut w = vec![u[0].ln_1p()?];
        let base = S::one() + u[0].clone();
        let base_inv = base.recip().map_err(|_| Error::DomainError("log(0)".into()))?;
        for k in 1..u.len() {
            let s =
                (1..k).fold(S::zero(), |acc, i| acc + S::from_i64((k - i) as i64) * u[i].clone() * w[k - i].clone());
            w.push(base_inv.clone() * (u[k].clone() - inv_int::<S>(k) * s));
        }
        Ok(Jet { point: self.point.clone(), coeffs: w })
    }

    pub fn apply(&self, kind: ElementaryKind) -> Result<Self> {
        match kind {
            ElementaryKind::Sin => Ok(self.sin_cos()?.0),
            ElementaryKind::Cos => Ok(self.sin_cos()?.1),
            ElementaryKind::Exp => self.exp(),
            ElementaryKind::Log1p => self.ln_1p(),
            ElementaryKind::Power(m) => self.powu(m),
        }
    }
}

impl<S: Scalar> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] @ {}", self.point)
    }
}

pub fn jet_mul<S: Scalar>(a: &Jet<S>, b: &Jet<S>) -> Result<Jet<S>> {
    a.mul(b)
}

pub fn jet_reciprocal<S: Scalar>(a: &Jet<S>) -> Result<Jet<S>> {
    a.reciprocal()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementaryKind {
    Sin,
    Cos,
    Exp,
    Log1p,
    Power(u32),
}

impl fmt::Display for ElementaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryKind::Sin => f.write_str("sin"),
            ElementaryKind::Cos => f.write_str("cos"),
            ElementaryKind::Exp => f.write_str("exp"),
            ElementaryKind::Log1p => f.write_str("log1p"),
            ElementaryKind::Power(m) => write!(f, "pow{m}"),
        }
    }
}

/// Exact Taylor jet of an elementary function of `z` about `z`.
///
/// `Power(m)` uses the binomial closed form and is exact at any point; the
/// transcendental kinds need their value at `z`, which rational mode only
/// has at `z = 0`.
pub fn elementary_jet<S: Scalar>(kind: ElementaryKind, z: &S, order: usize) -> Result<Jet<S>> {
    match kind {
        ElementaryKind::Power(m) => {
            let m = m as usize;
            let coeffs = (0..=order)
                .map(|j| if j > m { S::zero() } else { S::from_bigint(&binomial(m, j)) * z.powu((m - j) as u32) })
                .collect();
            Ok(Jet::new(z.clone(), coeffs))
        }
        other => Jet::variable(z.clone(), order).apply(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{make_rational, Rational};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        make_rational(p, d).unwrap()
    }

    fn rj(point: i64, cs: &[(i64, i64)]) -> Jet<Rational> {
        Jet::new(Rational::from(point), cs.iter().map(|&(p, d)| q(p, d)).collect())
    }

    fn ri(point: i64, cs: &[i64]) -> Jet<Rational> {
        Jet::new(Rational::from(point), cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn product_examples() {
        let a = ri(0, &[1, 1, 0]);
        let b = ri(0, &[1, -1, 0]);
        assert_eq!(jet_mul(&a, &b).unwrap(), ri(0, &[1, 0, -1]));

        // (z^2 - 2)^2 about z = 1: z^4 - 4z^2 + 4 = 1 - 4h + 2h^2 + 4h^3 + h^4
        let f = ri(1, &[-1, 2, 1, 0]);
        assert_eq!(jet_mul(&f, &f).unwrap(), ri(1, &[1, -4, 2, 4]));

        let one = Jet::constant(Rational::from(1), Rational::one(), 3);
        assert_eq!(jet_mul(&f, &one).unwrap(), f);
    }

    #[test]
    fn product_truncates_to_min_order() {
        let a = ri(0, &[1, 2, 3, 4]);
        let b = ri(0, &[1, 1]);
        assert_eq!(jet_mul(&a, &b).unwrap().order(), 1);
    }

    #[test]
    fn mismatched_points_rejected() {
        let a = ri(0, &[1, 2]);
        let b = ri(1, &[1, 2]);
        assert_eq!(jet_mul(&a, &b), Err(Error::MismatchedPoint));
        assert_eq!(a.add(&b), Err(Error::MismatchedPoint));
    }

    #[test]
    fn reciprocal_examples() {
        let two = Jet::constant(Rational::from(0), Rational::from(2), 3);
        assert_eq!(jet_reciprocal(&two).unwrap(), rj(0, &[(1, 2), (0, 1), (0, 1), (0, 1)]));

        let f = ri(1, &[-1, 2, 1]);
        let r = jet_reciprocal(&f).unwrap();
        assert_eq!(r, ri(1, &[-1, -2, -5]));
        // P_1 = -f'/f^2 and P_2 = -f''/f^2 + 2 f'^2 / f^3 at z = 1
        let (fv, d1, d2) = (q(-1, 1), q(2, 1), q(2, 1));
        let p1 = -(d1.clone()).checked_div(&(fv.clone() * fv.clone())).unwrap();
        let p2 = -(d2.checked_div(&fv.powu(2)).unwrap()) + q(2, 1) * d1.powu(2).checked_div(&fv.powu(3)).unwrap();
        assert_eq!(r.derivative(1), p1);
        assert_eq!(r.derivative(2), p2);

        let unit = jet_mul(&f, &r).unwrap();
        assert_eq!(unit, ri(1, &[1, 0, 0]));
    }

    #[test]
    fn reciprocal_at_root_fails() {
        let f = ri(0, &[0, 1]);
        assert_eq!(jet_reciprocal(&f), Err(Error::DivisionByZeroAtPoint));
    }

    #[test]
    fn elementary_examples() {
        let p = elementary_jet(ElementaryKind::Power(2), &Rational::from(1), 3).unwrap();
        assert_eq!(p, ri(1, &[1, 2, 1, 0]));
        let f = p.sub(&Jet::constant(Rational::from(1), Rational::from(2), 3)).unwrap();
        assert_eq!(f, ri(1, &[-1, 2, 1, 0]));

        let l = elementary_jet(ElementaryKind::Log1p, &Rational::zero(), 3).unwrap();
        assert_eq!(l, rj(0, &[(0, 1), (1, 1), (-1, 2), (1, 3)]));

        let c = elementary_jet(ElementaryKind::Cos, &Rational::zero(), 2).unwrap();
        assert_eq!(c, rj(0, &[(1, 1), (0, 1), (-1, 2)]));
        let z = Jet::variable(Rational::zero(), 2);
        assert_eq!(z.sub(&c).unwrap(), rj(0, &[(-1, 1), (1, 1), (1, 2)]));

        let e = elementary_jet(ElementaryKind::Exp, &Rational::zero(), 4).unwrap();
        assert_eq!(e, rj(0, &[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)]));
    }

    #[test]
    fn z_minus_cos_z_against_finite_differences() {
        let g = |x: f64| x - x.cos();
        let h = 1e-4;
        let j = Jet::variable(0.0, 2).sub(&elementary_jet(ElementaryKind::Cos, &0.0, 2).unwrap()).unwrap();
        assert_eq!(*j.value(), -1.0);
        assert!((j.coeff(1) - (g(h) - g(-h)) / (2.0 * h)).abs() < 1e-7);
        assert!((2.0 * j.coeff(2) - (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h)).abs() < 1e-6);
    }

    #[test]
    fn rational_transcendental_off_zero_unsupported() {
        for kind in [ElementaryKind::Sin, ElementaryKind::Cos, ElementaryKind::Exp, ElementaryKind::Log1p] {
            let r = elementary_jet(kind, &q(1, 2), 3);
            assert!(matches!(r, Err(Error::UnsupportedInRationalMode(_))), "{kind}");
        }
        assert!(matches!(elementary_jet(ElementaryKind::Log1p, &-1.5f64, 2), Err(Error::DomainError(_))));
    }

    #[test]
    fn derivative_uses_factorial() {
        let e = elementary_jet(ElementaryKind::Exp, &0.0f64, 5).unwrap();
        for j in 0..=5 {
            assert!((e.derivative(j) - 1.0).abs() < 1e-14);
        }
        assert_eq!(factorial(20).to_string(), "2432902008176640000");
        assert_eq!(binomial(9, 4), BigInt::from(126));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    fn central_diffs(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-3)
    }

    fn poly_expand(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn leibniz_matches_polynomial_product(
            a in prop::collection::vec(-20i64..20, 1..9),
            b in prop::collection::vec(-20i64..20, 1..9),
        ) {
            let order = a.len().min(b.len()) - 1;
            let ja = ri(0, &a[..=order]);
            let jb = ri(0, &b[..=order]);
            let expect = poly_expand(&a, &b);
            let got = jet_mul(&ja, &jb).unwrap();
            for k in 0..=order {
                prop_assert_eq!(got.coeff(k).clone(), Rational::from(expect[k]));
            }
        }

        #[test]
        fn reciprocal_identity_exact(
            head in prop_oneof![-9i64..-1, 1i64..9],
            tail in prop::collection::vec(-9i64..9, 0..8),
        ) {
            let mut cs = vec![head];
            cs.extend(tail);
            let a = ri(3, &cs);
            let unit = jet_mul(&a, &jet_reciprocal(&a).unwrap()).unwrap();
            prop_assert_eq!(unit, Jet::constant(Rational::from(3), Rational::one(), cs.len() - 1));
        }

        #[test]
        fn reciprocal_identity_float(
            head in prop_oneof![-2.0f64..-0.5, 0.5f64..2.0],
            tail in prop::collection::vec(-1.0f64..1.0, 0..8),
        ) {
            let mut cs = vec![head];
            cs.extend(tail);
            let a = Jet::new(0.25, cs.clone());
            let unit = jet_mul(&a, &jet_reciprocal(&a).unwrap()).unwrap();
            prop_assert!((unit.coeff(0) - 1.0).abs() <= 1e-12);
            for k in 1..cs.len() {
                prop_assert!(unit.coeff(k).abs() <= 1e-12 * 10f64.powi(k as i32));
            }
        }

        #[test]
        fn elementary_derivatives_match_finite_differences(x in -0.9f64..3.0) {
            let cases: [(ElementaryKind, fn(f64) -> f64); 4] = [
                (ElementaryKind::Sin, f64::sin),
                (ElementaryKind::Cos, f64::cos),
                (ElementaryKind::Exp, f64::exp),
                (ElementaryKind::Log1p, f64::ln_1p),
            ];
            for (kind, f) in cases {
                let j = elementary_jet(kind, &x, 2).unwrap();
                let (d1, d2) = central_diffs(f, x);
                prop_assert!(rel(*j.coeff(1), d1) <= 1e-6, "{} d1 at {}", kind, x);
                prop_assert!(rel(2.0 * j.coeff(2), d2) <= 1e-6 || (2.0 * j.coeff(2) - d2).abs() < 1e-6, "{} d2 at {}", kind, x);
            }
        }

        #[test]
        fn prefix_consistency(x in -0.5f64..2.0, big in 2usize..12, small in 0usize..12) {
            let small = small.min(big);
            for kind in [ElementaryKind::Sin, ElementaryKind::Exp, ElementaryKind::Log1p, ElementaryKind::Power(5)] {
                let hi = elementary_jet(kind, &x, big).unwrap().truncate(small);
                let lo = elementary_jet(kind, &x, small).unwrap();
                prop_assert_eq!(hi, lo);
            }
        }
    }
}
