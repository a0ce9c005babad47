//! Scalar field abstraction.
//!
//! Every algorithm in the crate is written against [`Scalar`], which has two
//! realizations: binary64 (`f64`) and the exact arbitrary-precision
//! [`Rational`]. Rational values are kept in canonical reduced form with a
//! positive denominator, so structural equality is numeric equality.
//!
//! Decimal rendering and digit scoring live here as well, since both need
//! exact arithmetic on the value being rendered.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which realization a scalar type uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Float,
    Rational,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Float => f.write_str("float"),
            ScalarMode::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "float" => Ok(ScalarMode::Float),
            "rational" => Ok(ScalarMode::Rational),
            other => Err(Error::InvalidParameter(format!("unknown scalar mode `{other}`"))),
        }
    }
}

/// An element of an ordered field, realized either in floating point or
/// exactly.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    /// Exact rational value, `None` for non-finite floats.
    fn to_ratio(&self) -> Option<BigRational>;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// Division that reports a zero divisor instead of producing inf/NaN.
    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    fn exp(&self) -> Result<Self>;
    fn sin_cos(&self) -> Result<(Self, Self)>;
    fn ln_1p(&self) -> Result<Self>;

    /// Unit roundoff of the realization; `None` when arithmetic is exact.
    fn unit_roundoff() -> Option<f64>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Parses `p/q`, an integer, or a plain decimal literal.
    fn parse(s: &str) -> Result<Self> {
        parse_ratio(s).map(|r| Self::from_ratio(&r))
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn to_ratio(&self) -> Option<BigRational> {
        BigRational::from_f64(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }

    fn sin_cos(&self) -> Result<(Self, Self)> {
        Ok(f64::sin_cos(*self))
    }

    fn ln_1p(&self) -> Result<Self> {
        if *self <= -1.0 {
            return Err(Error::DomainError(format!("log(1 + z) at z = {self}")));
        }
        Ok(f64::ln_1p(*self))
    }

    fn unit_roundoff() -> Option<f64> {
        Some(f64::EPSILON / 2.0)
    }
}

/// Exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// Builds the canonical rational `p/q`.
pub fn make_rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Rational> {
    Rational::new(p, q)
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ratio(s).map(Rational)
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num: BigInt = raw.num.parse().map_err(serde::de::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(serde::de::Error::custom)?;
        Rational::new(num, den).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

fn at_zero_only(name: &str, z: &Rational) -> Result<()> {
    if z.0.is_zero() {
        Ok(())
    } else {
        Err(Error::UnsupportedInRationalMode(format!("{name} at z = {z}")))
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_bigint(n: &BigInt) -> Self {
        Rational(BigRational::from_integer(n.clone()))
    }

    fn from_ratio(r: &BigRational) -> Self {
        Rational(r.clone())
    }

    fn to_ratio(&self) -> Option<BigRational> {
        Some(self.0.clone())
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &rhs.0))
        }
    }

    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    fn exp(&self) -> Result<Self> {
        at_zero_only("exp", self)?;
        Ok(Self::one())
    }

    fn sin_cos(&self) -> Result<(Self, Self)> {
        at_zero_only("sin/cos", self)?;
        Ok((Self::zero(), Self::one()))
    }

    fn ln_1p(&self) -> Result<Self> {
        if self.0 <= -BigRational::one() {
            return Err(Error::DomainError(format!("log(1 + z) at z = {self}")));
        }
        at_zero_only("log1p", self)?;
        Ok(Self::zero())
    }

    fn unit_roundoff() -> Option<f64> {
        None
    }
}

/// Converts a big rational to the nearest-ish binary64, staying accurate for
/// numerators and denominators far beyond the f64 range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Shift both parts down to 64 significant bits, then rescale.
    let n_bits = r.numer().bits() as i64;
    let d_bits = r.denom().bits() as i64;
    let n_shift = (n_bits - 64).max(0);
    let d_shift = (d_bits - 64).max(0);
    let n = (r.numer() >> n_shift as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> d_shift as usize).to_f64().unwrap_or(1.0);
    let exp = n_shift - d_shift;
    let exp = exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    (n / d) * 2f64.powi(exp.clamp(-1100, 1100))
}

/// Parses `p/q`, a signed integer, or a decimal literal with optional
/// exponent, exactly.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let t = s.trim().replace('\u{2212}', "-");
    let err = || Error::Parse(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t.as_str(), 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

/// `|r|` scaled by `10^digits` and rounded half away from zero.
fn rounded_magnitude(r: &BigRational, digits: usize) -> BigInt {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.numer().abs() * scale;
    let (q, rem) = scaled.div_rem(r.denom());
    if rem * 2 >= *r.denom() {
        q + 1
    } else {
        q
    }
}

fn rounded_signed(r: &BigRational, digits: usize) -> BigInt {
    let m = rounded_magnitude(r, digits);
    if r.is_negative() {
        -m
    } else {
        m
    }
}

/// Renders an exact rational with exactly `digits` fractional digits,
/// rounding half away from zero (long division, no floating point).
pub fn ratio_to_decimal(r: &BigRational, digits: usize) -> String {
    let m = rounded_magnitude(r, digits);
    let scale = num_traits::pow(BigInt::from(10), digits);
    let (int_part, frac_part) = m.div_rem(&scale);
    let sign = if r.is_negative() && m.sign() != Sign::NoSign { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>digits$}")
    }
}

/// Decimal rendering of any scalar with `digits` fractional digits.
pub fn to_decimal<S: Scalar>(s: &S, digits: usize) -> String {
    match s.to_ratio() {
        Some(r) => ratio_to_decimal(&r, digits),
        None => format!("{}", s.to_f64()),
    }
}

/// Reported by [`matching_digits`] for identical inputs.
pub const MATCHING_DIGITS_CAP: u32 = 1000;

/// Number of leading fractional decimal digits on which `a` and `b` agree:
/// the largest `d` such that both values round (half away from zero) to the
/// same decimal at every precision `0..=d`. Zero when they already disagree
/// after rounding to an integer.
pub fn matching_digits<S: Scalar>(a: &S, b: &S) -> u32 {
    match (a.to_ratio(), b.to_ratio()) {
        (Some(a), Some(b)) => matching_digits_ratio(&a, &b),
        _ => 0,
    }
}

pub fn matching_digits_ratio(a: &BigRational, b: &BigRational) -> u32 {
    if a == b {
        return MATCHING_DIGITS_CAP;
    }
    let mut agreed = 0;
    for d in 0..=MATCHING_DIGITS_CAP {
        if rounded_signed(a, d as usize) != rounded_signed(b, d as usize) {
            return agreed;
        }
        agreed = d;
    }
    MATCHING_DIGITS_CAP
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        make_rational(p, d).unwrap()
    }

    #[test]
    fn make_rational_reduces_and_normalizes_sign() {
        assert_eq!(q(375, 541).to_string(), "375/541");
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, -7).to_string(), "0/1");
        assert_eq!(make_rational(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(13, 19), 6), "0.684211");
        assert_eq!(to_decimal(&q(1, 2), 3), "0.500");
        assert_eq!(to_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&q(7, 2), 0), "4");
        assert_eq!(to_decimal(&2.5f64, 3), "2.500");
    }

    #[test]
    fn cube_root_of_nine_rendering() {
        // 50623/24337 = 2.08008382298557...; cbrt(9) = 2.08008382305190...
        let s = to_decimal(&q(50623, 24337), 10);
        assert_eq!(s, "2.0800838230");
        let cbrt9 = 9f64.cbrt();
        assert_eq!(&s[..10], &format!("{cbrt9:.10}")[..10]);
    }

    #[test]
    fn digit_scoring_on_sqrt2_convergents() {
        let sqrt2 = parse_ratio("1.41421356237309504880168872420969807856967187537694").unwrap();
        let score = |p: i64, d: i64| matching_digits_ratio(q(p, d).as_ratio(), &sqrt2);
        assert_eq!(score(99, 70), 3);
        assert_eq!(score(3363, 2378), 7);
        let x = q(99, 70);
        assert_eq!(matching_digits(&x, &x), MATCHING_DIGITS_CAP);
        assert_eq!(matching_digits(&1.5f64, &2.5f64), 0);
    }

    #[test]
    fn rational_division_by_zero_is_an_error() {
        assert_eq!(q(1, 3).checked_div(&Rational::zero()), Err(Error::DivisionByZero));
        assert_eq!(1.0f64.checked_div(&0.0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_transcendentals_only_at_zero() {
        assert_eq!(Rational::zero().exp().unwrap(), Rational::one());
        assert!(matches!(q(1, 2).exp(), Err(Error::UnsupportedInRationalMode(_))));
        assert!(matches!(q(1, 2).sin_cos(), Err(Error::UnsupportedInRationalMode(_))));
        assert!(matches!(q(-1, 1).ln_1p(), Err(Error::DomainError(_))));
        assert!(matches!(Scalar::ln_1p(&-2.0f64), Err(Error::DomainError(_))));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("3/-6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_ratio("-0.125").unwrap(), BigRational::new((-1).into(), 8.into()));
        assert_eq!(parse_ratio("2.5e2").unwrap(), BigRational::from_integer(250.into()));
        assert_eq!(parse_ratio("17").unwrap(), BigRational::from_integer(17.into()));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(big.clone() * 3, big * 2);
        assert_eq!(ratio_to_f64(&r), 1.5);
        let tiny = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 500));
        assert_eq!(ratio_to_f64(&tiny), 0.0);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(p, d)| q(p, d))
    }

    fn is_canonical(r: &Rational) -> bool {
        r.denom() > &BigInt::zero() && r.numer().gcd(r.denom()) == BigInt::one()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn arithmetic_stays_canonical(a in small_rational(), b in small_rational()) {
            prop_assert!(is_canonical(&(a.clone() + b.clone())));
            prop_assert!(is_canonical(&(a.clone() - b.clone())));
            prop_assert!(is_canonical(&(a.clone() * b.clone())));
            if !b.is_zero() {
                prop_assert!(is_canonical(&a.checked_div(&b).unwrap()));
            }
        }

        #[test]
        fn field_laws_hold_exactly(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.recip().unwrap(), Rational::one());
            }
        }

        #[test]
        fn decimal_agrees_with_float(p in -999_999i64..1_000_000, d in 1i64..1_000_000, digits in 1usize..13) {
            let exact = to_decimal(&q(p, d), digits);
            let approx = (p as f64) / (d as f64);
            let parsed: f64 = exact.parse().unwrap();
            prop_assert!((parsed - approx).abs() <= 0.5 * 10f64.powi(-(digits as i32)) + 1e-9 * approx.abs().max(1.0));
        }

        #[test]
        fn matching_digits_is_symmetric(a in small_rational(), b in small_rational()) {
            prop_assert_eq!(matching_digits(&a, &b), matching_digits(&b, &a));
        }
    }
}
