//! High-precision reference values computed by routes that share nothing with
//! the root-finding code: integer n-th roots, fixed-point Taylor series and
//! bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const GUARD_DIGITS: usize = 10;

fn pow10(d: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), d)
}

/// `a^(1/m)` truncated to `digits` fractional digits.
pub fn nth_root(a: &BigRational, m: u32, digits: usize) -> Result<BigRational> {
    if m == 0 || !a.is_positive() {
        return Err(Error::InvalidParameter(format!("real {m}-th root of {a}")));
    }
    let (p, q) = (a.numer(), a.denom());
    let radicand = p * num_traits::pow(q.clone(), m as usize - 1) * num_traits::pow(pow10(digits), m as usize);
    Ok(BigRational::new(radicand.nth_root(m), q * pow10(digits)))
}

/// `exp(a)` to roughly `digits` fractional digits.
pub fn exp(a: &BigRational, digits: usize) -> BigRational {
    // exp(a) = exp(a / 2^k)^(2^k) keeps the series argument below 1/2.
    let mut k = 0u32;
    let mut reduced = a.clone();
    let half = BigRational::new(1.into(), 2.into());
    while reduced.abs() > half {
        reduced /= BigInt::from(2);
        k += 1;
    }
    let work = digits + GUARD_DIGITS + 2 * k as usize;
    let scale = pow10(work);
    let (u, v) = (reduced.numer().clone(), reduced.denom().clone());
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut j = 1u64;
    while !term.is_zero() {
        term = term * &u / (&v * j);
        sum += &term;
        j += 1;
    }
    let mut value = BigRational::new(sum, scale.clone());
    for _ in 0..k {
        value = &value * &value;
        // keep sizes bounded
        let fixed = (value.numer() * &scale) / value.denom();
        value = BigRational::new(fixed, scale.clone());
    }
    value
}

/// `atanh(u/v)` in fixed point with `scale`, for `|u/v| < 1`.
fn atanh_fixed(u: &BigInt, v: &BigInt, scale: &BigInt) -> BigInt {
    let mut power = scale * u / v;
    let u2 = u * u;
    let v2 = v * v;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power = power * &u2 / &v2;
        k += 1;
    }
    sum
}

/// Natural logarithm of a positive rational to roughly `digits` digits.
pub fn ln(b: &BigRational, digits: usize) -> Result<BigRational> {
    if !b.is_positive() {
        return Err(Error::DomainError(format!("log of {b}")));
    }
    let work = digits + GUARD_DIGITS;
    let scale = pow10(work);
    // b = 2^k · r with r in [2/3, 4/3)
    let two = BigRational::from_integer(2.into());
    let lo = BigRational::new(2.into(), 3.into());
    let hi = BigRational::new(4.into(), 3.into());
    let mut r = b.clone();
    let mut k: i64 = 0;
    while r >= hi {
        r /= &two;
        k += 1;
    }
    while r < lo {
        r *= &two;
        k -= 1;
    }
    let x = (&r - BigRational::one()) / (&r + BigRational::one());
    let ln_r = 2 * atanh_fixed(x.numer(), x.denom(), &scale);
    let ln2 = 2 * atanh_fixed(&BigInt::one(), &BigInt::from(3), &scale);
    Ok(BigRational::new(ln_r + ln2 * k, scale))
}

/// Plain bisection in binary64 on a sign-changing bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    assert!(f_lo * f(hi) <= 0.0, "bracket [{lo}, {hi}] does not change sign");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
