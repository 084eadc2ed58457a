//! Exact rational helpers shared by the exact carriers.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow2(n: u32) -> BigInt {
    BigInt::one() << n as usize
}

/// Nearest `f64`; exact rationals here are small enough that the quotient of
/// the two `f64` conversions only fails for huge factorials, which are
/// handled by scaling numerator and denominator together.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num_bits = x.numer().bits() as i64;
    let den_bits = x.denom().bits() as i64;
    let shift = (num_bits.max(den_bits) - 900).max(0) as usize;
    let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(s: &str) -> crate::Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| crate::Error::InvalidInput(format!("bad rational `{s}`: {e}")))
}

pub fn format(x: &Rational) -> String {
    x.to_string()
}
