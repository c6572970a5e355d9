//! Exact rational scalars and conversions to floating point.

use alloc::format;
use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"-p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Renders an integer as `"p"` and anything else as `"p/q"`.
pub fn format_rational(q: &Rational) -> alloc::string::String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest `f64` to `num / den`, also when both exceed the `f64` range.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if den.is_zero() {
        return f64::NAN;
    }
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Keep 64 significant bits of each operand, track the binary exponent apart.
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (num.abs() >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let d = (den.abs() >> ds as usize).to_f64().unwrap_or(f64::NAN);
    let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    sign * libm::ldexp(n / d, (ns - ds) as i32)
}

pub fn to_f64(q: &Rational) -> f64 {
    ratio_to_f64(q.numer(), q.denom())
}

/// Natural logarithm of `|x|`, valid far beyond the `f64` range.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits() as i64;
    let shift = (bits - 64).max(0);
    let m = (x.abs() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    libm::log(m) + shift as f64 * core::f64::consts::LN_2
}

pub fn ln_abs_ratio(q: &Rational) -> f64 {
    ln_abs(q.numer()) - ln_abs(q.denom())
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

/// Best rational approximations of `x` with denominator at most `max_den`,
/// in order of increasing denominator.
pub fn convergents(x: f64, max_den: u64) -> alloc::vec::Vec<Rational> {
    let mut out = alloc::vec::Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(libm::floor(x) as i64));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    out.push(Rational::new(h1.clone(), k1.clone()));
    let mut rem = x - libm::floor(x);
    for _ in 0..40 {
        if rem.abs() < 1e-300 {
            break;
        }
        let inv = 1.0 / rem;
        if !inv.is_finite() || inv > 1e18 {
            break;
        }
        let a = libm::floor(inv);
        rem = inv - a;
        let a_big = BigInt::from(a as i64);
        let h2 = &a_big * &h1 + &h0;
        let k2 = &a_big * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = core::mem::replace(&mut h1, h2);
        k0 = core::mem::replace(&mut k1, k2);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" -3/6 ").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn huge_ratios_convert() {
        let a = BigInt::from(3).pow(2000);
        let b = BigInt::from(3).pow(1999) * BigInt::from(-2);
        assert!((ratio_to_f64(&a, &b) + 1.5).abs() < 1e-14);
        assert!((ln_abs(&a) - 2000.0 * libm::log(3.0)).abs() < 1e-9);
    }

    #[test]
    fn convergents_recover_simple_fractions() {
        let c = convergents(0.75, 1000);
        assert!(c.contains(&frac(3, 4)));
    }
}
