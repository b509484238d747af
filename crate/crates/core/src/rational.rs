//! Arbitrary-precision rationals and the helpers the rest of the crate uses
//! to build, compare and (de)serialize them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

/// `n/d` as a canonical rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `2^-k`.
pub fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Lossy conversion used for display and for conservative float filters.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: shift both down before dividing.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift as usize).to_f64().unwrap_or(0.0);
        let d = (d >> shift as usize).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Lossless string form, always `numerator/denominator`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Accepts `n`, `n/d` and finite decimals such as `-0.125`.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// The rational with the smallest denominator (then smallest numerator
/// magnitude) strictly inside `(lo, hi)`. Requires `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return zero();
    }
    if !lo.is_negative() {
        simplest_positive(lo, hi)
    } else {
        -simplest_positive(&-hi, &-lo)
    }
}

// Stern-Brocot descent for 0 <= lo < hi.
fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    let candidate = &fl + one();
    if candidate < *hi {
        return candidate;
    }
    // lo and hi share the integer part `fl`.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    if lo_frac.is_zero() {
        // (fl, fl + hi_frac): pick fl + 1/q with the smallest q.
        let q = (hi_frac.recip()).floor() + one();
        return fl + q.recip();
    }
    // Reciprocals swap the order.
    let inner = simplest_positive(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Largest power of two (any integer exponent) not exceeding `bound`.
pub fn dyadic_floor(bound: &Rational) -> Rational {
    assert!(bound.is_positive());
    let mut v = one();
    while &v > bound {
        v /= int(2);
    }
    while &(&v * int(2)) <= bound {
        v *= int(2);
    }
    v
}

/// A dyadic rational strictly inside `(lo, hi)` with the fewest bits after
/// the binary point. Requires `lo < hi`.
pub fn dyadic_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    let mut scale = BigInt::one();
    loop {
        let s = Rational::from_integer(scale.clone());
        let n = (lo * &s).floor() + one();
        let cand = &n / &s;
        if cand < *hi {
            return cand;
        }
        scale <<= 1;
    }
}

/// `floor(log2)`-style bit length of a rational's size, used in reports.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

pub mod serde_str {
    //! `#[serde(with = "...")]` adapter storing rationals as `n/d` strings.
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert_eq!(parse("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse("2.5").unwrap(), rat(5, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn format_is_always_fraction() {
        assert_eq!(format(&int(3)), "3/1");
        assert_eq!(format(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn simplest_between_cases() {
        assert_eq!(simplest_between(&rat(-1, 3), &rat(1, 2)), zero());
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(1, 2), &rat(3, 2)), int(1));
        assert_eq!(simplest_between(&rat(-3, 2), &rat(-1, 2)), int(-1));
        assert_eq!(simplest_between(&int(1), &rat(3, 2)), rat(4, 3));
        assert_eq!(simplest_between(&rat(3, 4), &int(1)), rat(4, 5));
    }

    #[test]
    fn dyadic_helpers() {
        assert_eq!(dyadic_floor(&rat(3, 10)), rat(1, 4));
        assert_eq!(dyadic_floor(&int(5)), int(4));
        assert_eq!(dyadic_floor(&int(1)), int(1));
        assert_eq!(dyadic_between(&rat(1, 3), &rat(2, 5)), rat(3, 8));
        assert_eq!(dyadic_between(&int(0), &int(3)), int(1));
    }

    #[test]
    fn to_f64_handles_huge_values() {
        let big = Rational::new(BigInt::one() << 3000usize, (BigInt::one() << 2999usize) + 1);
        assert!((to_f64(&big) - 2.0).abs() < 1e-9);
    }
}
