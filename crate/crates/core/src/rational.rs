//! Exact rational helpers on top of [`num_rational::BigRational`].

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a plain integer. Whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: format!("{msg} in rational `{s}`"),
    };
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| err(0, "bad numerator"))?;
    let den = BigInt::from_str(d).map_err(|_| err(n.len() + 1, "bad denominator"))?;
    if den.is_zero() {
        return Err(err(n.len() + 1, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn midpoint(lo: &Rational, hi: &Rational) -> Rational {
    (lo + hi) / int(2)
}

/// A dyadic rational strictly between `lo` and `hi`, as close to the midpoint as the
/// coarsest dyadic grid that fits allows.
pub fn dyadic_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty bracket");
    let mid = midpoint(lo, hi);
    let mut scale = BigInt::one();
    loop {
        let s = Rational::from_integer(scale.clone());
        let cand = Rational::new((&mid * &s).round().to_integer(), scale.clone());
        if &cand > lo && &cand < hi {
            return cand;
        }
        scale <<= 1;
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

/// Serde adapter writing rationals as `p/q` strings.
pub mod serde_pq {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
