//! Exact rational scalars.
//!
//! Everything in this crate computes over arbitrary-precision rationals; no
//! floating point appears anywhere. `Rat` keeps the canonical form
//! (denominator positive, fraction fully reduced) after every operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on zero denominator;
/// use [`parse_rat`] for untrusted input.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p"` or `"p/q"` with optional sign. Rejects `q = 0`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    let den: BigInt = den_str.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Canonical rendering: `"p"` when the denominator is one, else `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

/// Integer power with arbitrary sign of the base.
pub fn pow_rat(base: &Rat, exp: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn is_negative(r: &Rat) -> bool {
    r.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-3", "1/2", "-7/3", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        // non-canonical inputs normalize
        assert_eq!(fmt_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(fmt_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert_eq!(fmt_rat(&parse_rat(" 5 / 10 ").unwrap()), "1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(parse_rat("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse_rat("x"), Err(Error::Parse(_))));
        assert!(matches!(parse_rat("1/2/3"), Err(Error::Parse(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), rat(6));
        assert_eq!(binomial(6, 2), rat(15));
        assert_eq!(binomial(5, 0), rat(1));
        assert_eq!(binomial(3, 5), rat(0));
        assert_eq!(binomial(14, 7), rat(3432));
    }
}
