//! Exact rational scalars and their text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` in lowest terms with the sign on the numerator; integers print bare.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `[-]digits[/digits]`. Returns a description of the problem on failure.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(format!("malformed rational `{s}`"));
    }
    let mut n: BigInt = num.parse().map_err(|_| format!("malformed rational `{s}`"))?;
    if neg {
        n = -n;
    }
    let d: BigInt = match den {
        Some(t) => t.parse().map_err(|_| format!("malformed rational `{s}`"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

pub(crate) fn sign_q(sign: i8) -> Q {
    match sign {
        1 => Q::one(),
        -1 => -Q::one(),
        _ => Q::zero(),
    }
}
