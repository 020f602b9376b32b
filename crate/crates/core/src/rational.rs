//! Exact rational arithmetic helpers.
//!
//! Every time, work, and energy quantity in this crate is a [`Rational`]
//! (arbitrary-precision `p/q`). Floating point only ever appears in
//! human-readable output.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Rational from an unsigned integer.
pub fn rat(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q` from unsigned integers; panics on `q == 0`.
pub fn ratio(p: u64, q: u64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` with optional sign, rejecting empty parts and
/// zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid rational {s:?}: bad numerator"))?;
    let denom: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid rational {s:?}: bad denominator"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("invalid rational {s:?}: zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical form: lowest terms, `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for table/report output only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest integer `<= r`, clamped to `0..=u64::MAX`; `None` when `r < 0`.
pub fn floor_to_u64(r: &Rational) -> Option<u64> {
    if r.is_negative() {
        return None;
    }
    r.floor().to_integer().to_u64().or(Some(u64::MAX))
}
