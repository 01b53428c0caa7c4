//! Exact arithmetic: rationals, univariate polynomials and dense matrices.
//!
//! Nothing in here rounds. Every value is a reduced fraction of
//! arbitrary-precision integers.

mod matrix;
mod poly;

pub use matrix::{eval_poly_at_matrix, mat_pow, minimal_polynomial, Matrix};
pub use poly::{cyclotomic, divide_linear, poly_divides, totient, Polynomial};

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or a bare integer, with an optional leading sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = parse_integer(num)?;
    let den: BigInt = parse_integer(den)?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal approximation to `digits` significant digits, trailing zeros
/// trimmed down to one fractional digit.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0.0".to_string();
    }
    let neg = r.is_negative();
    let abs = r.abs();
    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = (abs.numer().bits() as i64 - abs.denom().bits() as i64) * 30103 / 100000;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs >= pow10(e + 1) {
        e += 1;
    }
    while abs < pow10(e) {
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &abs * pow10(shift);
    // round half up
    let mut m = (scaled.clone() + ratio(1, 2)).floor().to_integer();
    if m.bits() > 0 && m == num::pow(ten.clone(), digits) {
        // rounding carried into a new digit
        m /= &ten;
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let mut s = m.to_string();
    let frac_len = shift.max(0) as usize;
    if shift < 0 {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if frac_len > 0 {
        if s.len() <= frac_len {
            s = format!("{}{}", "0".repeat(frac_len - s.len() + 1), s);
        }
        let split = s.len() - frac_len;
        s = format!("{}.{}", &s[..split], &s[split..]);
        let trimmed = s.trim_end_matches('0');
        s = if trimmed.ends_with('.') {
            format!("{trimmed}0")
        } else {
            trimmed.to_string()
        };
    } else {
        s.push_str(".0");
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

/// Lossy conversion used only for display and floating-point warm starts.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.numer().sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions.
pub fn rational_from_f64(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (u128, u128, u128, u128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}
