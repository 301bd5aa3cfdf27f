//! Exact scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, whose constructors always
//! reduce to lowest terms with a positive denominator. Nothing in this crate
//! uses `Ratio::new_raw`, so every value stays canonical.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Parses `<int>` or `<int>/<posint>` strictly (no signs on the denominator,
/// no decimal points).
pub fn parse_rational(text: &str) -> Option<std::result::Result<Rational, &'static str>> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num = parse_int(num)?;
    let den = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return None;
            }
            parse_int(d)?
        }
    };
    if den.is_zero() {
        return Some(Err("zero denominator"));
    }
    Some(Ok(Rational::new(num, den)))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Parses a plain decimal literal such as `-81377.3957...` or `1.5e-3`
/// into the exact rational it denotes.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some(Ok(r)) = parse_rational(text) {
        return Some(r);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Converts to `f64` without overflowing intermediate integers.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    // Scale both sides to ~64 significant bits before dividing.
    let shift_n = (num_bits - 64).max(0);
    let shift_d = (den_bits - 64).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    let exp = shift_n - shift_d;
    let exp = exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    (n / d) * 2f64.powi(exp.clamp(-1100, 1100))
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// Values whose decimal exponent falls outside `[-5, 20]` use scientific form.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = r.is_negative();
    let abs = r.abs();
    // exponent e with 10^e <= |r| < 10^(e+1)
    let ten = BigInt::from(10);
    let mut e = (abs.numer().to_string().len() as i64) - (abs.denom().to_string().len() as i64);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }
    let scaled = (&abs * pow10(digits as i64 - 1 - e)).trunc().to_integer();
    let mut s = scaled.to_string();
    debug_assert_eq!(s.len(), digits);
    let sign = if negative { "-" } else { "" };
    if !(-5..=20).contains(&e) {
        let rest = s.split_off(1);
        if rest.is_empty() {
            return format!("{sign}{s}e{e}");
        }
        return format!("{sign}{s}.{rest}e{e}");
    }
    if e >= 0 {
        let int_len = (e + 1) as usize;
        if s.len() <= int_len {
            s.push_str(&"0".repeat(int_len - s.len()));
            format!("{sign}{s}")
        } else {
            let frac = s.split_off(int_len);
            format!("{sign}{s}.{frac}")
        }
    } else {
        format!("{sign}0.{}{s}", "0".repeat((-e - 1) as usize))
    }
}

/// A floating value that is explicitly an approximation; serializes as
/// `{"value": x, "approx": true}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Approx {
    pub value: f64,
    pub approx: bool,
}

impl Approx {
    pub fn new(value: f64) -> Self {
        Self { value, approx: true }
    }
}

pub fn sign(r: &Rational) -> Sign {
    r.numer().sign()
}

/// Serde adapter: rationals travel as canonical `"p/q"` (or `"p"`) strings.
pub mod serde_str {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        match parse_rational(&text) {
            Some(Ok(r)) => Ok(r),
            _ => Err(de::Error::custom(format!("not a rational: {text:?}"))),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let items = Vec::<String>::deserialize(d)?;
            items
                .iter()
                .map(|t| match parse_rational(t) {
                    Some(Ok(r)) => Ok(r),
                    _ => Err(de::Error::custom(format!("not a rational: {t:?}"))),
                })
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.collect_str(r),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(t) => match parse_rational(&t) {
                    Some(Ok(r)) => Ok(Some(r)),
                    _ => Err(de::Error::custom(format!("not a rational: {t:?}"))),
                },
            }
        }
    }
}
