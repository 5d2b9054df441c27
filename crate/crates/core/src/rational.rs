//! Exact rational helpers on top of `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// `max(0, v)`.
pub fn pos(v: Rational) -> Rational {
    if v.is_negative() {
        Rational::zero()
    } else {
        v
    }
}

pub fn pos_ref(v: &Rational) -> Rational {
    if v.is_negative() {
        Rational::zero()
    } else {
        v.clone()
    }
}

/// Debug hook: every rational we hand out is in lowest terms with a positive denominator.
#[inline]
pub fn debug_check(v: &Rational) {
    debug_assert!(v.denom().is_positive(), "non-positive denominator in {v}");
    debug_assert!(
        v.numer().gcd(v.denom()).is_one(),
        "rational {}/{} not in lowest terms",
        v.numer(),
        v.denom()
    );
}

/// Parses `"12"`, `"-3.25"`, `"1e-3"`, `"2.5E2"` or `"7/3"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let v = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(v)
}

/// Exact decimal rendering when the denominator is `2^a 5^b`, otherwise `None`.
pub fn exact_decimal(v: &Rational) -> Option<String> {
    let mut d = v.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(v.numer().to_string());
    }
    let scaled = v * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    debug_assert!(scaled.is_integer());
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if s.len() <= places {
        s = format!("{}{s}", "0".repeat(places + 1 - s.len()));
    }
    let (a, b) = s.split_at(s.len() - places);
    Some(format!("{}{a}.{b}", if neg { "-" } else { "" }))
}

/// Decimal approximation rounded half away from zero to `places` digits.
pub fn to_decimal(v: &Rational, places: usize) -> String {
    if let Some(s) = exact_decimal(v) {
        if s.split_once('.').map_or(0, |(_, f)| f.len()) <= places {
            return s;
        }
    }
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = v.abs() * Rational::from_integer(scale);
    let half = ratio(1, 2);
    let n = (scaled + half).floor().to_integer();
    let mut s = n.to_string();
    if places > 0 {
        if s.len() <= places {
            s = format!("{}{s}", "0".repeat(places + 1 - s.len()));
        }
        let (a, b) = s.split_at(s.len() - places);
        s = format!("{a}.{b}");
    }
    if v.is_negative() && n.is_positive() {
        s.insert(0, '-');
    }
    s
}

/// Canonical text: integer, terminating decimal, or `p/q`.
pub fn to_text(v: &Rational) -> String {
    exact_decimal(v).unwrap_or_else(|| format!("{}/{}", v.numer(), v.denom()))
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a>(vals: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    vals.into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
