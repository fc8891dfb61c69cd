//! Exact rational scalars and the handful of helpers the decision procedures
//! need on top of `num-rational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

/// Arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n / d` with machine-word inputs.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"1.25"` / `"1e-3"` into
/// an exact rational. Decimals are read digit by digit, never through a
/// binary float.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return invalid("empty rational");
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_int(n)?;
        let d: BigInt = parse_int(d)?;
        if d.is_zero() {
            return invalid(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| crate::Error::InvalidArgument(format!("bad exponent in {s:?}")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return invalid(format!("not a number: {s:?}"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return invalid(format!("not a number: {s:?}"));
    }
    let all: String = format!("{whole}{frac}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { parse_int(&all)? };
    let shift = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if shift >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| crate::Error::InvalidArgument(format!("not an integer: {s:?}")))
}

/// Lowest-terms string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Least common multiple of the denominators; `1` for an empty input.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Rational bounds `lo ≤ √x ≤ hi` with `hi − lo ≤ 1/resolution`; both equal
/// `√x` when `x` is the square of a rational with denominator dividing
/// `resolution · denom(x)`.
pub fn sqrt_bracket(x: &Rational, resolution: u64) -> (Rational, Rational) {
    assert!(!x.is_negative(), "square root of a negative rational");
    // √(p/q) = √(p·q·r²) / (q·r)
    let r = BigInt::from(resolution.max(1));
    let scale = x.denom() * &r;
    let radicand = x.numer() * x.denom() * &r * &r;
    let root = radicand.sqrt();
    let lo = Rational::new(root.clone(), scale.clone());
    if &root * &root == radicand {
        (lo.clone(), lo)
    } else {
        (lo, Rational::new(root + 1, scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("0.001").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "1/", "--1", "0x10", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&rat(10, 4)), "5/2");
        assert_eq!(format_rational(&rat(8, 4)), "2");
        assert_eq!(format_rational(&rat(-3, 9)), "-1/3");
    }

    #[test]
    fn sqrt_bracket_is_tight_and_sound() {
        let (lo, hi) = sqrt_bracket(&int(4), 1);
        assert_eq!((lo, hi), (int(2), int(2)));
        let (lo, hi) = sqrt_bracket(&rat(9, 4), 1);
        assert_eq!((lo, hi), (rat(3, 2), rat(3, 2)));
        let x = rat(3, 2);
        let (lo, hi) = sqrt_bracket(&x, 1000);
        assert!(&lo * &lo <= x && x <= &hi * &hi);
        assert!(&hi - &lo <= rat(1, 1000));
    }

    #[test]
    fn common_denominator_is_lcm() {
        let xs = [rat(1, 4), rat(5, 6), int(7)];
        assert_eq!(common_denominator(&xs), BigInt::from(12));
    }
}
