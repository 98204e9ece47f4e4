use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Most significant digits a decimal may carry and still be recovered
/// exactly from the nearest `f64` (`f64::DIGITS`).
pub const MAX_EXACT_DIGITS: usize = f64::DIGITS as usize;

/// Parses a plain decimal (`-12.5`, `0.25`, `3e-4`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * power)
    } else {
        BigRational::new(numer, power)
    })
}

/// Number of significant decimal digits in a plain decimal string.
pub fn significant_digits(text: &str) -> usize {
    let mantissa = text.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let trimmed = digits.trim_start_matches('0').trim_end_matches('0');
    trimmed.len()
}

/// The rational number a stored `f64` stands for: its shortest round-trip
/// decimal, provided that decimal has at most [`MAX_EXACT_DIGITS`]
/// significant digits. Longer expansions are treated as rounded irrational
/// (or non-terminating) values and refused.
pub fn exact_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let text = format!("{x:?}");
    if significant_digits(&text) > MAX_EXACT_DIGITS {
        return None;
    }
    parse_decimal(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_plain_and_scientific() {
        assert_eq!(parse_decimal("0.25"), Some(q(1, 4)));
        assert_eq!(parse_decimal("-12.5"), Some(q(-25, 2)));
        assert_eq!(parse_decimal("3e-4"), Some(q(3, 10000)));
        assert_eq!(parse_decimal("1.5E2"), Some(q(150, 1)));
        assert_eq!(parse_decimal("7"), Some(q(7, 1)));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1x"), None);
    }

    #[test]
    fn exactness_threshold() {
        assert_eq!(exact_rational(0.1), Some(q(1, 10)));
        assert_eq!(exact_rational(-0.375), Some(q(-3, 8)));
        assert_eq!(exact_rational(1.0), Some(q(1, 1)));
        assert_eq!(exact_rational(core::f64::consts::FRAC_1_SQRT_2), None);
        assert_eq!(exact_rational(1.0 / 3.0), None);
        assert_eq!(significant_digits("0.00120"), 2);
    }
}
