//! Decimal rendering and parsing of exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rounding direction for decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Nearest,
    Floor,
    Ceil,
}

/// Fixed-point decimal string of `r` with `digits` places after the point.
pub fn decimal_string(r: &BigRational, digits: usize, mode: Round) -> String {
    let pow10 = BigInt::from(10u32).pow(digits as u32);
    let scaled_num = r.numer() * &pow10;
    let den = r.denom(); // always > 0 in canonical form
    let (q, rem) = (scaled_num.clone() / den, scaled_num % den);
    let scaled = match mode {
        Round::Nearest => {
            // round half away from zero
            if (rem.abs() * 2i32) >= *den {
                if r.is_negative() {
                    q - 1i32
                } else if rem.is_zero() {
                    q
                } else {
                    q + 1i32
                }
            } else {
                q
            }
        }
        Round::Floor => {
            if r.is_negative() && !rem.is_zero() {
                q - 1i32
            } else {
                q
            }
        }
        Round::Ceil => {
            if !r.is_negative() && !rem.is_zero() {
                q + 1i32
            } else {
                q
            }
        }
    };
    let neg = scaled.is_negative();
    let body = scaled.abs().to_string();
    let body = if body.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - body.len()), body)
    } else {
        body
    };
    let (int_part, frac_part) = body.split_at(body.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Parses "num/den", a plain integer, or a decimal like ".5501" / "0.00001".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac_val: BigInt = frac_part.parse().ok()?;
        let signed_frac = if negative { -frac_val } else { frac_val };
        return Some(BigRational::new(int_val * &scale + signed_frac, scale));
    }
    let num: BigInt = s.parse().ok()?;
    Some(BigRational::from(num))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rendering() {
        assert_eq!(decimal_string(&rat(1, 3), 6, Round::Nearest), "0.333333");
        assert_eq!(decimal_string(&rat(2, 3), 6, Round::Nearest), "0.666667");
        assert_eq!(decimal_string(&rat(2, 3), 6, Round::Floor), "0.666666");
        assert_eq!(decimal_string(&rat(-1, 8), 2, Round::Floor), "-0.13");
        assert_eq!(decimal_string(&rat(-1, 8), 2, Round::Ceil), "-0.12");
        assert_eq!(decimal_string(&rat(5, 1), 3, Round::Nearest), "5.000");
        assert_eq!(decimal_string(&rat(1, 2), 0, Round::Nearest), "1");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/8"), Some(rat(3, 8)));
        assert_eq!(parse_rational(" 19/24 "), Some(rat(19, 24)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational(".5501"), Some(rat(5501, 10000)));
        assert_eq!(parse_rational("0.00001"), Some(rat(1, 100000)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn parse_render_roundtrip() {
        for (n, d) in [(1i64, 3i64), (355, 113), (-7, 2), (0, 1), (5501, 10000)] {
            let r = rat(n, d);
            let s = format!("{}/{}", r.numer(), r.denom());
            assert_eq!(parse_rational(&s), Some(r));
        }
    }
}
