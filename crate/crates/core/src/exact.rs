//! Exact scalars and combinatorial coefficients.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps a canonical
//! reduced form with a positive denominator, so structural equality is value
//! equality.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n choose k`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n! / prod(parts_j!)`. Rejects parts that do not sum to `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> Result<BigUint> {
    let sum: usize = parts.iter().sum();
    if sum != n {
        return Err(Error::MultinomialMismatch { n, sum });
    }
    let mut acc = BigUint::one();
    let mut used = 0;
    for &part in parts {
        used += part;
        acc *= binomial(used, part);
    }
    Ok(acc)
}

/// Generalized binomial coefficient `top (top-1) ... (top-k+1) / k!`.
pub fn gen_binomial(top: &Rational, k: usize) -> Rational {
    let mut num = Rational::one();
    let mut factor = top.clone();
    for _ in 0..k {
        num *= &factor;
        factor -= Rational::one();
    }
    num / Rational::from_integer(factorial(k).into())
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `x^e` with `0^0 = 1`.
pub fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(n.into())
}

pub fn is_nonpositive_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_positive()
}

/// Canonical text form: `p/q`, or `p` when `q = 1`; the sign sits on `p`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `[-]digits[/digits]` with a nonzero denominator. Non-canonical
/// inputs such as `2/4` are accepted and reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            d.parse().map_err(|_| err())?
        }
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational_list(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// `gcd(|numer|, denom) = 1` and `denom > 0`.
pub fn is_canonical(x: &Rational) -> bool {
    x.denom().is_positive() && x.numer().abs().gcd(x.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(7, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(4, &[2, 1, 1]).unwrap(), BigUint::from(12u32));
        assert_eq!(multinomial(6, &[2, 2, 2]).unwrap(), BigUint::from(90u32));
        for n in 0..8 {
            assert_eq!(multinomial(n, &[n]).unwrap(), BigUint::one());
        }
        assert_eq!(
            multinomial(5, &[2, 2]),
            Err(Error::MultinomialMismatch { n: 5, sum: 4 })
        );
    }

    #[test]
    fn gen_binomial_examples() {
        assert_eq!(gen_binomial(&rat(1, 2), 1), rat(1, 2));
        assert_eq!(gen_binomial(&rat(5, 2), 2), rat(15, 8));
        for t in [rat(-3, 2), rat(7, 3), int(0), int(-4)] {
            assert_eq!(gen_binomial(&t, 0), int(1));
        }
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(format_rational(&rat(-3, 7)), "-3/7");
        assert_eq!(format_rational(&rat(10, 2)), "5");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(format_rational(&rat(3, -7)), "-3/7");
        assert_eq!(parse_rational("-3/7").unwrap(), rat(-3, 7));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), rat(1, 2));
        for bad in ["", "-", "1/0", "1/", "/2", "a", "1/-2", "1.5", "+1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(pow(&int(0), 0), int(1));
        assert_eq!(pow(&int(0), 3), int(0));
        assert_eq!(pow(&rat(-2, 3), 3), rat(-8, 27));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn gen_binomial_matches_binomial_on_integers(m in 0usize..30, k in 0usize..30) {
            prop_assume!(k <= m);
            prop_assert_eq!(gen_binomial(&int(m as i64), k), from_biguint(binomial(m, k)));
        }

        #[test]
        fn gen_binomial_vanishes_past_integer_top(m in 0usize..20, extra in 1usize..6) {
            prop_assert_eq!(gen_binomial(&int(m as i64), m + extra), int(0));
        }

        #[test]
        fn multinomial_two_parts_is_binomial(n in 0usize..40, k in 0usize..40) {
            prop_assume!(k <= n);
            prop_assert_eq!(multinomial(n, &[k, n - k]).unwrap(), binomial(n, k));
        }

        #[test]
        fn pascal_recurrence(top in small_rational(), k in 1usize..10) {
            let below = &top - int(1);
            prop_assert_eq!(
                gen_binomial(&top, k),
                gen_binomial(&below, k) + gen_binomial(&below, k - 1)
            );
        }

        #[test]
        fn field_laws_hold_structurally(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            for v in [&a + &b, &a * &b, &a - &c] {
                prop_assert!(is_canonical(&v));
            }
        }

        #[test]
        fn text_form_round_trips(a in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }
    }
}
