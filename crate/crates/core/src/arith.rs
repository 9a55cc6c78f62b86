//! Small integer helpers: divisors, Möbius function, divisor sums, exact
//! rational formatting and parsing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// σ_k(n) = Σ_{d | n} d^k.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(x: &BigRational) -> bool {
    x.denom().is_one()
}

/// Renders a rational as `n` or `n/d` in lowest terms, decimal digits only.
pub fn format_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` (optional sign on the numerator) into a rational.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() || den.is_negative() {
        return Err(Error::Parse(format!("denominator must be positive in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Least common multiple of the denominators of `xs` (1 for an empty list).
pub fn common_denominator<'a, I>(xs: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigRational>,
{
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
