use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// GF(p), checking that `p` is a prime small enough for `u64` products.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Field::Rational)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Maps a rational into this field; fails in GF(p) when p divides the denominator.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let modulus = BigInt::from(p);
                let num = mod_bigint(q.numer(), &modulus);
                let den = mod_bigint(q.denom(), &modulus);
                if den == 0 {
                    return Err(Error::Parse(format!("{q} has no image in GF({p})")));
                }
                let value = (num as u64 * inv_mod(den, p) as u64 % p as u64) as u32;
                Ok(Scalar::Prime { value, p })
            }
        }
    }
}

fn mod_bigint(a: &BigInt, m: &BigInt) -> u32 {
    let r = ((a % m) + m) % m;
    u32::try_from(r).expect("residue fits in u32")
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0);
    pow_mod(a, p - 2, p)
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
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

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `GF(p)`, `GFp` and `GF p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let upper = t.to_ascii_uppercase();
        let rest = upper
            .strip_prefix("GF")
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
        let digits = rest.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }
}

/// A single field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    /// Integer value in a prime field, or the rational itself.
    pub fn to_rational_lossy(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q.clone(),
            Scalar::Prime { value, .. } => BigRational::from_integer((*value).into()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Canonical `p/q` text, with `p` alone when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Decimal rendering with a fixed number of fractional digits (truncated toward zero).
pub fn format_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q * BigRational::from_integer(scale.clone())).trunc().to_integer();
    let negative = scaled.is_negative() || (scaled.is_zero() && q.is_negative());
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    let frac = format!("{:0>width$}", frac.to_string(), width = digits);
    format!("{}{}.{}", if negative { "-" } else { "" }, int, frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert_eq!("GF2".parse::<Field>().unwrap(), Field::Prime(2));
        assert!("GF(4)".parse::<Field>().is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn rational_text() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("0.25").unwrap()), "1/4");
        assert_eq!(format_rational(&parse_rational("-0.5").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_decimal(&parse_rational("-1/3").unwrap(), 4), "-0.3333");
    }

    #[test]
    fn prime_field_images() {
        let f = Field::Prime(7);
        let half = parse_rational("1/2").unwrap();
        assert_eq!(f.from_rational(&half).unwrap(), Scalar::Prime { value: 4, p: 7 });
        assert!(f.from_rational(&parse_rational("1/7").unwrap()).is_err());
        assert_eq!(f.from_i64(-1), Scalar::Prime { value: 6, p: 7 });
    }
}
