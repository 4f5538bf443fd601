//! Constants: quoted symbols and exact rational numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A program constant.
///
/// Integers are stored as rationals with denominator one, so `1` and `1/1`
/// are the same constant while the symbol `'1'` is distinct from both.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constant {
    Sym(String),
    Num(BigRational),
}

impl Constant {
    pub fn sym(s: impl Into<String>) -> Self {
        Constant::Sym(s.into())
    }

    pub fn int(i: i64) -> Self {
        Constant::Num(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Constant::Num(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Constant::Num(n) => Some(n),
            Constant::Sym(_) => None,
        }
    }

    pub fn is_num(&self) -> bool {
        matches!(self, Constant::Num(_))
    }

    /// Parses a decimal literal such as `-12`, `3.25` or a ratio `1/3`.
    pub fn parse_number(text: &str) -> Option<Self> {
        if let Some((n, d)) = text.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(Constant::Num(BigRational::new(n, d)));
        }
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) || (body.contains('.') && frac_part.is_empty()) {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut value = BigRational::new(digits, scale);
        if neg {
            value = -value;
        }
        Some(Constant::Num(value))
    }
}

impl From<i64> for Constant {
    fn from(i: i64) -> Self {
        Constant::int(i)
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::sym(s)
    }
}

/// Total order used for deterministic output: numbers (numerically) before
/// symbols (lexicographically). Aggregation never relies on the
/// number/symbol part of this order.
impl Ord for Constant {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Constant::Num(a), Constant::Num(b)) => a.cmp(b),
            (Constant::Num(_), Constant::Sym(_)) => Ordering::Less,
            (Constant::Sym(_), Constant::Num(_)) => Ordering::Greater,
            (Constant::Sym(a), Constant::Sym(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Constant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Sym(s) => {
                f.write_str("'")?;
                for c in s.chars() {
                    match c {
                        '\'' => f.write_str("\\'")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("'")
            }
            Constant::Num(n) => write_rational(f, n),
        }
    }
}

/// Writes a rational as a finite decimal when one exists, `n/d` otherwise.
fn write_rational(f: &mut fmt::Formatter<'_>, n: &BigRational) -> fmt::Result {
    if n.denom().is_one() {
        return write!(f, "{}", n.numer());
    }
    // The decimal expansion terminates iff the reduced denominator has no
    // prime factors other than 2 and 5.
    let mut d = n.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return write!(f, "{}/{}", n.numer(), n.denom());
    }
    let places = twos.max(fives);
    let scaled = n * BigRational::from_integer(BigInt::from(10).pow(places as u32));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if n.is_negative() { "-" } else { "" };
    write!(f, "{sign}{int_part}.{frac_part}")
}
