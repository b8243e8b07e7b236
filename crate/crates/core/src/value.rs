//! Exact values in groups of the form `Z^d ⊕ Q`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Kind of a single coordinate of the value group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    Int,
    Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupOrder {
    Lexicographic,
    Product,
}

/// Descriptor of an ordered value group `Z^d ⊕ Q^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueGroup {
    pub coords: Vec<CoordKind>,
    pub order: GroupOrder,
}

impl ValueGroup {
    pub fn new(coords: Vec<CoordKind>, order: GroupOrder) -> Self {
        ValueGroup { coords, order }
    }

    pub fn integers(dim: usize) -> Self {
        ValueGroup::new(vec![CoordKind::Int; dim], GroupOrder::Lexicographic)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn zero(&self) -> Value {
        Value(vec![Rational::zero(); self.rank()])
    }

    /// True when `v` has the right dimension and integer entries on integer coordinates.
    pub fn contains(&self, v: &Value) -> bool {
        v.0.len() == self.rank()
            && v
                .0
                .iter()
                .zip(&self.coords)
                .all(|(x, k)| *k == CoordKind::Rat || x.is_integer())
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::parse(v.to_string(), format!("not an element of {self}")))
        }
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .coords
            .iter()
            .map(|k| match k {
                CoordKind::Int => "Z",
                CoordKind::Rat => "Q",
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// A vector of exact rationals. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Value(pub Vec<Rational>);

impl Value {
    pub fn from_ints(xs: &[i64]) -> Self {
        Value(xs.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_ratios(xs: &[(i64, i64)]) -> Self {
        Value(xs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Every coordinate is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Componentwise `self <= other`.
    pub fn le_product(&self, other: &Value) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: i64) -> Value {
        let k = Rational::from_integer(k.into());
        Value(self.0.iter().map(|x| x * &k).collect())
    }

    pub fn parse(text: &str) -> Result<Value> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        if inner.trim().is_empty() {
            return Err(Error::parse(text, "empty vector"));
        }
        inner
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map(Value)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Add for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(self.0.iter().map(|a| -a).collect())
    }
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` or an integer; whitespace tolerated.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |why: &str| Error::parse(text, why);
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exponent suffix used by monomial labels: `""` for 1, `^3`, `^(1/2)`, `^-2`.
pub fn fmt_exponent(x: &Rational) -> String {
    if x.is_one() {
        String::new()
    } else if x.is_integer() {
        format!("^{}", x.numer())
    } else {
        format!("^({})", fmt_rational(x))
    }
}

/// Inverse of [`fmt_exponent`] applied to the text after a base symbol.
pub fn parse_exponent(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Rational::one());
    }
    let e = t
        .strip_prefix('^')
        .ok_or_else(|| Error::parse(text, "expected `^`"))?;
    let e = e
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(e);
    parse_rational(e)
}
