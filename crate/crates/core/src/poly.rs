//! Univariate polynomials and rational functions over Q.
//!
//! Only what the `Z + xQ[x]` model needs: exact arithmetic, Euclidean gcd,
//! rational roots, and factorization over Q for degree at most 3.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::value::{fmt_rational, parse_rational, Rational};

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut rem = self.0.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient, if `d` divides `self` in Q[x].
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Rational::one() / self.lead()))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Divide by `x^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.0.iter().take(k).all(Zero::is_zero));
        Poly::new(self.0.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly::new(v)
    }

    /// Integer coefficients of a positive rational multiple of `self`.
    fn cleared(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.0
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let Some(ord) = self.ord() else {
            return Vec::new();
        };
        let mut roots = Vec::new();
        if ord > 0 {
            roots.push(Rational::zero());
        }
        let core = self.shift_down(ord);
        if core.degree().unwrap_or(0) > 0 {
            let c = core.cleared();
            let (Some(c0), Some(cn)) = (c.first(), c.last()) else {
                return roots;
            };
            for p in divisors(c0) {
                for q in divisors(cn) {
                    for sign in [1, -1] {
                        let r = Rational::new(BigInt::from(sign) * &p, q.clone());
                        if core.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Factorization over Q into a constant and monic irreducibles with
    /// multiplicities. `certain` is false when a factor of degree >= 4 without
    /// rational roots remains, whose irreducibility is not tested.
    pub fn factor_q(&self) -> QFactorization {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let unit = self.lead();
        let mut rest = self.monic();
        let mut factors = Vec::new();
        for r in self.rational_roots() {
            let lin = Poly::new(vec![-r.clone(), Rational::one()]);
            let mut mult = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                mult += 1;
            }
            factors.push((lin, mult));
        }
        let mut certain = true;
        if rest.degree().unwrap_or(0) > 0 {
            certain = rest.degree().unwrap_or(0) <= 3;
            factors.push((rest, 1));
        }
        QFactorization {
            unit,
            factors,
            certain,
        }
    }

    pub fn parse(text: &str) -> Result<Poly> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::parse(text, "empty polynomial"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = t.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        let mut acc = Poly::zero();
        for term in terms {
            acc = acc.add(&parse_term(term).map_err(|e| match e {
                Error::Parse { reason, .. } => Error::parse(text, reason),
                other => other,
            })?);
        }
        Ok(acc)
    }
}

fn parse_term(term: &str) -> Result<Poly> {
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (Rational::one(), &term[1..]),
        Some(b'-') => (-Rational::one(), &term[1..]),
        _ => (Rational::one(), term),
    };
    if body.is_empty() {
        return Err(Error::parse(term, "dangling sign"));
    }
    let Some(xpos) = body.find('x') else {
        return Ok(Poly::constant(sign * parse_rational(body)?));
    };
    let coeff = match body[..xpos].strip_suffix('*') {
        Some(c) => parse_rational(c)?,
        None if xpos == 0 => Rational::one(),
        None => return Err(Error::parse(term, "expected `*` before `x`")),
    };
    let exp = match &body[xpos + 1..] {
        "" => 1,
        e => e
            .strip_prefix('^')
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(term, "bad exponent"))?,
    };
    Ok(Poly::monomial(sign * coeff, exp))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFactorization {
    pub unit: Rational,
    pub factors: Vec<(Poly, usize)>,
    pub certain: bool,
}

/// Positive divisors of `n` (of `|n|`); `n` must be nonzero.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    if let Some(m) = n.to_u64() {
        let mut d = 1u64;
        while d * d <= m {
            if m % d == 0 {
                out.push(BigInt::from(d));
                if d * d != m {
                    out.push(BigInt::from(m / d));
                }
            }
            d += 1;
        }
    } else {
        out.push(BigInt::one());
        out.push(n);
    }
    out.sort();
    out
}

/// A nonzero rational function `num/den` with coprime parts and monic `den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!num.is_zero() && !den.is_zero(), "zero in a rational function");
        let g = Poly::gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let l = den.lead();
        RatFunc {
            num: num.scale(&(Rational::one() / &l)),
            den: den.scale(&(Rational::one() / l)),
        }
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc::new(p, Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// `ord(num) - ord(den)`.
    pub fn ord(&self) -> i64 {
        self.num.ord().unwrap_or(0) as i64 - self.den.ord().unwrap_or(0) as i64
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.scale(&-Rational::one()),
            den: self.den.clone(),
        }
    }

    /// Representative of the class modulo `{1, -1}`: lowest numerator coefficient positive.
    pub fn sign_normalized(&self) -> RatFunc {
        let low = self.num.coeff(self.num.ord().unwrap_or(0));
        if low.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn parse(text: &str) -> Result<RatFunc> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some((n, d)) = rest.split_once(")/(") {
                let d = d
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse(text, "unbalanced parentheses"))?;
                let (n, d) = (Poly::parse(n)?, Poly::parse(d)?);
                if n.is_zero() || d.is_zero() {
                    return Err(Error::parse(text, "zero numerator or denominator"));
                }
                return Ok(RatFunc::new(n, d));
            }
        }
        let p = Poly::parse(t)?;
        if p.is_zero() {
            return Err(Error::parse(text, "zero is not a class"));
        }
        Ok(RatFunc::poly(p))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
