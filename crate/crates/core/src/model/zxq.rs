use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};
use crate::value::{Rational, Value, ValueGroup};

use super::{
    require, AtomProbe, DivisibilityModel, Element, FractionSearch, ModelFlags, ModelKind,
    WindowBounds,
};

/// The ring `Z + xQ[x]`: polynomials over `Q` with integer constant term.
///
/// Classes of `P(D)` are nonzero rational functions modulo `±1`. Atoms are the
/// primes of `Z` (as constants) and the polynomials with constant term `±1`
/// that are irreducible over `Q`. An element lies in `F(D)` exactly when its
/// order at `x` is zero.
#[derive(Debug)]
pub struct PolyModel {
    id: Arc<str>,
    max_probe_prime: u64,
    declared_atoms: Vec<Poly>,
}

impl PolyModel {
    pub fn new(id: impl Into<String>) -> Self {
        PolyModel {
            id: Arc::from(id.into()),
            max_probe_prime: 7,
            declared_atoms: Vec::new(),
        }
    }

    /// Largest prime used when sampling the (infinite) set of atoms dividing
    /// an element of positive order.
    pub fn with_probe_prime(mut self, p: u64) -> Self {
        self.max_probe_prime = p.max(2);
        self
    }

    /// Treat these polynomials as irreducible even when their degree is too
    /// high for the built-in test.
    pub fn with_declared_atoms(mut self, atoms: Vec<Poly>) -> Self {
        self.declared_atoms = atoms.iter().map(Poly::monic).collect();
        self
    }

    fn make(&self, f: RatFunc) -> Element {
        let f = f.sign_normalized();
        Element::from_symbolic(&self.id, f.to_string(), f)
    }

    fn symbolic_of<'a>(&self, a: &'a Element) -> Result<&'a RatFunc> {
        self.check(a)?;
        a.symbolic()
            .ok_or_else(|| Error::parse(a.label(), "element has no polynomial form"))
    }

    /// The element as a polynomial of `D`, if it is integral.
    fn integral_poly<'a>(&self, a: &'a Element) -> Option<&'a Poly> {
        let f = a.symbolic()?;
        (f.is_poly() && f.num().coeff(0).is_integer()).then(|| f.num())
    }

    fn probe_primes(&self) -> Vec<u64> {
        (2..=self.max_probe_prime).filter(|&p| is_prime(p)).collect()
    }

    fn constant(&self, c: u64) -> Element {
        self.make(RatFunc::poly(Poly::constant(Rational::from_integer(c.into()))))
    }

    /// Irreducible factors of `p` over `Q`, each scaled to constant term 1,
    /// with multiplicities. `None` if `p(0) = 0` or some factor could not be
    /// certified irreducible.
    fn unit_constant_factors(&self, p: &Poly) -> Option<Vec<(Poly, usize)>> {
        let c0 = p.coeff(0);
        if c0.is_zero() {
            return None;
        }
        if p.is_constant() {
            return Some(Vec::new());
        }
        let fq = p.factor_q();
        if !fq.certain {
            let declared = fq
                .factors
                .iter()
                .all(|(f, _)| f.degree().unwrap_or(0) <= 3 || self.declared_atoms.contains(f));
            if !declared {
                return None;
            }
        }
        Some(
            fq.factors
                .into_iter()
                .map(|(f, m)| {
                    let c = f.coeff(0);
                    (f.scale(&(Rational::one() / c)), m)
                })
                .collect(),
        )
    }

    /// Atom factorization of an integral element of order 0.
    fn factor_ord0(&self, p: &Poly) -> Option<Vec<Element>> {
        let c0 = p.coeff(0);
        let primes = prime_factors(&c0.to_integer())?;
        let mut out: Vec<Element> = primes.into_iter().map(|q| self.constant(q)).collect();
        let core = p.scale(&(Rational::one() / c0));
        for (f, m) in self.unit_constant_factors(&core)? {
            let e = self.make(RatFunc::poly(f));
            out.extend(std::iter::repeat_n(e, m));
        }
        out.sort();
        Some(out)
    }

    /// Atoms dividing a rational-coefficient polynomial with nonzero constant
    /// term, ignoring the constant.
    fn polynomial_atoms(&self, p: &Poly) -> Vec<Element> {
        let core = p.scale(&(Rational::one() / p.coeff(0)));
        match self.unit_constant_factors(&core) {
            Some(fs) => fs.into_iter().map(|(f, _)| self.make(RatFunc::poly(f))).collect(),
            None => Vec::new(),
        }
    }

    fn fraction_side(&self, p: &Poly) -> Option<Vec<Element>> {
        let core = p.scale(&(Rational::one() / p.coeff(0)));
        let mut out = Vec::new();
        for (f, m) in self.unit_constant_factors(&core)? {
            let e = self.make(RatFunc::poly(f));
            out.extend(std::iter::repeat_n(e, m));
        }
        Some(out)
    }
}

/// Order of vanishing at `x = 0`; zero for elements without a symbolic form.
pub fn ord(a: &Element) -> i64 {
    a.symbolic().map_or(0, RatFunc::ord)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factors of `|n|` with multiplicity; `None` above `u64`.
fn prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let mut m = n.abs().to_u64()?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        while m % d == 0 {
            out.push(d);
            m /= d;
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    Some(out)
}

impl DivisibilityModel for PolyModel {
    fn id(&self) -> &str {
        &self.id
    }

    fn kind(&self) -> ModelKind {
        ModelKind::Zxq
    }

    fn flags(&self) -> ModelFlags {
        ModelFlags {
            antimatter: false,
            value_faithful: true,
        }
    }

    fn value_group(&self) -> Option<&ValueGroup> {
        None
    }

    fn atom_values(&self) -> Option<Vec<Value>> {
        None
    }

    fn unit(&self) -> Element {
        self.make(RatFunc::poly(Poly::one()))
    }

    fn parse_element(&self, label: &str) -> Result<Element> {
        Ok(self.make(RatFunc::parse(label)?))
    }

    fn element_from_value(&self, _v: &Value) -> Result<Element> {
        Err(Error::NotValueBased(self.id.to_string()))
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.make(self.symbolic_of(a)?.mul(self.symbolic_of(b)?)))
    }

    fn quotient(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.make(self.symbolic_of(a)?.div(self.symbolic_of(b)?)))
    }

    fn is_integral(&self, a: &Element) -> bool {
        self.integral_poly(a).is_some()
    }

    fn is_atom(&self, a: &Element) -> bool {
        let Some(p) = self.integral_poly(a) else { return false };
        let c0 = p.coeff(0);
        if p.is_constant() {
            return c0.to_integer().abs().to_u64().is_some_and(is_prime);
        }
        if c0.abs() != Rational::one() {
            return false;
        }
        matches!(self.unit_constant_factors(p).as_deref(), Some([(_, 1)]))
    }

    fn atomic_by_characterization(&self, a: &Element) -> bool {
        self.is_integral(a) && ord(a) == 0
    }

    fn window_elements(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Element>> {
        if fractional {
            return Err(Error::InvalidBounds(
                "the zxq model only builds integral windows".into(),
            ));
        }
        let max_ord = require(bounds.max_ord, "max_ord", 0)?;
        let max_degree = require(bounds.max_degree, "max_degree", 1)?;
        let max_num = require(bounds.max_numerator, "max_numerator", 1)?;
        let max_den = require(bounds.max_denominator, "max_denominator", 1)?;
        let cofactors: Vec<Poly> = match &bounds.cofactors {
            Some(cs) => cs.iter().map(|c| Poly::parse(c)).collect::<Result<_>>()?,
            None => vec![Poly::parse("1+x")?],
        };
        for c in &cofactors {
            if c.coeff(0).abs() != Rational::one() {
                return Err(Error::InvalidBounds(format!(
                    "cofactor `{c}` must have constant term 1 or -1"
                )));
            }
        }
        let mut products = Vec::new();
        for mask in 0u32..(1 << cofactors.len()) {
            let p = cofactors
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .fold(Poly::one(), |acc, (_, c)| acc.mul(c));
            products.push(p);
        }
        let mut out = Vec::new();
        for e in 0..=max_ord {
            let mut coeffs: Vec<Rational> = Vec::new();
            for n in 1..=max_num {
                let dens = if e == 0 { 1 } else { max_den };
                for d in 1..=dens {
                    let c = Rational::new(n.into(), d.into());
                    if !coeffs.contains(&c) {
                        coeffs.push(c);
                    }
                }
            }
            for p in &products {
                let monomial = Poly::monomial(Rational::one(), e as usize).mul(p);
                if monomial.degree().unwrap_or(0) as i64 > max_degree {
                    continue;
                }
                for c in &coeffs {
                    let f = monomial.scale(c);
                    if e == 0 && f.is_constant() && c.is_one() {
                        continue;
                    }
                    out.push(self.make(RatFunc::poly(f)));
                }
            }
        }
        Ok(out)
    }

    fn atoms_dividing(&self, a: &Element) -> AtomProbe {
        let Some(p) = self.integral_poly(a) else {
            return AtomProbe::default();
        };
        match p.ord() {
            Some(0) => {
                let mut atoms = self.factor_ord0(p).unwrap_or_default();
                atoms.dedup();
                let exhaustive = self.unit_constant_factors(&p.scale(&(Rational::one() / p.coeff(0)))).is_some();
                AtomProbe { atoms, exhaustive }
            }
            Some(e) => {
                let mut atoms: Vec<Element> =
                    self.probe_primes().into_iter().map(|q| self.constant(q)).collect();
                atoms.extend(self.polynomial_atoms(&p.shift_down(e)));
                atoms.sort();
                atoms.dedup();
                AtomProbe {
                    atoms,
                    exhaustive: false,
                }
            }
            None => AtomProbe::default(),
        }
    }

    fn successors(&self, a: &Element, integral_only: bool) -> Vec<Element> {
        let probe = if self.is_integral(a) {
            self.atoms_dividing(a).atoms
        } else {
            self.probe_primes().into_iter().map(|q| self.constant(q)).collect()
        };
        probe
            .iter()
            .filter_map(|pi| self.quotient(a, pi).ok())
            .filter(|q| !integral_only || (self.is_integral(q) && !self.is_unit(q)))
            .collect()
    }

    fn atomic_factorization(&self, a: &Element) -> Option<Vec<Element>> {
        let p = self.integral_poly(a)?;
        if p.ord() != Some(0) || self.is_unit(a) {
            return None;
        }
        self.factor_ord0(p)
    }

    fn atomicity_obstruction(&self, a: &Element) -> Option<String> {
        let e = ord(a);
        (self.is_integral(a) && e >= 1).then(|| {
            format!(
                "ord({a}) = {e}; every atom has ord 0 and ord is additive, so ord(a*b) >= {e} for all b in D"
            )
        })
    }

    fn fraction_certificate(&self, q: &Element, bound: usize) -> FractionSearch {
        let Some(f) = q.symbolic() else {
            return FractionSearch::Unsupported;
        };
        if f.ord() != 0 {
            return FractionSearch::Refuted(format!(
                "ord({q}) = {} while every atom has ord 0",
                f.ord()
            ));
        }
        let (n, d) = (f.num(), f.den());
        let r = n.coeff(0) / d.coeff(0);
        let (Some(rn), Some(rd)) = (prime_factors(r.numer()), prime_factors(r.denom())) else {
            return FractionSearch::Unknown("constant too large to factor".into());
        };
        let (Some(pn), Some(pd)) = (self.fraction_side(n), self.fraction_side(d)) else {
            return FractionSearch::Unknown(format!("cannot certify the factors of {q}"));
        };
        let mut numerator: Vec<Element> = rn.into_iter().map(|p| self.constant(p)).collect();
        numerator.extend(pn);
        numerator.sort();
        let mut denominator: Vec<Element> = rd.into_iter().map(|p| self.constant(p)).collect();
        denominator.extend(pd);
        denominator.sort();
        if numerator.len() + denominator.len() > bound {
            return FractionSearch::Unknown(format!(
                "certificate for {q} needs {} atoms, above the bound {bound}",
                numerator.len() + denominator.len()
            ));
        }
        FractionSearch::Found {
            numerator,
            denominator,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WindowSpec;

    fn m() -> PolyModel {
        PolyModel::new("zxq")
    }

    fn e(m: &PolyModel, s: &str) -> Element {
        m.parse_element(s).unwrap()
    }

    #[test]
    fn atoms_have_order_zero() {
        let m = m();
        for s in ["2", "3", "1+x", "1-x+x^2", "-1+1/2*x^3+x"] {
            assert!(m.is_atom(&e(&m, s)), "{s}");
        }
        for s in ["x", "2*x", "4", "6", "2+x", "1-x^2", "1"] {
            assert!(!m.is_atom(&e(&m, s)), "{s}");
        }
    }

    #[test]
    fn atomic_iff_order_zero() {
        let m = m();
        assert!(!m.is_atomic_element(&e(&m, "2*x")).unwrap());
        assert!(!m.is_atomic_element(&e(&m, "x^2+x^3")).unwrap());
        assert!(m.is_atomic_element(&e(&m, "6+3*x")).unwrap());
        assert!(!m.is_atomic_element(&m.unit()).unwrap());
        let f = m.atomic_factorization(&e(&m, "6+3*x")).unwrap();
        let labels: Vec<&str> = f.iter().map(Element::label).collect();
        assert_eq!(labels, vec!["1+1/2*x", "2", "3"]);
    }

    #[test]
    fn sign_is_quotiented_out() {
        let m = m();
        assert_eq!(e(&m, "-2"), e(&m, "2"));
        assert_eq!(e(&m, "-x"), e(&m, "x"));
        assert_eq!(m.quotient(&e(&m, "x"), &e(&m, "2")).unwrap().label(), "1/2*x");
    }

    #[test]
    fn descending_chain_under_x() {
        let m = m();
        let x = e(&m, "x");
        let succ: Vec<String> = m.successors(&x, true).iter().map(|s| s.label().to_string()).collect();
        assert!(succ.contains(&"1/2*x".to_string()));
        assert!(m.is_atom(&m.quotient(&x, &e(&m, "1/2*x")).unwrap()));
        assert!(!m.atoms_dividing(&x).exhaustive);
        assert!(m.atomicity_obstruction(&x).is_some());
        assert!(m.atomicity_obstruction(&e(&m, "2")).is_none());
    }

    #[test]
    fn fraction_certificates() {
        let m = m();
        let q = m.quotient(&e(&m, "3*x"), &e(&m, "2*x+2*x^2")).unwrap();
        match m.fraction_certificate(&q, 10) {
            FractionSearch::Found { numerator, denominator } => {
                assert_eq!(numerator.iter().map(Element::label).collect::<Vec<_>>(), vec!["3"]);
                assert_eq!(denominator.iter().map(Element::label).collect::<Vec<_>>(), vec!["1+x", "2"]);
            }
            other => panic!("{other:?}"),
        }
        let q = m.quotient(&e(&m, "x"), &e(&m, "x^2")).unwrap();
        assert!(matches!(m.fraction_certificate(&q, 10), FractionSearch::Refuted(_)));
    }

    #[test]
    fn bundled_style_window() {
        let m = m();
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_ord: Some(2),
                max_degree: Some(3),
                max_numerator: Some(3),
                max_denominator: Some(2),
                ..Default::default()
            },
            ..Default::default()
        };
        let w = m.enumerate_window(&spec).unwrap();
        assert!(w.iter().all(|a| m.is_integral(a) && !m.is_unit(a)));
        for l in ["2", "3", "x", "x^2", "1/2*x", "2*x"] {
            assert!(w.iter().any(|a| a.label() == l), "{l}");
        }
        assert!(m.window_elements(&spec.bounds, true).is_err());
    }
}
