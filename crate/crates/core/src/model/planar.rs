use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::value::{
    fmt_exponent, int, parse_exponent, CoordKind, GroupOrder, Rational, Value, ValueGroup,
};

use super::{require, ModelKind, ValueMonoid, WindowBounds};

/// Which of the two local domains over `F_2` generated by powers of `x`,
/// `y`, and quotients `y^k/x^a` with `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarVariant {
    /// `x^a` for positive rational `a`; value group `Z ⊕ Q`.
    D1,
    /// `x^j` for positive integer `j`; value group `Z ⊕ Z`.
    D2,
}

/// Value monoid of [`PlanarVariant`], coordinates `(k, a)` = (`y`-degree,
/// `x`-exponent), ordered lexicographically.
///
/// Membership: `k = 0` or `k = 1` need `a >= 0`; every `a` is allowed once
/// `k >= 2`.
#[derive(Debug)]
pub struct PlanarMonoid {
    variant: PlanarVariant,
    group: ValueGroup,
    atoms: Vec<Value>,
}

impl PlanarMonoid {
    pub fn new(variant: PlanarVariant) -> Self {
        let (second, atoms) = match variant {
            PlanarVariant::D1 => (CoordKind::Rat, vec![Value::from_ints(&[1, 0])]),
            PlanarVariant::D2 => (
                CoordKind::Int,
                vec![Value::from_ints(&[0, 1]), Value::from_ints(&[1, 0])],
            ),
        };
        PlanarMonoid {
            variant,
            group: ValueGroup::new(vec![CoordKind::Int, second], GroupOrder::Lexicographic),
            atoms,
        }
    }

    pub fn variant(&self) -> PlanarVariant {
        self.variant
    }

    fn split(v: &Value) -> (&Rational, &Rational) {
        (&v.0[0], &v.0[1])
    }

    fn alphas(&self, bounds: &WindowBounds) -> Result<Vec<Rational>> {
        let top = bounds
            .max_alpha
            .clone()
            .ok_or_else(|| Error::InvalidBounds("`max_alpha` is required".into()))?;
        if !top.is_positive() {
            return Err(Error::InvalidBounds("`max_alpha` must be positive".into()));
        }
        let den = match self.variant {
            PlanarVariant::D1 => require(bounds.max_denominator, "max_denominator", 1)?,
            PlanarVariant::D2 => {
                if !top.is_integer() {
                    return Err(Error::InvalidBounds("`max_alpha` must be an integer for d2".into()));
                }
                1
            }
        };
        let mut out = vec![Rational::zero()];
        for d in 1..=den {
            let mut n = 1i64;
            loop {
                if n.gcd(&d) == 1 {
                    let a = Rational::new(n.into(), d.into());
                    if a > top {
                        break;
                    }
                    out.push(a.clone());
                    out.push(-a);
                }
                n += 1;
                if Rational::new(n.into(), d.into()) > top {
                    break;
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

impl ValueMonoid for PlanarMonoid {
    fn kind(&self) -> ModelKind {
        match self.variant {
            PlanarVariant::D1 => ModelKind::D1,
            PlanarVariant::D2 => ModelKind::D2,
        }
    }

    fn group(&self) -> &ValueGroup {
        &self.group
    }

    fn contains(&self, v: &Value) -> bool {
        if !self.group.contains(v) {
            return false;
        }
        let (k, a) = Self::split(v);
        if k.is_negative() {
            false
        } else if *k <= Rational::one() {
            !a.is_negative()
        } else {
            true
        }
    }

    fn atoms(&self) -> &[Value] {
        &self.atoms
    }

    fn is_atomic(&self, v: &Value) -> bool {
        if v.is_zero() || !self.contains(v) {
            return false;
        }
        let (_, a) = Self::split(v);
        match self.variant {
            PlanarVariant::D1 => a.is_zero(),
            PlanarVariant::D2 => !a.is_negative(),
        }
    }

    fn decompose(&self, v: &Value) -> Option<Vec<Value>> {
        if !self.is_atomic(v) {
            return None;
        }
        let (k, a) = Self::split(v);
        let count = |x: &Rational| x.to_integer().try_into().unwrap_or(0usize);
        let mut out = vec![Value::from_ints(&[1, 0]); count(k)];
        out.extend(vec![Value::from_ints(&[0, 1]); count(a)]);
        Some(out)
    }

    /// `(2, -a)` lies in the monoid for every `a`, and `(k, a) + (2, -a) = (k + 2, 0)`.
    fn quasi_multiplier(&self, v: &Value) -> Option<Value> {
        let (_, a) = Self::split(v);
        Some(Value(vec![int(2), -a.clone()]))
    }

    fn label(&self, v: &Value) -> String {
        let (k, a) = Self::split(v);
        let y = match k {
            k if k.is_zero() => String::new(),
            k => format!("y{}", fmt_exponent(k)),
        };
        let x = |r: &Rational| format!("x{}", fmt_exponent(r));
        match (y.is_empty(), a) {
            (true, a) if a.is_zero() => "1".to_string(),
            (false, a) if a.is_zero() => y,
            (true, a) if a.is_positive() => x(a),
            (true, a) => format!("1/{}", x(&-a)),
            (false, a) if a.is_positive() => format!("{y}*{}", x(a)),
            (false, a) => format!("{y}/{}", x(&-a)),
        }
    }

    /// Accepts the label grammar (`y^2/x^(1/3)`, `x^3`, `y*x`, `1/x`, `1`) or a
    /// literal value vector.
    fn parse_label(&self, text: &str) -> Result<Value> {
        let t = text.trim();
        let v = if t.starts_with('(') {
            Value::parse(t)?
        } else {
            parse_monomial(t)?
        };
        self.group.check(&v)?;
        Ok(v)
    }

    fn window(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Value>> {
        let max_k = require(bounds.max_k, "max_k", 1)?;
        let alphas = self.alphas(bounds)?;
        let low = if fractional { -max_k } else { 0 };
        let mut out = Vec::new();
        for k in low..=max_k {
            for a in &alphas {
                let v = Value(vec![int(k), a.clone()]);
                if fractional || self.contains(&v) {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }
}

fn parse_monomial(t: &str) -> Result<Value> {
    let bad = |why: &str| Error::parse(t, why);
    if t == "1" {
        return Ok(Value(vec![Rational::zero(), Rational::zero()]));
    }
    if let Some(rest) = t.strip_prefix("1/x") {
        return Ok(Value(vec![Rational::zero(), -parse_exponent(rest)?]));
    }
    if let Some(rest) = t.strip_prefix('x') {
        return Ok(Value(vec![Rational::zero(), parse_exponent(rest)?]));
    }
    let rest = t.strip_prefix('y').ok_or_else(|| bad("expected `x`, `y`, `1/x`, or `1`"))?;
    let cut = top_level_operator(rest);
    let (yexp, tail) = rest.split_at(cut.unwrap_or(rest.len()));
    let k = parse_exponent(yexp)?;
    let a = if let Some(x) = tail.strip_prefix("*x") {
        parse_exponent(x)?
    } else if let Some(x) = tail.strip_prefix("/x") {
        -parse_exponent(x)?
    } else if tail.is_empty() {
        Rational::zero()
    } else {
        return Err(bad("expected `*x` or `/x` after the `y` part"));
    };
    Ok(Value(vec![k, a]))
}

/// Index of the first `*` or `/` outside parentheses.
fn top_level_operator(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisibilityModel, ValueModel, WindowSpec};
    use crate::value::ratio;

    fn d1() -> ValueModel<PlanarMonoid> {
        ValueModel::new("d1", PlanarMonoid::new(PlanarVariant::D1))
    }

    fn d2() -> ValueModel<PlanarMonoid> {
        ValueModel::new("d2", PlanarMonoid::new(PlanarVariant::D2))
    }

    #[test]
    fn labels_round_trip() {
        let m = PlanarMonoid::new(PlanarVariant::D1);
        for (k, (n, d)) in [(0, (1, 2)), (3, (-1, 3)), (1, (0, 1)), (2, (-1, 1)), (0, (-2, 1)), (2, (5, 1)), (0, (0, 1))] {
            let v = Value(vec![int(k), ratio(n, d)]);
            let l = m.label(&v);
            assert_eq!(m.parse_label(&l).unwrap(), v, "{l}");
        }
        assert_eq!(m.label(&Value::from_ratios(&[(3, 1), (-1, 3)])), "y^3/x^(1/3)");
        assert_eq!(m.label(&Value::from_ratios(&[(0, 1), (1, 2)])), "x^(1/2)");
        assert_eq!(m.label(&Value::from_ints(&[1, 0])), "y");
        assert_eq!(m.parse_label("(2, -1/2)").unwrap(), Value::from_ratios(&[(2, 1), (-1, 2)]));
    }

    #[test]
    fn d1_membership() {
        let m = d1();
        let e = |s: &str| m.parse_element(s).unwrap();
        assert!(!m.divides(&e("y"), &e("x^(1/2)")).unwrap());
        assert!(m.is_atom(&e("y")));
        assert_eq!(e("y").value().unwrap(), &Value::from_ints(&[1, 0]));
        let q = m.quotient(&e("y^3/x^(1/3)"), &e("x^(1/2)")).unwrap();
        assert_eq!(q.value().unwrap(), &Value::from_ratios(&[(3, 1), (-5, 6)]));
        assert!(m.is_integral(&q));
        assert!(!m.is_atomic_element(&q).unwrap());
        assert!(!m.is_atomic_element(&e("y*x")).unwrap());
        assert!(m.is_atomic_element(&e("y^4")).unwrap());
    }

    #[test]
    fn d1_window() {
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_k: Some(2),
                max_alpha: Some(int(1)),
                max_denominator: Some(3),
                ..Default::default()
            },
            ..Default::default()
        };
        let w: Vec<String> = d1()
            .enumerate_window(&spec)
            .unwrap()
            .iter()
            .map(|e| e.label().to_string())
            .collect();
        for l in ["x^(1/3)", "x^(1/2)", "y", "y^2/x^(1/3)"] {
            assert!(w.iter().any(|x| x == l), "{l} missing from {w:?}");
        }
        assert!(!w.iter().any(|x| x == "y/x"));
        assert!(!w.iter().any(|x| x == "1"));
    }

    #[test]
    fn d2_witness_is_not_atomic() {
        let m = d2();
        let w = m.parse_element("y^2/x").unwrap();
        assert_eq!(w.value().unwrap(), &Value::from_ints(&[2, -1]));
        assert!(m.is_integral(&w));
        assert!(!m.is_atomic_element(&w).unwrap());
        assert!(m.is_atomic_element(&m.parse_element("y*x^2").unwrap()).unwrap());
        assert!(m.parse_element("x^(1/2)").is_err());
        let f = m.atomic_factorization(&m.parse_element("y^2*x").unwrap()).unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn quasi_multiplier_lands_on_y_power() {
        let m = d1();
        for l in ["x^(1/2)", "y^3/x^(1/3)", "y*x^2"] {
            let a = m.parse_element(l).unwrap();
            let b = m.quasi_multiplier(&a).unwrap();
            assert!(m.is_integral(&b));
            let ab = m.multiply(&a, &b).unwrap();
            assert!(m.is_atomic_element(&ab).unwrap(), "{l}");
            assert_eq!(ab.value().unwrap().0[1], Rational::zero());
        }
    }
}
