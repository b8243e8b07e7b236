use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::value::{fmt_exponent, int, parse_exponent, Value, ValueGroup};

use super::{require, ModelKind, ValueMonoid, WindowBounds};

/// A discrete valuation domain: classes `π^k`, value group `Z`, one atom `π`.
#[derive(Debug)]
pub struct DiscreteValuation {
    group: ValueGroup,
    atoms: Vec<Value>,
}

impl DiscreteValuation {
    pub fn new() -> Self {
        DiscreteValuation {
            group: ValueGroup::integers(1),
            atoms: vec![Value::from_ints(&[1])],
        }
    }
}

impl Default for DiscreteValuation {
    fn default() -> Self {
        Self::new()
    }
}

impl ValueMonoid for DiscreteValuation {
    fn kind(&self) -> ModelKind {
        ModelKind::Dvr
    }

    fn group(&self) -> &ValueGroup {
        &self.group
    }

    fn contains(&self, v: &Value) -> bool {
        !v.0[0].is_negative()
    }

    fn atoms(&self) -> &[Value] {
        &self.atoms
    }

    fn is_atomic(&self, v: &Value) -> bool {
        v.0[0].is_positive()
    }

    fn decompose(&self, v: &Value) -> Option<Vec<Value>> {
        if !self.is_atomic(v) {
            return None;
        }
        let mut out = Vec::new();
        let mut k = v.0[0].clone();
        while !k.is_zero() {
            out.push(self.atoms[0].clone());
            k -= num_rational::BigRational::one();
        }
        Some(out)
    }

    fn label(&self, v: &Value) -> String {
        if v.is_zero() {
            "1".to_string()
        } else {
            format!("pi{}", fmt_exponent(&v.0[0]))
        }
    }

    fn parse_label(&self, text: &str) -> Result<Value> {
        let t = text.trim();
        if t == "1" {
            return Ok(self.group.zero());
        }
        let rest = t
            .strip_prefix("pi")
            .ok_or_else(|| Error::parse(text, "expected `pi^k`"))?;
        let e = parse_exponent(rest)?;
        if !e.is_integer() {
            return Err(Error::parse(text, "exponent must be an integer"));
        }
        Ok(Value(vec![e]))
    }

    fn window(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Value>> {
        let n = require(bounds.max_exponent, "max_exponent", 1)?;
        let lo = if fractional { -n } else { 1 };
        Ok((lo..=n).map(|k| Value(vec![int(k)])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisibilityModel, ValueModel, WindowSpec};

    fn model() -> ValueModel<DiscreteValuation> {
        ValueModel::new("dvr", DiscreteValuation::new())
    }

    #[test]
    fn window_of_three() {
        let m = model();
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_exponent: Some(3),
                ..Default::default()
            },
            ..Default::default()
        };
        let w = m.enumerate_window(&spec).unwrap();
        let labels: Vec<&str> = w.iter().map(|e| e.label()).collect();
        assert_eq!(labels, vec!["pi", "pi^2", "pi^3"]);
    }

    #[test]
    fn quotient_and_atoms() {
        let m = model();
        let p3 = m.parse_element("pi^3").unwrap();
        let p2 = m.parse_element("pi^2").unwrap();
        assert_eq!(m.quotient(&p3, &p2).unwrap().label(), "pi");
        assert!(m.quotient(&p3, &p3).unwrap() == m.unit());
        assert!(m.is_atom(&m.parse_element("pi").unwrap()));
        assert!(!m.is_atom(&p2));
        assert_eq!(m.quotient(&p2, &p3).unwrap().label(), "pi^-1");
        assert!(!m.is_integral(&m.parse_element("pi^-1").unwrap()));
    }

    #[test]
    fn fractional_window_contains_the_unit() {
        let m = model();
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_exponent: Some(2),
                ..Default::default()
            },
            include_fractional: true,
            ..Default::default()
        };
        let w = m.enumerate_window(&spec).unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.contains(&m.unit()));
    }
}
