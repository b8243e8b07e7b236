use num_traits::Signed;

use crate::error::{Error, Result};
use crate::value::{fmt_exponent, parse_exponent, ratio, CoordKind, GroupOrder, Value, ValueGroup};

use super::{require, ModelKind, ValueMonoid, WindowBounds};

/// A rank-one nondiscrete valuation domain with value group `Q`: classes
/// `x^α`. There are no atoms, since `x^α = x^(α/2) · x^(α/2)`.
#[derive(Debug)]
pub struct RationalValuation {
    group: ValueGroup,
}

impl RationalValuation {
    pub fn new() -> Self {
        RationalValuation {
            group: ValueGroup::new(vec![CoordKind::Rat], GroupOrder::Lexicographic),
        }
    }
}

impl Default for RationalValuation {
    fn default() -> Self {
        Self::new()
    }
}

impl ValueMonoid for RationalValuation {
    fn kind(&self) -> ModelKind {
        ModelKind::Antimatter
    }

    fn group(&self) -> &ValueGroup {
        &self.group
    }

    fn contains(&self, v: &Value) -> bool {
        !v.0[0].is_negative()
    }

    fn atoms(&self) -> &[Value] {
        &[]
    }

    fn is_atomic(&self, _v: &Value) -> bool {
        false
    }

    fn label(&self, v: &Value) -> String {
        if v.is_zero() {
            "1".to_string()
        } else {
            format!("x{}", fmt_exponent(&v.0[0]))
        }
    }

    fn parse_label(&self, text: &str) -> Result<Value> {
        let t = text.trim();
        if t == "1" {
            return Ok(self.group.zero());
        }
        let rest = t
            .strip_prefix('x')
            .ok_or_else(|| Error::parse(text, "expected `x^α`"))?;
        Ok(Value(vec![parse_exponent(rest)?]))
    }

    fn window(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Value>> {
        let q = require(bounds.max_denominator, "max_denominator", 1)?;
        let top = bounds
            .max_value
            .as_ref()
            .and_then(|v| v.0.first().cloned())
            .ok_or_else(|| Error::InvalidBounds("`max_value` is required".into()))?;
        if !top.is_positive() {
            return Err(Error::InvalidBounds("`max_value` must be positive".into()));
        }
        let mut out = Vec::new();
        let limit = (top.clone() * ratio(q, 1)).floor().to_integer();
        let limit: i64 = limit.try_into().map_err(|_| Error::InvalidBounds("window too large".into()))?;
        for d in 1..=q {
            for n in -limit..=limit {
                let a = ratio(n, d);
                if a.abs() > top || (!fractional && !a.is_positive()) || *a.denom() != d.into() {
                    continue;
                }
                out.push(Value(vec![a]));
            }
        }
        if fractional {
            out.push(self.group.zero());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisibilityModel, ValueModel, WindowSpec};

    #[test]
    fn twenty_classes_up_to_two() {
        let m = ValueModel::new("q", RationalValuation::new());
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_value: Some(Value::from_ints(&[2])),
                max_denominator: Some(5),
                ..Default::default()
            },
            ..Default::default()
        };
        let w = m.enumerate_window(&spec).unwrap();
        assert_eq!(w.len(), 20);
        assert!(w.iter().all(|e| !m.is_atom(e)));
        assert!(m.flags().antimatter);
        let half = m.parse_element("x^(1/2)").unwrap();
        assert_eq!(half.label(), "x^(1/2)");
        assert!(!m.is_atomic_element(&half).unwrap());
    }
}
