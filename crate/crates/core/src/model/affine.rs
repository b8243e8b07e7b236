use std::collections::{BTreeSet, VecDeque};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::SubgroupDescriptor;
use crate::value::{int, CoordKind, Rational, Value, ValueGroup};

use super::{ModelKind, ValueMonoid, WindowBounds};

/// The monoid generated by finitely many nonzero vectors with nonnegative
/// coordinates. With one integer coordinate this is a numerical monoid.
///
/// Such monoids are atomic; the atoms are the generators that are not sums of
/// the others.
#[derive(Debug)]
pub struct AffineMonoid {
    group: ValueGroup,
    atoms: Vec<Value>,
}

impl AffineMonoid {
    pub fn new(group: ValueGroup, generators: Vec<Value>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidBounds("at least one generator is required".into()));
        }
        for g in &generators {
            group.check(g)?;
            if !g.is_nonnegative() || g.is_zero() {
                return Err(Error::parse(
                    g.to_string(),
                    "generators must be nonzero with nonnegative coordinates",
                ));
            }
        }
        let mut gens: Vec<Value> = generators.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<Value> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if in_span(&gens[i], &others, 0) {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(AffineMonoid { group, atoms: gens })
    }

    /// Numerical monoid `⟨g_1, ..., g_n⟩ ⊆ N`.
    pub fn numerical(generators: &[i64]) -> Result<Self> {
        AffineMonoid::new(
            ValueGroup::integers(1),
            generators.iter().map(|&g| Value::from_ints(&[g])).collect(),
        )
    }

    fn is_numerical(&self) -> bool {
        self.group.coords == [CoordKind::Int]
    }
}

/// `v` is an N-combination of `gens[i..]`.
fn in_span(v: &Value, gens: &[Value], i: usize) -> bool {
    if v.is_zero() {
        return true;
    }
    if i == gens.len() || !v.is_nonnegative() {
        return false;
    }
    let mut rest = v.clone();
    loop {
        if in_span(&rest, gens, i + 1) {
            return true;
        }
        rest = &rest - &gens[i];
        if !rest.is_nonnegative() {
            return false;
        }
    }
}

impl ValueMonoid for AffineMonoid {
    fn kind(&self) -> ModelKind {
        if self.is_numerical() {
            ModelKind::Numerical
        } else {
            ModelKind::Affine
        }
    }

    fn group(&self) -> &ValueGroup {
        &self.group
    }

    fn contains(&self, v: &Value) -> bool {
        in_span(v, &self.atoms, 0)
    }

    fn atoms(&self) -> &[Value] {
        &self.atoms
    }

    fn is_atomic(&self, v: &Value) -> bool {
        !v.is_zero() && self.contains(v)
    }

    fn label(&self, v: &Value) -> String {
        if self.is_numerical() {
            v.0[0].numer().to_string()
        } else {
            v.to_string()
        }
    }

    fn parse_label(&self, text: &str) -> Result<Value> {
        let v = Value::parse(text)?;
        self.group.check(&v)?;
        Ok(v)
    }

    fn window(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Value>> {
        let top = bounds
            .max_value
            .as_ref()
            .ok_or_else(|| Error::InvalidBounds("`max_value` is required".into()))?;
        if top.dim() != self.group.rank() || top.0.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidBounds(format!(
                "`max_value` must have {} positive coordinates",
                self.group.rank()
            )));
        }
        if fractional {
            return self.fractional_window(top);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.group.zero()]);
        while let Some(v) = queue.pop_front() {
            for a in &self.atoms {
                let w = &v + a;
                if w.le_product(top) && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

impl AffineMonoid {
    /// Points of the group generated by the atoms inside `[-top, top]`.
    fn fractional_window(&self, top: &Value) -> Result<Vec<Value>> {
        if self.group.coords.contains(&CoordKind::Rat) {
            return Err(Error::InvalidBounds(
                "fractional windows need integer coordinates".into(),
            ));
        }
        let h = SubgroupDescriptor::new(self.group.clone(), self.atoms.clone())?;
        let ranges: Vec<i64> = top
            .0
            .iter()
            .map(|x| x.to_integer().try_into().unwrap_or(i64::MAX))
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<i64> = ranges.iter().map(|r| -r).collect();
        loop {
            let v = Value(cur.iter().map(|&x| int(x)).collect::<Vec<Rational>>());
            if h.contains(&v) {
                out.push(v);
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return Ok(out);
                }
                if cur[i] < ranges[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -ranges[i];
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisibilityModel, ValueModel, WindowSpec};

    fn n23() -> ValueModel<AffineMonoid> {
        ValueModel::new("n23", AffineMonoid::numerical(&[2, 3]).unwrap())
    }

    fn window(m: &ValueModel<AffineMonoid>, top: i64) -> Vec<String> {
        let spec = WindowSpec {
            bounds: WindowBounds {
                max_value: Some(Value::from_ints(&[top])),
                ..Default::default()
            },
            ..Default::default()
        };
        m.enumerate_window(&spec)
            .unwrap()
            .iter()
            .map(|e| e.label().to_string())
            .collect()
    }

    /// Membership in `⟨2,3⟩` by dynamic programming over `0..=n`.
    fn dp_member(n: usize) -> bool {
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for i in 1..=n {
            reach[i] = (i >= 2 && reach[i - 2]) || (i >= 3 && reach[i - 3]);
        }
        reach[n]
    }

    #[test]
    fn window_up_to_seven() {
        assert_eq!(window(&n23(), 7), vec!["2", "3", "4", "5", "6", "7"]);
    }

    #[test]
    fn divides_matches_dp() {
        let m = n23();
        let e = |n: i64| m.parse_element(&n.to_string()).unwrap();
        assert!(m.divides(&e(2), &e(6)).unwrap());
        for a in 2..12i64 {
            for b in 2..12i64 {
                let expected = b >= a && dp_member((b - a) as usize);
                assert_eq!(m.divides(&e(a), &e(b)).unwrap(), expected, "{a} | {b}");
            }
        }
        assert!(m.divides(&e(5), &e(5)).unwrap());
    }

    #[test]
    fn atoms_are_minimal_generators() {
        let m = ValueModel::new("n", AffineMonoid::numerical(&[3, 6, 5, 7, 10]).unwrap());
        assert_eq!(m.atom_values().unwrap(), vec![
            Value::from_ints(&[3]),
            Value::from_ints(&[5]),
            Value::from_ints(&[7]),
        ]);
        let n = n23();
        assert!(n.is_atom(&n.parse_element("2").unwrap()));
        assert!(!n.is_atom(&n.parse_element("4").unwrap()));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(AffineMonoid::numerical(&[0]).is_err());
        assert!(AffineMonoid::numerical(&[-2, 3]).is_err());
        assert!(AffineMonoid::numerical(&[]).is_err());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let a = n23();
        let b = ValueModel::new("other", AffineMonoid::numerical(&[2, 3]).unwrap());
        let x = a.parse_element("2").unwrap();
        let y = b.parse_element("2").unwrap();
        assert!(matches!(
            a.divides(&x, &y),
            Err(Error::ElementForeignToModel { .. })
        ));
    }

    #[test]
    fn plane_monoid_with_rational_coordinate() {
        let g = ValueGroup::new(vec![CoordKind::Int, CoordKind::Rat], crate::value::GroupOrder::Product);
        let m = AffineMonoid::new(g, vec![
            Value::from_ratios(&[(1, 1), (0, 1)]),
            Value::from_ratios(&[(0, 1), (1, 2)]),
        ])
        .unwrap();
        assert!(m.contains(&Value::from_ratios(&[(2, 1), (3, 2)])));
        assert!(!m.contains(&Value::from_ratios(&[(2, 1), (1, 3)])));
        assert_eq!(m.kind(), ModelKind::Affine);
    }
}
