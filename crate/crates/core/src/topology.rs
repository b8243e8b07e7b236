//! Finite posets and finite T0 Alexandrov spaces.
//!
//! A point's minimal open set is its down-set `M(a) = {x : x ⪯ a}`. Minimal
//! open sets are stored explicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{precedes_or_eq, DivisibilityModel, Element};
use crate::partition::{Dsu, Partition};

/// A finite partially ordered set; `leq[i][j]` means `points[i] ≤ points[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset<T> {
    points: Vec<T>,
    leq: Vec<Vec<bool>>,
}

impl<T: Clone + Display> FinitePoset<T> {
    /// Checks reflexivity, antisymmetry, and transitivity.
    pub fn new(points: Vec<T>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = points.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::NotAPartialOrder("relation matrix has the wrong shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::NotAPartialOrder(format!("{} is not related to itself", points[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} and {} are related both ways",
                        points[i], points[j]
                    )));
                }
                if !leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j][k] && !leq[i][k] {
                        return Err(Error::NotAPartialOrder(format!(
                            "{} ≤ {} ≤ {} but not {} ≤ {}",
                            points[i], points[j], points[k], points[i], points[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { points, leq })
    }

    pub fn from_fn(points: Vec<T>, f: impl Fn(&T, &T) -> bool) -> Result<Self> {
        let leq = points
            .iter()
            .map(|a| points.iter().map(|b| f(a, b)).collect())
            .collect();
        FinitePoset::new(points, leq)
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

/// A finite Alexandrov space given by the minimal open set of each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexandrovSpace<T> {
    points: Vec<T>,
    min_open: Vec<BTreeSet<usize>>,
}

impl<T: Clone + Display> AlexandrovSpace<T> {
    /// Requires `x ∈ M(x)` and `y ∈ M(x) ⇒ M(y) ⊆ M(x)`.
    pub fn new(points: Vec<T>, min_open: Vec<BTreeSet<usize>>) -> Result<Self> {
        if points.len() != min_open.len() {
            return Err(Error::IncoherentBasis("one minimal open set per point is required".into()));
        }
        let n = points.len();
        for (x, m) in min_open.iter().enumerate() {
            if !m.contains(&x) || m.iter().any(|&y| y >= n) {
                return Err(Error::IncoherentBasis(points[x].to_string()));
            }
            if m.iter().any(|&y| !min_open[y].is_subset(m)) {
                return Err(Error::IncoherentBasis(points[x].to_string()));
            }
        }
        Ok(AlexandrovSpace { points, min_open })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_open(&self, i: usize) -> &BTreeSet<usize> {
        &self.min_open[i]
    }

    pub fn index_of(&self, p: &T) -> Option<usize>
    where
        T: PartialEq,
    {
        self.points.iter().position(|q| q == p)
    }

    /// Minimal open sets by point label.
    pub fn min_open_labels(&self) -> BTreeMap<String, Vec<String>> {
        self.points
            .iter()
            .zip(&self.min_open)
            .map(|(p, m)| {
                let mut ls: Vec<String> = m.iter().map(|&i| self.points[i].to_string()).collect();
                ls.sort_by(|a, b| crate::model::natural_cmp(a, b));
                (p.to_string(), ls)
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps = connected_components(self);
        json!({
            "min_open": self.min_open_labels(),
            "components": comps.as_map(),
            "component_count": comps.len(),
            "t0": is_t0(self),
        })
    }
}

pub fn poset_to_space<T: Clone + Display>(p: &FinitePoset<T>) -> AlexandrovSpace<T> {
    let n = p.len();
    let min_open = (0..n)
        .map(|a| (0..n).filter(|&x| p.leq(x, a)).collect())
        .collect();
    AlexandrovSpace {
        points: p.points.clone(),
        min_open,
    }
}

/// `a ≤ b` iff `a ∈ M(b)`.
pub fn space_to_poset<T: Clone + Display>(s: &AlexandrovSpace<T>) -> Result<FinitePoset<T>> {
    if let Some(i) = first_shared_open(s) {
        return Err(Error::NotT0(s.points[i].to_string()));
    }
    let n = s.len();
    let leq = (0..n)
        .map(|a| (0..n).map(|b| s.min_open[b].contains(&a)).collect())
        .collect();
    FinitePoset::new(s.points.clone(), leq)
}

fn first_shared_open<T>(s: &AlexandrovSpace<T>) -> Option<usize> {
    let mut seen: BTreeMap<&BTreeSet<usize>, usize> = BTreeMap::new();
    for (i, m) in s.min_open.iter().enumerate() {
        if seen.insert(m, i).is_some() {
            return Some(i);
        }
    }
    None
}

/// Distinct points have distinct minimal open sets.
pub fn is_t0<T>(s: &AlexandrovSpace<T>) -> bool {
    first_shared_open(s).is_none()
}

fn chain_dsu<T>(s: &AlexandrovSpace<T>) -> Dsu {
    let mut d = Dsu::new(s.min_open.len());
    for (x, m) in s.min_open.iter().enumerate() {
        for &z in m {
            d.union(x, z);
        }
    }
    d
}

/// Points `a` and `b` are linked by a finite chain whose consecutive minimal
/// open sets meet.
pub fn chain_connected<T>(s: &AlexandrovSpace<T>, a: usize, b: usize) -> bool {
    let mut d = chain_dsu(s);
    d.find(a) == d.find(b)
}

pub fn connected_components<T: Display>(s: &AlexandrovSpace<T>) -> Partition {
    let labels: Vec<String> = s.points.iter().map(ToString::to_string).collect();
    Partition::from_dsu(&mut chain_dsu(s), &labels)
}

/// The window ordered by `a ⪯ b` iff `a = b` or `a/b ∈ F(D)`.
pub fn window_poset(model: &dyn DivisibilityModel, window: &[Element]) -> Result<FinitePoset<Element>> {
    let leq = window
        .par_iter()
        .map(|a| {
            window
                .iter()
                .map(|b| precedes_or_eq(model, a, b))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FinitePoset::new(window.to_vec(), leq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AffineMonoid, ValueModel, WindowBounds, WindowSpec};
    use crate::value::Value;

    fn chain3() -> FinitePoset<char> {
        FinitePoset::from_fn(vec!['a', 'b', 'c'], |x, y| x <= y).unwrap()
    }

    #[test]
    fn chain_down_sets() {
        let s = poset_to_space(&chain3());
        assert_eq!(s.min_open(2), &BTreeSet::from([0, 1, 2]));
        assert_eq!(s.min_open(0), &BTreeSet::from([0]));
        assert_eq!(space_to_poset(&s).unwrap(), chain3());
        assert!(chain_connected(&s, 0, 2));
    }

    #[test]
    fn antichain_is_discrete() {
        let p = FinitePoset::from_fn(vec![1, 2, 3, 4], |x, y| x == y).unwrap();
        let s = poset_to_space(&p);
        assert!((0..4).all(|i| s.min_open(i).len() == 1));
        assert_eq!(connected_components(&s).len(), 4);
    }

    #[test]
    fn shared_open_set_is_not_t0() {
        let s = AlexandrovSpace::new(vec!['p', 'q'], vec![BTreeSet::from([0, 1]), BTreeSet::from([0, 1])]).unwrap();
        assert!(!is_t0(&s));
        assert!(matches!(space_to_poset(&s), Err(Error::NotT0(_))));
    }

    #[test]
    fn incoherent_basis_is_rejected() {
        let r = AlexandrovSpace::new(vec!['p', 'q'], vec![BTreeSet::from([0, 1]), BTreeSet::from([0])]);
        assert!(matches!(r, Err(Error::IncoherentBasis(_))));
    }

    #[test]
    fn non_orders_are_rejected() {
        assert!(FinitePoset::from_fn(vec![1, 2], |_, _| true).is_err());
        assert!(FinitePoset::from_fn(vec![1, 2], |_, _| false).is_err());
    }

    #[test]
    fn numerical_window_down_set() {
        let m = ValueModel::new("n", AffineMonoid::numerical(&[2, 3]).unwrap());
        let w = m
            .enumerate_window(&WindowSpec {
                bounds: WindowBounds {
                    max_value: Some(Value::from_ints(&[9])),
                    ..Default::default()
                },
                ..Default::default()
            })
            .unwrap();
        let p = window_poset(&m, &w).unwrap();
        let s = poset_to_space(&p);
        let i = w.iter().position(|e| e.label() == "4").unwrap();
        let m4: Vec<&str> = s.min_open(i).iter().map(|&j| w[j].label()).collect();
        assert_eq!(m4, vec!["4", "6", "7", "8", "9"]);
        assert!(is_t0(&s));
        assert_eq!(space_to_poset(&s).unwrap(), p);
    }
}
