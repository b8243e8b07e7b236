use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::{Value, ValueGroup};

use super::{AtomProbe, DivisibilityModel, Element, ModelFlags, ModelKind, WindowBounds};

/// A reduced monoid presented by its image `S` in an ordered value group.
///
/// Classes of `P(D)^+` are identified with nonzero elements of `S`; classes of
/// `P(D)` with elements of the group generated by `S`.
pub trait ValueMonoid: Send + Sync + fmt::Debug {
    fn kind(&self) -> ModelKind;
    fn group(&self) -> &ValueGroup;

    /// `v ∈ S`; zero included.
    fn contains(&self, v: &Value) -> bool;

    /// Every atom value, each once.
    fn atoms(&self) -> &[Value];

    /// `v` is a nonempty sum of atoms.
    fn is_atomic(&self, v: &Value) -> bool;

    fn label(&self, v: &Value) -> String;
    fn parse_label(&self, text: &str) -> Result<Value>;

    fn window(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Value>>;

    /// One decomposition of `v` into atom values.
    fn decompose(&self, v: &Value) -> Option<Vec<Value>> {
        if !self.is_atomic(v) {
            return None;
        }
        let mut atoms: Vec<&Value> = self.atoms().iter().collect();
        atoms.sort_by(|a, b| b.cmp(a));
        let mut rest = v.clone();
        let mut out = Vec::new();
        while !rest.is_zero() {
            let step = atoms.iter().find(|a| {
                let r = &rest - a;
                r.is_zero() || self.is_atomic(&r)
            })?;
            rest = &rest - step;
            out.push((*step).clone());
        }
        Some(out)
    }

    fn quasi_multiplier(&self, _v: &Value) -> Option<Value> {
        None
    }
}

/// Adapter turning a [`ValueMonoid`] into a [`DivisibilityModel`].
#[derive(Debug)]
pub struct ValueModel<M> {
    id: Arc<str>,
    monoid: M,
    value_faithful: bool,
}

impl<M: ValueMonoid> ValueModel<M> {
    pub fn new(id: impl Into<String>, monoid: M) -> Self {
        ValueModel {
            id: Arc::from(id.into()),
            monoid,
            value_faithful: true,
        }
    }

    /// Declare atomicity undecidable from values, forcing oracle fallbacks.
    pub fn without_value_faithfulness(mut self) -> Self {
        self.value_faithful = false;
        self
    }

    pub fn monoid(&self) -> &M {
        &self.monoid
    }

    fn value_of<'a>(&self, a: &'a Element) -> Result<&'a Value> {
        self.check(a)?;
        a.value().ok_or_else(|| Error::NotValueBased(self.id.to_string()))
    }

    fn make(&self, v: Value) -> Element {
        Element::from_value(&self.id, self.monoid.label(&v), v)
    }
}

impl<M: ValueMonoid> DivisibilityModel for ValueModel<M> {
    fn id(&self) -> &str {
        &self.id
    }

    fn kind(&self) -> ModelKind {
        self.monoid.kind()
    }

    fn flags(&self) -> ModelFlags {
        ModelFlags {
            antimatter: self.monoid.atoms().is_empty(),
            value_faithful: self.value_faithful,
        }
    }

    fn value_group(&self) -> Option<&ValueGroup> {
        Some(self.monoid.group())
    }

    fn atom_values(&self) -> Option<Vec<Value>> {
        Some(self.monoid.atoms().to_vec())
    }

    fn unit(&self) -> Element {
        self.make(self.monoid.group().zero())
    }

    fn parse_element(&self, label: &str) -> Result<Element> {
        let v = self.monoid.parse_label(label)?;
        self.element_from_value(&v)
    }

    fn element_from_value(&self, v: &Value) -> Result<Element> {
        self.monoid.group().check(v)?;
        Ok(self.make(v.clone()))
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.make(self.value_of(a)? + self.value_of(b)?))
    }

    fn quotient(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.make(self.value_of(a)? - self.value_of(b)?))
    }

    fn is_integral(&self, a: &Element) -> bool {
        a.value().is_some_and(|v| self.monoid.contains(v))
    }

    fn is_atom(&self, a: &Element) -> bool {
        a.value().is_some_and(|v| self.monoid.atoms().contains(v))
    }

    fn atomic_by_characterization(&self, a: &Element) -> bool {
        a.value().is_some_and(|v| self.monoid.is_atomic(v))
    }

    fn window_elements(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Element>> {
        Ok(self
            .monoid
            .window(bounds, fractional)?
            .into_iter()
            .filter(|v| fractional || !v.is_zero())
            .map(|v| self.make(v))
            .collect())
    }

    fn atoms_dividing(&self, a: &Element) -> AtomProbe {
        let atoms = match a.value() {
            Some(v) if self.monoid.contains(v) && !v.is_zero() => self
                .monoid
                .atoms()
                .iter()
                .filter(|p| self.monoid.contains(&(v - *p)))
                .map(|p| self.make(p.clone()))
                .collect(),
            _ => Vec::new(),
        };
        AtomProbe {
            atoms,
            exhaustive: true,
        }
    }

    fn successors(&self, a: &Element, integral_only: bool) -> Vec<Element> {
        let Some(v) = a.value() else { return Vec::new() };
        self.monoid
            .atoms()
            .iter()
            .map(|p| v - p)
            .filter(|w| !integral_only || (!w.is_zero() && self.monoid.contains(w)))
            .map(|w| self.make(w))
            .collect()
    }

    fn atomic_factorization(&self, a: &Element) -> Option<Vec<Element>> {
        let parts = self.monoid.decompose(a.value()?)?;
        let mut out: Vec<Element> = parts.into_iter().map(|v| self.make(v)).collect();
        out.sort();
        Some(out)
    }

    fn atomicity_obstruction(&self, a: &Element) -> Option<String> {
        self.monoid.atoms().is_empty().then(|| {
            format!("the model has no atoms, so no multiple of {a} is a product of atoms")
        })
    }

    fn quasi_multiplier(&self, a: &Element) -> Option<Element> {
        self.monoid.quasi_multiplier(a.value()?).map(|v| self.make(v))
    }
}
