//! Divisibility models: computable presentations of a reduced divisibility
//! monoid, one class of `K^×/U(D)` per [`Element`].

mod affine;
mod antimatter;
mod dvr;
mod planar;
mod value_model;
mod zxq;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle;
use crate::poly::RatFunc;
use crate::value::{Rational, Value, ValueGroup};

pub use affine::AffineMonoid;
pub use antimatter::RationalValuation;
pub use dvr::DiscreteValuation;
pub use planar::{PlanarMonoid, PlanarVariant};
pub use value_model::{ValueModel, ValueMonoid};
pub use zxq::{ord, PolyModel};

/// Atom-count bound used when a model cannot decide atomicity from values.
pub const DEFAULT_ORACLE_BOUND: usize = 32;

/// Canonical representative of a class of `P(D)`.
///
/// Equality, hashing, and ordering only look at the owning model and the
/// label; labels compare with digit runs read as numbers, so `pi^2 < pi^10`.
#[derive(Debug, Clone)]
pub struct Element {
    model: Arc<str>,
    label: String,
    value: Option<Value>,
    symbolic: Option<RatFunc>,
}

impl Element {
    pub fn from_value(model: &Arc<str>, label: String, value: Value) -> Self {
        Element {
            model: model.clone(),
            label,
            value: Some(value),
            symbolic: None,
        }
    }

    pub fn from_symbolic(model: &Arc<str>, label: String, f: RatFunc) -> Self {
        Element {
            model: model.clone(),
            label,
            value: None,
            symbolic: Some(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn model_id(&self) -> &str {
        &self.model
    }

    pub fn value(&self) -> Option<&Value> {
        self.value.as_ref()
    }

    pub fn symbolic(&self) -> Option<&RatFunc> {
        self.symbolic.as_ref()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.model == other.model
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.model.hash(state);
        self.label.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.label, &other.label).then_with(|| self.model.cmp(&other.model))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

/// Label collation: runs of ASCII digits compare numerically, everything else
/// bytewise; ties fall back to plain string order.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (ab, bb) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < ab.len() && j < bb.len() {
        if ab[i].is_ascii_digit() && bb[j].is_ascii_digit() {
            let si = i;
            while i < ab.len() && ab[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < bb.len() && bb[j].is_ascii_digit() {
                j += 1;
            }
            let x = a[si..i].trim_start_matches('0');
            let y = b[sj..j].trim_start_matches('0');
            let ord = x.len().cmp(&y.len()).then_with(|| x.cmp(y));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            if ab[i] != bb[j] {
                return ab[i].cmp(&bb[j]);
            }
            i += 1;
            j += 1;
        }
    }
    (ab.len() - i).cmp(&(bb.len() - j)).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Dvr,
    Antimatter,
    Numerical,
    Affine,
    D1,
    D2,
    Zxq,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Dvr,
        ModelKind::Antimatter,
        ModelKind::Numerical,
        ModelKind::Affine,
        ModelKind::D1,
        ModelKind::D2,
        ModelKind::Zxq,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Dvr => "dvr",
            ModelKind::Antimatter => "antimatter",
            ModelKind::Numerical => "numerical",
            ModelKind::Affine => "affine",
            ModelKind::D1 => "d1",
            ModelKind::D2 => "d2",
            ModelKind::Zxq => "zxq",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.tag() == tag)
            .ok_or_else(|| Error::UnknownModelKind(tag.to_string()))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelFlags {
    /// No atoms at all.
    pub antimatter: bool,
    /// Divisibility, atomicity, and membership in `F(D)` are decided analytically.
    pub value_faithful: bool,
}

/// Size limits for a finite window. Each model reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowBounds {
    pub max_exponent: Option<i64>,
    pub max_value: Option<Value>,
    pub max_k: Option<i64>,
    pub max_alpha: Option<Rational>,
    pub max_denominator: Option<i64>,
    pub max_numerator: Option<i64>,
    pub max_ord: Option<i64>,
    pub max_degree: Option<i64>,
    pub cofactors: Option<Vec<String>>,
}

pub(crate) fn require(bound: Option<i64>, name: &str, min: i64) -> Result<i64> {
    match bound {
        None => Err(Error::InvalidBounds(format!("`{name}` is required"))),
        Some(b) if b < min => Err(Error::InvalidBounds(format!("`{name}` must be at least {min}, got {b}"))),
        Some(b) => Ok(b),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowSpec {
    pub model_id: String,
    pub bounds: WindowBounds,
    /// Window over `P(D)` (includes the unit class) instead of `P(D)^+`.
    pub include_fractional: bool,
    /// Explicit element labels; overrides `bounds`.
    pub elements: Option<Vec<String>>,
}

/// A factorization of `target` into atoms; atoms sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    pub atoms: Vec<Element>,
    pub target: Element,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Atoms dividing an element. `exhaustive` is false when the model only
/// produced a sample of an infinite set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomProbe {
    pub atoms: Vec<Element>,
    pub exhaustive: bool,
}

/// Outcome of expressing a quotient as a ratio of atom products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionSearch {
    Found {
        numerator: Vec<Element>,
        denominator: Vec<Element>,
    },
    Refuted(String),
    Unknown(String),
    Unsupported,
}

/// A computable presentation of the divisibility monoid of a domain.
///
/// Implementations are immutable after construction; every method is a pure
/// function of its inputs.
pub trait DivisibilityModel: Send + Sync + fmt::Debug {
    fn id(&self) -> &str;
    fn kind(&self) -> ModelKind;
    fn flags(&self) -> ModelFlags;

    /// `None` for symbolic models.
    fn value_group(&self) -> Option<&ValueGroup>;

    /// Complete list of atom values, for value-based models.
    fn atom_values(&self) -> Option<Vec<Value>>;

    /// The unit class (value zero).
    fn unit(&self) -> Element;

    fn parse_element(&self, label: &str) -> Result<Element>;

    fn element_from_value(&self, v: &Value) -> Result<Element>;

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element>;

    /// `a/b` as a class of `P(D)`.
    fn quotient(&self, a: &Element, b: &Element) -> Result<Element>;

    /// `a` lies in `D` (units included).
    fn is_integral(&self, a: &Element) -> bool;

    fn is_atom(&self, a: &Element) -> bool;

    /// The model's own characterization of `F(D)`. Only consulted when
    /// `flags().value_faithful` holds.
    fn atomic_by_characterization(&self, a: &Element) -> bool;

    /// Elements of the window described by `bounds`, unsorted.
    fn window_elements(&self, bounds: &WindowBounds, fractional: bool) -> Result<Vec<Element>>;

    /// Atoms `π` with `π | a`.
    fn atoms_dividing(&self, a: &Element) -> AtomProbe;

    /// Out-neighbours `a/π` for a finite probe set of atoms `π`.
    fn successors(&self, a: &Element, integral_only: bool) -> Vec<Element>;

    /// One factorization of `a` when the model can produce it directly.
    fn atomic_factorization(&self, a: &Element) -> Option<Vec<Element>>;

    /// A reason why `a·b ∉ F(D)` for every `b ∈ D`, when the model knows one.
    fn atomicity_obstruction(&self, _a: &Element) -> Option<String> {
        None
    }

    /// A uniform multiplier `b` with `a·b ∈ F(D)`, when the model knows one.
    fn quasi_multiplier(&self, _a: &Element) -> Option<Element> {
        None
    }

    /// Atom-ratio certificate for `q`, used by symbolic models.
    fn fraction_certificate(&self, _q: &Element, _bound: usize) -> FractionSearch {
        FractionSearch::Unsupported
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.model_id() == self.id() {
            Ok(())
        } else {
            Err(Error::ElementForeignToModel {
                label: a.label().to_string(),
                found: a.model_id().to_string(),
                expected: self.id().to_string(),
            })
        }
    }

    fn is_unit(&self, a: &Element) -> bool {
        *a == self.unit()
    }

    /// `a | b` in `D`.
    fn divides(&self, a: &Element, b: &Element) -> Result<bool> {
        let q = self.quotient(b, a)?;
        Ok(self.is_integral(&q))
    }

    /// Membership in `F(D)`.
    fn is_atomic_element(&self, a: &Element) -> Result<bool> {
        self.check(a)?;
        if !self.flags().value_faithful {
            return Err(Error::UndecidableWithoutBound(a.label().to_string()));
        }
        Ok(self.is_integral(a) && !self.is_unit(a) && self.atomic_by_characterization(a))
    }

    /// Deterministic finite window sorted by label, without duplicates.
    fn enumerate_window(&self, spec: &WindowSpec) -> Result<Vec<Element>> {
        let mut out = match &spec.elements {
            Some(labels) => labels
                .iter()
                .map(|l| self.parse_element(l))
                .collect::<Result<Vec<_>>>()?,
            None => self.window_elements(&spec.bounds, spec.include_fractional)?,
        };
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(out)
    }
}

/// Membership in `F(D)`, falling back to the bounded oracle when the model
/// does not decide it analytically.
pub fn atomic_membership(model: &dyn DivisibilityModel, a: &Element, bound: usize) -> Result<bool> {
    match model.is_atomic_element(a) {
        Err(Error::UndecidableWithoutBound(_)) => {
            if !model.is_integral(a) || model.is_unit(a) {
                return Ok(false);
            }
            Ok(!oracle::factorizations(model, a, bound)?.factorizations.is_empty())
        }
        other => other,
    }
}

/// The strict order `a ≺ b` iff `a/b ∈ F(D)`.
pub fn precedes(model: &dyn DivisibilityModel, a: &Element, b: &Element) -> Result<bool> {
    let q = model.quotient(a, b)?;
    atomic_membership(model, &q, DEFAULT_ORACLE_BOUND)
}

/// `a ⪯ b`.
pub fn precedes_or_eq(model: &dyn DivisibilityModel, a: &Element, b: &Element) -> Result<bool> {
    if a == b {
        model.check(a)?;
        return Ok(true);
    }
    precedes(model, a, b)
}
