//! Three-valued, window-relative verdicts.

use serde::Serialize;

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Every relevant path or search stayed inside the window.
    Window,
    /// Decided from the model's characterization of atoms and `F(D)`.
    Analytic,
    /// Found by bounded search.
    Searched,
}

/// Evidence against a property.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Witness {
    pub element: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lengths: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Witness {
    pub fn new(element: impl Into<String>, reason: impl Into<String>) -> Self {
        Witness {
            element: element.into(),
            reason: reason.into(),
            ..Default::default()
        }
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict<C> {
    Holds { certificate: C, provenance: Provenance },
    Fails { witness: Witness },
    Inconclusive {
        reason: String,
        bound: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            Verdict::Inconclusive { witness, .. } => witness.as_ref(),
            Verdict::Holds { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Holds { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}
