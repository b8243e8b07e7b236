//! Brute-force factorization enumeration, independent of the graph.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DivisibilityModel, Element, Factorization};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationSearch {
    pub factorizations: Vec<Factorization>,
    /// Some branch stopped at the length bound with atoms still dividing the remainder.
    pub truncated: bool,
    /// The element has an atom divisor yet no factorization was found within the bound.
    pub bound_too_small: bool,
}

impl FactorizationSearch {
    /// Distinct factorization lengths, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        self.factorizations
            .iter()
            .map(Factorization::len)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// Every multiset of at most `max_length` atoms whose product is `a`.
///
/// Atoms are taken in nondecreasing label order so each multiset is produced
/// once. Branches whose remainder carries a model obstruction are cut.
pub fn factorizations(
    model: &dyn DivisibilityModel,
    a: &Element,
    max_length: usize,
) -> Result<FactorizationSearch> {
    model.check(a)?;
    if max_length < 1 {
        return Err(Error::InvalidBounds("`max_length` must be at least 1".into()));
    }
    let mut out = FactorizationSearch {
        factorizations: Vec::new(),
        truncated: false,
        bound_too_small: false,
    };
    if !model.is_integral(a) || model.is_unit(a) {
        return Ok(out);
    }
    let mut stack = Vec::new();
    search(model, a, a, max_length, &mut stack, &mut out)?;
    out.factorizations.sort_by(|x, y| x.atoms.cmp(&y.atoms));
    out.bound_too_small = out.factorizations.is_empty()
        && out.truncated
        && !model.atoms_dividing(a).atoms.is_empty();
    Ok(out)
}

fn search(
    model: &dyn DivisibilityModel,
    target: &Element,
    rest: &Element,
    max_length: usize,
    stack: &mut Vec<Element>,
    out: &mut FactorizationSearch,
) -> Result<()> {
    if model.is_unit(rest) {
        out.factorizations.push(Factorization {
            atoms: stack.clone(),
            target: target.clone(),
        });
        return Ok(());
    }
    if model.atomicity_obstruction(rest).is_some() {
        return Ok(());
    }
    let mut atoms = model.atoms_dividing(rest).atoms;
    atoms.sort();
    atoms.dedup();
    if let Some(last) = stack.last() {
        atoms.retain(|p| p >= last);
    }
    if atoms.is_empty() {
        return Ok(());
    }
    if stack.len() == max_length {
        out.truncated = true;
        return Ok(());
    }
    for p in atoms {
        let q = model.quotient(rest, &p)?;
        if !model.is_integral(&q) {
            continue;
        }
        stack.push(p);
        search(model, target, &q, max_length, stack, out)?;
        stack.pop();
    }
    Ok(())
}
