//! Weak components, cosets of the subgroup generated by the atoms, and
//! almost and quasi atomicity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DivGraph;
use crate::lattice::SubgroupDescriptor;
use crate::model::{
    atomic_membership, ord, DivisibilityModel, Element, FractionSearch, ModelKind,
};
use crate::partition::{Dsu, Partition};
use crate::value::Value;
use crate::verdict::{Provenance, Verdict, Witness};

/// Components of the graph with edge directions ignored.
pub fn weak_components(graph: &DivGraph) -> Partition {
    let mut d = Dsu::new(graph.len());
    for e in graph.edges() {
        d.union(e.from, e.to);
    }
    Partition::from_dsu(&mut d, &graph.labels())
}

/// Subgroup of the value group generated by the atom values.
#[derive(Debug, Clone)]
pub struct AtomSubgroup {
    pub descriptor: SubgroupDescriptor,
    /// The model has no atoms; the descriptor is the trivial subgroup.
    pub no_atoms: bool,
}

pub fn atom_subgroup(model: &dyn DivisibilityModel) -> Result<AtomSubgroup> {
    let (Some(group), Some(atoms)) = (model.value_group(), model.atom_values()) else {
        return Err(Error::NotValueBased(model.id().to_string()));
    };
    let no_atoms = atoms.is_empty();
    Ok(AtomSubgroup {
        descriptor: SubgroupDescriptor::new(group.clone(), atoms)?,
        no_atoms,
    })
}

/// Membership of `g` with integer coefficients over the generators.
pub fn subgroup_membership(desc: &SubgroupDescriptor, g: &Value) -> (bool, Option<Vec<BigInt>>) {
    let c = desc.membership(g);
    (c.is_some(), c)
}

/// Canonical representative of `value(a) + H`, as text.
pub fn component_label(desc: &SubgroupDescriptor, a: &Element) -> Result<String> {
    let v = a
        .value()
        .ok_or_else(|| Error::NotValueBased(a.model_id().to_string()))?;
    Ok(desc.coset_representative(v).to_string())
}

/// Partition of `window` by [`component_label`].
pub fn coset_partition(desc: &SubgroupDescriptor, window: &[Element]) -> Result<Partition> {
    let mut groups: std::collections::BTreeMap<String, Vec<String>> = Default::default();
    for a in window {
        groups
            .entry(component_label(desc, a)?)
            .or_default()
            .push(a.label().to_string());
    }
    Ok(Partition::from_groups(groups.into_values().collect()))
}

/// `a/b = (π_1 ⋯ π_n) / (ξ_1 ⋯ ξ_m)` with atoms `π_i`, `ξ_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub numerator_atoms: Vec<String>,
    pub denominator_atoms: Vec<String>,
    pub target_pair: (String, String),
}

/// Decide whether `a/b` is a quotient of products of atoms.
///
/// Value-based models answer through subgroup membership, whose coefficients
/// give the atom multisets. Symbolic models supply their own certificate.
pub fn quotient_of_atomics(
    model: &dyn DivisibilityModel,
    a: &Element,
    b: &Element,
    search_bound: usize,
) -> Result<Verdict<Certificate>> {
    let q = model.quotient(a, b)?;
    let pair = (a.label().to_string(), b.label().to_string());
    if let (Some(v), Ok(h)) = (q.value(), atom_subgroup(model)) {
        let Some(coeffs) = h.descriptor.short_membership(v) else {
            return Ok(Verdict::Fails {
                witness: Witness {
                    value: Some(v.to_string()),
                    ..Witness::new(
                        q.label(),
                        format!("value {v} is outside the subgroup generated by the atom values"),
                    )
                    .with_provenance(Provenance::Analytic)
                },
            });
        };
        let atoms = h.descriptor.generators();
        let mut numerator = Vec::new();
        let mut denominator = Vec::new();
        for (c, g) in coeffs.iter().zip(atoms) {
            let label = model.element_from_value(g)?.label().to_string();
            let count: usize = c.abs().try_into().unwrap_or(usize::MAX);
            let side = if c.is_negative() { &mut denominator } else { &mut numerator };
            if count > search_bound {
                return Ok(Verdict::Inconclusive {
                    reason: format!("certificate needs {c} copies of {label}"),
                    bound: search_bound,
                    witness: None,
                });
            }
            side.extend(std::iter::repeat_n(label, count));
        }
        if numerator.len() + denominator.len() > search_bound {
            return Ok(Verdict::Inconclusive {
                reason: "certificate exceeds the search bound".into(),
                bound: search_bound,
                witness: None,
            });
        }
        numerator.sort_by(|x, y| crate::model::natural_cmp(x, y));
        denominator.sort_by(|x, y| crate::model::natural_cmp(x, y));
        return Ok(Verdict::Holds {
            certificate: Certificate {
                numerator_atoms: numerator,
                denominator_atoms: denominator,
                target_pair: pair,
            },
            provenance: Provenance::Analytic,
        });
    }
    Ok(match model.fraction_certificate(&q, search_bound) {
        FractionSearch::Found {
            numerator,
            denominator,
        } => Verdict::Holds {
            certificate: Certificate {
                numerator_atoms: numerator.iter().map(|e| e.label().to_string()).collect(),
                denominator_atoms: denominator.iter().map(|e| e.label().to_string()).collect(),
                target_pair: pair,
            },
            provenance: Provenance::Analytic,
        },
        FractionSearch::Refuted(reason) => Verdict::Fails {
            witness: Witness::new(q.label(), reason).with_provenance(Provenance::Analytic),
        },
        FractionSearch::Unknown(reason) => Verdict::Inconclusive {
            reason,
            bound: search_bound,
            witness: None,
        },
        FractionSearch::Unsupported => Verdict::Inconclusive {
            reason: format!("model `{}` offers no quotient certificate", model.id()),
            bound: search_bound,
            witness: None,
        },
    })
}

/// Per-element evidence for almost atomicity: atoms whose product with the
/// element is atomic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomMultiplier {
    pub element: String,
    pub atoms: Vec<String>,
}

/// Per-element evidence for quasi atomicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiMultiplier {
    pub element: String,
    pub multiplier: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier_value: Option<String>,
    pub product: String,
    pub provenance: Provenance,
}

enum Outcome<C> {
    Ok(C),
    Fail(Witness),
    Unknown(String),
}

/// Merge per-element outcomes in window order: first failure, else first
/// unknown, else all certificates.
fn merge<C>(outcomes: Vec<Outcome<C>>, bound: usize, holds: Provenance) -> Verdict<Vec<C>> {
    let mut certs = Vec::new();
    let mut unknown = None;
    for o in outcomes {
        match o {
            Outcome::Fail(w) => return Verdict::Fails { witness: w },
            Outcome::Unknown(e) => {
                unknown.get_or_insert(e);
            }
            Outcome::Ok(c) => certs.push(c),
        }
    }
    match unknown {
        Some(e) => Verdict::Inconclusive {
            reason: format!("no certificate for {e} within the bound"),
            bound,
            witness: Some(Witness::new(e, "search bound exhausted")),
        },
        None => Verdict::Holds {
            certificate: certs,
            provenance: holds,
        },
    }
}

fn proper(model: &dyn DivisibilityModel, window: &[Element]) -> Vec<Element> {
    let mut w: Vec<Element> = window
        .iter()
        .filter(|a| model.is_integral(a) && !model.is_unit(a))
        .cloned()
        .collect();
    w.sort();
    w
}

/// Atoms to try as multipliers: the model's atom values, or the window atoms.
fn candidate_atoms(model: &dyn DivisibilityModel, window: &[Element]) -> Result<Vec<Element>> {
    match model.atom_values() {
        Some(vs) => vs.iter().map(|v| model.element_from_value(v)).collect(),
        None => {
            let mut a: Vec<Element> = window.iter().filter(|x| model.is_atom(x)).cloned().collect();
            a.sort();
            a.dedup();
            Ok(a)
        }
    }
}

/// Smallest multiset of `atoms` (by size, then lexicographically) whose
/// product with `a` is atomic, up to `bound` atoms.
fn atom_search(
    model: &dyn DivisibilityModel,
    a: &Element,
    atoms: &[Element],
    bound: usize,
) -> Result<Option<Vec<Element>>> {
    for size in 0..=bound {
        if size > 0 && atoms.is_empty() {
            break;
        }
        let mut idx = vec![0usize; size];
        loop {
            let mut prod = a.clone();
            for &i in &idx {
                prod = model.multiply(&prod, &atoms[i])?;
            }
            if atomic_membership(model, &prod, bound.max(1))? {
                return Ok(Some(idx.iter().map(|&i| atoms[i].clone()).collect()));
            }
            // next nondecreasing index tuple
            let Some(pos) = (0..size).rev().find(|&p| idx[p] + 1 < atoms.len()) else {
                break;
            };
            let next = idx[pos] + 1;
            for x in &mut idx[pos..] {
                *x = next;
            }
        }
    }
    Ok(None)
}

/// Every element of the window becomes atomic after multiplying by finitely
/// many atoms.
///
/// A value outside the subgroup generated by the atoms refutes this for the
/// whole domain. Otherwise each element gets an explicit atom multiset.
pub fn is_almost_atomic(
    model: &dyn DivisibilityModel,
    window: &[Element],
    search_bound: usize,
) -> Result<Verdict<Vec<AtomMultiplier>>> {
    let w = proper(model, window);
    let h = atom_subgroup(model).ok();
    let atoms = candidate_atoms(model, &w)?;
    let outcomes = w
        .par_iter()
        .map(|a| -> Result<Outcome<AtomMultiplier>> {
            if let (Some(h), Some(v)) = (&h, a.value()) {
                if !h.descriptor.contains(v) {
                    let why = if h.no_atoms {
                        "the model has no atoms".to_string()
                    } else {
                        format!(
                            "value {v} is outside the subgroup generated by the atom values, so no atom multiple of it is atomic"
                        )
                    };
                    return Ok(Outcome::Fail(Witness {
                        value: Some(v.to_string()),
                        ..Witness::new(a.label(), why).with_provenance(Provenance::Analytic)
                    }));
                }
            }
            if let Some(reason) = model.atomicity_obstruction(a) {
                return Ok(Outcome::Fail(
                    Witness::new(a.label(), reason).with_provenance(Provenance::Analytic),
                ));
            }
            Ok(match atom_search(model, a, &atoms, search_bound)? {
                Some(ms) => Outcome::Ok(AtomMultiplier {
                    element: a.label().to_string(),
                    atoms: ms.iter().map(|e| e.label().to_string()).collect(),
                }),
                None => Outcome::Unknown(a.label().to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(outcomes, search_bound, Provenance::Searched))
}

/// Every element of the window becomes atomic after multiplying by some
/// element of the domain.
pub fn is_quasi_atomic(
    model: &dyn DivisibilityModel,
    window: &[Element],
    search_bound: usize,
) -> Result<Verdict<Vec<QuasiMultiplier>>> {
    let w = proper(model, window);
    let atoms = candidate_atoms(model, &w)?;
    let outcomes = w
        .par_iter()
        .map(|a| -> Result<Outcome<QuasiMultiplier>> {
            let cert = |b: &Element, p: Provenance| -> Result<QuasiMultiplier> {
                Ok(QuasiMultiplier {
                    element: a.label().to_string(),
                    multiplier: b.label().to_string(),
                    multiplier_value: b.value().map(ToString::to_string),
                    product: model.multiply(a, b)?.label().to_string(),
                    provenance: p,
                })
            };
            if let Some(b) = model.quasi_multiplier(a) {
                let ab = model.multiply(a, &b)?;
                if model.is_integral(&b) && atomic_membership(model, &ab, search_bound.max(1))? {
                    return Ok(Outcome::Ok(cert(&b, Provenance::Analytic)?));
                }
            }
            if atomic_membership(model, a, search_bound.max(1))? {
                return Ok(Outcome::Ok(cert(&model.unit(), Provenance::Analytic)?));
            }
            if let Some(reason) = model.atomicity_obstruction(a) {
                return Ok(Outcome::Fail(
                    Witness::new(a.label(), reason).with_provenance(Provenance::Analytic),
                ));
            }
            for b in &w {
                if atomic_membership(model, &model.multiply(a, b)?, search_bound.max(1))? {
                    return Ok(Outcome::Ok(cert(b, Provenance::Searched)?));
                }
            }
            if let Some(ms) = atom_search(model, a, &atoms, search_bound)? {
                let b = ms
                    .iter()
                    .try_fold(model.unit(), |acc, p| model.multiply(&acc, p))?;
                return Ok(Outcome::Ok(cert(&b, Provenance::Searched)?));
            }
            Ok(Outcome::Unknown(a.label().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(outcomes, search_bound, Provenance::Analytic))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitnessReport {
    /// Window atoms with their order at `x`.
    pub atoms: Vec<(String, i64)>,
    /// Window elements of positive order, i.e. in the ideal `xQ[x]`.
    pub ideal_elements: Vec<String>,
    pub atoms_have_order_zero: bool,
    pub ideal_has_no_atoms: bool,
    pub holds: bool,
    pub conclusion: String,
}

/// In `Z + xQ[x]` the prime ideal `xQ[x]` contains no atom. Checks this on
/// the window: every atom has order 0 and no element of positive order is an
/// atom.
pub fn prime_witness_check_zxq(
    model: &dyn DivisibilityModel,
    window: &[Element],
) -> Result<PrimeWitnessReport> {
    if model.kind() != ModelKind::Zxq {
        return Err(Error::ModelMismatch {
            expected: ModelKind::Zxq.tag().into(),
            found: model.kind().tag().into(),
        });
    }
    let mut atoms = Vec::new();
    let mut ideal = Vec::new();
    let mut ideal_atoms = 0;
    for a in proper(model, window) {
        let is_atom = model.is_atom(&a);
        if is_atom {
            atoms.push((a.label().to_string(), ord(&a)));
        }
        if ord(&a) >= 1 {
            ideal.push(a.label().to_string());
            if is_atom {
                ideal_atoms += 1;
            }
        }
    }
    let atoms_have_order_zero = atoms.iter().all(|(_, o)| o.is_zero());
    let ideal_has_no_atoms = ideal_atoms == 0;
    let holds = atoms_have_order_zero && ideal_has_no_atoms && !ideal.is_empty();
    let conclusion = if holds {
        format!(
            "the prime ideal xQ[x] meets the window in {} elements and contains no atom, so the domain is not quasi atomic",
            ideal.len()
        )
    } else {
        "the window does not exhibit an atom-free prime ideal".into()
    };
    Ok(PrimeWitnessReport {
        atoms,
        ideal_elements: ideal,
        atoms_have_order_zero,
        ideal_has_no_atoms,
        holds,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AffineMonoid, PlanarMonoid, PlanarVariant, PolyModel, ValueModel};

    #[test]
    fn d1_subgroup_and_labels() {
        let m = ValueModel::new("d1", PlanarMonoid::new(PlanarVariant::D1));
        let h = atom_subgroup(&m).unwrap();
        assert_eq!(h.descriptor.basis(), vec![Value::from_ints(&[1, 0])]);
        let f = m.parse_element("x^(1/2)").unwrap();
        let g = m.parse_element("y^3/x^(1/3)").unwrap();
        assert_ne!(component_label(&h.descriptor, &f).unwrap(), component_label(&h.descriptor, &g).unwrap());
        let v = quotient_of_atomics(&m, &g, &f, 64).unwrap();
        assert!(v.fails());
        assert_eq!(v.witness().unwrap().value.as_deref(), Some("(3, -5/6)"));
    }

    #[test]
    fn two_three_quotient() {
        let m = ValueModel::new("n", AffineMonoid::numerical(&[2, 3]).unwrap());
        let a = m.parse_element("7").unwrap();
        let b = m.parse_element("5").unwrap();
        let v = quotient_of_atomics(&m, &a, &b, 64).unwrap();
        let c = v.certificate().unwrap();
        let sum = |xs: &[String]| xs.iter().map(|s| s.parse::<i64>().unwrap()).sum::<i64>();
        assert_eq!(sum(&c.numerator_atoms) - sum(&c.denominator_atoms), 2);
        let h = atom_subgroup(&m).unwrap();
        assert_eq!(h.descriptor.basis(), vec![Value::from_ints(&[1])]);
    }

    #[test]
    fn zxq_prime_witness() {
        let m = PolyModel::new("zxq");
        let w: Vec<Element> = ["2", "3", "x", "2*x", "1+x"].iter().map(|s| m.parse_element(s).unwrap()).collect();
        let r = prime_witness_check_zxq(&m, &w).unwrap();
        assert!(r.holds);
        assert!(r.ideal_elements.contains(&"2*x".to_string()));
        assert!(r.atoms.contains(&("3".to_string(), 0)));
        let n = ValueModel::new("n", AffineMonoid::numerical(&[2, 3]).unwrap());
        assert!(matches!(prime_witness_check_zxq(&n, &[]), Err(Error::ModelMismatch { .. })));
        let q = is_quasi_atomic(&m, &w, 8).unwrap();
        assert!(q.fails());
        assert_eq!(q.witness().unwrap().element, "2*x");
    }
}
