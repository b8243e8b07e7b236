//! Path-based classification of factorization properties on a window.
//!
//! Each vertex of the integral subgraph is summarized bottom-up in reverse
//! topological order: factorization lengths and multisets read off complete
//! paths, the longest path, and whether some path ends at a non-atom or
//! leaves the window. Verdicts are window-relative.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Result;
use crate::graph::DivGraph;
use crate::model::{atomic_membership, DivisibilityModel, DEFAULT_ORACLE_BOUND};
use crate::verdict::{Provenance, Verdict, Witness};

/// Per-vertex limit on stored factorization multisets.
pub const MAX_FACTORIZATIONS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Atomic,
    Accp,
    Bfd,
    Ffd,
    Hfd,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Atomic,
        Property::Accp,
        Property::Bfd,
        Property::Ffd,
        Property::Hfd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Atomic => "atomic",
            Property::Accp => "accp",
            Property::Bfd => "bfd",
            Property::Ffd => "ffd",
            Property::Hfd => "hfd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSummary {
    /// Factorization lengths (edges + 1) along complete paths.
    pub lengths: Vec<usize>,
    /// Distinct factorization multisets; `None` past [`MAX_FACTORIZATIONS`].
    pub factorizations: Option<usize>,
    /// Edges on the longest path.
    pub depth: usize,
    pub reaches_atom: bool,
    pub reaches_dead_end: bool,
    pub escapes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub length_cap: usize,
    pub verdicts: BTreeMap<Property, Verdict<String>>,
    pub vertices: BTreeMap<String, VertexSummary>,
}

impl FactorizationReport {
    pub fn verdict(&self, p: Property) -> &Verdict<String> {
        &self.verdicts[&p]
    }

    /// No verdict contradicts `BFD, FFD, HFD ⇒ ACCP ⇒ atomic`.
    pub fn respects_implications(&self) -> bool {
        let v = |p| self.verdict(p);
        let accp_needed = [Property::Bfd, Property::Ffd, Property::Hfd]
            .iter()
            .all(|&p| !v(p).holds() || v(Property::Accp).holds());
        let atomic_needed = !v(Property::Accp).holds() || v(Property::Atomic).holds();
        let atomic_fail = !v(Property::Atomic).fails()
            || Property::ALL[1..].iter().all(|&p| !v(p).holds());
        accp_needed && atomic_needed && atomic_fail
    }
}

#[derive(Debug, Clone, Default)]
struct Node {
    lengths: BTreeSet<usize>,
    facts: Option<BTreeSet<Vec<String>>>,
    depth: usize,
    atom_path: Option<Vec<usize>>,
    dead_end: Option<Vec<usize>>,
    escape: Option<Vec<usize>>,
}

fn extend(v: usize, tail: &Option<Vec<usize>>) -> Option<Vec<usize>> {
    tail.as_ref().map(|t| {
        let mut p = Vec::with_capacity(t.len() + 1);
        p.push(v);
        p.extend(t);
        p
    })
}

fn summarize(graph: &DivGraph) -> Vec<Node> {
    let order = graph.topological_order().expect("divisibility graphs are acyclic");
    let mut nodes = vec![Node::default(); graph.len()];
    for &v in order.iter().rev() {
        let succ = graph.out_neighbours(v);
        let mut node = Node {
            facts: Some(BTreeSet::new()),
            ..Default::default()
        };
        if succ.is_empty() {
            if graph.is_atom(v) {
                node.lengths.insert(1);
                node.facts = Some(BTreeSet::from([vec![graph.label(v).to_string()]]));
                node.atom_path = Some(vec![v]);
            } else if graph.is_boundary(v) {
                node.escape = Some(vec![v]);
            } else {
                node.dead_end = Some(vec![v]);
            }
        } else if graph.is_boundary(v) {
            node.escape = Some(vec![v]);
        }
        for &w in succ {
            let child = &nodes[w];
            node.lengths.extend(child.lengths.iter().map(|l| l + 1));
            node.depth = node.depth.max(child.depth + 1);
            if node.atom_path.is_none() {
                node.atom_path = extend(v, &child.atom_path);
            }
            if node.dead_end.is_none() {
                node.dead_end = extend(v, &child.dead_end);
            }
            if node.escape.is_none() {
                node.escape = extend(v, &child.escape);
            }
            let atom = graph.atom_of_edge(v, w).unwrap_or_default().to_string();
            node.facts = match (node.facts.take(), &child.facts) {
                (Some(mut acc), Some(cf)) => {
                    for f in cf {
                        let mut g = f.clone();
                        let pos = g.partition_point(|x| x < &atom);
                        g.insert(pos, atom.clone());
                        acc.insert(g);
                    }
                    (acc.len() <= MAX_FACTORIZATIONS).then_some(acc)
                }
                _ => None,
            };
        }
        nodes[v] = node;
    }
    nodes
}

fn path_labels(graph: &DivGraph, p: &[usize]) -> Vec<String> {
    p.iter().map(|&i| graph.label(i).to_string()).collect()
}

/// Classify Atomic, ACCP, BFD, FFD, and HFD on the integral part of `graph`.
///
/// Atomic uses a model certificate when the window cannot decide a vertex.
/// The other properties are read from paths only.
pub fn classify(
    model: &dyn DivisibilityModel,
    graph: &DivGraph,
    length_cap: usize,
) -> Result<FactorizationReport> {
    let g = graph.integral_subgraph(model);
    let nodes = summarize(&g);
    let n = g.len();
    let capped = |i: usize| nodes[i].depth > length_cap;

    let mut vertices = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        vertices.insert(
            g.label(i).to_string(),
            VertexSummary {
                lengths: node.lengths.iter().copied().collect(),
                factorizations: node.facts.as_ref().map(BTreeSet::len),
                depth: node.depth,
                reaches_atom: node.atom_path.is_some(),
                reaches_dead_end: node.dead_end.is_some(),
                escapes: node.escape.is_some() || capped(i),
            },
        );
    }

    let mut verdicts = BTreeMap::new();
    verdicts.insert(Property::Atomic, atomic_verdict(model, &g, &nodes, length_cap)?);

    let accp = {
        if let Some(i) = (0..n).find(|&i| nodes[i].dead_end.is_some()) {
            let path = nodes[i].dead_end.clone().unwrap_or_default();
            let end = g.label(*path.last().unwrap_or(&i)).to_string();
            Verdict::Fails {
                witness: Witness {
                    path: path_labels(&g, &path),
                    provenance: Some(Provenance::Window),
                    ..Witness::new(
                        g.label(i),
                        format!("a path from {} ends at {end}, which is not an atom", g.label(i)),
                    )
                },
            }
        } else if let Some(i) = (0..n).find(|&i| nodes[i].escape.is_some()) {
            let path = nodes[i].escape.clone().unwrap_or_default();
            Verdict::Inconclusive {
                reason: "a path leaves the window".into(),
                bound: length_cap,
                witness: Some(Witness {
                    path: path_labels(&g, &path),
                    ..Witness::new(g.label(i), "escaping path")
                }),
            }
        } else if let Some(i) = (0..n).find(|&i| capped(i)) {
            Verdict::Inconclusive {
                reason: format!("a path from {} is longer than the length cap", g.label(i)),
                bound: length_cap,
                witness: Some(Witness::new(g.label(i), "length cap reached")),
            }
        } else {
            Verdict::Holds {
                certificate: format!("every path from each of the {n} vertices ends at an atom"),
                provenance: Provenance::Window,
            }
        }
    };

    let follow = |holds: Verdict<String>| match &accp {
        Verdict::Holds { .. } => holds,
        Verdict::Fails { witness } => Verdict::Fails {
            witness: witness.clone(),
        },
        Verdict::Inconclusive {
            reason,
            bound,
            witness,
        } => Verdict::Inconclusive {
            reason: reason.clone(),
            bound: *bound,
            witness: witness.clone(),
        },
    };

    let max_len = nodes.iter().filter_map(|x| x.lengths.last()).max().copied().unwrap_or(0);
    verdicts.insert(
        Property::Bfd,
        follow(Verdict::Holds {
            certificate: format!("factorization lengths are at most {max_len}"),
            provenance: Provenance::Window,
        }),
    );

    let ffd = match (0..n).find(|&i| nodes[i].facts.is_none()) {
        Some(i) if accp.holds() => Verdict::Inconclusive {
            reason: format!("more than {MAX_FACTORIZATIONS} factorizations"),
            bound: MAX_FACTORIZATIONS,
            witness: Some(Witness::new(g.label(i), "factorization count exceeds the limit")),
        },
        _ => {
            let most = nodes
                .iter()
                .filter_map(|x| x.facts.as_ref().map(BTreeSet::len))
                .max()
                .unwrap_or(0);
            follow(Verdict::Holds {
                certificate: format!("each vertex has at most {most} factorizations"),
                provenance: Provenance::Window,
            })
        }
    };
    verdicts.insert(Property::Ffd, ffd);

    let hfd = match (0..n).find(|&i| nodes[i].lengths.len() >= 2) {
        Some(i) => Verdict::Fails {
            witness: Witness {
                lengths: nodes[i].lengths.iter().copied().collect(),
                provenance: Some(Provenance::Window),
                ..Witness::new(g.label(i), "factorizations of different lengths")
            },
        },
        None => follow(Verdict::Holds {
            certificate: "all factorizations of each vertex have equal length".into(),
            provenance: Provenance::Window,
        }),
    };
    verdicts.insert(Property::Hfd, hfd);
    verdicts.insert(Property::Accp, accp);

    Ok(FactorizationReport {
        length_cap,
        verdicts,
        vertices,
    })
}

fn atomic_verdict(
    model: &dyn DivisibilityModel,
    g: &DivGraph,
    nodes: &[Node],
    length_cap: usize,
) -> Result<Verdict<String>> {
    let mut undecided = None;
    for (i, node) in nodes.iter().enumerate() {
        if node.atom_path.is_some() {
            continue;
        }
        let v = &g.vertices()[i];
        let closed = node.escape.is_none() && node.depth <= length_cap;
        if let Some(reason) = model.atomicity_obstruction(v) {
            return Ok(Verdict::Fails {
                witness: Witness {
                    value: v.value().map(ToString::to_string),
                    ..Witness::new(v.label(), reason).with_provenance(Provenance::Analytic)
                },
            });
        }
        if closed {
            return Ok(Verdict::Fails {
                witness: Witness {
                    value: v.value().map(ToString::to_string),
                    path: node.dead_end.as_ref().map(|p| path_labels(g, p)).unwrap_or_default(),
                    ..Witness::new(v.label(), "no path from this vertex reaches an atom")
                        .with_provenance(Provenance::Window)
                },
            });
        }
        if !atomic_membership(model, v, DEFAULT_ORACLE_BOUND)? {
            return Ok(Verdict::Fails {
                witness: Witness {
                    value: v.value().map(ToString::to_string),
                    ..Witness::new(v.label(), "not a product of atoms")
                        .with_provenance(Provenance::Analytic)
                },
            });
        }
        undecided.get_or_insert(i);
    }
    Ok(match undecided {
        Some(i) => Verdict::Inconclusive {
            reason: format!("no path from {} reaches an atom inside the window", g.label(i)),
            bound: length_cap,
            witness: nodes[i].escape.as_ref().map(|p| Witness {
                path: path_labels(g, p),
                ..Witness::new(g.label(i), "escaping path")
            }),
        },
        None => Verdict::Holds {
            certificate: format!("each of the {} vertices has a path to an atom", g.len()),
            provenance: Provenance::Window,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::model::{AffineMonoid, DiscreteValuation, ValueModel, WindowBounds, WindowSpec};
    use crate::value::Value;

    #[test]
    fn two_three_up_to_seven() {
        let m = ValueModel::new("n", AffineMonoid::numerical(&[2, 3]).unwrap());
        let w = m
            .enumerate_window(&WindowSpec {
                bounds: WindowBounds {
                    max_value: Some(Value::from_ints(&[7])),
                    ..Default::default()
                },
                ..Default::default()
            })
            .unwrap();
        let r = classify(&m, &build_graph(&m, &w).unwrap(), 64).unwrap();
        for p in [Property::Atomic, Property::Accp, Property::Bfd, Property::Ffd] {
            assert!(r.verdict(p).holds(), "{p:?}");
        }
        let w = r.verdict(Property::Hfd).witness().unwrap();
        assert_eq!(w.element, "6");
        assert_eq!(w.lengths, vec![2, 3]);
        assert!(r.respects_implications());
        assert_eq!(r.vertices["6"].factorizations, Some(2));
    }

    #[test]
    fn dvr_holds_everywhere() {
        let m = ValueModel::new("dvr", DiscreteValuation::default());
        let w = m
            .enumerate_window(&WindowSpec {
                bounds: WindowBounds {
                    max_exponent: Some(5),
                    ..Default::default()
                },
                ..Default::default()
            })
            .unwrap();
        let r = classify(&m, &build_graph(&m, &w).unwrap(), 64).unwrap();
        assert!(Property::ALL.iter().all(|&p| r.verdict(p).holds()));
        let r = classify(&m, &build_graph(&m, &w).unwrap(), 2).unwrap();
        assert!(r.verdict(Property::Accp).is_inconclusive());
        assert!(r.respects_implications());
    }
}
