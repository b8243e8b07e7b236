//! Orchestration of a configured run and the oracle cross-check.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::classify::{classify, FactorizationReport, Property};
use crate::config::{build_model, Output, RunConfig};
use crate::connectivity::{
    atom_subgroup, coset_partition, component_label, is_almost_atomic, is_quasi_atomic,
    prime_witness_check_zxq, quotient_of_atomics, weak_components,
};
use crate::error::{Error, Result};
use crate::graph::{build_graph, sinks, DivGraph};
use crate::model::{DivisibilityModel, Element, ModelKind, WindowSpec};
use crate::oracle::factorizations;
use crate::topology::{is_t0, poset_to_space, space_to_poset, window_poset};
use crate::verdict::Verdict;

/// Vertex limit for exhaustive cross-checks.
pub const CROSSCHECK_LIMIT: usize = 500;

/// Exit status for a run whose oracle cross-check found disagreements.
pub const EXIT_DISAGREEMENT: i32 = 2;
/// Exit status for `--assert` runs with a failing verdict.
pub const EXIT_ASSERT: i32 = 1;

#[derive(Debug, Clone)]
pub struct RunReport {
    /// One JSON document per output, keyed by output name.
    pub documents: BTreeMap<String, Json>,
    pub dot: Option<String>,
    pub exit_code: i32,
    /// Wall-clock milliseconds per output. Not part of the written artifacts.
    pub timings_ms: BTreeMap<String, u128>,
}

impl RunReport {
    /// Write `<output>.json` and `graph.dot` into `dir`. Each file is written
    /// under a temporary name and renamed into place.
    pub fn write_artifacts(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut files: Vec<(String, String)> = self
            .documents
            .iter()
            .map(|(k, v)| {
                let text = serde_json::to_string_pretty(v).expect("json values serialize");
                (format!("{k}.json"), text + "\n")
            })
            .collect();
        if let Some(dot) = &self.dot {
            files.push(("graph.dot".into(), dot.clone()));
        }
        let mut written = Vec::new();
        for (name, text) in files {
            let tmp = dir.join(format!(".{name}.partial"));
            let path = dir.join(&name);
            std::fs::write(&tmp, text).map_err(io)?;
            std::fs::rename(&tmp, &path).map_err(io)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn to_json<T: Serialize>(x: &T) -> Json {
    serde_json::to_value(x).expect("reports serialize")
}

fn contains_failure(v: &Json) -> bool {
    match v {
        Json::Object(m) => {
            m.get("status").and_then(Json::as_str) == Some("fails") || m.values().any(contains_failure)
        }
        Json::Array(xs) => xs.iter().any(contains_failure),
        _ => false,
    }
}

/// Run the selected analyses in [`Output`] order. Nothing is written here;
/// see [`RunReport::write_artifacts`].
pub fn run(config: &RunConfig, assert: bool) -> Result<RunReport> {
    let model = build_model(config)?;
    let model = model.as_ref();
    let window = model.enumerate_window(&config.window)?;
    let graph = build_graph(model, &window)?;
    let mut documents = BTreeMap::new();
    let mut timings_ms = BTreeMap::new();
    let mut dot = None;
    let mut classification: Option<FactorizationReport> = None;
    let mut disagreements = 0;

    for &out in &config.outputs {
        let t = Instant::now();
        let doc = match out {
            Output::Graph => {
                dot = Some(graph.to_dot());
                let mut g = graph.to_json();
                g["sinks"] = to_json(&sinks(&graph));
                g["acyclic"] = json!(graph.is_acyclic());
                g
            }
            Output::Classify => {
                let r = classify(model, &graph, config.length_bound)?;
                let j = to_json(&r);
                classification = Some(r);
                j
            }
            Output::Components => components_document(model, config, &window, &graph)?,
            Output::Atomicity => {
                let atomic = match &classification {
                    Some(r) => r.verdict(Property::Atomic).clone(),
                    None => classify(model, &graph, config.length_bound)?
                        .verdict(Property::Atomic)
                        .clone(),
                };
                atomicity_document(model, &window, atomic, config.search_bound)?
            }
            Output::Topology => {
                let poset = window_poset(model, &window)?;
                let space = poset_to_space(&poset);
                let mut j = space.to_json();
                j["round_trip"] = json!(space_to_poset(&space).map(|p| p == poset).unwrap_or(false));
                j["t0"] = json!(is_t0(&space));
                j
            }
            Output::OracleCheck => {
                let r = oracle_crosscheck(model, &graph, &CrosscheckBounds::from(config))?;
                disagreements += r.disagreements.len();
                to_json(&r)
            }
        };
        documents.insert(out.name().to_string(), doc);
        timings_ms.insert(out.name().to_string(), t.elapsed().as_millis());
    }

    let exit_code = if disagreements > 0 {
        EXIT_DISAGREEMENT
    } else if assert && documents.values().any(contains_failure) {
        EXIT_ASSERT
    } else {
        0
    };
    Ok(RunReport {
        documents,
        dot,
        exit_code,
        timings_ms,
    })
}

fn components_document(
    model: &dyn DivisibilityModel,
    config: &RunConfig,
    window: &[Element],
    graph: &DivGraph,
) -> Result<Json> {
    let integral = weak_components(&graph.integral_subgraph(model));
    let mut doc = json!({
        "integral": {"count": integral.len(), "components": integral.as_map()},
    });
    let fractional_spec = WindowSpec {
        include_fractional: true,
        elements: None,
        ..config.window.clone()
    };
    doc["fractional"] = match model.enumerate_window(&fractional_spec) {
        Ok(w) if w.len() <= CROSSCHECK_LIMIT => {
            let p = weak_components(&build_graph(model, &w)?);
            json!({"count": p.len(), "components": p.as_map()})
        }
        Ok(w) => json!({"unsupported": format!("{} vertices exceed {CROSSCHECK_LIMIT}", w.len())}),
        Err(e) => json!({"unsupported": e.to_string()}),
    };
    if let Ok(h) = atom_subgroup(model) {
        let labels: BTreeMap<String, String> = window
            .iter()
            .map(|a| Ok((a.label().to_string(), component_label(&h.descriptor, a)?)))
            .collect::<Result<_>>()?;
        let cosets = coset_partition(&h.descriptor, graph.integral_subgraph(model).vertices())?;
        doc["atom_subgroup"] = to_json(&h.descriptor.normal_form());
        doc["no_atoms"] = json!(h.no_atoms);
        doc["coset_labels"] = json!(labels);
        doc["cosets_match_components"] = json!(cosets == integral);
    }
    Ok(doc)
}

fn atomicity_document(
    model: &dyn DivisibilityModel,
    window: &[Element],
    atomic: Verdict<String>,
    search_bound: usize,
) -> Result<Json> {
    let almost = is_almost_atomic(model, window, search_bound)?;
    let quasi = is_quasi_atomic(model, window, search_bound)?;
    let chain = implication_chain_holds(&atomic, &almost, &quasi);
    let mut doc = json!({
        "atomic": to_json(&atomic),
        "almost_atomic": to_json(&almost),
        "quasi_atomic": to_json(&quasi),
        "implication_chain_holds": chain,
    });
    if model.kind() == ModelKind::Zxq {
        doc["prime_witness"] = to_json(&prime_witness_check_zxq(model, window)?);
    }
    Ok(doc)
}

/// Atomic ⇒ almost atomic ⇒ quasi atomic, read on verdicts in both directions.
pub fn implication_chain_holds<A, B, C>(atomic: &Verdict<A>, almost: &Verdict<B>, quasi: &Verdict<C>) -> bool {
    let forward = (!atomic.holds() || almost.holds()) && (!almost.holds() || quasi.holds());
    let backward = (!quasi.fails() || !almost.holds()) && (!almost.fails() || !atomic.holds());
    forward && backward
}

#[derive(Debug, Clone, Copy)]
pub struct CrosscheckBounds {
    pub length: usize,
    pub oracle: usize,
    pub search: usize,
}

impl From<&RunConfig> for CrosscheckBounds {
    fn from(c: &RunConfig) -> Self {
        CrosscheckBounds {
            length: c.length_bound,
            oracle: c.oracle_bound,
            search: c.search_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub check: String,
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub vertices: usize,
    pub pairs: usize,
    /// Vertices the oracle could not settle within its bound.
    pub undecided: Vec<String>,
    pub disagreements: Vec<Disagreement>,
}

/// Compare path-based classification with the factorization oracle, and weak
/// components with quotient certificates, on the vertices of `graph`.
pub fn oracle_crosscheck(
    model: &dyn DivisibilityModel,
    graph: &DivGraph,
    bounds: &CrosscheckBounds,
) -> Result<CrosscheckReport> {
    if graph.len() > CROSSCHECK_LIMIT {
        return Err(Error::WindowTooLarge {
            size: graph.len(),
            limit: CROSSCHECK_LIMIT,
        });
    }
    let integral = graph.integral_subgraph(model);
    let report = classify(model, graph, bounds.length)?;
    let mut out = Vec::new();
    let mut undecided = Vec::new();
    let mut oracle_lengths: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let push = |out: &mut Vec<Disagreement>, check: &str, subject: &str, detail: String| {
        out.push(Disagreement {
            check: check.into(),
            subject: subject.into(),
            detail,
        })
    };

    for a in integral.vertices() {
        let s = factorizations(model, a, bounds.oracle)?;
        if s.bound_too_small {
            undecided.push(a.label().to_string());
            continue;
        }
        let lo = s.lengths();
        let summary = &report.vertices[a.label()];
        let lp = &summary.lengths;
        let closed = !summary.escapes;
        if closed && &lo != lp {
            push(&mut out, "lengths", a.label(), format!("paths give {lp:?}, oracle gives {lo:?}"));
        } else if !closed && !lp.iter().all(|l| lo.contains(l)) {
            push(&mut out, "lengths", a.label(), format!("paths give {lp:?}, not within oracle {lo:?}"));
        }
        if closed && summary.reaches_atom != !lo.is_empty() {
            push(&mut out, "atomic-element", a.label(), format!("paths reach an atom: {}, oracle: {}", summary.reaches_atom, !lo.is_empty()));
        }
        oracle_lengths.insert(a.label().to_string(), lo);
    }

    let decided = |l: &str| oracle_lengths.get(l);
    match report.verdict(Property::Atomic) {
        Verdict::Holds { .. } => {
            if let Some((l, _)) = oracle_lengths.iter().find(|(_, v)| v.is_empty()) {
                push(&mut out, "atomic", l, "classified atomic, oracle finds no factorization".into());
            }
        }
        Verdict::Fails { witness } => {
            if decided(&witness.element).is_some_and(|v| !v.is_empty()) {
                push(&mut out, "atomic", &witness.element, "witness has an oracle factorization".into());
            }
        }
        Verdict::Inconclusive { .. } => {}
    }
    let multi = oracle_lengths.iter().find(|(_, v)| v.len() >= 2);
    match report.verdict(Property::Hfd) {
        Verdict::Holds { .. } => {
            if let Some((l, v)) = multi {
                push(&mut out, "hfd", l, format!("classified half-factorial, oracle lengths {v:?}"));
            }
        }
        // A witness without lengths is inherited from a dead end.
        Verdict::Fails { witness } if witness.lengths.len() >= 2 => {
            if decided(&witness.element).is_some_and(|v| v.len() < 2) {
                push(&mut out, "hfd", &witness.element, "witness has a single oracle length".into());
            }
        }
        Verdict::Fails { witness } => {
            if decided(&witness.element).is_some_and(|v| !v.is_empty()) {
                push(&mut out, "hfd", &witness.element, "dead-end witness has an oracle factorization".into());
            }
        }
        Verdict::Inconclusive { .. } => {}
    }
    if report.verdict(Property::Bfd).holds() {
        for a in integral.vertices() {
            if !report.vertices[a.label()].escapes
                && factorizations(model, a, bounds.oracle)?.truncated
            {
                push(&mut out, "bfd", a.label(), "oracle search hit its length bound".into());
            }
        }
    }

    let components = weak_components(&integral);
    let vs = integral.vertices();
    let mut pairs = 0;
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            pairs += 1;
            let same = components.component_of(a.label()) == components.component_of(b.label());
            let q = quotient_of_atomics(model, a, b, bounds.search)?;
            if q.is_inconclusive() || q.holds() != same {
                push(
                    &mut out,
                    "components",
                    &format!("{a} / {b}"),
                    format!("quotient certificate {}, same weak component {same}", q.status()),
                );
            }
        }
    }

    let mut seen = BTreeSet::new();
    out.retain(|d| seen.insert((d.check.clone(), d.subject.clone())));
    Ok(CrosscheckReport {
        vertices: integral.len(),
        pairs,
        undecided,
        disagreements: out,
    })
}
