//! Finite windows of the graph of divisibility.
//!
//! Vertices are classes of `P(D)`; there is an edge `a → b` exactly when
//! `a/b` is an atom. Edges run from the more divisible element to the less
//! divisible one, so atoms of an integral window are sinks.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{precedes_or_eq, DivisibilityModel, Element};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Label of the atom `from / to`.
    pub atom: String,
}

#[derive(Debug, Clone)]
pub struct DivGraph {
    model_id: String,
    vertices: Vec<Element>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    boundary: Vec<bool>,
    atom: Vec<bool>,
    integral: Vec<bool>,
}

/// `a → b` iff `a/b` is an atom.
pub fn cover_edge(model: &dyn DivisibilityModel, a: &Element, b: &Element) -> Result<bool> {
    model.check(a)?;
    model.check(b)?;
    if a == b {
        return Ok(false);
    }
    Ok(model.is_atom(&model.quotient(a, b)?))
}

/// Graph on `window` with every edge passing [`cover_edge`].
///
/// A vertex is flagged as boundary when the model knows an atom quotient of
/// it that lies outside the window, or cannot list all atoms dividing it.
pub fn build_graph(model: &dyn DivisibilityModel, window: &[Element]) -> Result<DivGraph> {
    for a in window {
        model.check(a)?;
    }
    let mut vertices = window.to_vec();
    vertices.sort();
    vertices.dedup();
    let index: HashMap<String, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.label().to_string(), i))
        .collect();
    let integral: Vec<bool> = vertices.iter().map(|v| model.is_integral(v)).collect();
    let integral_window = integral.iter().all(|&b| b);

    let per_vertex: Vec<(Vec<Edge>, bool)> = vertices
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut out = Vec::new();
            for (j, b) in vertices.iter().enumerate() {
                if i != j {
                    let q = model.quotient(a, b)?;
                    if model.is_atom(&q) {
                        out.push(Edge {
                            from: i,
                            to: j,
                            atom: q.label().to_string(),
                        });
                    }
                }
            }
            let escapes = model
                .successors(a, integral_window)
                .iter()
                .any(|s| !index.contains_key(s.label()));
            let partial = integral[i] && !model.is_unit(a) && !model.atoms_dividing(a).exhaustive;
            Ok((out, escapes || partial))
        })
        .collect::<Result<_>>()?;

    let mut edges = Vec::new();
    let mut boundary = Vec::with_capacity(vertices.len());
    for (es, b) in per_vertex {
        edges.extend(es);
        boundary.push(b);
    }
    edges.sort();
    let atom = vertices.iter().map(|v| model.is_atom(v)).collect();
    Ok(DivGraph::assemble(
        model.id().to_string(),
        vertices,
        edges,
        boundary,
        atom,
        integral,
    ))
}

impl DivGraph {
    fn assemble(
        model_id: String,
        vertices: Vec<Element>,
        edges: Vec<Edge>,
        boundary: Vec<bool>,
        atom: Vec<bool>,
        integral: Vec<bool>,
    ) -> Self {
        let n = vertices.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in &edges {
            out_adj[e.from].push(e.to);
            in_adj[e.to].push(e.from);
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.label().to_string(), i))
            .collect();
        DivGraph {
            model_id,
            vertices,
            index,
            edges,
            out_adj,
            in_adj,
            boundary,
            atom,
            integral,
        }
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.label().to_string()).collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges as label pairs, in sorted order.
    pub fn edge_labels(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|e| (self.label(e.from).to_string(), self.label(e.to).to_string()))
            .collect()
    }

    pub fn label(&self, i: usize) -> &str {
        self.vertices[i].label()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn vertex(&self, a: &Element) -> Result<usize> {
        if a.model_id() != self.model_id {
            return Err(Error::ElementForeignToModel {
                label: a.label().to_string(),
                found: a.model_id().to_string(),
                expected: self.model_id.clone(),
            });
        }
        self.index_of(a.label())
            .ok_or_else(|| Error::NotAVertex(a.label().to_string()))
    }

    pub fn out_neighbours(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub fn in_neighbours(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn is_atom(&self, i: usize) -> bool {
        self.atom[i]
    }

    pub fn is_integral(&self, i: usize) -> bool {
        self.integral[i]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_adj[from].contains(&to)
    }

    pub fn atom_of_edge(&self, from: usize, to: usize) -> Option<&str> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.atom.as_str())
    }

    /// Kahn's algorithm; `None` when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|i| self.in_adj[i].len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.out_adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Induced subgraph on vertices satisfying `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> DivGraph {
        let kept: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.from] != usize::MAX && remap[e.to] != usize::MAX)
            .map(|e| Edge {
                from: remap[e.from],
                to: remap[e.to],
                atom: e.atom.clone(),
            })
            .collect();
        let boundary = kept
            .iter()
            .map(|&i| self.boundary[i] || self.out_adj[i].iter().any(|&j| remap[j] == usize::MAX && self.integral[j]))
            .collect();
        DivGraph::assemble(
            self.model_id.clone(),
            kept.iter().map(|&i| self.vertices[i].clone()).collect(),
            edges,
            boundary,
            kept.iter().map(|&i| self.atom[i]).collect(),
            kept.iter().map(|&i| self.integral[i]).collect(),
        )
    }

    /// The subgraph on `P(D)^+`: integral vertices other than the unit.
    pub fn integral_subgraph(&self, model: &dyn DivisibilityModel) -> DivGraph {
        self.induced(|i| self.integral[i] && !model.is_unit(&self.vertices[i]))
    }

    /// Copy with one edge removed. Only meant for corrupting test fixtures.
    pub fn without_edge(&self, from: &str, to: &str) -> DivGraph {
        let (Some(f), Some(t)) = (self.index_of(from), self.index_of(to)) else {
            return self.clone();
        };
        let edges = self
            .edges
            .iter()
            .filter(|e| !(e.from == f && e.to == t))
            .cloned()
            .collect();
        DivGraph::assemble(
            self.model_id.clone(),
            self.vertices.clone(),
            edges,
            self.boundary.clone(),
            self.atom.clone(),
            self.integral.clone(),
        )
    }

    /// Graphviz source. Atoms are boxes, boundary vertices dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph divisibility {\n  rankdir=TB;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let mut attrs = vec![format!("label={}", quote(v.label()))];
            if self.atom[i] {
                attrs.push("shape=box".into());
                attrs.push("style=bold".into());
            } else if self.boundary[i] {
                attrs.push("style=dashed".into());
            }
            let _ = writeln!(s, "  {} [{}];", quote(v.label()), attrs.join(", "));
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label={}];",
                quote(self.label(e.from)),
                quote(self.label(e.to)),
                quote(&e.atom)
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = (0..self.len())
            .map(|i| {
                json!({
                    "label": self.label(i),
                    "atom": self.atom[i],
                    "boundary": self.boundary[i],
                    "integral": self.integral[i],
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| json!({"from": self.label(e.from), "to": self.label(e.to), "atom": e.atom}))
            .collect();
        json!({
            "model": self.model_id,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SinkArtifact {
    pub vertex: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SinkReport {
    pub sinks: Vec<String>,
    /// Vertices without outgoing edges that are not atoms.
    pub artifacts: Vec<SinkArtifact>,
}

/// Vertices with no outgoing edge that have an incoming edge or are isolated
/// atoms, kept only when the model confirms they are atoms.
pub fn sinks(graph: &DivGraph) -> SinkReport {
    let mut sinks = Vec::new();
    let mut artifacts = Vec::new();
    for i in 0..graph.len() {
        if !graph.out_adj[i].is_empty() {
            continue;
        }
        let candidate = !graph.in_adj[i].is_empty() || graph.atom[i];
        if !candidate {
            continue;
        }
        if graph.atom[i] {
            sinks.push(graph.label(i).to_string());
        } else {
            let reason = if graph.boundary[i] {
                "no outgoing edge inside the window; its atom quotients lie outside"
            } else {
                "no outgoing edge but not an atom"
            };
            artifacts.push(SinkArtifact {
                vertex: graph.label(i).to_string(),
                reason: reason.into(),
            });
        }
    }
    SinkReport { sinks, artifacts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Terminal {
    AtomSink,
    NonAtomDeadEnd,
    WindowBoundary,
    LengthCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphPath {
    pub vertices: Vec<String>,
    pub terminal: Terminal,
}

impl GraphPath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathReport {
    pub source: String,
    pub paths: Vec<GraphPath>,
    /// No path was cut by the length cap.
    pub exhaustive: bool,
}

/// Every maximal directed path from `a` of at most `length_cap` edges.
///
/// A boundary vertex with outgoing edges also ends one path tagged
/// `WindowBoundary`, standing for its continuations outside the window.
pub fn paths_from(graph: &DivGraph, a: &Element, length_cap: usize) -> Result<PathReport> {
    let start = graph.vertex(a)?;
    let mut paths = Vec::new();
    let mut stack = vec![start];
    walk(graph, &mut stack, length_cap, &mut paths);
    let exhaustive = paths.iter().all(|p| p.terminal != Terminal::LengthCap);
    Ok(PathReport {
        source: a.label().to_string(),
        paths,
        exhaustive,
    })
}

fn walk(graph: &DivGraph, stack: &mut Vec<usize>, cap: usize, out: &mut Vec<GraphPath>) {
    let v = *stack.last().expect("nonempty path");
    let emit = |t: Terminal, out: &mut Vec<GraphPath>| {
        out.push(GraphPath {
            vertices: stack.iter().map(|&i| graph.label(i).to_string()).collect(),
            terminal: t,
        })
    };
    let succ = &graph.out_adj[v];
    if succ.is_empty() {
        let t = if graph.atom[v] {
            Terminal::AtomSink
        } else if graph.boundary[v] {
            Terminal::WindowBoundary
        } else {
            Terminal::NonAtomDeadEnd
        };
        emit(t, out);
        return;
    }
    if graph.boundary[v] {
        emit(Terminal::WindowBoundary, out);
    }
    if stack.len() > cap {
        emit(Terminal::LengthCap, out);
        return;
    }
    for &w in succ {
        stack.push(w);
        walk(graph, stack, cap, out);
        stack.pop();
    }
}

/// Elements `x` of `universe` with `a ⪯ x ⪯ b`.
pub fn interval(
    model: &dyn DivisibilityModel,
    a: &Element,
    b: &Element,
    universe: &[Element],
) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for x in universe {
        if precedes_or_eq(model, a, x)? && precedes_or_eq(model, x, b)? {
            out.push(x.clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AffineMonoid, DiscreteValuation, RationalValuation, ValueModel, WindowBounds, WindowSpec};
    use crate::value::Value;

    fn window(m: &dyn DivisibilityModel, bounds: WindowBounds) -> Vec<Element> {
        m.enumerate_window(&WindowSpec {
            bounds,
            ..Default::default()
        })
        .unwrap()
    }

    fn n23() -> ValueModel<AffineMonoid> {
        ValueModel::new("n23", AffineMonoid::numerical(&[2, 3]).unwrap())
    }

    fn upto(top: i64) -> WindowBounds {
        WindowBounds {
            max_value: Some(Value::from_ints(&[top])),
            ..Default::default()
        }
    }

    #[test]
    fn dvr_chain() {
        let m = ValueModel::new("dvr", DiscreteValuation::default());
        let w = window(&m, WindowBounds { max_exponent: Some(3), ..Default::default() });
        let g = build_graph(&m, &w).unwrap();
        assert_eq!(g.edge_labels(), vec![
            ("pi^2".to_string(), "pi".to_string()),
            ("pi^3".to_string(), "pi^2".to_string()),
        ]);
        assert_eq!(sinks(&g).sinks, vec!["pi"]);
        let p = m.parse_element("pi^2").unwrap();
        let q = m.parse_element("pi").unwrap();
        assert!(cover_edge(&m, &p, &q).unwrap());
        assert!(!cover_edge(&m, &p, &p).unwrap());
        let r = paths_from(&g, &m.parse_element("pi^3").unwrap(), 10).unwrap();
        assert_eq!(r.paths.len(), 1);
        assert_eq!(r.paths[0].terminal, Terminal::AtomSink);
        assert_eq!(r.paths[0].len(), 2);
        assert!(g.to_dot().contains("\"pi^3\" -> \"pi^2\""));
    }

    #[test]
    fn two_three_window() {
        let m = n23();
        let g = build_graph(&m, &window(&m, upto(7))).unwrap();
        let edges = g.edge_labels();
        for (a, b) in [("6", "4"), ("6", "3"), ("5", "2"), ("5", "3"), ("4", "2"), ("7", "4"), ("7", "5")] {
            assert!(edges.contains(&(a.to_string(), b.to_string())), "{a} -> {b}");
        }
        assert!(!edges.contains(&("6".to_string(), "2".to_string())));
        assert_eq!(sinks(&g).sinks, vec!["2", "3"]);
        assert!(g.is_acyclic());
        let r = paths_from(&g, &m.parse_element("6").unwrap(), 10).unwrap();
        let mut lens: Vec<usize> = r.paths.iter().map(GraphPath::len).collect();
        lens.sort();
        lens.dedup();
        assert_eq!(lens, vec![1, 2]);
        assert!(r.paths.iter().all(|p| p.terminal == Terminal::AtomSink));
        assert!((0..g.len()).all(|i| !g.is_boundary(i)));
    }

    #[test]
    fn antimatter_has_no_edges() {
        let m = ValueModel::new("q", RationalValuation::default());
        let w = window(&m, WindowBounds {
            max_value: Some(Value::from_ints(&[2])),
            max_denominator: Some(5),
            ..Default::default()
        });
        let g = build_graph(&m, &w).unwrap();
        assert!(g.edges().is_empty());
        assert!(sinks(&g).sinks.is_empty());
    }

    #[test]
    fn interval_in_chain() {
        let m = ValueModel::new("dvr", DiscreteValuation::default());
        let w = window(&m, WindowBounds { max_exponent: Some(3), ..Default::default() });
        let a = m.parse_element("pi^3").unwrap();
        let b = m.parse_element("pi").unwrap();
        assert_eq!(interval(&m, &a, &b, &w).unwrap().len(), 3);
        assert_eq!(interval(&m, &a, &a, &w).unwrap(), vec![a.clone()]);
    }

    #[test]
    fn foreign_vertex_is_rejected() {
        let m = n23();
        let g = build_graph(&m, &window(&m, upto(7))).unwrap();
        let other = ValueModel::new("dvr", DiscreteValuation::default());
        assert!(paths_from(&g, &other.parse_element("pi").unwrap(), 3).is_err());
        assert!(matches!(
            paths_from(&g, &m.parse_element("9").unwrap(), 3),
            Err(Error::NotAVertex(_))
        ));
    }
}
