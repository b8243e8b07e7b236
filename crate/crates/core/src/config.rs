//! Line-oriented run configuration.
//!
//! One `key = value` pair per line; `#` starts a comment. Lists are
//! comma-separated, with commas inside parentheses left alone. Rationals are
//! written `p/q`; there is no floating point.
//!
//! ```text
//! kind = numerical
//! generators = 2, 3
//! window.max_value = 40
//! outputs = graph, classify, oracle-check
//! ```

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::model::{
    AffineMonoid, DiscreteValuation, DivisibilityModel, ModelKind, PlanarMonoid, PlanarVariant,
    PolyModel, RationalValuation, ValueModel, WindowBounds, WindowSpec, DEFAULT_ORACLE_BOUND,
};
use crate::poly::Poly;
use crate::value::{parse_rational, CoordKind, GroupOrder, Value, ValueGroup};

/// Analyses a run can produce, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Graph,
    Classify,
    Components,
    Atomicity,
    Topology,
    OracleCheck,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::Graph,
        Output::Classify,
        Output::Components,
        Output::Atomicity,
        Output::Topology,
        Output::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::Graph => "graph",
            Output::Classify => "classify",
            Output::Components => "components",
            Output::Atomicity => "atomicity",
            Output::Topology => "topology",
            Output::OracleCheck => "oracle-check",
        }
    }

    pub fn from_name(s: &str) -> Option<Output> {
        Output::ALL.into_iter().find(|o| o.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub kind: ModelKind,
    pub id: String,
    pub generators: Vec<Value>,
    pub group: Option<ValueGroup>,
    pub window: WindowSpec,
    /// `Some(false)` makes a value-based model defer atomicity to the oracle.
    pub value_faithful: Option<bool>,
    pub declared_atoms: Vec<Poly>,
    pub probe_max_prime: Option<u64>,
    pub length_bound: usize,
    pub search_bound: usize,
    pub oracle_bound: usize,
    pub outputs: Vec<Output>,
    pub out_dir: Option<PathBuf>,
}

/// Split on commas outside parentheses; empty items dropped.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter()
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

fn parse_group(s: &str) -> Option<ValueGroup> {
    let coords = s
        .split('+')
        .map(|c| match c.trim() {
            "Z" => Some(CoordKind::Int),
            "Q" => Some(CoordKind::Rat),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some(ValueGroup::new(coords, GroupOrder::Product))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut kind = None;
    let mut id = None;
    let mut generators = Vec::new();
    let mut group = None;
    let mut bounds = WindowBounds::default();
    let mut fractional = false;
    let mut elements = None;
    let mut value_faithful = None;
    let mut declared_atoms = Vec::new();
    let mut probe_max_prime = None;
    let mut length_bound = 64;
    let mut search_bound = 64;
    let mut oracle_bound = DEFAULT_ORACLE_BOUND;
    let mut outputs = Vec::new();
    let mut out_dir = None;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            field: line.to_string(),
            reason: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let err = |reason: String| Error::Config {
            line: line_no,
            field: key.to_string(),
            reason,
        };
        let int = |min: i64| -> Result<i64> {
            let v: i64 = value
                .parse()
                .map_err(|_| err(format!("`{value}` is not an integer")))?;
            if v < min {
                return Err(Error::InvalidBounds(format!(
                    "`{key}` must be at least {min}, got {v}"
                )));
            }
            Ok(v)
        };
        match key {
            "kind" => kind = Some(ModelKind::from_tag(value)?),
            "id" => id = Some(value.to_string()),
            "generators" => {
                generators = split_list(value)
                    .iter()
                    .map(|g| Value::parse(g))
                    .collect::<Result<_>>()
                    .map_err(|e| err(e.to_string()))?;
                if generators.is_empty() {
                    return Err(err("no generators given".into()));
                }
            }
            "group" => {
                group = Some(parse_group(value).ok_or_else(|| err(format!("`{value}` is not of the form Z+Q")))?)
            }
            "window.max_exponent" => bounds.max_exponent = Some(int(1)?),
            "window.max_value" => {
                let v = Value::parse(value).map_err(|e| err(e.to_string()))?;
                if v.0.iter().any(|x| x <= &num_traits::Zero::zero()) {
                    return Err(Error::InvalidBounds(format!("`{key}` must be positive")));
                }
                bounds.max_value = Some(v);
            }
            "window.max_k" => bounds.max_k = Some(int(1)?),
            "window.max_alpha" => {
                let a = parse_rational(value).map_err(|e| err(e.to_string()))?;
                if a <= num_traits::Zero::zero() {
                    return Err(Error::InvalidBounds(format!("`{key}` must be positive")));
                }
                bounds.max_alpha = Some(a);
            }
            "window.max_denominator" => bounds.max_denominator = Some(int(1)?),
            "window.max_numerator" => bounds.max_numerator = Some(int(1)?),
            "window.max_ord" => bounds.max_ord = Some(int(0)?),
            "window.max_degree" => bounds.max_degree = Some(int(1)?),
            "window.cofactors" => bounds.cofactors = Some(split_list(value)),
            "window.elements" => elements = Some(split_list(value)),
            "window.fractional" => fractional = parse_bool(value).ok_or_else(|| err("expected true or false".into()))?,
            "flags.value_faithful" => {
                value_faithful = Some(parse_bool(value).ok_or_else(|| err("expected true or false".into()))?)
            }
            "atoms.declared" => {
                declared_atoms = split_list(value)
                    .iter()
                    .map(|p| Poly::parse(p))
                    .collect::<Result<_>>()
                    .map_err(|e| err(e.to_string()))?
            }
            "probe.max_prime" => probe_max_prime = Some(int(2)? as u64),
            "bound.length" => length_bound = int(1)? as usize,
            "bound.search" => search_bound = int(1)? as usize,
            "bound.oracle" => oracle_bound = int(1)? as usize,
            "outputs" => {
                outputs = split_list(value)
                    .iter()
                    .map(|o| Output::from_name(o).ok_or_else(|| err(format!("unknown output `{o}`"))))
                    .collect::<Result<_>>()?
            }
            "out" => out_dir = Some(PathBuf::from(value)),
            _ => return Err(err("unknown key".into())),
        }
    }

    let kind = kind.ok_or_else(|| Error::Config {
        line: 0,
        field: "kind".into(),
        reason: "missing".into(),
    })?;
    let needs_generators = matches!(kind, ModelKind::Numerical | ModelKind::Affine);
    if needs_generators && generators.is_empty() {
        return Err(Error::Config {
            line: 0,
            field: "generators".into(),
            reason: format!("required for `{kind}` models"),
        });
    }
    if !needs_generators && !generators.is_empty() {
        return Err(Error::Config {
            line: 0,
            field: "generators".into(),
            reason: format!("`{kind}` models have fixed generators"),
        });
    }
    outputs.sort();
    outputs.dedup();
    let id = id.unwrap_or_else(|| kind.tag().to_string());
    Ok(RunConfig {
        kind,
        window: WindowSpec {
            model_id: id.clone(),
            bounds,
            include_fractional: fractional,
            elements,
        },
        id,
        generators,
        group,
        value_faithful,
        declared_atoms,
        probe_max_prime,
        length_bound,
        search_bound,
        oracle_bound,
        outputs,
        out_dir,
    })
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => None,
    }
}

pub fn build_model(c: &RunConfig) -> Result<Box<dyn DivisibilityModel>> {
    fn finish<M: crate::model::ValueMonoid + 'static>(
        c: &RunConfig,
        m: M,
    ) -> Box<dyn DivisibilityModel> {
        let model = ValueModel::new(c.id.clone(), m);
        if c.value_faithful == Some(false) {
            Box::new(model.without_value_faithfulness())
        } else {
            Box::new(model)
        }
    }
    Ok(match c.kind {
        ModelKind::Dvr => finish(c, DiscreteValuation::new()),
        ModelKind::Antimatter => finish(c, RationalValuation::new()),
        ModelKind::Numerical => {
            if c.generators.iter().any(|g| g.dim() != 1) {
                return Err(Error::Config {
                    line: 0,
                    field: "generators".into(),
                    reason: "numerical generators are single integers".into(),
                });
            }
            let group = ValueGroup::integers(1);
            finish(c, AffineMonoid::new(group, c.generators.clone())?)
        }
        ModelKind::Affine => {
            let dim = c.generators[0].dim();
            let group = c.group.clone().unwrap_or_else(|| ValueGroup::integers(dim));
            finish(c, AffineMonoid::new(group, c.generators.clone())?)
        }
        ModelKind::D1 => finish(c, PlanarMonoid::new(PlanarVariant::D1)),
        ModelKind::D2 => finish(c, PlanarMonoid::new(PlanarVariant::D2)),
        ModelKind::Zxq => {
            let mut m = PolyModel::new(c.id.clone()).with_declared_atoms(c.declared_atoms.clone());
            if let Some(p) = c.probe_max_prime {
                m = m.with_probe_prime(p);
            }
            Box::new(m)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::ratio;

    #[test]
    fn minimal_dvr() {
        let c = parse_config("kind = dvr\nwindow.max_exponent = 3\n").unwrap();
        assert_eq!(c.kind, ModelKind::Dvr);
        assert_eq!(c.window.bounds.max_exponent, Some(3));
        assert_eq!(c.id, "dvr");
    }

    #[test]
    fn rational_generator() {
        let c = parse_config("kind = affine\ngroup = Z+Q\ngenerators = (1, -1/3), (0, 1)\n").unwrap();
        assert_eq!(c.generators[0].0[1], ratio(-1, 3));
        assert_eq!(c.generators.len(), 2);
    }

    #[test]
    fn rejects_unknown_kind() {
        assert_eq!(
            parse_config("kind = noetherian-magic").unwrap_err(),
            Error::UnknownModelKind("noetherian-magic".into())
        );
    }

    #[test]
    fn diagnostics_name_the_field() {
        match parse_config("kind = numerical\ngenerators = 2, (3, x)\n") {
            Err(Error::Config { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "generators");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config("kind = dvr\nwindow.max_exponent = 0"),
            Err(Error::InvalidBounds(_))
        ));
        assert!(matches!(parse_config("kind = dvr\nspeed = 3"), Err(Error::Config { .. })));
        assert!(matches!(parse_config("kind = numerical"), Err(Error::Config { .. })));
        assert!(matches!(parse_config("window.max_exponent = 3"), Err(Error::Config { .. })));
    }

    #[test]
    fn outputs_are_ordered() {
        let c = parse_config("kind = dvr\noutputs = oracle-check, graph, classify, graph").unwrap();
        assert_eq!(c.outputs, vec![Output::Graph, Output::Classify, Output::OracleCheck]);
    }

    #[test]
    fn builds_every_kind() {
        for k in ModelKind::ALL {
            let gens = match k {
                ModelKind::Numerical => "generators = 2, 3\n",
                ModelKind::Affine => "generators = (1, 0), (0, 1)\n",
                _ => "",
            };
            let c = parse_config(&format!("kind = {}\n{gens}", k.tag())).unwrap();
            assert_eq!(build_model(&c).unwrap().kind(), k);
        }
    }
}
