//! JSON model files.
//!
//! ```json
//! {
//!   "nodes": ["L", "A", "Y"],
//!   "edges": [["L", "A"], ["L", "Y"], ["A", "Y"]],
//!   "mode": "npsem-ie",
//!   "domains": { "L": [0, 1], ... },
//!   "disturbances": {
//!     "independent": { "L": { "support": [0, 1], "pmf": ["1/2", "1/2"] }, ... }
//!   },
//!   "functions": {
//!     "A": [ { "parents": { "L": 0 }, "u": 0, "value": 0 }, ... ]
//!   }
//! }
//! ```
//!
//! A joint disturbance law is written as
//! `{"joint": {"supports": {"L": [0, 1], ...}, "pmf": [{"u": [0, 0, 1], "p": "1/4"}, ...]}}`
//! with `u` listing one support value per node in node order. Probabilities
//! are rational strings. [`to_json`] always emits the canonical layout, so
//! serializing a parsed canonical file reproduces it byte for byte.

use indexmap::IndexMap;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::scalar::{format_rational, parse_rational, Probability};
use crate::sem::{advance, find_value, DisturbanceLaw, DisturbanceModel, ModelMode, SemModel, StructFn, Value};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    domains: IndexMap<String, Vec<Value>>,
    disturbances: RawDisturbances,
    functions: IndexMap<String, Vec<RawRow>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawDisturbances {
    Independent(IndexMap<String, RawMarginal>),
    Joint(RawJoint),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarginal {
    support: Vec<Value>,
    pmf: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    supports: IndexMap<String, Vec<Value>>,
    pmf: Vec<RawJointRow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJointRow {
    u: Vec<Value>,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    parents: IndexMap<String, Value>,
    u: Value,
    value: Value,
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn per_node<'a, T>(map: &'a IndexMap<String, T>, dag: &Dag, what: &str) -> Result<Vec<&'a T>> {
    for key in map.keys() {
        dag.node(key).map_err(|_| fmt_err(format!("{what}: unknown node `{key}`")))?;
    }
    dag.labels()
        .iter()
        .map(|l| map.get(l).ok_or_else(|| fmt_err(format!("{what}: missing node `{l}`"))))
        .collect()
}

fn lookup(values: &[Value], v: &Value, what: impl Fn() -> String) -> Result<usize> {
    find_value(values, &v.to_string()).ok_or_else(|| fmt_err(format!("{}: value `{v}` out of range", what())))
}

/// Parses a model file into a model over any probability scalar.
pub fn from_json<P: Probability>(text: &str) -> Result<SemModel<P>> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
    let dag = Dag::new(raw.nodes.iter().cloned(), raw.edges.iter().map(|(t, h)| (t.as_str(), h.as_str())))?;
    let domains: Vec<Vec<Value>> = per_node(&raw.domains, &dag, "domains")?.into_iter().cloned().collect();

    let (disturbances, default_mode) = match &raw.disturbances {
        RawDisturbances::Independent(map) => {
            let marginals = per_node(map, &dag, "disturbances")?;
            let supports = marginals.iter().map(|m| m.support.clone()).collect();
            let pmfs = marginals
                .iter()
                .map(|m| m.pmf.iter().map(|p| Ok(P::from_rational(&parse_rational(p)?))).collect::<Result<Vec<P>>>())
                .collect::<Result<Vec<_>>>()?;
            (DisturbanceModel::independent(supports, pmfs)?, ModelMode::NpsemIe)
        }
        RawDisturbances::Joint(joint) => {
            let supports: Vec<Vec<Value>> = per_node(&joint.supports, &dag, "disturbance supports")?
                .into_iter()
                .cloned()
                .collect();
            let mut rows = Vec::with_capacity(joint.pmf.len());
            for (k, row) in joint.pmf.iter().enumerate() {
                if row.u.len() != supports.len() {
                    return Err(fmt_err(format!("joint pmf row {k}: expected {} values", supports.len())));
                }
                let tuple = row
                    .u
                    .iter()
                    .zip(&supports)
                    .enumerate()
                    .map(|(i, (v, s))| lookup(s, v, || format!("joint pmf row {k}, U_{}", dag.label(i))))
                    .collect::<Result<Vec<usize>>>()?;
                rows.push((tuple, P::from_rational(&parse_rational(&row.p)?)));
            }
            (DisturbanceModel::joint(supports, rows)?, ModelMode::FfrcistgCandidate)
        }
    };

    let mode = match raw.mode.as_deref() {
        None => default_mode,
        Some("npsem-ie") => ModelMode::NpsemIe,
        Some("ffrcistg-candidate") => ModelMode::FfrcistgCandidate,
        Some(other) => return Err(fmt_err(format!("unknown mode `{other}`"))),
    };

    let rows_per_node = per_node(&raw.functions, &dag, "functions")?;
    let mut functions = Vec::with_capacity(dag.len());
    for (v, rows) in rows_per_node.into_iter().enumerate() {
        let label = dag.label(v);
        let parents = dag.parent_ids(v).to_vec();
        let radices: Vec<usize> = parents.iter().map(|&p| domains[p].len()).collect();
        let u_support = &disturbances.supports()[v];
        let u_size = u_support.len();
        let total = radices.iter().product::<usize>() * u_size;
        let mut table: Vec<Option<usize>> = vec![None; total];
        for (k, row) in rows.iter().enumerate() {
            let ctx = || format!("function `{label}`, row {k}");
            if row.parents.len() != parents.len() {
                return Err(fmt_err(format!("{}: expected parents {:?}", ctx(), dag.set_labels(&parents.iter().copied().collect()))));
            }
            let mut idx = 0;
            for (&p, &r) in parents.iter().zip(&radices) {
                let val = row
                    .parents
                    .get(dag.label(p))
                    .ok_or_else(|| fmt_err(format!("{}: missing parent `{}`", ctx(), dag.label(p))))?;
                idx = idx * r + lookup(&domains[p], val, ctx)?;
            }
            idx = idx * u_size + lookup(u_support, &row.u, ctx)?;
            let out = lookup(&domains[v], &row.value, ctx)?;
            if table[idx].replace(out).is_some() {
                return Err(fmt_err(format!("{}: duplicate row", ctx())));
            }
        }
        let table = table
            .into_iter()
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| fmt_err(format!("function `{label}` does not cover every input")))?;
        functions.push(StructFn::from_table(parents, radices, u_size, table)?);
    }
    SemModel::new(dag, domains, functions, disturbances, mode)
}

fn rational_string<P: Probability>(p: &P) -> String {
    let r: BigRational = p.to_rational();
    format_rational(&r)
}

/// Serializes a model in the canonical layout.
pub fn to_json<P: Probability>(m: &SemModel<P>) -> String {
    let dag = m.dag();
    let labels = dag.labels();
    let domains = labels.iter().cloned().zip(m.domains().iter().cloned()).collect();
    let supports = m.disturbances().supports();
    let disturbances = match m.disturbances().law() {
        DisturbanceLaw::Independent(pmfs) => RawDisturbances::Independent(
            labels
                .iter()
                .zip(supports.iter().zip(pmfs))
                .map(|(l, (s, pmf))| {
                    (
                        l.clone(),
                        RawMarginal {
                            support: s.clone(),
                            pmf: pmf.iter().map(rational_string).collect(),
                        },
                    )
                })
                .collect(),
        ),
        DisturbanceLaw::Joint(rows) => RawDisturbances::Joint(RawJoint {
            supports: labels.iter().cloned().zip(supports.iter().cloned()).collect(),
            pmf: rows
                .iter()
                .map(|(t, p)| RawJointRow {
                    u: t.iter().zip(supports).map(|(&u, s)| s[u].clone()).collect(),
                    p: rational_string(p),
                })
                .collect(),
        }),
    };
    let functions = (0..dag.len())
        .map(|v| {
            let f = m.function(v);
            let mut pa = vec![0usize; f.parents().len()];
            let mut rows = Vec::with_capacity(f.table().len());
            loop {
                for u in 0..f.u_size() {
                    rows.push(RawRow {
                        parents: f
                            .parents()
                            .iter()
                            .zip(&pa)
                            .map(|(&p, &x)| (dag.label(p).to_string(), m.domains()[p][x].clone()))
                            .collect(),
                        u: supports[v][u].clone(),
                        value: m.domains()[v][f.lookup(&pa, u)].clone(),
                    });
                }
                if !advance(&mut pa, f.parent_radices()) {
                    break;
                }
            }
            (labels[v].clone(), rows)
        })
        .collect();
    let raw = RawModel {
        nodes: labels.to_vec(),
        edges: dag
            .edges()
            .iter()
            .map(|&(t, h)| (labels[t].clone(), labels[h].clone()))
            .collect(),
        mode: Some(m.mode().as_str().to_string()),
        domains,
        disturbances,
        functions,
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("model serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy;

    type Q = BigRational;

    #[test]
    fn round_trips_toy_models() {
        for m in [toy::toy_sem::<Q>(), toy::dependent_errors(), toy::correlated_errors(), toy::two_node_chain()] {
            let text = to_json(&m);
            let back: SemModel<Q> = from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn float_models_parse() {
        let m: SemModel<f64> = from_json(&to_json(&toy::toy_sem::<Q>())).unwrap();
        assert!(m.disturbances().marginal(1)[1].same(&0.3));
    }

    #[test]
    fn mode_defaults_follow_the_law() {
        let text = to_json(&toy::correlated_errors::<Q>()).replace("  \"mode\": \"ffrcistg-candidate\",\n", "");
        let m: SemModel<Q> = from_json(&text).unwrap();
        assert_eq!(m.mode(), ModelMode::FfrcistgCandidate);
        let forced = to_json(&toy::correlated_errors::<Q>()).replace("ffrcistg-candidate", "npsem-ie");
        assert!(from_json::<Q>(&forced).is_err());
    }

    #[test]
    fn rejects_incomplete_or_bad_tables() {
        let text = to_json(&toy::toy_sem::<Q>());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();

        let mut missing_row = v.clone();
        missing_row["functions"]["Y"].as_array_mut().unwrap().pop();
        assert!(from_json::<Q>(&missing_row.to_string()).is_err());

        let mut bad_value = v.clone();
        bad_value["functions"]["L"][0]["value"] = serde_json::json!(5);
        assert!(from_json::<Q>(&bad_value.to_string()).is_err());

        let mut bad_pmf = v.clone();
        bad_pmf["disturbances"]["independent"]["L"]["pmf"][0] = serde_json::json!("2/3");
        assert!(from_json::<Q>(&bad_pmf.to_string()).is_err());

        let mut bad_rational = v.clone();
        bad_rational["disturbances"]["independent"]["L"]["pmf"][0] = serde_json::json!("x");
        assert!(from_json::<Q>(&bad_rational.to_string()).is_err());

        let mut unknown_node = v;
        unknown_node["domains"]["Q"] = serde_json::json!([0]);
        assert!(from_json::<Q>(&unknown_node.to_string()).is_err());

        assert!(from_json::<Q>("{").is_err());
    }

    #[test]
    fn text_values_are_supported() {
        let text = to_json(&toy::toy_sem::<Q>())
            .replace("\"A\": 0", "\"A\": \"no\"")
            .replace("\"A\": 1", "\"A\": \"yes\"");
        // Domains of A still list integers, so the renamed parent values are out of range.
        assert!(from_json::<Q>(&text).is_err());
    }
}
