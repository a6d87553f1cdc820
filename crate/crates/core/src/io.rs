//! External file formats.
//!
//! * Natural parameters: JSON object from subset string (`"1"`, `"1,2"`) to
//!   value, in mask order; the empty set never appears.
//! * Cell probabilities: `{"k": k, "probs": [...]}` in mask order.
//! * Models: `{"k", "p", "coef": {subset: [c0, c1, ...]}, "converged",
//!   "iterations", "final_nll"}`.
//! * Ising Θ: `k × k` nested array.
//! * Graphs: JSON `{"nodes", "edges", "cliques"}` and a DOT projection.
//! * Paths and parameter counts: CSV.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distribution::{GeneralParams, NaturalParams};
use crate::error::{MvbError, Result};
use crate::glm::MvbGlmModel;
use crate::ising::{IsingParams, ParameterCounts};
use crate::lattice::{OutcomeVector, SubsetIndex};
use crate::scalar::Scalar;
use crate::sparse::{Graph, PathResult};

fn parse_err(e: impl std::fmt::Display) -> MvbError {
    MvbError::Parse(e.to_string())
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

struct SubsetMap<'a, V>(Vec<(String, &'a V)>);

impl<V: Serialize> Serialize for SubsetMap<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (key, v) in &self.0 {
            map.serialize_entry(key, v)?;
        }
        map.end()
    }
}

/// Reads subset keys, inferring `k` from the largest node index unless
/// `k` is given.
fn parse_subset_keys(keys: &[&String], k: Option<usize>) -> Result<(usize, Vec<SubsetIndex>)> {
    let mut max_node = 0;
    let mut lists = Vec::with_capacity(keys.len());
    for key in keys {
        let nodes = key
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| MvbError::InvalidSubset(format!("bad subset key {key:?}")))?;
        max_node = max_node.max(nodes.iter().copied().max().unwrap_or(0));
        lists.push(key.as_str());
    }
    let k = k.unwrap_or(max_node);
    let subsets = lists
        .into_iter()
        .map(|s| SubsetIndex::parse(s, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((k, subsets))
}

pub fn natural_to_json<T: Scalar>(f: &NaturalParams<T>) -> String {
    let values: Vec<Value> = f.entries().map(|(_, v)| float_value(v.as_f64())).collect();
    let entries = f
        .entries()
        .zip(&values)
        .map(|((t, _), v)| (t.to_string(), v))
        .collect();
    let mut out = serde_json::to_string_pretty(&SubsetMap(entries)).expect("serializable");
    out.push('\n');
    out
}

fn natural_from_map<T: Scalar>(map: &serde_json::Map<String, Value>) -> Result<NaturalParams<T>> {
    if map.is_empty() {
        return Err(MvbError::Parse("natural parameter object is empty".into()));
    }
    let keys: Vec<&String> = map.keys().collect();
    let (k, subsets) = parse_subset_keys(&keys, None)?;
    let mut f = NaturalParams::zeros(k)?;
    for (tau, key) in subsets.into_iter().zip(keys) {
        let v = map[key]
            .as_f64()
            .ok_or_else(|| MvbError::Parse(format!("value for {key:?} is not a number")))?;
        f.set(tau, T::lit(v))?;
    }
    Ok(f)
}

pub fn natural_from_json<T: Scalar>(text: &str) -> Result<NaturalParams<T>> {
    let map: serde_json::Map<String, Value> = serde_json::from_str(text).map_err(parse_err)?;
    natural_from_map(&map)
}

#[derive(Serialize, Deserialize)]
struct GeneralDoc {
    k: usize,
    probs: Vec<f64>,
}

pub fn general_to_json<T: Scalar>(p: &GeneralParams<T>) -> String {
    let doc = GeneralDoc {
        k: p.k(),
        probs: p.probs().iter().map(|v| v.as_f64()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

pub fn general_from_json<T: Scalar>(text: &str) -> Result<GeneralParams<T>> {
    let doc: GeneralDoc = serde_json::from_str(text).map_err(parse_err)?;
    GeneralParams::new(doc.k, doc.probs.into_iter().map(T::lit).collect())
}

/// A distribution file in either parameterization.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamFile<T> {
    General(GeneralParams<T>),
    Natural(NaturalParams<T>),
}

/// Detects the parameterization: objects with a `"probs"` field are cell
/// probabilities, anything else is read as natural parameters.
pub fn params_from_json<T: Scalar>(text: &str) -> Result<ParamFile<T>> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let map = value
        .as_object()
        .ok_or_else(|| MvbError::Parse("parameter file must be a JSON object".into()))?;
    if map.contains_key("probs") {
        general_from_json(text).map(ParamFile::General)
    } else {
        natural_from_map(map).map(ParamFile::Natural)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    k: usize,
    p: usize,
    coef: Value,
    converged: bool,
    iterations: usize,
    final_nll: Option<f64>,
}

pub fn model_to_json<T: Scalar>(model: &MvbGlmModel<T>) -> String {
    let blocks: Vec<Vec<Value>> = SubsetIndex::nonempty(model.k())
        .map(|t| model.coef(t).iter().map(|c| float_value(c.as_f64())).collect())
        .collect();
    let entries = SubsetIndex::nonempty(model.k())
        .zip(&blocks)
        .map(|(t, b)| (t.to_string(), b))
        .collect();
    let doc = ModelDoc {
        k: model.k(),
        p: model.p(),
        coef: serde_json::to_value(SubsetMap(entries)).expect("serializable"),
        converged: model.converged,
        iterations: model.iterations,
        final_nll: Some(model.final_nll.as_f64()).filter(|v| v.is_finite()),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

pub fn model_from_json<T: Scalar>(text: &str) -> Result<MvbGlmModel<T>> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(parse_err)?;
    let map = doc
        .coef
        .as_object()
        .ok_or_else(|| MvbError::Parse("\"coef\" must be an object".into()))?;
    let keys: Vec<&String> = map.keys().collect();
    let (_, subsets) = parse_subset_keys(&keys, Some(doc.k))?;
    let mut model = MvbGlmModel::zeros(doc.k, doc.p)?;
    for (tau, key) in subsets.into_iter().zip(keys) {
        let arr: Vec<f64> = serde_json::from_value(map[key].clone()).map_err(parse_err)?;
        let values: Vec<T> = arr.into_iter().map(T::lit).collect();
        model.set_coef(tau, &values)?;
    }
    if map.len() != (1 << doc.k) - 1 {
        return Err(MvbError::Parse(format!(
            "model lists {} coefficient vectors, expected {}",
            map.len(),
            (1 << doc.k) - 1
        )));
    }
    model.converged = doc.converged;
    model.iterations = doc.iterations;
    model.final_nll = doc.final_nll.map_or(T::nan(), T::lit);
    Ok(model)
}

pub fn ising_to_json<T: Scalar>(theta: &IsingParams<T>) -> String {
    let rows: Vec<Vec<f64>> = theta
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(Scalar::as_f64).collect())
        .collect();
    let mut out = serde_json::to_string(&rows).expect("serializable");
    out.push('\n');
    out
}

pub fn ising_from_json<T: Scalar>(text: &str) -> Result<IsingParams<T>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text).map_err(parse_err)?;
    let rows: Vec<Vec<T>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(T::lit).collect())
        .collect();
    IsingParams::from_rows(&rows)
}

#[derive(Serialize)]
struct GraphDoc<'a> {
    nodes: &'a [usize],
    edges: Vec<[usize; 2]>,
    cliques: &'a [Vec<usize>],
}

pub fn graph_to_json(graph: &Graph) -> String {
    let doc = GraphDoc {
        nodes: &graph.nodes,
        edges: graph.edges.iter().map(|&(a, b)| [a, b]).collect(),
        cliques: &graph.cliques,
    };
    let mut out = serde_json::to_string(&doc).expect("serializable");
    out.push('\n');
    out
}

/// Undirected DOT graph of the nodes and edges; cliques, which DOT cannot
/// draw, are listed as comments.
pub fn graph_to_dot(graph: &Graph) -> String {
    let mut out = String::from("graph mvb {\n");
    for j in &graph.nodes {
        let _ = writeln!(out, "  {j};");
    }
    for (a, b) in &graph.edges {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    for c in &graph.cliques {
        let list: Vec<String> = c.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  // clique: {}", list.join(","));
    }
    out.push_str("}\n");
    out
}

pub fn path_to_csv<T: Scalar>(path: &PathResult<T>) -> String {
    let mut out = String::from("lambda,nll,df,aic,bic\n");
    for s in &path.scores {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.lambda.as_f64(),
            s.nll.as_f64(),
            s.df,
            s.aic.as_f64(),
            s.bic.as_f64()
        );
    }
    out
}

pub fn counts_to_csv(rows: &[ParameterCounts]) -> String {
    let mut out = String::from("k,mvb,ising,gaussian\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.k, r.mvb, r.ising, r.gaussian);
    }
    out
}

#[derive(Serialize)]
struct CountsDoc {
    k: usize,
    mvb: u128,
    ising: u128,
    gaussian: u128,
}

pub fn counts_to_json(rows: &[ParameterCounts]) -> String {
    let docs: Vec<CountsDoc> = rows
        .iter()
        .map(|r| CountsDoc {
            k: r.k,
            mvb: r.mvb,
            ising: r.ising,
            gaussian: r.gaussian,
        })
        .collect();
    let mut out = serde_json::to_string(&docs).expect("serializable");
    out.push('\n');
    out
}

/// CSV with header `y1,…,yk` and one 0/1 row per outcome.
pub fn outcomes_to_csv(k: usize, outcomes: &[OutcomeVector]) -> String {
    let header: Vec<String> = (1..=k).map(|j| format!("y{j}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for y in outcomes {
        let _ = writeln!(out, "{y}");
    }
    out
}
