//! JSON formats for graphs and certificates. Rationals are written as
//! `"p/q"` strings; plain JSON numbers are accepted on input.
//!
//! - graph `{"n": int, "edges": [[u, v], ...], "measure": [w, ...]?}`
//! - separator `{"K": int, "T": [ids]}`
//! - distribution `{"K": int, "atoms": [{"T": [ids], "p": q}, ...]}`
//! - partition `{"K": int, "support": [{"A": [ids], "phi": q}, ...]}`
//! - reiter `{"R": int, "p": [row, ...]}`, each row dense `[q, ...]` or
//!   sparse `[[z, q], ...]`
//! - weights `{"W": [q, ...]}`

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::certificates::{FractionalKPartition, KSeparator, ReiterFamily, SeparatorDistribution, WeightFunction};
use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measure::VertexMeasure;
use crate::rational::{self, Rational};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_ids(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of vertex ids")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

fn as_rationals(v: &Value, what: &str) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of numbers")))?
        .iter()
        .map(rational::from_json)
        .collect()
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(rational::format(r))).collect())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn graph_from_json(v: &Value) -> Result<(BoundedDegreeGraph, Option<VertexMeasure>)> {
    let obj = as_object(v, "graph")?;
    let n = as_usize(field(obj, "n")?, "n")?;
    let edges = field(obj, "edges")?
        .as_array()
        .ok_or_else(|| parse_err("edges must be an array"))?
        .iter()
        .map(|e| match as_ids(e, "edge")?.as_slice() {
            [u, v] => Ok((*u, *v)),
            _ => Err(parse_err("each edge must have two endpoints")),
        })
        .collect::<Result<Vec<_>>>()?;
    let g = BoundedDegreeGraph::build(n, edges)?;
    let mu = match obj.get("measure") {
        None | Some(Value::Null) => None,
        Some(m) => {
            let w = as_rationals(m, "measure")?;
            if w.len() != n {
                return Err(Error::InvalidMeasure(format!("{} weights for {n} vertices", w.len())));
            }
            Some(VertexMeasure::new(w)?)
        }
    };
    Ok((g, mu))
}

pub fn graph_to_json(g: &BoundedDegreeGraph, mu: Option<&VertexMeasure>) -> Value {
    let mut obj = json!({
        "n": g.n(),
        "edges": g.edges().map(|(u, v)| json!([u, v])).collect::<Vec<_>>(),
    });
    if let Some(mu) = mu {
        obj["measure"] = rationals_json(mu.weights());
    }
    obj
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Separator(KSeparator),
    Distribution(SeparatorDistribution),
    Partition(FractionalKPartition),
    Reiter(ReiterFamily),
    Weights(WeightFunction),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Separator(_) => "separator",
            Certificate::Distribution(_) => "distribution",
            Certificate::Partition(_) => "partition",
            Certificate::Reiter(_) => "reiter",
            Certificate::Weights(_) => "weights",
        }
    }
}

/// Recognizes the certificate kind from its keys. Partitions are validated
/// against `g` as they are read.
pub fn certificate_from_json(g: &BoundedDegreeGraph, v: &Value) -> Result<Certificate> {
    let obj = as_object(v, "certificate")?;
    if obj.contains_key("atoms") {
        let k = as_usize(field(obj, "K")?, "K")?;
        let atoms = field(obj, "atoms")?
            .as_array()
            .ok_or_else(|| parse_err("atoms must be an array"))?
            .iter()
            .map(|a| {
                let a = as_object(a, "atom")?;
                Ok((as_ids(field(a, "T")?, "T")?, rational::from_json(field(a, "p")?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Certificate::Distribution(SeparatorDistribution::new(k, atoms)?));
    }
    if obj.contains_key("support") {
        let k = as_usize(field(obj, "K")?, "K")?;
        let pieces = field(obj, "support")?
            .as_array()
            .ok_or_else(|| parse_err("support must be an array"))?
            .iter()
            .map(|a| {
                let a = as_object(a, "piece")?;
                Ok((as_ids(field(a, "A")?, "A")?, rational::from_json(field(a, "phi")?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Certificate::Partition(FractionalKPartition::new(g, k, pieces)?));
    }
    if obj.contains_key("T") {
        let k = as_usize(field(obj, "K")?, "K")?;
        let t = as_ids(field(obj, "T")?, "T")?;
        for &x in &t {
            g.check_vertex(x)?;
        }
        return Ok(Certificate::Separator(KSeparator::new(k, t)));
    }
    if obj.contains_key("p") {
        let r = as_usize(field(obj, "R")?, "R")?;
        let rows = field(obj, "p")?
            .as_array()
            .ok_or_else(|| parse_err("p must be an array of rows"))?
            .iter()
            .map(reiter_row)
            .collect::<Result<Vec<_>>>()?;
        return Ok(Certificate::Reiter(ReiterFamily::new(r, rows)));
    }
    if obj.contains_key("W") {
        return Ok(Certificate::Weights(WeightFunction::new(as_rationals(field(obj, "W")?, "W")?)?));
    }
    Err(parse_err("unrecognized certificate: expected one of T, atoms, support, p, W"))
}

fn reiter_row(v: &Value) -> Result<BTreeMap<usize, Rational>> {
    let items = v.as_array().ok_or_else(|| parse_err("Reiter row must be an array"))?;
    let sparse = items.first().is_some_and(Value::is_array);
    let mut row = BTreeMap::new();
    if sparse {
        for pair in items {
            match pair.as_array().map(Vec::as_slice) {
                Some([z, q]) => {
                    let z = as_usize(z, "row index")?;
                    *row.entry(z).or_insert_with(|| rational::int(0)) += rational::from_json(q)?;
                }
                _ => return Err(parse_err("sparse row entries must be [index, value] pairs")),
            }
        }
    } else {
        for (z, q) in items.iter().enumerate() {
            row.insert(z, rational::from_json(q)?);
        }
    }
    Ok(row)
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    match c {
        Certificate::Separator(s) => json!({"K": s.k(), "T": s.removed()}),
        Certificate::Distribution(d) => json!({
            "K": d.k(),
            "atoms": d.atoms().iter().map(|(t, p)| json!({"T": t.removed(), "p": rational::format(p)})).collect::<Vec<_>>(),
        }),
        Certificate::Partition(p) => json!({
            "K": p.k(),
            "support": p.support().iter().map(|(a, w)| json!({"A": a.vertices(), "phi": rational::format(w)})).collect::<Vec<_>>(),
        }),
        Certificate::Reiter(f) => json!({
            "R": f.radius(),
            "p": f.rows().iter().map(|row| {
                row.iter().map(|(z, q)| json!([z, rational::format(q)])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        }),
        Certificate::Weights(w) => json!({"W": rationals_json(w.values())}),
    }
}
