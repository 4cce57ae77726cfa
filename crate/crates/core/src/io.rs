//! JSON formats.
//!
//! Hypergraph: `{"n": 7, "k": 3, "edges": [[0,1,2], ...]}` with 0-based
//! sorted vertices, edges written in colex order.
//! Slice function: `{"n": 7, "k": 3, "values": ["1/2", ...]}` in colex order
//! of the k-subsets, every value as `"p/q"`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::combinat::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, SliceFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphJson {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceFunctionJson {
    pub n: usize,
    pub k: usize,
    pub values: Vec<String>,
}

impl From<&Hypergraph> for HypergraphJson {
    fn from(g: &Hypergraph) -> Self {
        HypergraphJson {
            n: g.n(),
            k: g.k(),
            edges: g.edges().into_iter().map(|e| e.into_vec()).collect(),
        }
    }
}

impl TryFrom<HypergraphJson> for Hypergraph {
    type Error = Error;

    fn try_from(j: HypergraphJson) -> Result<Self> {
        Hypergraph::from_edges(j.n, j.k, j.edges)
    }
}

impl From<&SliceFunction> for SliceFunctionJson {
    fn from(f: &SliceFunction) -> Self {
        SliceFunctionJson {
            n: f.n(),
            k: f.k(),
            values: f.values().iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<SliceFunctionJson> for SliceFunction {
    type Error = Error;

    fn try_from(j: SliceFunctionJson) -> Result<Self> {
        let values = j
            .values
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        SliceFunction::new(j.n, j.k, values)
    }
}

/// Either kind of input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Hypergraph(Hypergraph),
    Function(SliceFunction),
}

impl Input {
    /// Hypergraphs are read as their indicator.
    pub fn into_function(self) -> SliceFunction {
        match self {
            Input::Hypergraph(g) => g.indicator(),
            Input::Function(f) => f,
        }
    }

    pub fn into_hypergraph(self) -> Result<Hypergraph> {
        match self {
            Input::Hypergraph(g) => Ok(g),
            Input::Function(f) => f.to_hypergraph(),
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Detects the format by its `edges` or `values` key.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    match (obj.contains_key("edges"), obj.contains_key("values")) {
        (true, false) => {
            let j: HypergraphJson = serde_json::from_value(v).map_err(parse_err)?;
            Ok(Input::Hypergraph(j.try_into()?))
        }
        (false, true) => {
            let j: SliceFunctionJson = serde_json::from_value(v).map_err(parse_err)?;
            Ok(Input::Function(j.try_into()?))
        }
        _ => Err(Error::Parse(
            "expected exactly one of the keys \"edges\" or \"values\"".into(),
        )),
    }
}

pub fn hypergraph_to_json(g: &Hypergraph) -> String {
    serde_json::to_string(&HypergraphJson::from(g)).expect("plain data serializes")
}

pub fn function_to_json(f: &SliceFunction) -> String {
    serde_json::to_string(&SliceFunctionJson::from(f)).expect("plain data serializes")
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    parse_input(text)?.into_hypergraph()
}

pub fn parse_function(text: &str) -> Result<SliceFunction> {
    Ok(parse_input(text)?.into_function())
}
