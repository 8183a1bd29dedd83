//! JSON forms of instances and allocations.
//!
//! Instance: `{"agents": [..], "objects": [..], "valuations": [[..], ..]}`
//! where each value is a JSON integer, a decimal, or a `"p/q"` string.
//! Allocation: `{"shares": [[..]], "utilities": [..], "num_sharings": k,
//! "num_shared_objects": k}` with every number written as an exact string.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fairness::{sharing_stats, utilities};
use crate::graph::WeightCertificate;
use crate::model::{Allocation, Instance};
use crate::rational::{self, Rational};
use crate::solver::SolveResult;

#[derive(Deserialize)]
struct InstanceFile {
    agents: Vec<String>,
    objects: Vec<String>,
    valuations: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
struct AllocationFile {
    shares: Vec<Vec<Value>>,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Json(e.to_string())
}

/// An exact number from a JSON integer, decimal, or numeric string.
pub fn parse_number(value: &Value) -> Result<Rational> {
    match value {
        // Number text is kept verbatim, so decimals convert exactly.
        Value::Number(n) => rational::parse(&n.to_string()),
        Value::String(s) => rational::parse(s),
        other => Err(Error::ParseNumber(other.to_string())),
    }
}

fn parse_matrix(rows: &[Vec<Value>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .map(|row| row.iter().map(parse_number).collect())
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(json_err)?;
    Instance::new(file.agents, file.objects, parse_matrix(&file.valuations)?)
}

pub fn parse_allocation(text: &str, inst: &Instance) -> Result<Allocation> {
    let file: AllocationFile = serde_json::from_str(text).map_err(json_err)?;
    Allocation::for_instance(inst, parse_matrix(&file.shares)?)
}

fn exact(value: &Rational) -> Value {
    Value::String(rational::format(value))
}

fn exact_row(row: &[Rational]) -> Value {
    Value::Array(row.iter().map(exact).collect())
}

fn approx_row(row: &[Rational]) -> Value {
    json!(row.iter().map(rational::approx).collect::<Vec<f64>>())
}

pub fn instance_json(inst: &Instance) -> Value {
    json!({
        "agents": inst.agent_labels(),
        "objects": inst.object_labels(),
        "valuations": inst.values().iter().map(|r| exact_row(r)).collect::<Vec<_>>(),
    })
}

/// The allocation schema; with `decimal`, an extra `"approximate"` object
/// carries lossy floating-point copies of the shares and utilities.
pub fn allocation_json(inst: &Instance, alloc: &Allocation, decimal: bool) -> Result<Value> {
    let utils = utilities(inst, alloc)?;
    let stats = sharing_stats(inst, alloc);
    let mut out = Map::new();
    out.insert(
        "shares".into(),
        Value::Array(alloc.shares().iter().map(|r| exact_row(r)).collect()),
    );
    out.insert("utilities".into(), exact_row(&utils));
    out.insert("num_sharings".into(), json!(stats.num_sharings));
    out.insert("num_shared_objects".into(), json!(stats.num_shared_objects));
    if decimal {
        out.insert(
            "approximate".into(),
            json!({
                "shares": alloc.shares().iter().map(|r| approx_row(r)).collect::<Vec<_>>(),
                "utilities": approx_row(&utils),
            }),
        );
    }
    Ok(Value::Object(out))
}

pub fn certificate_json(cert: &WeightCertificate) -> Value {
    exact_row(&cert.lambda)
}

/// Allocation schema plus `"certificate"` and `"graphs_examined"`.
pub fn solve_result_json(inst: &Instance, result: &SolveResult, decimal: bool) -> Result<Value> {
    let mut value = allocation_json(inst, &result.allocation, decimal)?;
    let obj = value.as_object_mut().expect("allocation JSON is an object");
    obj.insert("certificate".into(), certificate_json(&result.certificate));
    obj.insert("graphs_examined".into(), json!(result.graphs_examined));
    Ok(value)
}

/// Pretty JSON text with a trailing newline.
pub fn to_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}
