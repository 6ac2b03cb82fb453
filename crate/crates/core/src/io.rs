//! JSON instance files: window-constrained DAGs and single hydro units,
//! told apart by their required keys.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Arc, GraphError, VertexId, Window, WindowedDag};
use crate::huc::{HucError, HucInstance, HucSolution, InitialState, OperatingPoint};
use crate::scalar::{format_scalar, serde_bound, serde_scalar, Scalar};
use crate::solver::Solution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("at `{path}`: {msg}")]
    Field { path: String, msg: String },
    #[error("unrecognised instance: expected keys {{vertices, arcs, source, sink}} or {{T, points, prices, ...}}")]
    UnknownSchema,
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("at `{path}`: unknown vertex `{id}`")]
    UnknownVertex { path: String, id: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Huc(#[from] HucError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(untagged)]
enum IdRepr {
    Int(i64),
    Str(String),
}

impl IdRepr {
    fn label(&self) -> String {
        match self {
            IdRepr::Int(i) => i.to_string(),
            IdRepr::Str(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDto {
    id: IdRepr,
    #[serde(with = "serde_bound", default)]
    lo: Option<Scalar>,
    #[serde(with = "serde_bound", default)]
    hi: Option<Scalar>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDto {
    from: IdRepr,
    to: IdRepr,
    #[serde(with = "serde_scalar")]
    value: Scalar,
    #[serde(with = "serde_scalar")]
    resource: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DagDto {
    vertices: Vec<VertexDto>,
    arcs: Vec<ArcDto>,
    source: IdRepr,
    sink: IdRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct ScalarDto(#[serde(with = "serde_scalar")] Scalar);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDto {
    #[serde(rename = "D", with = "serde_scalar")]
    flow: Scalar,
    #[serde(rename = "P", with = "serde_scalar")]
    power: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialDto {
    i: usize,
    l: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HucDto {
    #[serde(rename = "T")]
    periods: usize,
    points: Vec<PointDto>,
    #[serde(with = "serde_scalar")]
    ramp_up: Scalar,
    #[serde(with = "serde_scalar")]
    ramp_down: Scalar,
    min_updown: usize,
    prices: Vec<ScalarDto>,
    #[serde(with = "serde_scalar")]
    phi1: Scalar,
    #[serde(with = "serde_scalar")]
    phi2: Scalar,
    win_lo: Vec<ScalarDto>,
    win_hi: Vec<ScalarDto>,
    #[serde(default)]
    initial: Option<InitialDto>,
}

#[derive(Debug, Clone)]
pub enum Instance {
    Dag(WindowedDag),
    Huc(HucInstance),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Dag,
    Huc,
}

fn syntax(e: serde_json::Error) -> InputError {
    InputError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T, InputError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        InputError::Field {
            path,
            msg: e.into_inner().to_string(),
        }
    })
}

/// Which schema a parsed document follows.
pub fn detect_schema(v: &Value) -> Option<Schema> {
    let obj = v.as_object()?;
    let has = |k: &str| obj.contains_key(k);
    if has("vertices") && has("arcs") {
        Some(Schema::Dag)
    } else if has("T") && has("points") {
        Some(Schema::Huc)
    } else {
        None
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let v: Value = serde_json::from_str(text).map_err(syntax)?;
    match detect_schema(&v) {
        Some(Schema::Dag) => dag_from_value(v).map(Instance::Dag),
        Some(Schema::Huc) => huc_from_value(v).map(Instance::Huc),
        None => Err(InputError::UnknownSchema),
    }
}

pub fn parse_dag(text: &str) -> Result<WindowedDag, InputError> {
    dag_from_value(serde_json::from_str(text).map_err(syntax)?)
}

pub fn parse_huc(text: &str) -> Result<HucInstance, InputError> {
    huc_from_value(serde_json::from_str(text).map_err(syntax)?)
}

fn dag_from_value(v: Value) -> Result<WindowedDag, InputError> {
    let dto: DagDto = typed(v)?;
    let mut index = HashMap::new();
    let mut labels = Vec::with_capacity(dto.vertices.len());
    let mut windows = Vec::with_capacity(dto.vertices.len());
    for vx in &dto.vertices {
        let label = vx.id.label();
        if index.insert(label.clone(), VertexId(labels.len())).is_some() {
            return Err(InputError::DuplicateId(label));
        }
        labels.push(label);
        windows.push(Window {
            lo: vx.lo.clone(),
            hi: vx.hi.clone(),
        });
    }
    let lookup = |id: &IdRepr, path: String| {
        index
            .get(&id.label())
            .copied()
            .ok_or_else(|| InputError::UnknownVertex { path, id: id.label() })
    };
    let mut arcs = Vec::with_capacity(dto.arcs.len());
    for (k, a) in dto.arcs.iter().enumerate() {
        arcs.push(Arc {
            from: lookup(&a.from, format!("arcs[{k}].from"))?,
            to: lookup(&a.to, format!("arcs[{k}].to"))?,
            value: a.value.clone(),
            resource: a.resource.clone(),
        });
    }
    let source = lookup(&dto.source, "source".into())?;
    let sink = lookup(&dto.sink, "sink".into())?;
    Ok(WindowedDag::new(windows, arcs, source, sink)?.with_labels(labels))
}

fn huc_from_value(v: Value) -> Result<HucInstance, InputError> {
    let dto: HucDto = typed(v)?;
    let unwrap = |xs: Vec<ScalarDto>| xs.into_iter().map(|x| x.0).collect();
    let inst = HucInstance {
        periods: dto.periods,
        points: dto
            .points
            .into_iter()
            .map(|p| OperatingPoint {
                flow: p.flow,
                power: p.power,
            })
            .collect(),
        ramp_up: dto.ramp_up,
        ramp_down: dto.ramp_down,
        min_updown: dto.min_updown,
        prices: unwrap(dto.prices),
        phi1: dto.phi1,
        phi2: dto.phi2,
        win_lo: unwrap(dto.win_lo),
        win_hi: unwrap(dto.win_hi),
        initial: dto.initial.map(|i| InitialState { i: i.i, l: i.l }).unwrap_or_default(),
    };
    inst.validate()?;
    Ok(inst)
}

fn id_of(label: &str) -> IdRepr {
    IdRepr::Str(label.to_string())
}

/// Instance file text for a DAG; bounds and data as `"num/den"` strings.
pub fn dag_to_json(dag: &WindowedDag) -> String {
    let dto = DagDto {
        vertices: (0..dag.vertex_count())
            .map(|v| {
                let w = dag.window(VertexId(v));
                VertexDto {
                    id: id_of(dag.label(VertexId(v))),
                    lo: w.lo.clone(),
                    hi: w.hi.clone(),
                }
            })
            .collect(),
        arcs: dag
            .arcs()
            .iter()
            .map(|a| ArcDto {
                from: id_of(dag.label(a.from)),
                to: id_of(dag.label(a.to)),
                value: a.value.clone(),
                resource: a.resource.clone(),
            })
            .collect(),
        source: id_of(dag.label(dag.source())),
        sink: id_of(dag.label(dag.sink())),
    };
    serde_json::to_string_pretty(&dto).expect("serialisable") + "\n"
}

pub fn huc_to_json(inst: &HucInstance) -> String {
    let wrap = |xs: &[Scalar]| xs.iter().cloned().map(ScalarDto).collect();
    let dto = HucDto {
        periods: inst.periods,
        points: inst
            .points
            .iter()
            .map(|p| PointDto {
                flow: p.flow.clone(),
                power: p.power.clone(),
            })
            .collect(),
        ramp_up: inst.ramp_up.clone(),
        ramp_down: inst.ramp_down.clone(),
        min_updown: inst.min_updown,
        prices: wrap(&inst.prices),
        phi1: inst.phi1.clone(),
        phi2: inst.phi2.clone(),
        win_lo: wrap(&inst.win_lo),
        win_hi: wrap(&inst.win_hi),
        initial: Some(InitialDto {
            i: inst.initial.i,
            l: inst.initial.l,
        }),
    };
    serde_json::to_string_pretty(&dto).expect("serialisable") + "\n"
}

fn opt_scalar(q: Option<&Scalar>) -> Value {
    q.map_or(Value::Null, |q| Value::String(format_scalar(q)))
}

/// Machine-readable result of a DAG solve.
pub fn solution_json(dag: &WindowedDag, sol: &Solution, algo: &str) -> Value {
    json!({
        "algo": algo,
        "status": sol.status.as_str(),
        "value": opt_scalar(sol.value()),
        "path": sol.path.as_ref().map(|p| p.vertices.iter().map(|&v| dag.label(v)).collect::<Vec<_>>()),
        "resource": opt_scalar(sol.path.as_ref().map(|p| &p.resource)),
        "delta": opt_scalar(sol.delta.as_ref()),
        "p1_iters": sol.phase1_iterations(),
        "p2_iters": sol.stats.phase2_iterations,
        "labels_created": sol.stats.labels_created,
        "labels_pruned_bound": sol.stats.labels_pruned_bound,
        "labels_pruned_dom": sol.stats.labels_pruned_dominance,
        "labels_pruned_ub": sol.stats.labels_pruned_ub,
    })
}

/// `{"schedule", "revenue", "volumes"}` for a hydro solve.
pub fn schedule_json(sol: &HucSolution) -> Value {
    json!({
        "schedule": sol.schedule,
        "revenue": format_scalar(&sol.revenue),
        "volumes": sol.volumes.iter().map(format_scalar).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_dag, example_huc, EXAMPLE_DAG_JSON, EXAMPLE_HUC_JSON};
    use crate::scalar::int;

    #[test]
    fn example_files_parse_to_fixtures() {
        let Instance::Dag(dag) = parse_instance(EXAMPLE_DAG_JSON).unwrap() else { panic!("dag expected") };
        let fixture = example_dag();
        assert_eq!(dag.arcs(), fixture.arcs());
        assert_eq!(dag.windows(), fixture.windows());
        assert_eq!(dag.labels(), fixture.labels());
        let Instance::Huc(huc) = parse_instance(EXAMPLE_HUC_JSON).unwrap() else { panic!("huc expected") };
        assert_eq!(huc, example_huc());
    }

    #[test]
    fn round_trips() {
        let dag = example_dag();
        let back = parse_dag(&dag_to_json(&dag)).unwrap();
        assert_eq!(back.arcs(), dag.arcs());
        assert_eq!(back.windows(), dag.windows());
        let huc = example_huc();
        assert_eq!(parse_huc(&huc_to_json(&huc)).unwrap(), huc);
    }

    #[test]
    fn integer_ids_and_infinite_bounds() {
        let text = r#"{"vertices":[{"id":0,"lo":"0","hi":"inf"},{"id":1,"lo":null,"hi":"7/2"}],
            "arcs":[{"from":0,"to":1,"value":"1.5","resource":3}],"source":0,"sink":1}"#;
        let dag = parse_dag(text).unwrap();
        assert_eq!(dag.window(VertexId(0)), &Window::at_least(int(0)));
        assert_eq!(dag.arcs()[0].value, crate::scalar::ratio(3, 2));
        assert_eq!(dag.window(VertexId(1)).hi, Some(crate::scalar::ratio(7, 2)));
    }

    #[test]
    fn diagnostics_carry_paths_and_positions() {
        let bad_value = EXAMPLE_DAG_JSON.replacen("\"value\": 13", "\"value\": \"x\"", 1);
        match parse_instance(&bad_value).unwrap_err() {
            InputError::Field { path, .. } => assert_eq!(path, "arcs[3].value"),
            other => panic!("{other:?}"),
        }
        match parse_instance("{\n  \"vertices\": [,]\n}").unwrap_err() {
            InputError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_instance("{\"foo\": 1}").unwrap_err(), InputError::UnknownSchema);
        let unknown = EXAMPLE_DAG_JSON.replacen("\"to\": \"1\"", "\"to\": \"9\"", 1);
        assert!(matches!(parse_instance(&unknown).unwrap_err(), InputError::UnknownVertex { .. }));
        let huc = EXAMPLE_HUC_JSON.replace("\"T\": 5", "\"T\": 4");
        assert!(matches!(parse_instance(&huc).unwrap_err(), InputError::Huc(_)));
    }
}
