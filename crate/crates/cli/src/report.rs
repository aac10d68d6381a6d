use serde::Serialize;
use serde_json::Value;
use shagraph::covers::{enumerate_covers, is_galois};
use shagraph::graph::classical_graph;
use shagraph::groups::build_group;
use shagraph::model::{self, ClosedFiberModel};
use shagraph::sha::{compute_sha, sha_count_burnside, witt_kernel};
use shagraph::{Error, GaugedGraph, Limits, Perm, ReductionGraph};

use crate::{Failure, Output};

pub fn to_value<T: Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn ok<T: Serialize>(report: &T, dot: Option<String>) -> Result<Output, Failure> {
    Ok(Output {
        json: to_value(report),
        dot,
        passed: true,
    })
}

pub fn print_error(e: &Error) {
    match e {
        Error::InvalidModel(diags) => {
            for d in diags.errors() {
                match &d.location {
                    Some(at) => eprintln!("error[{}]: {} (at {at})", d.code, d.message),
                    None => eprintln!("error[{}]: {}", d.code, d.message),
                }
            }
        }
        _ => eprintln!("error[{}]: {e}", e.code()),
    }
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    point: &'a str,
    component: &'a str,
    branch: usize,
}

fn edge_list(g: &ReductionGraph) -> Vec<EdgeJson<'_>> {
    g.edges
        .iter()
        .map(|e| EdgeJson {
            point: &g.point_vertices[e.point],
            component: &g.component_vertices[e.component],
            branch: e.branch,
        })
        .collect()
}

#[derive(Serialize)]
struct ClassicalJson {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
    rank: usize,
    homotopy_check: bool,
}

#[derive(Serialize)]
struct GraphReport<'a> {
    kind: &'static str,
    fingerprint: String,
    points: &'a [String],
    components: &'a [String],
    edges: Vec<EdgeJson<'a>>,
    vertex_count: usize,
    edge_count: usize,
    rank: usize,
    is_tree: bool,
    bipartite: bool,
    /// Present when every point is an ordinary double point.
    #[serde(skip_serializing_if = "Option::is_none")]
    classical: Option<ClassicalJson>,
}

pub fn graph(m: &ClosedFiberModel) -> Result<Output, Failure> {
    let g = ReductionGraph::from_model(m)?;
    let rank = g.cycle_rank()?;
    let classical = match classical_graph(m) {
        Ok((c, check)) => Some(ClassicalJson {
            rank: c.cycle_rank(),
            vertices: c.vertices,
            edges: c.edges.iter().map(|&(a, b)| [a, b]).collect(),
            homotopy_check: check,
        }),
        Err(Error::NotNodal(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let report = GraphReport {
        kind: "graph",
        fingerprint: g.fingerprint(),
        points: &g.point_vertices,
        components: &g.component_vertices,
        edges: edge_list(&g),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        rank,
        is_tree: rank == 0,
        bipartite: g.is_bipartite(),
        classical,
    };
    ok(&report, Some(g.to_dot()))
}

#[derive(Serialize)]
struct Generator<'a> {
    edge: usize,
    #[serde(flatten)]
    ends: EdgeJson<'a>,
}

#[derive(Serialize)]
struct Pi1Report<'a> {
    kind: &'static str,
    fingerprint: String,
    rank: usize,
    root: &'a str,
    tree_edges: &'a [usize],
    generators: Vec<Generator<'a>>,
}

pub fn pi1(m: &ClosedFiberModel) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let edges = edge_list(&gg.graph);
    let generators = gg
        .gauge
        .cotree_edges
        .iter()
        .map(|&e| {
            let EdgeJson {
                point,
                component,
                branch,
            } = edges[e];
            Generator {
                edge: e,
                ends: EdgeJson {
                    point,
                    component,
                    branch,
                },
            }
        })
        .collect();
    let report = Pi1Report {
        kind: "pi1",
        fingerprint: gg.fingerprint(),
        rank: gg.rank(),
        root: gg.graph.vertex_name(gg.gauge.root),
        tree_edges: &gg.gauge.tree_edges,
        generators,
    };
    ok(&report, Some(gg.graph.to_dot()))
}

#[derive(Serialize)]
struct CoverJson<'a> {
    degree: usize,
    /// One-line notation, 1-based, one permutation per generator.
    images: &'a [Perm],
    fingerprint: &'a str,
    connected: bool,
    /// Only decided for connected covers.
    #[serde(skip_serializing_if = "Option::is_none")]
    galois: Option<bool>,
}

#[derive(Serialize)]
struct CoversReport<'a> {
    kind: &'static str,
    graph_fingerprint: String,
    rank: usize,
    degree: usize,
    connected_only: bool,
    count: usize,
    covers: Vec<CoverJson<'a>>,
}

pub fn covers(
    m: &ClosedFiberModel,
    degree: usize,
    connected: bool,
    limits: &Limits,
) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let found = enumerate_covers(&gg, degree, connected, limits)?;
    let covers = found
        .iter()
        .map(|c| {
            let connected = c.is_connected();
            let galois = if connected {
                Some(is_galois(c)?.is_some())
            } else {
                None
            };
            Ok(CoverJson {
                degree: c.degree,
                images: &c.images,
                fingerprint: &c.fingerprint,
                connected,
                galois,
            })
        })
        .collect::<shagraph::Result<Vec<_>>>()?;
    let report = CoversReport {
        kind: "covers",
        graph_fingerprint: gg.fingerprint(),
        rank: gg.rank(),
        degree,
        connected_only: connected,
        count: covers.len(),
        covers,
    };
    ok(&report, None)
}

#[derive(Serialize)]
struct Criteria {
    trivial: bool,
}

#[derive(Serialize)]
struct ShaReport {
    kind: &'static str,
    graph_fingerprint: String,
    group_spec: String,
    group_order: usize,
    rank: usize,
    size: usize,
    /// Element indices into the group, one tuple per class.
    representatives: Vec<Vec<usize>>,
    representative_labels: Vec<Vec<String>>,
    pointed_index: usize,
    /// Independent Burnside count.
    oracle_count: u64,
    abelian: bool,
    criteria: Criteria,
}

pub fn sha(m: &ClosedFiberModel, spec: &str, limits: &Limits) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let group = build_group(spec, limits)?;
    let set = compute_sha(&gg, &group, limits)?;
    let oracle = sha_count_burnside(&gg, &group)?;
    let labels = set
        .representatives
        .iter()
        .map(|t| t.iter().map(|&x| group.label(x).to_string()).collect())
        .collect();
    let report = ShaReport {
        kind: "sha",
        graph_fingerprint: set.fingerprint.clone(),
        group_spec: spec.to_string(),
        group_order: group.order(),
        rank: set.rank,
        size: set.size(),
        representative_labels: labels,
        pointed_index: shagraph::sha::ShaSet::POINTED_INDEX,
        oracle_count: oracle as u64,
        abelian: set.abelian,
        criteria: Criteria {
            trivial: set.is_trivial(),
        },
        representatives: set.representatives,
    };
    ok(&report, None)
}

#[derive(Serialize)]
struct WittReport {
    kind: &'static str,
    graph_fingerprint: String,
    rank: usize,
    order: u64,
    representatives: Vec<Vec<usize>>,
    note: &'static str,
}

pub fn witt(m: &ClosedFiberModel, limits: &Limits) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let w = witt_kernel(&gg, limits)?;
    let report = WittReport {
        kind: "witt-kernel",
        graph_fingerprint: gg.fingerprint(),
        rank: w.rank,
        order: w.order,
        representatives: w.representatives,
        note: "each nontrivial class is represented by a quadratic form of dimension two",
    };
    ok(&report, None)
}

#[derive(Serialize)]
struct BranchJson<'a> {
    component: &'a str,
    count: u32,
}

#[derive(Serialize)]
struct PointJson<'a> {
    name: &'a str,
    branches: Vec<BranchJson<'a>>,
}

#[derive(Serialize)]
struct ModelReport<'a> {
    kind: &'static str,
    operation: &'static str,
    target: &'a str,
    components: &'a [String],
    points: Vec<PointJson<'a>>,
    source: String,
    rank_before: usize,
    rank_after: usize,
}

fn model_output(
    before: &ClosedFiberModel,
    after: &ClosedFiberModel,
    operation: &'static str,
    target: &str,
) -> Result<Output, Failure> {
    let rank_before = ReductionGraph::from_model(before)?.cycle_rank()?;
    let g = ReductionGraph::from_model(after)?;
    let points = after
        .points()
        .iter()
        .map(|p| PointJson {
            name: &p.name,
            branches: p
                .branches
                .iter()
                .map(|b| BranchJson {
                    component: &after.components()[b.component],
                    count: b.count,
                })
                .collect(),
        })
        .collect();
    let report = ModelReport {
        kind: "model",
        operation,
        target,
        components: after.components(),
        points,
        source: after.to_dsl(),
        rank_before,
        rank_after: g.cycle_rank()?,
    };
    ok(&report, Some(g.to_dot()))
}

pub fn blowup(m: &ClosedFiberModel, point: &str) -> Result<Output, Failure> {
    model_output(m, &model::blowup(m, point)?, "blowup", point)
}

pub fn refine(m: &ClosedFiberModel, component: &str) -> Result<Output, Failure> {
    model_output(m, &model::refine(m, component)?, "refine", component)
}

/// Flattens a report into `path: value` lines, keys in sorted order.
pub fn render_text(v: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::Null => Some("null".into()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) if s.contains('\n') => None,
            Value::String(s) => Some(s.clone()),
            Value::Array(items) => {
                let parts: Option<Vec<String>> = items
                    .iter()
                    .map(|x| match x {
                        Value::Array(_) | Value::Object(_) => None,
                        other => scalar(other),
                    })
                    .collect();
                parts.map(|p| format!("[{}]", p.join(", ")))
            }
            Value::Object(_) => None,
        }
    }
    fn walk(path: &str, v: &Value, out: &mut String) {
        if let Some(s) = scalar(v) {
            out.push_str(&format!("{path}: {s}\n"));
            return;
        }
        match v {
            Value::String(s) => {
                out.push_str(&format!("{path}:\n"));
                for line in s.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            Value::Array(items) => {
                if items.is_empty() {
                    out.push_str(&format!("{path}: []\n"));
                }
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{path}[{i}]"), x, out);
                }
            }
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if path.is_empty() {
                        k.clone()
                    } else {
                        format!("{path}.{k}")
                    };
                    walk(&p, x, out);
                }
            }
            _ => unreachable!("scalars handled above"),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
