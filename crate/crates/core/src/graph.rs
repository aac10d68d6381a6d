//! Reduction graphs and their free fundamental groups.
//!
//! The reduction graph has one vertex per marked point, one vertex per
//! component and one edge per branch. Every edge is oriented from its point
//! vertex (left) to its component vertex (right). A breadth-first spanning
//! tree fixes a gauge; the edges outside it freely generate the fundamental
//! group.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{self, ClosedFiberModel};

/// An oriented edge: a branch at `point` lying on `component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Index into the point vertices.
    pub point: usize,
    /// Index into the component vertices.
    pub component: usize,
    /// Position among the parallel edges joining the same pair.
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionGraph {
    pub point_vertices: Vec<String>,
    pub component_vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl ReductionGraph {
    /// Builds the reduction graph of a valid model. Vertices follow
    /// declaration order; edges follow point order, then branch listing
    /// order, then branch index.
    pub fn from_model(model: &ClosedFiberModel) -> Result<Self> {
        model::ensure_valid(model)?;
        let mut edges = Vec::new();
        for (p, point) in model.points().iter().enumerate() {
            for b in &point.branches {
                for k in 0..b.count as usize {
                    edges.push(Edge {
                        point: p,
                        component: b.component,
                        branch: k,
                    });
                }
            }
        }
        Ok(ReductionGraph {
            point_vertices: model.points().iter().map(|p| p.name.clone()).collect(),
            component_vertices: model.components().to_vec(),
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.point_vertices.len() + self.component_vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Flat vertex index of a component vertex; point vertices come first.
    pub fn component_vertex(&self, c: usize) -> usize {
        self.point_vertices.len() + c
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        let np = self.point_vertices.len();
        if v < np {
            &self.point_vertices[v]
        } else {
            &self.component_vertices[v - np]
        }
    }

    pub fn is_point_vertex(&self, v: usize) -> bool {
        v < self.point_vertices.len()
    }

    /// `(left, right)` flat endpoints of an edge.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let edge = self.edges[e];
        (edge.point, self.component_vertex(edge.component))
    }

    /// `(vertex, edge)` incidence in global edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in 0..self.edges.len() {
            let (l, r) = self.endpoints(e);
            adj[l].push((r, e));
            adj[r].push((l, e));
        }
        adj
    }

    pub fn connected_pieces(&self) -> usize {
        let n = self.vertex_count();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut pieces = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            pieces += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        pieces
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.connected_pieces() == 1
    }

    /// Checks a proper 2-colouring exists with points on one side.
    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(true);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for &(w, _) in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// `|E| - |V| + 1`, the rank of the free fundamental group.
    pub fn cycle_rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edge_count() + 1 - self.vertex_count())
    }

    pub fn is_tree(&self) -> Result<bool> {
        Ok(self.cycle_rank()? == 0)
    }

    /// Hex digest of the vertex counts and edge list.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.point_vertices.len() as u64).to_le_bytes());
        h.update((self.component_vertices.len() as u64).to_le_bytes());
        for e in &self.edges {
            for x in [e.point, e.component, e.branch] {
                h.update((x as u64).to_le_bytes());
            }
        }
        h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Graphviz rendering; points are circles, components are boxes.
    pub fn to_dot(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut out = String::from("graph reduction {\n");
        for p in &self.point_vertices {
            let _ = writeln!(out, "  {} [shape=circle];", quote(p));
        }
        for c in &self.component_vertices {
            let _ = writeln!(out, "  {} [shape=box];", quote(c));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"{}\"];",
                quote(&self.point_vertices[e.point]),
                quote(&self.component_vertices[e.component]),
                e.branch
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeData {
    /// Flat index of the root vertex.
    pub root: usize,
    /// Spanning tree edges in discovery order.
    pub tree_edges: Vec<usize>,
    /// Edges outside the tree in global edge order; one free generator each.
    pub cotree_edges: Vec<usize>,
    /// Vertices in breadth-first order.
    pub order: Vec<usize>,
    /// `(tree edge, parent vertex)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
}

/// Breadth-first spanning tree rooted at the first point vertex.
pub fn spanning_gauge(graph: &ReductionGraph) -> Result<GaugeData> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = graph.vertex_count();
    let adj = graph.adjacency();
    let root = 0;
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; graph.edge_count()];
    let mut tree_edges = Vec::new();
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((e, v));
                in_tree[e] = true;
                tree_edges.push(e);
                order.push(w);
            }
        }
    }
    let cotree_edges = (0..graph.edge_count()).filter(|&e| !in_tree[e]).collect();
    Ok(GaugeData {
        root,
        tree_edges,
        cotree_edges,
        order,
        parent,
    })
}

/// A connected reduction graph together with its gauge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugedGraph {
    pub graph: ReductionGraph,
    pub gauge: GaugeData,
}

impl GaugedGraph {
    pub fn new(graph: ReductionGraph) -> Result<Self> {
        let gauge = spanning_gauge(&graph)?;
        Ok(GaugedGraph { graph, gauge })
    }

    pub fn from_model(model: &ClosedFiberModel) -> Result<Self> {
        Self::new(ReductionGraph::from_model(model)?)
    }

    /// The reduction graph of [`ClosedFiberModel::bouquet`], of rank `r`.
    pub fn with_rank(r: usize) -> Self {
        Self::from_model(&ClosedFiberModel::bouquet(r)).expect("bouquet models are valid")
    }

    pub fn rank(&self) -> usize {
        self.gauge.cotree_edges.len()
    }

    /// Fingerprint of the edge list and gauge choice.
    pub fn fingerprint(&self) -> String {
        format!("{}-r{}", self.graph.fingerprint(), self.rank())
    }
}

/// The classical dual graph of a fiber with only ordinary double points:
/// components as vertices and marked points as edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalGraph {
    pub vertices: Vec<String>,
    /// Component index pairs; equal entries are loops.
    pub edges: Vec<(usize, usize)>,
}

impl ClassicalGraph {
    /// `|E| - |V| + (number of connected pieces)`.
    pub fn cycle_rank(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut pieces = n;
        for &(a, b) in &self.edges {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                pieces -= 1;
            }
        }
        self.edges.len() + pieces - n
    }
}

/// Builds the classical graph and checks it has the same cycle rank as the
/// reduction graph of the same model.
pub fn classical_graph(model: &ClosedFiberModel) -> Result<(ClassicalGraph, bool)> {
    let mut edges = Vec::with_capacity(model.points().len());
    for p in model.points() {
        if p.total_branches() != 2 {
            return Err(Error::NotNodal(p.name.clone()));
        }
        let ends: Vec<usize> = p
            .branches
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.component, b.count as usize))
            .collect();
        edges.push((ends[0], ends[1]));
    }
    let classical = ClassicalGraph {
        vertices: model.components().to_vec(),
        edges,
    };
    let subdivided = ReductionGraph::from_model(model)?.cycle_rank()?;
    let check = classical.cycle_rank() == subdivided;
    Ok((classical, check))
}
