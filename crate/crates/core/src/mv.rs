//! A finite model of the Mayer–Vietoris coboundary.
//!
//! Each oriented edge `k = (l, r)` carries a copy of one ambient finite group
//! `G` and each vertex `v` a subgroup `H_v`. The vertex groups act on edge
//! tuples by `(g_k) ↦ (u_r⁻¹ g_k u_l)`. Two tuples have the same coboundary
//! image exactly when they share an orbit; the orbit of the all-identity
//! tuple consists of the tuples that factor as `g_k = u_r⁻¹ u_l`.
//!
//! With `H_v = G` everywhere the orbit space is the double-coset description
//! of the obstruction set and has the same size as [`crate::sha::compute_sha`].

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ReductionGraph;
use crate::groups::{FiniteGroup, Subgroup};
use crate::Limits;

#[derive(Debug, Clone)]
pub struct FactorizationSystem<'g> {
    group: &'g FiniteGroup,
    vertex_count: usize,
    /// `(left, right)` per edge.
    edges: Vec<(usize, usize)>,
    subgroups: Vec<Subgroup>,
    generators: Vec<Vec<usize>>,
    fingerprint: String,
}

/// One element of `G` per edge, in global edge order.
pub type EdgeTuple = Vec<usize>;

impl<'g> FactorizationSystem<'g> {
    /// Full vertex groups on a reduction graph, oriented point to component.
    pub fn constant(graph: &ReductionGraph, group: &'g FiniteGroup) -> Result<Self> {
        let whole = group.whole();
        Self::with_subgroups(graph, group, vec![whole; graph.vertex_count()])
    }

    pub fn with_subgroups(
        graph: &ReductionGraph,
        group: &'g FiniteGroup,
        subgroups: Vec<Subgroup>,
    ) -> Result<Self> {
        let edges = (0..graph.edge_count())
            .map(|e| graph.endpoints(e))
            .collect();
        Self::from_parts(
            graph.vertex_count(),
            edges,
            group,
            subgroups,
            graph.fingerprint(),
        )
    }

    /// A system on an arbitrary oriented multigraph. The graph must be
    /// connected and every subgroup is re-verified against `group`.
    pub fn from_parts(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        group: &'g FiniteGroup,
        subgroups: Vec<Subgroup>,
        fingerprint: String,
    ) -> Result<Self> {
        if subgroups.len() != vertex_count {
            return Err(Error::LengthMismatch {
                expected: vertex_count,
                found: subgroups.len(),
            });
        }
        for s in &subgroups {
            for &x in s.elements() {
                group.check_element(x)?;
            }
            let closed = s.contains(0)
                && s.elements()
                    .iter()
                    .all(|&a| s.elements().iter().all(|&b| s.contains(group.mul(a, b))));
            if !closed {
                return Err(Error::NotAGroup("vertex subgroup is not closed".into()));
            }
        }
        let sys = FactorizationSystem {
            group,
            vertex_count,
            generators: subgroups.iter().map(|s| s.generators(group)).collect(),
            edges,
            subgroups,
            fingerprint,
        };
        if !sys.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(sys)
    }

    fn is_connected(&self) -> bool {
        self.spanning_order().len() == self.vertex_count
    }

    /// Vertices in BFS order from vertex 0 with the edge that reached them.
    fn spanning_order(&self) -> Vec<(usize, Option<usize>)> {
        if self.vertex_count == 0 {
            return Vec::new();
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (k, &(l, r)) in self.edges.iter().enumerate() {
            adj[l].push(k);
            adj[r].push(k);
        }
        let mut seen = vec![false; self.vertex_count];
        seen[0] = true;
        let mut order = vec![(0, None)];
        let mut head = 0;
        while head < order.len() {
            let v = order[head].0;
            head += 1;
            for &k in &adj[v] {
                let (l, r) = self.edges[k];
                let w = if l == v { r } else { l };
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(k)));
                }
            }
        }
        order
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// The same system with edge `k` pointing the other way.
    pub fn reverse_edge(&self, k: usize) -> Self {
        let mut out = self.clone();
        let (l, r) = out.edges[k];
        out.edges[k] = (r, l);
        out
    }

    pub fn check_tuple(&self, t: &[usize]) -> Result<()> {
        if t.len() != self.edges.len() {
            return Err(Error::LengthMismatch {
                expected: self.edges.len(),
                found: t.len(),
            });
        }
        t.iter().try_for_each(|&x| self.group.check_element(x))
    }

    fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.group.order() + x)
    }

    fn decode(&self, mut idx: usize) -> EdgeTuple {
        let n = self.group.order();
        let mut t = vec![0; self.edges.len()];
        for slot in t.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        t
    }

    /// Acts by `u = s` at vertex `v` and the identity elsewhere.
    fn act(&self, t: &[usize], v: usize, s: usize) -> EdgeTuple {
        let g = self.group;
        let s_inv = g.inv(s);
        t.iter()
            .zip(&self.edges)
            .map(|(&x, &(l, r))| {
                let x = if l == v { g.mul(x, s) } else { x };
                if r == v {
                    g.mul(s_inv, x)
                } else {
                    x
                }
            })
            .collect()
    }

    fn moves(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(v, gens)| gens.iter().map(move |&s| (v, s)))
    }

    /// The orbit of one tuple, by breadth-first search over the vertex
    /// subgroup generators.
    pub fn orbit(&self, t: &[usize]) -> Result<HashSet<EdgeTuple>> {
        self.check_tuple(t)?;
        let mut seen: HashSet<EdgeTuple> = HashSet::from([t.to_vec()]);
        let mut queue = VecDeque::from([t.to_vec()]);
        while let Some(x) = queue.pop_front() {
            for (v, s) in self.moves() {
                let y = self.act(&x, v, s);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// Vertex elements `(u_v)` with `t_k = u_r⁻¹ t̃_k u_l` on every edge, if
    /// any. Fixes `u` at the root, propagates along a spanning tree and then
    /// checks the remaining edges.
    pub fn factorization_witness(
        &self,
        t: &[usize],
        t_tilde: &[usize],
    ) -> Result<Option<Vec<usize>>> {
        self.check_tuple(t)?;
        self.check_tuple(t_tilde)?;
        let g = self.group;
        let order = self.spanning_order();
        'root: for &u0 in self.subgroups[0].elements() {
            let mut u = vec![usize::MAX; self.vertex_count];
            u[0] = u0;
            for &(w, via) in &order[1..] {
                let k = via.expect("non-root vertices are reached by an edge");
                let (l, r) = self.edges[k];
                u[w] = if w == r {
                    g.mul(g.mul(t_tilde[k], u[l]), g.inv(t[k]))
                } else {
                    g.mul(g.mul(g.inv(t_tilde[k]), u[r]), t[k])
                };
                if !self.subgroups[w].contains(u[w]) {
                    continue 'root;
                }
            }
            let fits = self
                .edges
                .iter()
                .enumerate()
                .all(|(k, &(l, r))| t[k] == g.mul(g.mul(g.inv(u[r]), t_tilde[k]), u[l]));
            if fits {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }
}

/// Orbits of the vertex action on all edge tuples, numbered by least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Orbit number of every tuple, by tuple index.
    pub orbit_of: Vec<u32>,
    /// Least tuple index in each orbit.
    pub least: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.least.len()
    }

    /// The orbit of the all-identity tuple, which always has index 0.
    pub fn pointed_orbit_size(&self) -> usize {
        self.sizes[0]
    }
}

pub fn coboundary_orbits(sys: &FactorizationSystem, limits: &Limits) -> Result<OrbitPartition> {
    let total = limits.check_power(sys.group.order() as u64, sys.edges.len())? as usize;
    let moves: Vec<(usize, usize)> = sys.moves().collect();
    let mut orbit_of = vec![u32::MAX; total];
    let mut least = Vec::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for idx in 0..total {
        if orbit_of[idx] != u32::MAX {
            continue;
        }
        let id = least.len() as u32;
        least.push(idx);
        orbit_of[idx] = id;
        let mut size = 1;
        queue.push_back(idx);
        while let Some(x) = queue.pop_front() {
            let t = sys.decode(x);
            for &(v, s) in &moves {
                let y = sys.encode(&sys.act(&t, v, s));
                if orbit_of[y] == u32::MAX {
                    orbit_of[y] = id;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    Ok(OrbitPartition {
        orbit_of,
        least,
        sizes,
    })
}

/// Whether `t` lies in the orbit of the all-identity tuple.
pub fn factorizes(sys: &FactorizationSystem, t: &[usize]) -> Result<bool> {
    let identity = vec![0; sys.edge_count()];
    Ok(sys.factorization_witness(t, &identity)?.is_some())
}

/// Whether `t` and `t_tilde` have the same coboundary image.
pub fn same_fiber(sys: &FactorizationSystem, t: &[usize], t_tilde: &[usize]) -> Result<bool> {
    Ok(sys.factorization_witness(t, t_tilde)?.is_some())
}

/// Both sides of the bijectivity criterion for `Sha(G) → Sha(G/N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransFactorReport {
    pub orbit_counts: [usize; 2],
    /// Side (i): the induced map on orbit spaces is a bijection.
    pub bijective: bool,
    /// Two orbits over `G` with the same image, or an orbit over `G/N`
    /// that is not hit, given by least tuples.
    pub bijection_counterexample: Option<(EdgeTuple, EdgeTuple)>,
    /// Side (ii): tuples with equal image in `G/N` always share an orbit.
    pub fibers_factor: bool,
    pub fiber_counterexample: Option<(EdgeTuple, EdgeTuple)>,
    pub pairs_checked: u64,
}

impl TransFactorReport {
    pub fn agree(&self) -> bool {
        self.bijective == self.fibers_factor
    }
}

pub fn trans_factor_check(
    sys: &FactorizationSystem,
    normal: &Subgroup,
    limits: &Limits,
) -> Result<TransFactorReport> {
    if !normal.is_normal {
        return Err(Error::NotNormal);
    }
    let g = sys.group;
    let (quotient, projection) = g.quotient(normal)?;
    let q_subgroups = sys
        .subgroups
        .iter()
        .map(|h| {
            let images: Vec<usize> = h.elements().iter().map(|&x| projection[x]).collect();
            quotient.subgroup(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    let q_sys = FactorizationSystem::from_parts(
        sys.vertex_count,
        sys.edges.clone(),
        &quotient,
        q_subgroups,
        format!("{}/N", sys.fingerprint),
    )?;

    // side (i): compare the two orbit spaces through the projection
    let over_g = coboundary_orbits(sys, limits)?;
    let over_q = coboundary_orbits(&q_sys, limits)?;
    let project = |t: &[usize]| -> EdgeTuple { t.iter().map(|&x| projection[x]).collect() };
    let mut preimage: Vec<Option<usize>> = vec![None; over_q.orbit_count()];
    let mut bijection_counterexample = None;
    for (o, &idx) in over_g.least.iter().enumerate() {
        let image = over_q.orbit_of[q_sys.encode(&project(&sys.decode(idx)))] as usize;
        match preimage[image] {
            None => preimage[image] = Some(o),
            Some(first) if bijection_counterexample.is_none() => {
                bijection_counterexample = Some((sys.decode(over_g.least[first]), sys.decode(idx)));
            }
            Some(_) => {}
        }
    }
    if bijection_counterexample.is_none() {
        if let Some(missed) = preimage.iter().position(Option::is_none) {
            let lifted = q_sys.decode(over_q.least[missed]);
            bijection_counterexample = Some((Vec::new(), lifted));
        }
    }

    // side (ii): witnesses searched directly, never via the orbit tables;
    // sharing a fiber is an equivalence, so each member is paired with the first
    let total = over_g.orbit_of.len();
    let mut fibers: BTreeMap<EdgeTuple, Vec<usize>> = BTreeMap::new();
    for idx in 0..total {
        fibers
            .entry(project(&sys.decode(idx)))
            .or_default()
            .push(idx);
    }
    let mut fiber_counterexample = None;
    let mut pairs_checked = 0u64;
    'fibers: for members in fibers.values() {
        let first = sys.decode(members[0]);
        for &b in &members[1..] {
            pairs_checked += 1;
            let tb = sys.decode(b);
            if sys.factorization_witness(&first, &tb)?.is_none() {
                fiber_counterexample = Some((first, tb));
                break 'fibers;
            }
        }
    }

    Ok(TransFactorReport {
        orbit_counts: [over_g.orbit_count(), over_q.orbit_count()],
        bijective: bijection_counterexample.is_none(),
        bijection_counterexample,
        fibers_factor: fiber_counterexample.is_none(),
        fiber_counterexample,
        pairs_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GaugedGraph;
    use crate::groups::build_group;
    use crate::model::{parse_model, ClosedFiberModel};
    use crate::sha::compute_sha;

    fn g(spec: &str) -> FiniteGroup {
        build_group(spec, &Limits::default()).unwrap()
    }

    fn graph(text: &str) -> ReductionGraph {
        ReductionGraph::from_model(&parse_model(text).unwrap()).unwrap()
    }

    const NODAL: &str = "component C\npoint Q on C:2";
    const EDGE: &str = "component C\npoint Q on C:1";

    #[test]
    fn single_edge_has_one_orbit() {
        for spec in ["C2", "S3", "D4"] {
            let grp = g(spec);
            let sys = FactorizationSystem::constant(&graph(EDGE), &grp).unwrap();
            let orbits = coboundary_orbits(&sys, &Limits::default()).unwrap();
            assert_eq!(orbits.orbit_count(), 1);
            for x in 0..grp.order() {
                assert!(factorizes(&sys, &[x]).unwrap());
            }
        }
    }

    #[test]
    fn nodal_c2_orbits() {
        let c2 = g("C2");
        let sys = FactorizationSystem::constant(&graph(NODAL), &c2).unwrap();
        let orbits = coboundary_orbits(&sys, &Limits::default()).unwrap();
        assert_eq!(orbits.orbit_count(), 2);
        // indices: (0,0)=0 (0,1)=1 (1,0)=2 (1,1)=3
        assert_eq!(orbits.orbit_of, vec![0, 1, 1, 0]);
        assert_eq!(orbits.pointed_orbit_size(), 2);
        assert_eq!(
            sys.orbit(&[0, 0]).unwrap(),
            HashSet::from([vec![0, 0], vec![1, 1]])
        );
        assert!(factorizes(&sys, &[0, 0]).unwrap());
        assert!(factorizes(&sys, &[1, 1]).unwrap());
        assert!(!factorizes(&sys, &[0, 1]).unwrap());
        assert!(!factorizes(&sys, &[1, 0]).unwrap());
        assert!(same_fiber(&sys, &[0, 0], &[1, 1]).unwrap());
        assert!(!same_fiber(&sys, &[0, 0], &[0, 1]).unwrap());
        assert!(same_fiber(&sys, &[1, 0], &[1, 0]).unwrap());
        assert_eq!(
            sys.factorization_witness(&[1, 1], &[0, 0])
                .unwrap()
                .map(|u| u.len()),
            Some(2)
        );
    }

    #[test]
    fn trees_have_one_orbit() {
        for k in 1..=3 {
            let grp = g("S3");
            let gr = ReductionGraph::from_model(&ClosedFiberModel::chain(k)).unwrap();
            let sys = FactorizationSystem::constant(&gr, &grp).unwrap();
            assert_eq!(
                coboundary_orbits(&sys, &Limits::default())
                    .unwrap()
                    .orbit_count(),
                1
            );
        }
    }

    #[test]
    fn orbit_count_matches_sha() {
        for spec in ["C2", "C3", "S3", "D4", "C2xC2"] {
            let grp = g(spec);
            for r in 0..=2 {
                let gg = GaugedGraph::with_rank(r);
                let sys = FactorizationSystem::constant(&gg.graph, &grp).unwrap();
                let orbits = coboundary_orbits(&sys, &Limits::default()).unwrap();
                let sha = compute_sha(&gg, &grp, &Limits::default()).unwrap();
                assert_eq!(orbits.orbit_count(), sha.size(), "{spec} rank {r}");
            }
        }
    }

    #[test]
    fn witness_agrees_with_orbits() {
        let grp = g("S3");
        let gr = graph("component C1\ncomponent C2\npoint P on C1:1 C2:1\npoint Q on C1:1 C2:1");
        let sub = grp.subgroup(&[1]).unwrap();
        let subgroups = vec![grp.whole(), sub.clone(), sub, grp.whole()];
        let sys = FactorizationSystem::with_subgroups(&gr, &grp, subgroups).unwrap();
        let orbits = coboundary_orbits(&sys, &Limits::default()).unwrap();
        let total = orbits.orbit_of.len();
        for a in (0..total).step_by(7) {
            for b in (0..total).step_by(5) {
                let (ta, tb) = (sys.decode(a), sys.decode(b));
                let same = orbits.orbit_of[a] == orbits.orbit_of[b];
                assert_eq!(sys.factorization_witness(&ta, &tb).unwrap().is_some(), same);
            }
            assert_eq!(
                factorizes(&sys, &sys.decode(a)).unwrap(),
                orbits.orbit_of[a] == 0
            );
        }
    }

    #[test]
    fn identity_always_factorizes() {
        let grp = g("D4");
        let gr = graph("component C\npoint Q on C:3");
        let z = grp.center();
        let sys = FactorizationSystem::with_subgroups(&gr, &grp, vec![z.clone(), z]).unwrap();
        assert!(factorizes(&sys, &[0, 0, 0]).unwrap());
    }

    #[test]
    fn reversing_an_edge_inverts_its_coordinate() {
        let grp = g("S3");
        let gr = graph("component C\npoint Q on C:3");
        let sys = FactorizationSystem::constant(&gr, &grp).unwrap();
        let flipped = sys.reverse_edge(1);
        let a = coboundary_orbits(&sys, &Limits::default()).unwrap();
        let b = coboundary_orbits(&flipped, &Limits::default()).unwrap();
        assert_eq!(a.orbit_count(), b.orbit_count());
        for x in 0..a.orbit_of.len() {
            for y in 0..a.orbit_of.len() {
                let (mut tx, mut ty) = (sys.decode(x), sys.decode(y));
                let same = a.orbit_of[x] == a.orbit_of[y];
                tx[1] = grp.inv(tx[1]);
                ty[1] = grp.inv(ty[1]);
                assert_eq!(
                    b.orbit_of[flipped.encode(&tx)] == b.orbit_of[flipped.encode(&ty)],
                    same
                );
            }
        }
    }

    #[test]
    fn abelian_fiber_is_difference_factorization() {
        let grp = g("C2xC2");
        let gr = graph("component C\npoint Q on C:3");
        let sub = grp.subgroup(&[1]).unwrap();
        let sys = FactorizationSystem::with_subgroups(&gr, &grp, vec![sub, grp.whole()]).unwrap();
        let n = grp.order();
        for a in 0..n * n * n {
            for b in 0..n * n * n {
                let (ta, tb) = (sys.decode(a), sys.decode(b));
                let diff: Vec<usize> = ta
                    .iter()
                    .zip(&tb)
                    .map(|(&x, &y)| grp.mul(x, grp.inv(y)))
                    .collect();
                assert_eq!(
                    same_fiber(&sys, &ta, &tb).unwrap(),
                    factorizes(&sys, &diff).unwrap()
                );
            }
        }
    }

    #[test]
    fn trans_factor_constant_s3() {
        let s3 = g("S3");
        let a3 = s3.subgroup(&[3]).unwrap();
        let sys = FactorizationSystem::constant(&graph(NODAL), &s3).unwrap();
        let rep = trans_factor_check(&sys, &a3, &Limits::default()).unwrap();
        assert!(rep.agree());
        assert_eq!(rep.orbit_counts, [3, 2]);
        assert!(!rep.bijective);
        assert!(rep.fiber_counterexample.is_some());
    }

    #[test]
    fn trans_factor_trivial_normal_subgroup() {
        let s3 = g("S3");
        let sys = FactorizationSystem::constant(&graph(NODAL), &s3).unwrap();
        let rep = trans_factor_check(&sys, &s3.subgroup(&[]).unwrap(), &Limits::default()).unwrap();
        assert!(rep.bijective && rep.fibers_factor);
        assert_eq!(rep.pairs_checked, 0);
    }

    #[test]
    fn trans_factor_tree() {
        let d4 = g("D4");
        let gr = ReductionGraph::from_model(&ClosedFiberModel::chain(2)).unwrap();
        let sys = FactorizationSystem::constant(&gr, &d4).unwrap();
        for n in d4.normal_subgroups() {
            let rep = trans_factor_check(&sys, &n, &Limits::default()).unwrap();
            assert!(rep.bijective && rep.fibers_factor);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s3 = g("S3");
        let sys = FactorizationSystem::constant(&graph(NODAL), &s3).unwrap();
        assert_eq!(
            factorizes(&sys, &[0]).unwrap_err().code(),
            "length-mismatch"
        );
        assert_eq!(
            factorizes(&sys, &[0, 9]).unwrap_err().code(),
            "invalid-element"
        );
        let t = s3.subgroup(&[1]).unwrap();
        assert_eq!(
            trans_factor_check(&sys, &t, &Limits::default())
                .unwrap_err()
                .code(),
            "not-normal"
        );
        let e = coboundary_orbits(&sys, &Limits::with_max_states(10)).unwrap_err();
        assert_eq!(e.code(), "state-cap-exceeded");
        let e = FactorizationSystem::from_parts(
            3,
            vec![(0, 1)],
            &s3,
            vec![s3.whole(); 3],
            String::new(),
        )
        .unwrap_err();
        assert_eq!(e.code(), "disconnected-graph");
    }
}
