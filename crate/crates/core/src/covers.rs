//! Finite covering spaces of a reduction graph as permutation data.
//!
//! A degree `n` cover is given by a permutation of `{1..n}` for every
//! incidence of a vertex with an edge ([`RawCoverData`]). Renumbering the
//! sheets over each vertex and each edge gives an equivalent cover. Fixing
//! the gauge trivializes every tree edge, leaving one permutation per free
//! generator ([`MonodromyTuple`]), well defined up to simultaneous
//! conjugation.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GaugedGraph;
use crate::groups::FiniteGroup;
use crate::perm::{factorial, Perm};
use crate::Limits;

const UNSET: usize = usize::MAX;

/// Sheet identifications for one edge. Each permutation sends edge sheets to
/// the sheets over the corresponding endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSheets {
    pub point: Perm,
    pub component: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCoverData {
    pub degree: usize,
    /// One entry per edge, in global edge order.
    pub sheets: Vec<EdgeSheets>,
}

impl RawCoverData {
    /// Raw data realizing a monodromy tuple: identity everywhere except the
    /// component side of cotree edges.
    pub fn from_tuple(graph: &GaugedGraph, tuple: &MonodromyTuple) -> Self {
        let id = Perm::identity(tuple.degree);
        let mut sheets = vec![
            EdgeSheets {
                point: id.clone(),
                component: id.clone()
            };
            graph.graph.edge_count()
        ];
        for (k, &e) in graph.gauge.cotree_edges.iter().enumerate() {
            sheets[e].component = tuple.images[k].clone();
        }
        RawCoverData {
            degree: tuple.degree,
            sheets,
        }
    }

    /// Applies sheet renumberings: `σ_{v,e} ↦ τ_v⁻¹ σ_{v,e} τ_e`.
    pub fn renumber(&self, graph: &GaugedGraph, vertex_tau: &[Perm], edge_tau: &[Perm]) -> Self {
        let sheets = self
            .sheets
            .iter()
            .enumerate()
            .map(|(e, s)| {
                let (l, r) = graph.graph.endpoints(e);
                EdgeSheets {
                    point: vertex_tau[l]
                        .inverse()
                        .compose(&s.point)
                        .compose(&edge_tau[e]),
                    component: vertex_tau[r]
                        .inverse()
                        .compose(&s.component)
                        .compose(&edge_tau[e]),
                }
            })
            .collect();
        RawCoverData {
            degree: self.degree,
            sheets,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyTuple {
    pub degree: usize,
    /// Fingerprint of the gauged graph the generators belong to.
    pub fingerprint: String,
    /// One permutation per cotree edge.
    pub images: Vec<Perm>,
}

impl MonodromyTuple {
    pub fn new(graph: &GaugedGraph, degree: usize, images: Vec<Perm>) -> Result<Self> {
        if images.len() != graph.rank() {
            return Err(Error::LengthMismatch {
                expected: graph.rank(),
                found: images.len(),
            });
        }
        if let Some(p) = images.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: p.degree(),
            });
        }
        Ok(MonodromyTuple {
            degree,
            fingerprint: graph.fingerprint(),
            images,
        })
    }

    /// The trivial cover: `degree` disjoint copies of the graph.
    pub fn trivial(graph: &GaugedGraph, degree: usize) -> Self {
        MonodromyTuple {
            degree,
            fingerprint: graph.fingerprint(),
            images: vec![Perm::identity(degree); graph.rank()],
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Orbits of the monodromy group, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut orbit = vec![s];
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                head += 1;
                for g in &self.images {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Transitivity of the monodromy action.
    pub fn is_connected(&self) -> bool {
        self.orbits().len() == 1
    }

    /// The lexicographically least tuple in the simultaneous conjugation
    /// class.
    pub fn canonical(&self) -> Self {
        let (images, _) = canonical_form(&self.images, self.degree);
        MonodromyTuple {
            degree: self.degree,
            fingerprint: self.fingerprint.clone(),
            images,
        }
    }

    fn same_graph(&self, other: &Self) -> Result<()> {
        if self.fingerprint != other.fingerprint || self.rank() != other.rank() {
            Err(Error::GraphMismatch)
        } else {
            Ok(())
        }
    }
}

/// Least simultaneous conjugate of `gens` and the relabelling `tau` with
/// `result[i] = tau gens[i] tau⁻¹`.
///
/// New labels are handed out in the order the first generator's one-line
/// notation reads them; the only free choices are which unlabelled point gets
/// the next label when a cycle closes. Branches whose prefix already exceeds
/// the best found are cut.
pub fn canonical_form(gens: &[Perm], n: usize) -> (Vec<Perm>, Perm) {
    if gens.is_empty() || n == 0 {
        return (gens.to_vec(), Perm::identity(n));
    }
    struct Search<'a> {
        gens: &'a [Perm],
        n: usize,
        // points fixed by every generator are interchangeable
        inert: Vec<bool>,
        label: Vec<usize>,
        rho: Vec<usize>,
        out: Vec<usize>,
        best: Option<Vec<usize>>,
        best_label: Vec<usize>,
    }

    impl Search<'_> {
        fn step(&mut self, pos: usize) {
            if pos == self.gens.len() * self.n {
                if self.best.as_ref().is_none_or(|b| self.out < *b) {
                    self.best = Some(self.out.clone());
                    self.best_label = self.label.clone();
                }
                return;
            }
            let j = pos % self.n;
            if self.rho.len() == j {
                let mut tried_inert = false;
                for p in 0..self.n {
                    if self.label[p] != UNSET || (self.inert[p] && tried_inert) {
                        continue;
                    }
                    tried_inert |= self.inert[p];
                    self.label[p] = j;
                    self.rho.push(p);
                    self.emit(pos);
                    self.rho.pop();
                    self.label[p] = UNSET;
                }
            } else {
                self.emit(pos);
            }
        }

        fn emit(&mut self, pos: usize) {
            let (i, j) = (pos / self.n, pos % self.n);
            let q = self.gens[i].apply(self.rho[j]);
            let fresh = self.label[q] == UNSET;
            if fresh {
                self.label[q] = self.rho.len();
                self.rho.push(q);
            }
            let val = self.label[q];
            let keep = match &self.best {
                None => true,
                Some(b) => match self.out[..].cmp(&b[..pos]) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => val <= b[pos],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if keep {
                self.out.push(val);
                self.step(pos + 1);
                self.out.pop();
            }
            if fresh {
                self.rho.pop();
                self.label[q] = UNSET;
            }
        }
    }

    let inert = (0..n)
        .map(|p| gens.iter().all(|g| g.apply(p) == p))
        .collect();
    let mut s = Search {
        gens,
        n,
        inert,
        label: vec![UNSET; n],
        rho: Vec::with_capacity(n),
        out: Vec::with_capacity(gens.len() * n),
        best: None,
        best_label: Vec::new(),
    };
    s.step(0);
    let tau = Perm::from_images(s.best_label).expect("labelling is a bijection");
    (gens.iter().map(|g| g.conjugate_by(&tau)).collect(), tau)
}

/// Gauge-fixes raw cover data and returns the canonical monodromy tuple.
///
/// The transition across edge `e` from its point side to its component side
/// is `σ_{U,e} ∘ σ_{P,e}⁻¹`; tree edges are made trivial by renumbering the
/// vertex sheets along the tree.
pub fn normalize(graph: &GaugedGraph, raw: &RawCoverData) -> Result<MonodromyTuple> {
    let g = &graph.graph;
    if raw.sheets.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            found: raw.sheets.len(),
        });
    }
    for s in &raw.sheets {
        for p in [&s.point, &s.component] {
            if p.degree() != raw.degree {
                return Err(Error::DegreeMismatch {
                    expected: raw.degree,
                    found: p.degree(),
                });
            }
        }
    }
    let transition: Vec<Perm> = raw
        .sheets
        .iter()
        .map(|s| s.component.compose(&s.point.inverse()))
        .collect();

    // path[v]: root sheets -> v sheets along the tree
    let mut path: Vec<Option<Perm>> = vec![None; g.vertex_count()];
    path[graph.gauge.root] = Some(Perm::identity(raw.degree));
    for &v in &graph.gauge.order[1..] {
        let (e, u) = graph.gauge.parent[v].expect("non-root vertices have parents");
        let from = path[u].as_ref().expect("parents precede children");
        let step = if g.endpoints(e).0 == u {
            transition[e].clone()
        } else {
            transition[e].inverse()
        };
        path[v] = Some(step.compose(from));
    }
    let images = graph
        .gauge
        .cotree_edges
        .iter()
        .map(|&e| {
            let (l, r) = g.endpoints(e);
            let (pl, pr) = (path[l].as_ref().unwrap(), path[r].as_ref().unwrap());
            pr.inverse().compose(&transition[e]).compose(pl)
        })
        .collect::<Vec<_>>();
    let (images, _) = canonical_form(&images, raw.degree);
    Ok(MonodromyTuple {
        degree: raw.degree,
        fingerprint: graph.fingerprint(),
        images,
    })
}

/// A sheet relabelling `tau` with `tau a_i tau⁻¹ = b_i` for all `i`.
pub fn are_isomorphic(a: &MonodromyTuple, b: &MonodromyTuple) -> Result<Option<Perm>> {
    a.same_graph(b)?;
    if a.degree != b.degree {
        return Ok(None);
    }
    let n = a.degree;
    let cycle_type = |p: &Perm| {
        let mut lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens
    };
    if a.images
        .iter()
        .zip(&b.images)
        .any(|(x, y)| cycle_type(x) != cycle_type(y))
    {
        return Ok(None);
    }
    let mut tau = vec![UNSET; n];
    let mut used = vec![false; n];
    if equivariant_bijection(&a.images, &b.images, &mut tau, &mut used) {
        Ok(Some(Perm::from_images(tau).expect("complete assignment")))
    } else {
        Ok(None)
    }
}

/// Extends `tau` to a bijection with `tau(a_i(x)) = b_i(tau(x))`.
fn equivariant_bijection(
    a: &[Perm],
    b: &[Perm],
    tau: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(x) = tau.iter().position(|&t| t == UNSET) else {
        return true;
    };
    for y in 0..tau.len() {
        if used[y] {
            continue;
        }
        let mut trail = Vec::new();
        let admit = |img: usize| !std::mem::replace(&mut used[img], true);
        if propagate(a, b, x, y, tau, admit, &mut trail) && equivariant_bijection(a, b, tau, used) {
            return true;
        }
        for &p in &trail {
            used[tau[p]] = false;
            tau[p] = UNSET;
        }
    }
    false
}

/// Assigns `map[x] = y` and closes under the generators. `admit` is asked
/// before each new assignment and every admitted image is assigned. Assigned
/// points are recorded in `trail`.
fn propagate<F>(
    a: &[Perm],
    b: &[Perm],
    x: usize,
    y: usize,
    map: &mut [usize],
    mut admit: F,
    trail: &mut Vec<usize>,
) -> bool
where
    F: FnMut(usize) -> bool,
{
    if !admit(y) {
        return false;
    }
    map[x] = y;
    trail.push(x);
    let mut stack = vec![x];
    while let Some(p) = stack.pop() {
        for (g, h) in a.iter().zip(b) {
            let (p2, q2) = (g.apply(p), h.apply(map[p]));
            if map[p2] == UNSET {
                if !admit(q2) {
                    return false;
                }
                map[p2] = q2;
                trail.push(p2);
                stack.push(p2);
            } else if map[p2] != q2 {
                return false;
            }
        }
    }
    true
}

/// A balanced map `phi` from the sheets of `upper` onto those of `lower`
/// with `phi ∘ a_i = b_i ∘ phi`.
pub fn dominates(upper: &MonodromyTuple, lower: &MonodromyTuple) -> Result<Option<Vec<usize>>> {
    upper.same_graph(lower)?;
    let (n, m) = (upper.degree, lower.degree);
    if m == 0 || n % m != 0 {
        return Ok(None);
    }
    let mut phi = vec![UNSET; n];
    let mut fiber = vec![0usize; m];
    if balanced_map(&upper.images, &lower.images, n / m, &mut phi, &mut fiber) {
        Ok(Some(phi))
    } else {
        Ok(None)
    }
}

fn balanced_map(
    a: &[Perm],
    b: &[Perm],
    cap: usize,
    phi: &mut Vec<usize>,
    fiber: &mut Vec<usize>,
) -> bool {
    let Some(x) = phi.iter().position(|&t| t == UNSET) else {
        return fiber.iter().all(|&f| f == cap);
    };
    for y in 0..fiber.len() {
        if fiber[y] >= cap {
            continue;
        }
        let mut trail = Vec::new();
        let admit = |img: usize| {
            if fiber[img] >= cap {
                return false;
            }
            fiber[img] += 1;
            true
        };
        if propagate(a, b, x, y, phi, admit, &mut trail) && balanced_map(a, b, cap, phi, fiber) {
            return true;
        }
        for &p in &trail {
            fiber[phi[p]] -= 1;
            phi[p] = UNSET;
        }
    }
    false
}

/// The cover on pairs of sheets, acting componentwise. Sheet `(x, y)` has
/// index `x * b.degree + y`.
pub fn fiber_product(a: &MonodromyTuple, b: &MonodromyTuple) -> Result<MonodromyTuple> {
    a.same_graph(b)?;
    let m = b.degree;
    let images = a
        .images
        .iter()
        .zip(&b.images)
        .map(|(g, h)| {
            let v = (0..a.degree * m)
                .map(|i| g.apply(i / m) * m + h.apply(i % m))
                .collect();
            Perm::from_images(v).expect("product of bijections")
        })
        .collect();
    Ok(MonodromyTuple {
        degree: a.degree * m,
        fingerprint: a.fingerprint.clone(),
        images,
    })
}

/// Restriction to each orbit, relabelled `0..|orbit|` in increasing order.
pub fn connected_components(cover: &MonodromyTuple) -> Vec<MonodromyTuple> {
    cover
        .orbits()
        .into_iter()
        .map(|orbit| {
            let mut local = vec![UNSET; cover.degree];
            for (i, &x) in orbit.iter().enumerate() {
                local[x] = i;
            }
            let images = cover
                .images
                .iter()
                .map(|g| {
                    Perm::from_images(orbit.iter().map(|&x| local[g.apply(x)]).collect()).unwrap()
                })
                .collect();
            MonodromyTuple {
                degree: orbit.len(),
                fingerprint: cover.fingerprint.clone(),
                images,
            }
        })
        .collect()
}

/// The pointed Galois cover of a homomorphism from the free group: each
/// generator acts on the group elements by right multiplication.
pub fn from_hom(
    graph: &GaugedGraph,
    group: &FiniteGroup,
    images: &[usize],
) -> Result<MonodromyTuple> {
    if images.len() != graph.rank() {
        return Err(Error::LengthMismatch {
            expected: graph.rank(),
            found: images.len(),
        });
    }
    let perms = images
        .iter()
        .map(|&a| {
            group.check_element(a)?;
            Ok(
                Perm::from_images((0..group.order()).map(|x| group.mul(x, a)).collect())
                    .expect("regular action"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyTuple {
        degree: group.order(),
        fingerprint: graph.fingerprint(),
        images: perms,
    })
}

/// Deck group of a Galois cover with the generator images inside it.
#[derive(Debug, Clone)]
pub struct DeckGroup {
    pub group: FiniteGroup,
    /// Index of each monodromy generator in `group`.
    pub images: Vec<usize>,
}

/// A connected cover is Galois iff its monodromy group acts regularly, i.e.
/// has exactly `degree` elements.
pub fn is_galois(cover: &MonodromyTuple) -> Result<Option<DeckGroup>> {
    if !cover.is_connected() {
        return Err(Error::NotConnected);
    }
    let limits = Limits {
        max_group_order: cover.degree,
        ..Limits::default()
    };
    let name = format!("Mon{}", cover.degree);
    let (group, elems) = match FiniteGroup::from_perms(&name, &cover.images, &limits) {
        Ok(x) => x,
        Err(Error::GroupOrderCap { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if group.order() != cover.degree {
        return Ok(None);
    }
    let images = cover
        .images
        .iter()
        .map(|g| elems.iter().position(|e| e == g).unwrap())
        .collect();
    Ok(Some(DeckGroup { group, images }))
}

/// One canonical tuple per isomorphism class of degree `n` covers, in
/// lexicographic order. With `connected_only`, only transitive tuples.
pub fn enumerate_covers(
    graph: &GaugedGraph,
    n: usize,
    connected_only: bool,
    limits: &Limits,
) -> Result<Vec<MonodromyTuple>> {
    assert!(n >= 1, "degree must be positive");
    let r = graph.rank();
    let base = factorial(n);
    let total = limits.check_power(base, r)? as usize;
    let fingerprint = graph.fingerprint();

    let encode = |t: &[Perm]| t.iter().fold(0u64, |acc, p| acc * base + p.lex_rank()) as usize;
    let decode = |mut idx: u64| {
        let mut t = vec![Perm::identity(n); r];
        for slot in t.iter_mut().rev() {
            *slot = Perm::from_lex_rank(n, idx % base);
            idx /= base;
        }
        t
    };
    // S_n is generated by a transposition and an n-cycle
    let movers: Vec<Perm> = if n == 1 {
        Vec::new()
    } else {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        vec![
            Perm::from_images(swap).unwrap(),
            Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap(),
        ]
    };

    let mut visited = vec![false; total];
    let mut out = Vec::new();
    for idx in 0..total {
        if visited[idx] {
            continue;
        }
        let rep = decode(idx as u64);
        visited[idx] = true;
        let mut queue = VecDeque::from([rep.clone()]);
        while let Some(t) = queue.pop_front() {
            for s in &movers {
                let u: Vec<Perm> = t.iter().map(|g| g.conjugate_by(s)).collect();
                let k = encode(&u);
                if !visited[k] {
                    visited[k] = true;
                    queue.push_back(u);
                }
            }
        }
        let tuple = MonodromyTuple {
            degree: n,
            fingerprint: fingerprint.clone(),
            images: rep,
        };
        if !connected_only || tuple.is_connected() {
            out.push(tuple);
        }
    }
    Ok(out)
}
