//! Acceptance suite. Run with `cargo test -p shagraph-core --test acceptance`.
//!
//! Every criterion is exact: counts and sets must match their oracles with
//! zero tolerance. Criteria with a time budget also fail when the budget is
//! exceeded.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shagraph::covers::{
    connected_components, enumerate_covers, from_hom, is_galois, MonodromyTuple,
};
use shagraph::graph::spanning_gauge;
use shagraph::groups::build_group;
use shagraph::model::{blowup, blowup_supported, parse_model, random_model, refine};
use shagraph::mv::{coboundary_orbits, factorizes, trans_factor_check, FactorizationSystem};
use shagraph::sha::{
    compute_sha, is_lgp_trivial, quotient_sequence_check, sha_count_burnside, witt_kernel,
};
use shagraph::{ClosedFiberModel, FiniteGroup, GaugedGraph, Limits, Perm, ReductionGraph};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const NODAL: &str = "component C\npoint Q on C:2";
const LOOP2: &str = "component C1\ncomponent C2\npoint P on C1:1 C2:1\npoint Q on C1:1 C2:1";
const THETA: &str =
    "component C1\ncomponent C2\npoint P on C1:1 C2:1\npoint Q on C1:1 C2:1\npoint R on C1:1 C2:1";

fn limits() -> Limits {
    Limits::default()
}

fn model(text: &str) -> ClosedFiberModel {
    parse_model(text).expect("fixture parses")
}

fn gauged(m: &ClosedFiberModel) -> GaugedGraph {
    GaugedGraph::from_model(m).expect("fixture is valid")
}

fn group(spec: &str) -> FiniteGroup {
    build_group(spec, &limits()).expect("fixture group")
}

fn err(e: shagraph::Error) -> String {
    format!("unexpected error {}: {e}", e.code())
}

/// `C3 ⋊ C4` with the generator of `C4` inverting `C3`, as `(i, j) ↦ i + 3j`.
fn dicyclic12() -> FiniteGroup {
    let idx = |i: usize, j: usize| i % 3 + 3 * (j % 4);
    let rows = (0..12)
        .map(|x| {
            let (i1, j1) = (x % 3, x / 3);
            (0..12)
                .map(|y| {
                    let (i2, j2) = (y % 3, y / 3);
                    let twisted = if j1 % 2 == 0 { i2 } else { 3 - i2 };
                    idx(i1 + twisted, j1 + j2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table("Dic3", rows).expect("Dic3 table")
}

const Q8: &str = "perm:(1 2 3 4)(5 6 7 8),(1 5 3 7)(2 8 4 6)";
const A4: &str = "perm:(1 2 3),(1 2)(3 4)";

fn groups_up_to_8() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=8).map(|n| group(&format!("C{n}"))).collect();
    for spec in ["C2xC2", "C2xC4", "C2xC2xC2", "S3", "D4", Q8] {
        out.push(group(spec));
    }
    out
}

fn groups_up_to_12() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=12).map(|n| group(&format!("C{n}"))).collect();
    for spec in [
        "C2xC2", "C2xC4", "C2xC2xC2", "S3", "D4", Q8, "C3xC3", "D5", "C2xC6", "D6", A4,
    ] {
        out.push(group(spec));
    }
    out.push(dicyclic12());
    out
}

fn c1_ranks() -> Outcome {
    let cases: Vec<(String, ClosedFiberModel, usize)> = [
        ("nodal", model(NODAL), 1),
        ("two-component loop", model(LOOP2), 1),
        ("theta", model(THETA), 2),
    ]
    .into_iter()
    .map(|(n, m, r)| (n.to_string(), m, r))
    .chain((1..=10).map(|k| (format!("chain {k}"), ClosedFiberModel::chain(k), 0)))
    .collect();
    for (name, m, expected) in &cases {
        let g = ReductionGraph::from_model(m).map_err(err)?;
        let r = g.cycle_rank().map_err(err)?;
        ensure!(r == *expected, "{name}: rank {r}, expected {expected}");
        let gauge = spanning_gauge(&g).map_err(err)?;
        ensure!(
            gauge.cotree_edges.len() == r,
            "{name}: cotree size differs from rank"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let m = random_model(&mut rng, 6, 5);
        let g = ReductionGraph::from_model(&m).map_err(err)?;
        let gauge = spanning_gauge(&g).map_err(err)?;
        let r = g.cycle_rank().map_err(err)?;
        ensure!(
            gauge.cotree_edges.len() == r,
            "random model {i}: |cotree| {} != rank {r}",
            gauge.cotree_edges.len()
        );
        ensure!(
            r + g.vertex_count() == g.edge_count() + 1,
            "random model {i}: Euler characteristic"
        );
    }
    Ok(format!("{} fixed graphs, 200 random models", cases.len()))
}

fn c2_sha_triangle() -> Outcome {
    let graphs: Vec<(&str, ClosedFiberModel)> = vec![
        ("edge", ClosedFiberModel::bouquet(0)),
        ("chain 3", ClosedFiberModel::chain(3)),
        ("nodal", model(NODAL)),
        ("loop", model(LOOP2)),
        ("bouquet 2", ClosedFiberModel::bouquet(2)),
        ("theta", model(THETA)),
        ("bouquet 3", ClosedFiberModel::bouquet(3)),
    ];
    let specs = ["C2", "C3", "C4", "C2xC2", "S3", "D4"];
    let mut checked = 0;
    for (name, m) in &graphs {
        let gg = gauged(m);
        for spec in specs {
            let grp = group(spec);
            let sha = compute_sha(&gg, &grp, &limits()).map_err(err)?.size();
            let burnside = sha_count_burnside(&gg, &grp).map_err(err)?;
            let sys = FactorizationSystem::constant(&gg.graph, &grp).map_err(err)?;
            let orbits = coboundary_orbits(&sys, &limits())
                .map_err(err)?
                .orbit_count();
            ensure!(
                sha as u128 == burnside && sha == orbits,
                "{name}, {spec}: sha {sha}, burnside {burnside}, orbits {orbits}"
            );
            let r = gg.rank();
            if spec == "C2" {
                ensure!(sha == 1 << r, "{name}: C2 gives {sha}, expected 2^{r}");
            }
            if r == 0 {
                ensure!(sha == 1, "{name} is a tree but {spec} gives {sha}");
            }
            let pinned = match (r, spec) {
                (1, "S3") => Some(3),
                (2, "S3") => Some(11),
                _ => None,
            };
            if let Some(p) = pinned {
                ensure!(sha == p, "{name}, {spec}: {sha}, pinned {p}");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (graph, group) pairs, ranks 0-3"))
}

fn c3_triviality() -> Outcome {
    let specs = ["C1", "C2", "C3", "C4", "C2xC2", "S3", "D4"];
    let cap = Limits::with_max_states(50_000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut done, mut trivial, mut draws) = (0, 0, 0);
    while done < 100 {
        draws += 1;
        ensure!(draws < 10_000, "could not draw 100 instances within caps");
        let m = if rng.gen_bool(0.25) {
            ClosedFiberModel::chain(rng.gen_range(1..=4))
        } else {
            random_model(&mut rng, 3, 2)
        };
        let gg = gauged(&m);
        let grp = group(specs[rng.gen_range(0..specs.len())]);
        let sha = match compute_sha(&gg, &grp, &cap) {
            Ok(s) => s,
            Err(shagraph::Error::StateCapExceeded { .. }) => continue,
            Err(e) => return Err(err(e)),
        };
        let predicted = is_lgp_trivial(&gg, &grp);
        ensure!(
            predicted == (sha.size() == 1),
            "rank {}, {}: predicted trivial {predicted}, size {}",
            gg.rank(),
            grp.name(),
            sha.size()
        );
        trivial += usize::from(predicted);
        done += 1;
    }
    Ok(format!("100 instances ({trivial} trivial, {draws} draws)"))
}

fn c4_witt() -> Outcome {
    let c2 = group("C2");
    for r in 0..=4 {
        let gg = GaugedGraph::with_rank(r);
        let w = witt_kernel(&gg, &limits()).map_err(err)?;
        ensure!(w.order == 1 << r, "rank {r}: order {}", w.order);
        let sha = compute_sha(&gg, &c2, &limits()).map_err(err)?;
        ensure!(
            w.representatives.len() as u64 == w.order,
            "rank {r}: listing size"
        );
        let classes: BTreeSet<usize> = w
            .representatives
            .iter()
            .map(|t| sha.class_of(&c2, t))
            .collect::<shagraph::Result<_>>()
            .map_err(err)?;
        ensure!(
            classes.len() == sha.size() && sha.size() as u64 == w.order,
            "rank {r}: not a bijection"
        );
    }
    Ok("ranks 0-4".into())
}

/// Cycle-type class sizes: `z_λ = Π i^{m_i} m_i!` over partitions of `n`.
fn centralizer_orders(n: usize) -> Vec<u128> {
    fn go(rest: usize, max: usize, mult: &mut Vec<usize>, out: &mut Vec<u128>) {
        if rest == 0 {
            let z = mult
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &m)| (i as u128).pow(m as u32) * (1..=m as u128).product::<u128>())
                .product();
            out.push(z);
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            mult[part] += 1;
            go(rest - part, part, mult, out);
            mult[part] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n + 1], &mut out);
    out
}

fn fact(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Index-`n` subgroups of the free group of rank `r >= 1`.
fn hall(n_max: usize, r: u32) -> Vec<u128> {
    let mut a = vec![0u128; n_max + 1];
    for n in 1..=n_max {
        let sub: u128 = (1..n).map(|k| fact(n - k).pow(r - 1) * a[k]).sum();
        a[n] = n as u128 * fact(n).pow(r - 1) - sub;
    }
    a
}

/// Connected counts recovered from total counts: the totals are the Euler
/// transform of the connected counts.
fn inverse_euler(totals: &[u128]) -> Vec<u128> {
    let n_max = totals.len() - 1;
    let mut c = vec![0u128; n_max + 1];
    for n in 1..=n_max {
        let mut poly = vec![0u128; n + 1];
        poly[0] = 1;
        for (k, &ck) in c.iter().enumerate().take(n).skip(1) {
            // multiply by (1 - x^k)^{-ck}
            for _ in 0..ck {
                for d in k..=n {
                    poly[d] += poly[d - k];
                }
            }
        }
        c[n] = totals[n] - poly[n];
    }
    c
}

/// Order of the centralizer of a transitive tuple in `S_n`.
fn automorphisms(t: &MonodromyTuple) -> u128 {
    let n = t.degree;
    let mut count = 0;
    'target: for x in 0..n {
        let mut f = vec![usize::MAX; n];
        f[0] = x;
        let mut stack = vec![0];
        while let Some(p) = stack.pop() {
            for g in &t.images {
                for (a, b) in [
                    (g.apply(p), g.apply(f[p])),
                    (g.inverse().apply(p), g.inverse().apply(f[p])),
                ] {
                    if f[a] == usize::MAX {
                        f[a] = b;
                        stack.push(a);
                    } else if f[a] != b {
                        continue 'target;
                    }
                }
            }
        }
        count += 1;
    }
    count
}

fn c5_cover_counts() -> Outcome {
    let mut log = Vec::new();
    for r in 0..=2usize {
        let gg = GaugedGraph::with_rank(r);
        let mut totals = vec![0u128; 6];
        let mut connected = [0u128; 6];
        for n in 1..=5 {
            let all = enumerate_covers(&gg, n, false, &limits()).map_err(err)?;
            let conn = enumerate_covers(&gg, n, true, &limits()).map_err(err)?;
            ensure!(
                conn.iter().all(MonodromyTuple::is_connected),
                "rank {r}, n {n}: disconnected class listed"
            );
            ensure!(
                conn.iter().all(|c| all.contains(c))
                    && all.iter().filter(|c| c.is_connected()).count() == conn.len(),
                "rank {r}, n {n}: connected listing disagrees with full listing"
            );
            totals[n] = all.len() as u128;
            connected[n] = conn.len() as u128;
            // S_n Burnside: Σ_λ z_λ^{r-1}, which is 1 for r = 0
            let burnside: u128 = if r == 0 {
                1
            } else {
                centralizer_orders(n)
                    .iter()
                    .map(|z| z.pow(r as u32 - 1))
                    .sum()
            };
            ensure!(
                totals[n] == burnside,
                "rank {r}, n {n}: {} classes, Burnside {burnside}",
                totals[n]
            );
            let transitive: u128 = conn.iter().map(|c| fact(n) / automorphisms(c)).sum();
            let hall_count = if r == 0 {
                u128::from(n == 1)
            } else {
                fact(n - 1) * hall(n, r as u32)[n]
            };
            ensure!(
                transitive == hall_count,
                "rank {r}, n {n}: {transitive} transitive tuples, Hall {hall_count}"
            );
        }
        let euler = inverse_euler(&totals);
        ensure!(
            euler[1..] == connected[1..],
            "rank {r}: connected {:?}, inverse Euler {:?}",
            &connected[1..],
            &euler[1..]
        );
        log.push(format!("r={r} connected {:?}", &connected[1..]));
    }
    Ok(log.join("; "))
}

fn c6_galois() -> Outcome {
    let mut galois = 0;
    for spec in ["C2", "C3", "C4", "C2xC2", "S3", "D4"] {
        let grp = group(spec);
        for r in 1..=2 {
            let gg = GaugedGraph::with_rank(r);
            let total = grp.order().pow(r as u32);
            for code in 0..total {
                let images: Vec<usize> = (0..r)
                    .map(|k| code / grp.order().pow(k as u32) % grp.order())
                    .collect();
                let cover = from_hom(&gg, &grp, &images).map_err(err)?;
                let pieces = if cover.is_connected() {
                    vec![cover]
                } else {
                    connected_components(&cover)
                };
                for piece in pieces {
                    let deck = is_galois(&piece).map_err(err)?;
                    let order = deck.as_ref().map(|d| d.group.order());
                    ensure!(
                        order == Some(piece.degree),
                        "{spec} {images:?}: deck order {order:?}, degree {}",
                        piece.degree
                    );
                    galois += 1;
                }
            }
        }
    }

    // S3 acting on the right cosets of a non-normal subgroup of order 2
    let s3 = group("S3");
    let s = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
    let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
    let h = [0, s];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in 0..6 {
        let mut coset: Vec<usize> = h.iter().map(|&y| s3.mul(y, x)).collect();
        coset.sort();
        if !cosets.contains(&coset) {
            cosets.push(coset);
        }
    }
    ensure!(cosets.len() == 3, "expected 3 cosets");
    let act = |a: usize| {
        let images = cosets
            .iter()
            .map(|cs| {
                let mut moved: Vec<usize> = cs.iter().map(|&y| s3.mul(y, a)).collect();
                moved.sort();
                cosets.iter().position(|d| *d == moved).unwrap()
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    let gg = GaugedGraph::with_rank(2);
    let coset_cover = MonodromyTuple::new(&gg, 3, vec![act(s), act(c)]).map_err(err)?;
    ensure!(
        coset_cover.is_connected(),
        "coset cover should be connected"
    );
    ensure!(
        is_galois(&coset_cover).map_err(err)?.is_none(),
        "coset cover detected Galois"
    );
    Ok(format!(
        "{galois} regular covers Galois; S3 coset cover not Galois"
    ))
}

fn c7_homotopy() -> Outcome {
    let groups = [group("C2"), group("S3")];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut blowups = 0;
    for i in 0..50 {
        let m = random_model(&mut rng, 3, 2);
        let comp = m.components()[rng.gen_range(0..m.components().len())].clone();
        let mut variants = vec![(format!("refine {comp}"), refine(&m, &comp).map_err(err)?)];
        let supported: Vec<String> = m
            .points()
            .iter()
            .filter(|p| blowup_supported(p))
            .map(|p| p.name.clone())
            .collect();
        if !supported.is_empty() {
            let p = &supported[rng.gen_range(0..supported.len())];
            variants.push((format!("blowup {p}"), blowup(&m, p).map_err(err)?));
            blowups += 1;
        }
        let base = gauged(&m);
        for (what, v) in &variants {
            let vg = gauged(v);
            ensure!(
                vg.rank() == base.rank(),
                "model {i}, {what}: rank {} -> {}",
                base.rank(),
                vg.rank()
            );
            for grp in &groups {
                let a = compute_sha(&base, grp, &limits()).map_err(err)?.size();
                let b = compute_sha(&vg, grp, &limits()).map_err(err)?.size();
                ensure!(a == b, "model {i}, {what}, {}: sha {a} -> {b}", grp.name());
            }
        }
    }
    Ok(format!("50 models, 50 refinements, {blowups} blowups"))
}

fn c8_exactness() -> Outcome {
    let s3 = group("S3");
    let c4 = group("C4");
    let d4 = group("D4");
    let a3 = s3
        .subgroup(&[(0..6).find(|&x| s3.element_order(x) == 3).unwrap()])
        .map_err(err)?;
    let c2 = c4.subgroup(&[2]).map_err(err)?;
    let z = d4.center();
    let cases = [("S3/A3", &s3, a3), ("C4/C2", &c4, c2), ("D4/Z", &d4, z)];
    let graphs = [
        ("edge", ClosedFiberModel::bouquet(0)),
        ("nodal", model(NODAL)),
        ("bouquet 2", ClosedFiberModel::bouquet(2)),
        ("theta", model(THETA)),
    ];
    for (label, grp, normal) in &cases {
        ensure!(normal.is_normal, "{label}: subgroup not normal");
        for (name, m) in &graphs {
            let rep = quotient_sequence_check(&gauged(m), grp, normal, &limits()).map_err(err)?;
            ensure!(
                rep.exact(),
                "{label} on {name}: kernel {} / image {} / surjective {}",
                rep.trivial_kernel.detail,
                rep.image_equals_kernel.detail,
                rep.surjective.detail
            );
            if *label == "S3/A3" && *name == "nodal" {
                ensure!(rep.sizes == [3, 3, 2], "S3/A3 rank 1 sizes {:?}", rep.sizes);
            }
        }
    }
    Ok("3 extensions x 4 graphs; S3/A3 rank 1 sizes 3 -> 3 -> 2".into())
}

/// Connected oriented trees with 1 to 3 edges, every orientation.
fn oriented_trees() -> Vec<(usize, Vec<(usize, usize)>)> {
    let shapes: [(usize, &[(usize, usize)]); 4] = [
        (2, &[(0, 1)]),
        (3, &[(0, 1), (1, 2)]),
        (4, &[(0, 1), (1, 2), (2, 3)]),
        (4, &[(0, 1), (0, 2), (0, 3)]),
    ];
    let mut out = Vec::new();
    for (v, edges) in shapes {
        for mask in 0..1u32 << edges.len() {
            let oriented = edges
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| if mask >> k & 1 == 1 { (b, a) } else { (a, b) })
                .collect();
            out.push((v, oriented));
        }
    }
    out
}

fn c9_factorization() -> Outcome {
    let groups = groups_up_to_12();
    ensure!(
        groups.iter().all(|g| g.order() <= 12),
        "group list exceeds order 12"
    );
    let mut tuples = 0u64;
    for grp in &groups {
        for (v, edges) in oriented_trees() {
            let e = edges.len();
            let sys =
                FactorizationSystem::from_parts(v, edges, grp, vec![grp.whole(); v], "tree".into())
                    .map_err(err)?;
            let n = grp.order();
            for code in 0..n.pow(e as u32) {
                let t: Vec<usize> = (0..e).map(|k| code / n.pow(k as u32) % n).collect();
                ensure!(
                    factorizes(&sys, &t).map_err(err)?,
                    "{} tree {:?}: {t:?} does not factor",
                    grp.name(),
                    sys.edges()
                );
                tuples += 1;
            }
            ensure!(
                coboundary_orbits(&sys, &limits())
                    .map_err(err)?
                    .orbit_count()
                    == 1,
                "tree orbit count"
            );
        }
    }

    let c2 = group("C2");
    let sys = FactorizationSystem::constant(
        &ReductionGraph::from_model(&model(NODAL)).map_err(err)?,
        &c2,
    )
    .map_err(err)?;
    let mut factoring = Vec::new();
    for t in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        if factorizes(&sys, &t).map_err(err)? {
            factoring.push(t);
        }
    }
    ensure!(
        factoring == [[0, 0], [1, 1]],
        "nodal C2 factoring tuples {factoring:?}"
    );
    Ok(format!(
        "{} groups, {tuples} tree tuples; nodal C2 -> (0,0), (1,1)",
        groups.len()
    ))
}

fn c10_trans_factor() -> Outcome {
    let graphs: [(usize, &[(usize, usize)]); 7] = [
        (2, &[(0, 1)]),
        (2, &[(0, 1), (0, 1)]),
        (3, &[(0, 1), (2, 1)]),
        (2, &[(0, 1), (0, 1), (0, 1)]),
        (3, &[(0, 1), (0, 1), (2, 1)]),
        (4, &[(0, 1), (2, 1), (2, 3)]),
        (4, &[(0, 1), (2, 1), (3, 1)]),
    ];
    let (mut instances, mut both_hold, mut both_fail) = (0u64, 0u64, 0u64);
    for grp in groups_up_to_8() {
        let all = grp.all_subgroups();
        let trivial = grp.subgroup(&[]).map_err(err)?;
        for normal in grp.normal_subgroups() {
            let choices: Vec<_> = {
                let mut c = vec![trivial.clone(), normal.clone(), grp.whole()];
                c.dedup_by(|a, b| a.elements() == b.elements());
                c
            };
            for (v, edges) in graphs {
                // small vertex sets get every subgroup, larger ones {1, N, G}
                let palette = if v <= 2 { &all } else { &choices };
                let assignments = palette.len().pow(v as u32);
                for code in 0..assignments {
                    let subs = (0..v)
                        .map(|i| {
                            palette[code / palette.len().pow(i as u32) % palette.len()].clone()
                        })
                        .collect();
                    let sys = FactorizationSystem::from_parts(
                        v,
                        edges.to_vec(),
                        &grp,
                        subs,
                        "instance".into(),
                    )
                    .map_err(err)?;
                    let rep = trans_factor_check(&sys, &normal, &limits()).map_err(err)?;
                    ensure!(
                        rep.agree(),
                        "{} N={:?} edges {edges:?}: (i) {} (ii) {}; {:?} {:?}",
                        grp.name(),
                        normal.elements(),
                        rep.bijective,
                        rep.fibers_factor,
                        rep.bijection_counterexample,
                        rep.fiber_counterexample
                    );
                    instances += 1;
                    if rep.bijective {
                        both_hold += 1;
                    } else {
                        both_fail += 1;
                    }
                }
            }
        }
    }
    ensure!(both_hold > 0 && both_fail > 0, "instance set is degenerate");
    Ok(format!(
        "{instances} instances ({both_hold} both hold, {both_fail} both fail)"
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "cycle rank",
            budget: Some(Duration::from_secs(1)),
            run: c1_ranks,
        },
        Criterion {
            id: 2,
            name: "sha oracle triangle",
            budget: Some(Duration::from_secs(30)),
            run: c2_sha_triangle,
        },
        Criterion {
            id: 3,
            name: "triviality criterion",
            budget: None,
            run: c3_triviality,
        },
        Criterion {
            id: 4,
            name: "witt kernel",
            budget: None,
            run: c4_witt,
        },
        Criterion {
            id: 5,
            name: "cover counts",
            budget: Some(Duration::from_secs(60)),
            run: c5_cover_counts,
        },
        Criterion {
            id: 6,
            name: "galois detection",
            budget: None,
            run: c6_galois,
        },
        Criterion {
            id: 7,
            name: "homotopy invariance",
            budget: None,
            run: c7_homotopy,
        },
        Criterion {
            id: 8,
            name: "quotient exactness",
            budget: None,
            run: c8_exactness,
        },
        Criterion {
            id: 9,
            name: "factorization",
            budget: None,
            run: c9_factorization,
        },
        Criterion {
            id: 10,
            name: "trans-factor equivalence",
            budget: Some(Duration::from_secs(60)),
            run: c10_trans_factor,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        let budget = c.budget.map_or("none".to_string(), |b| format!("{b:?}"));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} [{:>2}] {} (tolerance exact, budget {budget}, {elapsed:.2?}): {detail}",
            c.id, c.name
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
