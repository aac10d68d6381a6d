use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use shagraph::graph::classical_graph;
use shagraph::groups::build_group;
use shagraph::model::{self, blowup_supported, random_model, ClosedFiberModel};
use shagraph::mv::{coboundary_orbits, trans_factor_check, FactorizationSystem};
use shagraph::sha::{compute_sha, quotient_sequence_check, sha_count_burnside, Assertion};
use shagraph::{Error, FiniteGroup, GaugedGraph, Limits, Subgroup};

use crate::report::to_value;
use crate::{Failure, Output};

/// Orbits listed in a report before truncation.
const ORBIT_LISTING_CAP: usize = 256;

#[derive(Serialize)]
struct VerifyReport<T: Serialize> {
    kind: &'static str,
    check: &'static str,
    passed: bool,
    details: T,
}

fn finish<T: Serialize>(check: &'static str, passed: bool, details: T) -> Result<Output, Failure> {
    let json = to_value(&VerifyReport {
        kind: "verify",
        check,
        passed,
        details,
    });
    Ok(Output {
        json,
        dot: None,
        passed,
    })
}

fn normal_subgroups(group: &FiniteGroup, spec: Option<&str>) -> Result<Vec<Subgroup>, Failure> {
    let Some(spec) = spec else {
        return Ok(group.normal_subgroups());
    };
    if spec.trim() == "center" {
        return Ok(vec![group.center()]);
    }
    let gens = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            Failure::Usage(format!(
                "--normal expects `center` or element indices, got `{spec}`"
            ))
        })?;
    let n = group.subgroup(&gens)?;
    if !n.is_normal {
        return Err(Error::NotNormal.into());
    }
    Ok(vec![n])
}

#[derive(Serialize)]
struct OrbitJson {
    least: Vec<usize>,
    size: usize,
}

#[derive(Serialize)]
struct SystemReport {
    fingerprint: String,
    group_order: usize,
    edge_count: usize,
    orbit_count: usize,
    pointed_orbit_size: usize,
    orbits: Vec<OrbitJson>,
    orbits_truncated: bool,
}

#[derive(Serialize)]
struct DoubleCosetDetails {
    group_spec: String,
    rank: usize,
    system: SystemReport,
    sha_size: usize,
    burnside_count: u64,
}

pub fn double_coset(m: &ClosedFiberModel, spec: &str, limits: &Limits) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let group = build_group(spec, limits)?;
    let sys = FactorizationSystem::constant(&gg.graph, &group)?;
    let orbits = coboundary_orbits(&sys, limits)?;
    let sha = compute_sha(&gg, &group, limits)?.size();
    let burnside = sha_count_burnside(&gg, &group)? as u64;
    let decode = |mut idx: usize| {
        let mut t = vec![0; sys.edge_count()];
        for slot in t.iter_mut().rev() {
            *slot = idx % group.order();
            idx /= group.order();
        }
        t
    };
    let listed = orbits
        .least
        .iter()
        .zip(&orbits.sizes)
        .take(ORBIT_LISTING_CAP)
        .map(|(&least, &size)| OrbitJson {
            least: decode(least),
            size,
        })
        .collect();
    let system = SystemReport {
        fingerprint: sys.fingerprint().to_string(),
        group_order: group.order(),
        edge_count: sys.edge_count(),
        orbit_count: orbits.orbit_count(),
        pointed_orbit_size: orbits.pointed_orbit_size(),
        orbits: listed,
        orbits_truncated: orbits.orbit_count() > ORBIT_LISTING_CAP,
    };
    let passed = system.orbit_count == sha && sha as u64 == burnside;
    let details = DoubleCosetDetails {
        group_spec: spec.to_string(),
        rank: gg.rank(),
        system,
        sha_size: sha,
        burnside_count: burnside,
    };
    finish("double-coset", passed, details)
}

#[derive(Serialize)]
struct ExactnessCase {
    normal: Vec<usize>,
    sizes: [usize; 3],
    inclusion_map: Vec<usize>,
    projection_map: Vec<usize>,
    trivial_kernel: Assertion,
    image_equals_kernel: Assertion,
    surjective: Assertion,
    inclusion_injective: bool,
    exact: bool,
}

#[derive(Serialize)]
struct ExactnessDetails {
    group_spec: String,
    rank: usize,
    cases: Vec<ExactnessCase>,
}

pub fn quotient_exactness(
    m: &ClosedFiberModel,
    spec: &str,
    normal: Option<&str>,
    limits: &Limits,
) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let group = build_group(spec, limits)?;
    let mut cases = Vec::new();
    for n in normal_subgroups(&group, normal)? {
        let rep = quotient_sequence_check(&gg, &group, &n, limits)?;
        cases.push(ExactnessCase {
            normal: n.elements().to_vec(),
            sizes: rep.sizes,
            exact: rep.exact(),
            inclusion_map: rep.inclusion_map,
            projection_map: rep.projection_map,
            trivial_kernel: rep.trivial_kernel,
            image_equals_kernel: rep.image_equals_kernel,
            surjective: rep.surjective,
            inclusion_injective: rep.inclusion_injective,
        });
    }
    let passed = cases.iter().all(|c| c.exact);
    finish(
        "quotient-exactness",
        passed,
        ExactnessDetails {
            group_spec: spec.to_string(),
            rank: gg.rank(),
            cases,
        },
    )
}

#[derive(Serialize)]
struct TransFactorCase {
    normal: Vec<usize>,
    orbit_counts: [usize; 2],
    bijective: bool,
    fibers_factor: bool,
    agree: bool,
    bijection_counterexample: Option<(Vec<usize>, Vec<usize>)>,
    fiber_counterexample: Option<(Vec<usize>, Vec<usize>)>,
    pairs_checked: u64,
}

#[derive(Serialize)]
struct TransFactorDetails {
    group_spec: String,
    edge_count: usize,
    cases: Vec<TransFactorCase>,
}

pub fn trans_factor(
    m: &ClosedFiberModel,
    spec: &str,
    normal: Option<&str>,
    limits: &Limits,
) -> Result<Output, Failure> {
    let gg = GaugedGraph::from_model(m)?;
    let group = build_group(spec, limits)?;
    let sys = FactorizationSystem::constant(&gg.graph, &group)?;
    let mut cases = Vec::new();
    for n in normal_subgroups(&group, normal)? {
        let rep = trans_factor_check(&sys, &n, limits)?;
        cases.push(TransFactorCase {
            normal: n.elements().to_vec(),
            orbit_counts: rep.orbit_counts,
            bijective: rep.bijective,
            fibers_factor: rep.fibers_factor,
            agree: rep.agree(),
            pairs_checked: rep.pairs_checked,
            bijection_counterexample: rep.bijection_counterexample,
            fiber_counterexample: rep.fiber_counterexample,
        });
    }
    let passed = cases.iter().all(|c| c.agree);
    finish(
        "trans-factor",
        passed,
        TransFactorDetails {
            group_spec: spec.to_string(),
            edge_count: sys.edge_count(),
            cases,
        },
    )
}

#[derive(Serialize)]
struct HomotopyCase {
    model: String,
    operation: &'static str,
    target: String,
    rank_before: usize,
    rank_after: usize,
    sha_before: usize,
    sha_after: usize,
    /// Rank agreement with the classical dual graph, for nodal models.
    classical_check: Option<bool>,
    invariant: bool,
}

#[derive(Serialize)]
struct HomotopyDetails {
    group_spec: String,
    seed: Option<u64>,
    cases: Vec<HomotopyCase>,
}

fn classical_check(m: &ClosedFiberModel) -> Result<Option<bool>, Failure> {
    match classical_graph(m) {
        Ok((_, check)) => Ok(Some(check)),
        Err(Error::NotNodal(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn compare(
    label: &str,
    before: &ClosedFiberModel,
    operation: &'static str,
    target: &str,
    group: &FiniteGroup,
    limits: &Limits,
) -> Result<HomotopyCase, Failure> {
    let after = match operation {
        "refine" => model::refine(before, target)?,
        _ => model::blowup(before, target)?,
    };
    let (a, b) = (
        GaugedGraph::from_model(before)?,
        GaugedGraph::from_model(&after)?,
    );
    let sha_before = compute_sha(&a, group, limits)?.size();
    let sha_after = compute_sha(&b, group, limits)?.size();
    let checks = [classical_check(before)?, classical_check(&after)?];
    let invariant =
        a.rank() == b.rank() && sha_before == sha_after && checks.iter().all(|c| c.unwrap_or(true));
    Ok(HomotopyCase {
        model: label.to_string(),
        operation,
        target: target.to_string(),
        rank_before: a.rank(),
        rank_after: b.rank(),
        sha_before,
        sha_after,
        classical_check: checks[0],
        invariant,
    })
}

/// With a model, every component is refined and every supported point blown
/// up; otherwise `samples` random models each get one of both.
pub fn homotopy(
    m: Option<&ClosedFiberModel>,
    spec: &str,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Output, Failure> {
    let group = build_group(spec, limits)?;
    let mut cases = Vec::new();
    match m {
        Some(m) => {
            for c in m.components() {
                cases.push(compare("input", m, "refine", c, &group, limits)?);
            }
            for p in m.points().iter().filter(|p| blowup_supported(p)) {
                cases.push(compare("input", m, "blowup", &p.name, &group, limits)?);
            }
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..samples {
                let m = random_model(&mut rng, 3, 2);
                let label = format!("random {i}");
                let c = &m.components()[rng.gen_range(0..m.components().len())];
                cases.push(compare(&label, &m, "refine", c, &group, limits)?);
                let supported: Vec<&str> = m
                    .points()
                    .iter()
                    .filter(|p| blowup_supported(p))
                    .map(|p| p.name.as_str())
                    .collect();
                if !supported.is_empty() {
                    let p = supported[rng.gen_range(0..supported.len())];
                    cases.push(compare(&label, &m, "blowup", p, &group, limits)?);
                }
            }
        }
    }
    let passed = cases.iter().all(|c| c.invariant);
    let details = HomotopyDetails {
        group_spec: spec.to_string(),
        seed: m.is_none().then_some(seed),
        cases,
    };
    finish("homotopy", passed, details)
}
