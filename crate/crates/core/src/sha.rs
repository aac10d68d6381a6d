//! The obstruction set for rational groups with a given finite component
//! group, as homomorphisms from the free fundamental group modulo
//! conjugation.
//!
//! A homomorphism from the free group of rank `r` is an `r`-tuple of group
//! elements. Two tuples give the same class when one is a simultaneous
//! conjugate of the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GaugedGraph;
use crate::groups::{FiniteGroup, Subgroup};
use crate::Limits;

/// Canonical representatives of conjugation classes of `r`-tuples, sorted
/// lexicographically; the all-identity tuple comes first and is the base
/// point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShaSet {
    pub fingerprint: String,
    pub group: String,
    pub group_order: usize,
    pub rank: usize,
    pub representatives: Vec<Vec<usize>>,
    pub abelian: bool,
}

impl ShaSet {
    pub const POINTED_INDEX: usize = 0;

    pub fn size(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    /// Index of the class containing `tuple`.
    pub fn class_of(&self, group: &FiniteGroup, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.rank {
            return Err(Error::LengthMismatch {
                expected: self.rank,
                found: tuple.len(),
            });
        }
        for &x in tuple {
            group.check_element(x)?;
        }
        let canon = canonical_tuple(group, tuple);
        Ok(self
            .representatives
            .binary_search(&canon)
            .expect("every tuple has a class"))
    }

    /// Componentwise product of two classes. Only defined for abelian
    /// groups, where every class is a single tuple.
    pub fn abelian_product(&self, group: &FiniteGroup, a: usize, b: usize) -> Option<usize> {
        if !self.abelian {
            return None;
        }
        let (x, y) = (self.representatives.get(a)?, self.representatives.get(b)?);
        let prod: Vec<usize> = x.iter().zip(y).map(|(&p, &q)| group.mul(p, q)).collect();
        self.class_of(group, &prod).ok()
    }
}

/// Least simultaneous conjugate of a tuple.
pub fn canonical_tuple(group: &FiniteGroup, tuple: &[usize]) -> Vec<usize> {
    (0..group.order())
        .map(|g| tuple.iter().map(|&x| group.conj(g, x)).collect::<Vec<_>>())
        .min()
        .unwrap()
}

/// Enumerates all `|G|^r` tuples and keeps the least member of each
/// conjugation orbit.
pub fn compute_sha(graph: &GaugedGraph, group: &FiniteGroup, limits: &Limits) -> Result<ShaSet> {
    let r = graph.rank();
    let n = group.order();
    let total = limits.check_power(n as u64, r)? as usize;
    let mut weights = vec![1usize; r];
    for k in (0..r.saturating_sub(1)).rev() {
        weights[k] = weights[k + 1] * n;
    }
    let decode = |mut idx: usize| {
        let mut t = vec![0usize; r];
        for slot in t.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        t
    };

    let mut seen = vec![false; total];
    let mut representatives = Vec::new();
    for idx in 0..total {
        if seen[idx] {
            continue;
        }
        let t = decode(idx);
        for g in 0..n {
            let k: usize = t
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| group.conj(g, x) * w)
                .sum();
            seen[k] = true;
        }
        representatives.push(t);
    }
    Ok(ShaSet {
        fingerprint: graph.fingerprint(),
        group: group.name().to_string(),
        group_order: n,
        rank: r,
        representatives,
        abelian: group.is_abelian(),
    })
}

/// Orbit count by Burnside's lemma: `(1/|G|) Σ_g |C(g)|^r`.
pub fn sha_count_burnside(graph: &GaugedGraph, group: &FiniteGroup) -> Result<u128> {
    let r = u32::try_from(graph.rank()).map_err(|_| Error::StateCapExceeded { cap: u64::MAX })?;
    let overflow = || Error::StateCapExceeded { cap: u64::MAX };
    let mut sum: u128 = 0;
    for class in group.conjugacy_classes() {
        let c = group.centralizer(class[0])?.order() as u128;
        let term = c
            .checked_pow(r)
            .and_then(|p| p.checked_mul(class.len() as u128))
            .ok_or_else(overflow)?;
        sum = sum.checked_add(term).ok_or_else(overflow)?;
    }
    debug_assert_eq!(sum % group.order() as u128, 0);
    Ok(sum / group.order() as u128)
}

/// The set is a single point iff the group is trivial or the graph is a
/// tree.
pub fn is_lgp_trivial(graph: &GaugedGraph, group: &FiniteGroup) -> bool {
    group.order() == 1 || graph.rank() == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittKernelReport {
    pub rank: usize,
    pub order: u64,
    /// Every `{0,1}`-tuple of length `rank`, in lexicographic order.
    pub representatives: Vec<Vec<usize>>,
}

/// The kernel on Witt groups: an elementary abelian 2-group of rank equal to
/// the cycle rank, listed as homomorphisms to `Z/2`.
pub fn witt_kernel(graph: &GaugedGraph, limits: &Limits) -> Result<WittKernelReport> {
    let rank = graph.rank();
    let order = limits.check_power(2, rank)?;
    let representatives = (0..order)
        .map(|code| {
            (0..rank)
                .map(|k| ((code >> (rank - 1 - k)) & 1) as usize)
                .collect()
        })
        .collect();
    Ok(WittKernelReport {
        rank,
        order,
        representatives,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub holds: bool,
    pub detail: String,
}

/// Pointed-set exactness of `1 → Sha(N) → Sha(G) → Sha(G/N) → 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub sizes: [usize; 3],
    /// Class in `Sha(G)` of each class of `Sha(N)`.
    pub inclusion_map: Vec<usize>,
    /// Class in `Sha(G/N)` of each class of `Sha(G)`.
    pub projection_map: Vec<usize>,
    pub trivial_kernel: Assertion,
    pub image_equals_kernel: Assertion,
    pub surjective: Assertion,
    /// Informational; trivial kernel does not imply this.
    pub inclusion_injective: bool,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.trivial_kernel.holds && self.image_equals_kernel.holds && self.surjective.holds
    }
}

pub fn quotient_sequence_check(
    graph: &GaugedGraph,
    group: &FiniteGroup,
    normal: &Subgroup,
    limits: &Limits,
) -> Result<ExactnessReport> {
    if !normal.is_normal {
        return Err(Error::NotNormal);
    }
    let (quotient, projection) = group.quotient(normal)?;
    let (sub, inclusion) = normal.to_group(group);
    let sha_n = compute_sha(graph, &sub, limits)?;
    let sha_g = compute_sha(graph, group, limits)?;
    let sha_q = compute_sha(graph, &quotient, limits)?;

    let inclusion_map = sha_n
        .representatives
        .iter()
        .map(|t| sha_g.class_of(group, &t.iter().map(|&x| inclusion[x]).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let projection_map = sha_g
        .representatives
        .iter()
        .map(|t| {
            sha_q.class_of(
                &quotient,
                &t.iter().map(|&x| projection[x]).collect::<Vec<_>>(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let over_base: Vec<usize> = (0..sha_n.size())
        .filter(|&i| inclusion_map[i] == ShaSet::POINTED_INDEX)
        .collect();
    let trivial_kernel = Assertion {
        holds: over_base == [ShaSet::POINTED_INDEX],
        detail: format!("classes of Sha(N) over the base point: {over_base:?}"),
    };

    let mut image: Vec<usize> = inclusion_map.clone();
    image.sort_unstable();
    image.dedup();
    let kernel: Vec<usize> = (0..sha_g.size())
        .filter(|&i| projection_map[i] == ShaSet::POINTED_INDEX)
        .collect();
    let image_equals_kernel = Assertion {
        holds: image == kernel,
        detail: format!("image {image:?}, kernel {kernel:?}"),
    };

    let mut hit = vec![false; sha_q.size()];
    projection_map.iter().for_each(|&i| hit[i] = true);
    let missed: Vec<usize> = (0..sha_q.size()).filter(|&i| !hit[i]).collect();
    let surjective = Assertion {
        holds: missed.is_empty(),
        detail: format!("classes of Sha(G/N) not hit: {missed:?}"),
    };

    Ok(ExactnessReport {
        sizes: [sha_n.size(), sha_g.size(), sha_q.size()],
        inclusion_injective: image.len() == inclusion_map.len(),
        inclusion_map,
        projection_map,
        trivial_kernel,
        image_equals_kernel,
        surjective,
    })
}
