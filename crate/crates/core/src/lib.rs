//! Finite combinatorial invariants of local-global principles over arithmetic
//! curves.
//!
//! The pipeline runs from a combinatorial description of a closed fiber
//! ([`model`]) to its bipartite reduction graph and free fundamental group
//! ([`graph`]), and from there to finite invariants computed against finite
//! groups ([`groups`]): split covers as monodromy data ([`covers`]), the
//! obstruction set as conjugation classes of homomorphisms ([`sha`]) and the
//! double-coset model of the coboundary map ([`mv`]).

pub mod covers;
pub mod error;
pub mod graph;
pub mod groups;
pub mod model;
pub mod mv;
pub mod perm;
pub mod sha;

pub use error::{Error, Result};
pub use graph::{GaugeData, GaugedGraph, ReductionGraph};
pub use groups::{FiniteGroup, Subgroup};
pub use model::ClosedFiberModel;
pub use perm::Perm;

/// Enumeration limits shared by every exhaustive computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of tuples an enumeration may visit.
    pub max_states: u64,
    /// Largest group a permutation closure may produce.
    pub max_group_order: usize,
}

impl Limits {
    pub const DEFAULT_MAX_STATES: u64 = 10_000_000;
    pub const DEFAULT_MAX_GROUP_ORDER: usize = 10_000;

    pub fn with_max_states(max_states: u64) -> Self {
        Limits {
            max_states,
            ..Limits::default()
        }
    }

    /// Fails with `state-cap-exceeded` unless `base^exp` fits under the cap.
    pub(crate) fn check_power(&self, base: u64, exp: usize) -> Result<u64> {
        let mut total: u64 = 1;
        for _ in 0..exp {
            total = match total.checked_mul(base) {
                Some(t) if t <= self.max_states => t,
                _ => {
                    return Err(Error::StateCapExceeded {
                        cap: self.max_states,
                    })
                }
            };
        }
        if total > self.max_states {
            return Err(Error::StateCapExceeded {
                cap: self.max_states,
            });
        }
        Ok(total)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: Self::DEFAULT_MAX_STATES,
            max_group_order: Self::DEFAULT_MAX_GROUP_ORDER,
        }
    }
}
