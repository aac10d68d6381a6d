//! Permutations of `{0, .., n-1}` in one-line notation.
//!
//! Internally points are zero-based. Cycle notation and the serialized
//! one-line form are one-based, which is how users write them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation stored as its one-line image vector. The derived ordering is
/// lexicographic on that vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Builds a permutation from zero-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of degree `n` from one-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Option<Perm> {
        let mut p: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                if x == 0 || y == 0 || x > n || y > n || touched[x - 1] {
                    return None;
                }
                touched[x - 1] = true;
                p[x - 1] = y - 1;
            }
        }
        Some(Perm(p))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x] = i;
        }
        Perm(r)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        other.compose(self)
    }

    /// `tau ∘ self ∘ tau⁻¹`, i.e. `self` with its points relabelled by `tau`.
    pub fn conjugate_by(&self, tau: &Perm) -> Perm {
        let mut r = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[tau.0[i]] = tau.0[x];
        }
        Perm(r)
    }

    /// One-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x + 1).collect()
    }

    pub fn from_one_line(images: &[usize]) -> Option<Perm> {
        let mut v = Vec::with_capacity(images.len());
        for &x in images {
            v.push(x.checked_sub(1)?);
        }
        Perm::from_images(v)
    }

    /// Disjoint cycles of length at least two, one-based, each starting at
    /// its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Position of this permutation in the lexicographic order of `S_n`.
    pub fn lex_rank(&self) -> u64 {
        let n = self.0.len();
        let mut rank = 0u64;
        let mut used = vec![false; n];
        for (i, &x) in self.0.iter().enumerate() {
            let smaller = (0..x).filter(|&y| !used[y]).count() as u64;
            rank = rank * (n - i) as u64 + smaller;
            used[x] = true;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: u64) -> Perm {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = (rank % base) as usize;
            rank /= base;
        }
        let mut free: Vec<usize> = (0..n).collect();
        Perm(digits.into_iter().map(|d| free.remove(d)).collect())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_line(&v).ok_or_else(|| serde::de::Error::custom("not a permutation"))
    }
}

/// Parses one-based cycle notation such as `(1 2)(3 4)` or `()`.
///
/// The degree is `min_degree` raised to the largest point mentioned.
pub fn parse_cycles(text: &str, min_degree: usize) -> Result<Perm> {
    let err = |message: &str| Error::GroupSpec {
        spec: text.to_string(),
        message: message.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| err("expected `(`"))?;
        let close = body.find(')').ok_or_else(|| err("unclosed cycle"))?;
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| err("cycle entries must be positive integers"))
            })
            .collect::<Result<Vec<_>>>()?;
        if points.contains(&0) {
            return Err(err("points are numbered from 1"));
        }
        cycles.push(points);
        rest = body[close + 1..].trim_start();
    }
    let degree = cycles
        .iter()
        .flatten()
        .copied()
        .max()
        .unwrap_or(0)
        .max(min_degree);
    Perm::from_cycles(degree, &cycles).ok_or_else(|| err("cycles are not disjoint"))
}

/// Number of permutations of `n` points, saturating.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |acc, k| acc.saturating_mul(k))
}
