//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..n` with `0` the identity. Each construction
//! family fixes its element order:
//!
//! * `C<n>`: `a^k` at index `k`.
//! * `D<n>` (order `2n`): `r^k s^e` at index `k + n e`.
//! * `S<n>`: lexicographic order of one-line notation.
//! * `AxB`: pairs `(a, b)` at index `a |B| + b`.
//! * `perm:<gens>`: breadth-first closure from the identity, multiplying on
//!   the right by the generators in the order given.
//! * `table:<rows>`: as written.
//!
//! Permutation groups multiply left to right: `a * b` applies `a` first.

use std::collections::{HashMap, VecDeque};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::perm::{factorial, parse_cycles, Perm};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Wraps a verified table. `table[a * n + b]` is `a * b`.
    fn from_verified(name: String, order: usize, table: Vec<u32>, labels: Vec<String>) -> Self {
        let mut inverses = vec![0; order];
        for a in 0..order {
            inverses[a] = (0..order)
                .find(|&b| table[a * order + b] == 0)
                .expect("latin square");
        }
        FiniteGroup {
            name,
            order,
            table,
            inverses,
            labels,
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            })
            .collect();
        Self::from_verified(format!("C{n}"), n, table, labels)
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let order = 2 * n;
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            let (a, e) = (x % n, x / n);
            for y in 0..order {
                let (b, f) = (y % n, y / n);
                let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                table[x * order + y] = (k + n * ((e + f) % 2)) as u32;
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (k, e) = (x % n, x / n);
                match (k, e) {
                    (0, 0) => "1".to_string(),
                    (0, _) => "s".to_string(),
                    (_, 0) => format!("r^{k}"),
                    _ => format!("r^{k} s"),
                }
            })
            .collect();
        Self::from_verified(format!("D{n}"), order, table, labels)
    }

    pub fn symmetric(n: usize, limits: &Limits) -> Result<Self> {
        let order = factorial(n);
        if order > limits.max_group_order as u64 {
            return Err(Error::GroupOrderCap {
                cap: limits.max_group_order,
            });
        }
        let order = order as usize;
        let elems: Vec<Perm> = (0..order as u64)
            .map(|r| Perm::from_lex_rank(n, r))
            .collect();
        let mut table = vec![0u32; order * order];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * order + b] = pa.then(pb).lex_rank() as u32;
            }
        }
        let labels = elems.iter().map(|p| p.to_string()).collect();
        Ok(Self::from_verified(format!("S{n}"), order, table, labels))
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, limits: &Limits) -> Result<Self> {
        let order = a
            .order
            .checked_mul(b.order)
            .filter(|&o| o <= limits.max_group_order);
        let order = order.ok_or(Error::GroupOrderCap {
            cap: limits.max_group_order,
        })?;
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            let (x1, x2) = (x / b.order, x % b.order);
            for y in 0..order {
                let (y1, y2) = (y / b.order, y % b.order);
                table[x * order + y] = (a.mul(x1, y1) * b.order + b.mul(x2, y2)) as u32;
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", a.label(x / b.order), b.label(x % b.order)))
            .collect();
        Ok(Self::from_verified(
            format!("{}x{}", a.name, b.name),
            order,
            table,
            labels,
        ))
    }

    /// Closure of a set of permutations of a common degree.
    pub fn from_perms(name: &str, gens: &[Perm], limits: &Limits) -> Result<(Self, Vec<Perm>)> {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = gens.iter().map(|g| pad(g, degree)).collect();
        let mut elems = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for s in &gens {
                let y = x.then(s);
                if !index.contains_key(&y) {
                    if elems.len() >= limits.max_group_order {
                        return Err(Error::GroupOrderCap {
                            cap: limits.max_group_order,
                        });
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0u32; order * order];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * order + b] = index[&pa.then(pb)] as u32;
            }
        }
        let labels = elems.iter().map(|p| p.to_string()).collect();
        Ok((
            Self::from_verified(name.to_string(), order, table, labels),
            elems,
        ))
    }

    /// Checks the group axioms on an explicit table with `0` as identity.
    /// Associativity is exhaustive up to order 64 and sampled beyond.
    pub fn from_table(name: &str, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::NotAGroup(format!("entry {x} out of range")));
                }
                table.push(x as u32);
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::NotAGroup("0 is not a two-sided identity".into()));
            }
            let right = (0..n).find(|&b| at(a, b) == 0);
            match right {
                Some(b) if at(b, a) == 0 => {}
                _ => {
                    return Err(Error::NotAGroup(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::NotAGroup(format!(
                                "({a}*{b})*{c} != {a}*({b}*{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let (a, b, c) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !assoc(a, b, c) {
                    return Err(Error::NotAGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                }
            }
        }
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                let x = at(a, b);
                if seen[x] {
                    return Err(Error::NotAGroup(format!("row {a} repeats {x}")));
                }
                seen[x] = true;
            }
        }
        let labels = (0..n).map(|x| x.to_string()).collect();
        Ok(Self::from_verified(name.to_string(), n, table, labels))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                element: x,
                order: self.order,
            })
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Partition into conjugacy classes, each sorted, classes ordered by
    /// least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if assigned[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn centralizer(&self, g: usize) -> Result<Subgroup> {
        self.check_element(g)?;
        let elements = (0..self.order)
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect();
        Ok(self.make_subgroup(elements))
    }

    pub fn center(&self) -> Subgroup {
        let elements = (0..self.order)
            .filter(|&z| (0..self.order).all(|h| self.mul(z, h) == self.mul(h, z)))
            .collect();
        self.make_subgroup(elements)
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Result<Subgroup> {
        for &g in gens {
            self.check_element(g)?;
        }
        Ok(self.make_subgroup(self.closure(gens)))
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    fn make_subgroup(&self, elements: Vec<usize>) -> Subgroup {
        let mut inside = vec![false; self.order];
        for &x in &elements {
            inside[x] = true;
        }
        let is_normal = (0..self.order).all(|g| elements.iter().all(|&x| inside[self.conj(g, x)]));
        Subgroup {
            parent_order: self.order,
            elements,
            is_normal,
        }
    }

    pub fn whole(&self) -> Subgroup {
        self.make_subgroup((0..self.order).collect())
    }

    /// Every subgroup, ordered by size and then by element list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut head = 0;
        while head < found.len() {
            let current = found[head].clone();
            head += 1;
            for x in 0..self.order {
                if current.binary_search(&x).is_ok() {
                    continue;
                }
                let mut gens = current.clone();
                gens.push(x);
                let bigger = self.closure(&gens);
                if !found.contains(&bigger) {
                    found.push(bigger);
                }
            }
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found.into_iter().map(|e| self.make_subgroup(e)).collect()
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| s.is_normal)
            .collect()
    }

    /// `G / N` with cosets ordered by least member, and the projection map.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !normal.is_normal || normal.parent_order != self.order {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if projection[x] != usize::MAX {
                continue;
            }
            let coset = reps.len();
            reps.push(x);
            for &n in &normal.elements {
                projection[self.mul(x, n)] = coset;
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = projection[self.mul(a, b)] as u32;
            }
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if table[projection[a] * q + projection[b]] as usize != projection[self.mul(a, b)] {
                    return Err(Error::NotNormal);
                }
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("[{}]", self.label(r)))
            .collect();
        let name = format!("{}/N{}", self.name, normal.order());
        Ok((Self::from_verified(name, q, table, labels), projection))
    }
}

fn pad(p: &Perm, degree: usize) -> Perm {
    let mut images = p.images().to_vec();
    images.extend(p.degree()..degree);
    Perm::from_images(images).expect("padding keeps bijectivity")
}

/// A subgroup as a sorted list of parent element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
    pub is_normal: bool,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Greedy generating set: adds the least element not yet generated.
    pub fn generators(&self, group: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &x in &self.elements {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = group.closure(&gens);
            }
        }
        gens
    }

    /// The subgroup as a group in its own right, elements in parent order,
    /// together with the inclusion map.
    pub fn to_group(&self, group: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let n = self.elements.len();
        let local: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = local[&group.mul(a, b)] as u32;
            }
        }
        let labels = self
            .elements
            .iter()
            .map(|&x| group.label(x).to_string())
            .collect();
        let name = format!("{}<{}>", group.name(), n);
        (
            FiniteGroup::from_verified(name, n, table, labels),
            self.elements.clone(),
        )
    }
}

/// Parses a group spec: `C<n>`, `D<n>`, `S<n>`, products joined by `x`,
/// `perm:<cycles>,<cycles>,..` or `table:<row>;<row>;..`.
pub fn build_group(spec: &str, limits: &Limits) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let err = |message: &str| Error::GroupSpec {
        spec: spec.to_string(),
        message: message.to_string(),
    };
    if let Some(body) = spec.strip_prefix("perm:") {
        let gens = split_top_level(body)
            .into_iter()
            .map(|g| parse_cycles(g, 0))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| err("generators must be cycle notation like (1 2)(3 4)"))?;
        return Ok(FiniteGroup::from_perms(spec, &gens, limits)?.0);
    }
    if let Some(body) = spec.strip_prefix("table:") {
        let rows = body
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| err("table entries must be indices"))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        return FiniteGroup::from_table(spec, rows);
    }
    let mut factors = Vec::new();
    for part in spec.split('x') {
        let part = part.trim();
        let mut chars = part.chars();
        let family = chars.next().ok_or_else(|| err("empty factor"))?;
        let n: usize = chars
            .as_str()
            .parse()
            .map_err(|_| err("expected C<n>, D<n> or S<n>"))?;
        if n == 0 {
            return Err(err("parameter must be positive"));
        }
        let g = match family {
            'C' if n <= limits.max_group_order => FiniteGroup::cyclic(n),
            'D' if 2 * n <= limits.max_group_order => FiniteGroup::dihedral(n),
            'C' | 'D' => {
                return Err(Error::GroupOrderCap {
                    cap: limits.max_group_order,
                })
            }
            'S' => FiniteGroup::symmetric(n, limits)?,
            _ => return Err(err("unknown family; expected C, D or S")),
        };
        factors.push(g);
    }
    let mut iter = factors.into_iter();
    let mut acc = iter.next().ok_or_else(|| err("empty spec"))?;
    for g in iter {
        acc = FiniteGroup::direct_product(&acc, &g, limits)?;
    }
    acc.name = spec.to_string();
    Ok(acc)
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|g| !g.is_empty()).collect()
}
