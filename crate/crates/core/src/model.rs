//! Combinatorial descriptions of the closed fiber of a normal model.
//!
//! A model lists the irreducible components of the closed fiber and a set of
//! marked closed points. For each point it records how many analytic branches
//! of the fiber at that point lie on each component. Every component stands
//! for the open set obtained by removing the marked points from it, so
//! component identifiers double as the component-side vertices of the
//! reduction graph.
//!
//! The text format is line oriented:
//!
//! ```text
//! # two rational components meeting in two nodes
//! component C1
//! component C2
//! point P on C1:1 C2:1
//! point Q on C1:1 C2:1
//! ```
//!
//! The marked points are assumed to contain every point at which the fiber is
//! not unibranched. That cannot be checked from the combinatorial data alone,
//! so [`validate`] always emits a `hyp-unverifiable` reminder.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// Index into [`ClosedFiberModel::components`].
    pub component: usize,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub name: String,
    /// Branch counts in the order they were listed.
    pub branches: Vec<Branch>,
}

impl MarkedPoint {
    pub fn total_branches(&self) -> u32 {
        self.branches.iter().map(|b| b.count).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFiberModel {
    components: Vec<String>,
    points: Vec<MarkedPoint>,
}

impl ClosedFiberModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c == name)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p.name == name)
    }

    /// Branch count `b(point, component)`; zero when absent.
    pub fn branch_count(&self, point: &str, component: &str) -> u32 {
        let (Some(p), Some(c)) = (self.point_index(point), self.component_index(component)) else {
            return 0;
        };
        self.points[p]
            .branches
            .iter()
            .filter(|b| b.component == c)
            .map(|b| b.count)
            .sum()
    }

    fn is_used(&self, name: &str) -> bool {
        self.component_index(name).is_some() || self.point_index(name).is_some()
    }

    pub fn add_component(&mut self, name: &str) -> Result<usize> {
        if self.is_used(name) {
            return Err(Error::DuplicateIdentifier {
                line: 0,
                ident: name.to_string(),
            });
        }
        self.components.push(name.to_string());
        Ok(self.components.len() - 1)
    }

    /// Adds a point with the given `(component, count)` branches.
    pub fn add_point(&mut self, name: &str, branches: &[(&str, u32)]) -> Result<usize> {
        if self.is_used(name) {
            return Err(Error::DuplicateIdentifier {
                line: 0,
                ident: name.to_string(),
            });
        }
        let mut resolved: Vec<Branch> = Vec::with_capacity(branches.len());
        for &(comp, count) in branches {
            let component = self
                .component_index(comp)
                .ok_or_else(|| Error::UnknownComponent(comp.to_string()))?;
            if count == 0 {
                return Err(Error::NonPositiveCount {
                    line: 0,
                    component: comp.to_string(),
                });
            }
            if resolved.iter().any(|b| b.component == component) {
                return Err(Error::DuplicateBranch {
                    line: 0,
                    point: name.to_string(),
                    component: comp.to_string(),
                });
            }
            resolved.push(Branch { component, count });
        }
        self.points.push(MarkedPoint {
            name: name.to_string(),
            branches: resolved,
        });
        Ok(self.points.len() - 1)
    }

    /// One component with `r` self-nodes. The reduction graph has cycle rank
    /// `r`; for `r = 0` a single smooth point is marked instead.
    pub fn bouquet(r: usize) -> Self {
        let mut m = Self::new();
        m.add_component("C").unwrap();
        if r == 0 {
            m.add_point("Q", &[("C", 1)]).unwrap();
        }
        for i in 1..=r {
            m.add_point(&format!("Q{i}"), &[("C", 2)]).unwrap();
        }
        m
    }

    /// `k` components glued in a chain at `k - 1` nodes (a single smooth
    /// marked point when `k = 1`).
    pub fn chain(k: usize) -> Self {
        assert!(k >= 1);
        let mut m = Self::new();
        for i in 1..=k {
            m.add_component(&format!("C{i}")).unwrap();
        }
        if k == 1 {
            m.add_point("Q", &[("C1", 1)]).unwrap();
        }
        for i in 1..k {
            m.add_point(
                &format!("Q{i}"),
                &[(&format!("C{i}"), 1), (&format!("C{}", i + 1), 1)],
            )
            .unwrap();
        }
        m
    }

    /// Serializes to the line-oriented text format: components first, then
    /// points, each in declaration order.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            out.push_str("component ");
            out.push_str(c);
            out.push('\n');
        }
        for p in &self.points {
            out.push_str("point ");
            out.push_str(&p.name);
            out.push_str(" on");
            for b in &p.branches {
                out.push_str(&format!(" {}:{}", self.components[b.component], b.count));
            }
            out.push('\n');
        }
        out
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.is_used(&name) {
            name.push('\'');
        }
        name
    }

    fn fresh_exceptional(&self) -> String {
        (1..)
            .map(|k| format!("E{k}"))
            .find(|n| !self.is_used(n))
            .unwrap()
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-')
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

/// Splits a line into whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

/// Parses the model text format.
pub fn parse_model(text: &str) -> Result<ClosedFiberModel> {
    struct PendingPoint<'a> {
        line: usize,
        name: &'a str,
        branches: Vec<(&'a str, u32)>,
    }

    let mut components: Vec<String> = Vec::new();
    let mut pending: Vec<PendingPoint> = Vec::new();
    let mut seen: HashMap<&str, ()> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| Error::Syntax {
            line: line_no,
            column,
            message,
        };

        let ident_at = |idx: usize, what: &str| -> Result<&str> {
            match toks.get(idx) {
                Some(&(_, t)) if is_ident(t) => Ok(t),
                Some(&(c, t)) => Err(syntax(c, format!("invalid {what} identifier `{t}`"))),
                None => Err(syntax(
                    line.chars().count() + 1,
                    format!("expected {what} identifier"),
                )),
            }
        };

        match keyword {
            "component" => {
                let name = ident_at(1, "component")?;
                if let Some(&(c, t)) = toks.get(2) {
                    return Err(syntax(c, format!("unexpected `{t}`")));
                }
                if seen.insert(name, ()).is_some() {
                    return Err(Error::DuplicateIdentifier {
                        line: line_no,
                        ident: name.to_string(),
                    });
                }
                components.push(name.to_string());
            }
            "point" => {
                let name = ident_at(1, "point")?;
                match toks.get(2) {
                    Some(&(_, "on")) => {}
                    Some(&(c, t)) => return Err(syntax(c, format!("expected `on`, found `{t}`"))),
                    None => return Err(syntax(line.chars().count() + 1, "expected `on`".into())),
                }
                if toks.len() < 4 {
                    return Err(syntax(
                        line.chars().count() + 1,
                        "expected at least one <component>:<count>".into(),
                    ));
                }
                if seen.insert(name, ()).is_some() {
                    return Err(Error::DuplicateIdentifier {
                        line: line_no,
                        ident: name.to_string(),
                    });
                }
                let mut branches: Vec<(&str, u32)> = Vec::new();
                for &(c, tok) in &toks[3..] {
                    let Some((comp, count)) = tok.rsplit_once(':') else {
                        return Err(syntax(
                            c,
                            format!("expected <component>:<count>, found `{tok}`"),
                        ));
                    };
                    if !is_ident(comp) {
                        return Err(syntax(c, format!("invalid component identifier `{comp}`")));
                    }
                    let count_col = c + comp.chars().count() + 1;
                    let value: i64 = count.parse().map_err(|_| {
                        syntax(
                            count_col,
                            format!("branch count `{count}` is not an integer"),
                        )
                    })?;
                    if value <= 0 {
                        return Err(Error::NonPositiveCount {
                            line: line_no,
                            component: comp.to_string(),
                        });
                    }
                    let value = u32::try_from(value).map_err(|_| {
                        syntax(count_col, format!("branch count `{count}` is too large"))
                    })?;
                    if branches.iter().any(|(b, _)| *b == comp) {
                        return Err(Error::DuplicateBranch {
                            line: line_no,
                            point: name.to_string(),
                            component: comp.to_string(),
                        });
                    }
                    branches.push((comp, value));
                }
                pending.push(PendingPoint {
                    line: line_no,
                    name,
                    branches,
                });
            }
            other => return Err(syntax(col, format!("unknown keyword `{other}`"))),
        }
    }

    let mut model = ClosedFiberModel {
        components,
        points: Vec::new(),
    };
    for p in pending {
        let mut branches = Vec::with_capacity(p.branches.len());
        for (comp, count) in p.branches {
            let component =
                model
                    .component_index(comp)
                    .ok_or_else(|| Error::UndeclaredComponent {
                        line: p.line,
                        component: comp.to_string(),
                    })?;
            branches.push(Branch { component, count });
        }
        model.points.push(MarkedPoint {
            name: p.name.to_string(),
            branches,
        });
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub location: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    fn push(&mut self, severity: Severity, code: &str, message: String, location: Option<&str>) {
        self.0.push(Diagnostic {
            severity,
            code: code.to_string(),
            message,
            location: location.map(str::to_string),
        });
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| d.severity == Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.0.iter().any(|d| d.code == code)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.errors().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", d.code, d.message)?;
        }
        Ok(())
    }
}

/// Checks the structural invariants of a model. Never fails; problems are
/// reported as diagnostics.
pub fn validate(model: &ClosedFiberModel) -> Diagnostics {
    let mut diags = Diagnostics::default();
    let nc = model.components.len();
    let np = model.points.len();

    if nc == 0 && np == 0 {
        diags.push(
            Severity::Error,
            "empty-model",
            "model has no components and no points".into(),
            None,
        );
    }
    for p in &model.points {
        if p.total_branches() == 0 {
            diags.push(
                Severity::Error,
                "point-without-branch",
                format!("point `{}` has no branches", p.name),
                Some(&p.name),
            );
        }
    }
    let mut carried = vec![false; nc];
    for p in &model.points {
        for b in &p.branches {
            if b.count > 0 {
                carried[b.component] = true;
            }
        }
    }
    for (c, name) in model.components.iter().enumerate() {
        if !carried[c] {
            diags.push(
                Severity::Error,
                "component-without-point",
                format!("component `{name}` carries no marked point"),
                Some(name),
            );
        }
    }

    // union-find over points followed by components
    let mut parent: Vec<usize> = (0..np + nc).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, p) in model.points.iter().enumerate() {
        for b in p.branches.iter().filter(|b| b.count > 0) {
            let (a, c) = (root(&mut parent, i), root(&mut parent, np + b.component));
            parent[a.max(c)] = a.min(c);
        }
    }
    let pieces = (0..np + nc).filter(|&x| root(&mut parent, x) == x).count();
    if pieces > 1 {
        diags.push(
            Severity::Error,
            "disconnected-fiber",
            format!("the incidence graph has {pieces} connected pieces"),
            None,
        );
    }

    diags.push(
        Severity::Warning,
        "hyp-unverifiable",
        "assuming the marked points include every point where the fiber is not unibranched".into(),
        None,
    );
    diags
}

/// Fails with `invalid-model` when [`validate`] reports errors.
pub fn ensure_valid(model: &ClosedFiberModel) -> Result<()> {
    let diags = validate(model);
    if diags.has_errors() {
        Err(Error::InvalidModel(diags))
    } else {
        Ok(())
    }
}

/// Marks one more smooth point on `component`.
pub fn refine(model: &ClosedFiberModel, component: &str) -> Result<ClosedFiberModel> {
    let c = model
        .component_index(component)
        .ok_or_else(|| Error::UnknownComponent(component.to_string()))?;
    let base = model
        .points
        .iter()
        .find(|p| p.branches.iter().any(|b| b.component == c))
        .map(|p| p.name.clone())
        .unwrap_or_else(|| component.to_string());
    let name = model.fresh_name(&format!("{base}'"));
    let mut out = model.clone();
    out.points.push(MarkedPoint {
        name,
        branches: vec![Branch {
            component: c,
            count: 1,
        }],
    });
    Ok(out)
}

/// Blows up a smooth point or an ordinary double point.
///
/// A smooth point `Q` on `C` is replaced by an exceptional component `E`
/// meeting `C` at a new point `Q'`. A double point is replaced by `E` and
/// two points, each joining `E` to one of the two original branches.
pub fn blowup(model: &ClosedFiberModel, point: &str) -> Result<ClosedFiberModel> {
    let pi = model
        .point_index(point)
        .ok_or_else(|| Error::UnknownPoint(point.to_string()))?;
    let old = &model.points[pi];
    let total = old.total_branches();
    // one entry per branch, each naming its carrier
    let carriers: Vec<usize> = old
        .branches
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.component, b.count as usize))
        .collect();
    if !(total == 1 || total == 2) {
        return Err(Error::UnsupportedSingularity {
            point: point.to_string(),
            branches: total,
        });
    }

    let mut out = model.clone();
    out.points.remove(pi);
    let e_name = model.fresh_exceptional();
    out.components.push(e_name);
    let e = out.components.len() - 1;

    let mut fresh = Vec::new();
    if total == 1 {
        let name = out.fresh_name(&format!("{point}'"));
        fresh.push(MarkedPoint {
            name,
            branches: vec![
                Branch {
                    component: carriers[0],
                    count: 1,
                },
                Branch {
                    component: e,
                    count: 1,
                },
            ],
        });
    } else {
        for (k, &c) in carriers.iter().enumerate() {
            let mut name = format!("{point}{}", k + 1);
            while out.is_used(&name) || fresh.iter().any(|p: &MarkedPoint| p.name == name) {
                name.push('\'');
            }
            fresh.push(MarkedPoint {
                name,
                branches: vec![
                    Branch {
                        component: c,
                        count: 1,
                    },
                    Branch {
                        component: e,
                        count: 1,
                    },
                ],
            });
        }
    }
    out.points.splice(pi..pi, fresh);
    Ok(out)
}

/// Whether [`blowup`] accepts this point.
pub fn blowup_supported(point: &MarkedPoint) -> bool {
    matches!(point.total_branches(), 1 | 2)
}

/// Draws a random valid model with up to `max_components` components and
/// `max_extra_points` points beyond those needed for connectivity.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    max_components: usize,
    max_extra_points: usize,
) -> ClosedFiberModel {
    let k = rng.gen_range(1..=max_components.max(1));
    let mut m = ClosedFiberModel::new();
    for i in 1..=k {
        m.add_component(&format!("C{i}")).unwrap();
    }
    let mut next = 1;
    // a spanning set of nodes keeps the fiber connected
    for j in 1..k {
        let earlier = rng.gen_range(0..j);
        let (a, b) = (m.components[earlier].clone(), m.components[j].clone());
        m.add_point(&format!("Q{next}"), &[(&a, 1), (&b, 1)])
            .unwrap();
        next += 1;
    }
    let extra = rng.gen_range(usize::from(k == 1)..=max_extra_points.max(1));
    for _ in 0..extra {
        let arms = rng.gen_range(1..=3.min(k));
        let mut chosen: Vec<usize> = (0..k).collect();
        for i in 0..arms {
            let j = rng.gen_range(i..k);
            chosen.swap(i, j);
        }
        let branches: Vec<(String, u32)> = chosen[..arms]
            .iter()
            .map(|&c| (m.components[c].clone(), rng.gen_range(1..=2)))
            .collect();
        let refs: Vec<(&str, u32)> = branches.iter().map(|(c, n)| (c.as_str(), *n)).collect();
        m.add_point(&format!("Q{next}"), &refs).unwrap();
        next += 1;
    }
    m
}
