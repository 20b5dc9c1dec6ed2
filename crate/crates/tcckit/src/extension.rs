//! Local recoloring procedures around a [6,4,6] fan.
//!
//! The configuration is a 6-vertex `v` with consecutive neighbors `w, u, y`
//! where `u` is a 4-vertex adjacent to both `w` and `y` (both 6-vertices) and
//! `x` is the fourth neighbor of `u`. Starting from a proper partial total
//! 8-coloring that leaves only `uv` and `u` (or only `u`) uncolored, the
//! procedures here complete the coloring by a bounded sequence of recolorings.
//! Every step keeps the coloring proper and is recorded in a trace.

use crate::coloring::{
    color_sets, conflicting_elements, placement_ok, solve, validate, Color,
    PartialTotalColoring, SolveOutcome,
};
use crate::graph::{Element, Graph, VertexId};
use crate::patterns::{find_around, DegreeSpec};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Palette size used by all procedures in this module.
pub const PALETTE: usize = 8;

// ---------------------------------------------------------------------------
// configuration

/// What the host provides beyond the bare [6,4,6] fan. The stronger variants
/// unlock the deeper case analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Hypothesis {
    /// Just the fan.
    Base,
    /// `others[0]` is a 4-vertex.
    SecondFour,
    /// `others[0]` is a 4-vertex and `others[2]` is a 3-vertex.
    ThreeNeighbor,
    /// `others[0]` is a 4-vertex adjacent to `w` ([4,6,4,6] around `v`).
    Chain4646,
    /// `others = [r, t, p]` with `r-t-w-u-y-p` around `v`, `d(r) = 4` and
    /// `d(t) = d(p) = 6` ([4,6,6,4,6,6] around `v`).
    Chain466466,
}

/// A [6,4,6] fan around `v` together with the remaining neighbors of `v`.
#[derive(Debug, Clone, Serialize)]
pub struct Config646 {
    pub v: VertexId,
    pub u: VertexId,
    pub w: VertexId,
    pub y: VertexId,
    /// Fourth neighbor of `u`.
    pub x: VertexId,
    /// The three neighbors of `v` outside the fan, ordered per the hypothesis.
    pub others: [VertexId; 3],
    pub hypothesis: Hypothesis,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("derived fact failed: {0}")]
    DerivedFactFailed(String),
    #[error("case not covered: {0}")]
    CaseNotCovered(String),
}

fn hv(msg: impl Into<String>) -> ExtensionError {
    ExtensionError::HypothesisViolated(msg.into())
}

fn dff(msg: impl Into<String>) -> ExtensionError {
    ExtensionError::DerivedFactFailed(msg.into())
}

fn cnc(msg: impl Into<String>) -> ExtensionError {
    ExtensionError::CaseNotCovered(msg.into())
}

/// Checks the structural side conditions of `cfg` against `g`.
pub fn validate_config(g: &Graph, cfg: &Config646) -> Result<(), ExtensionError> {
    let Config646 { v, u, w, y, x, others, hypothesis } = *cfg;
    let deg = |z: VertexId, d: usize, name: &str| {
        if g.degree(z) != d {
            Err(hv(format!("{name} must be a {d}-vertex, got degree {}", g.degree(z))))
        } else {
            Ok(())
        }
    };
    deg(v, 6, "v")?;
    deg(u, 4, "u")?;
    deg(w, 6, "w")?;
    deg(y, 6, "y")?;
    for (a, b, name) in [(v, u, "vu"), (v, w, "vw"), (v, y, "vy"), (u, w, "uw"), (u, y, "uy"), (u, x, "ux")] {
        if !g.has_edge(a, b) {
            return Err(hv(format!("missing edge {name}")));
        }
    }
    let mut expect: BTreeSet<VertexId> = g.neighbors(v).iter().copied().collect();
    for z in [w, u, y] {
        expect.remove(&z);
    }
    let got: BTreeSet<VertexId> = others.iter().copied().collect();
    if expect != got || got.len() != 3 {
        return Err(hv("others must be the three neighbors of v outside the fan"));
    }
    match hypothesis {
        Hypothesis::Base => {}
        Hypothesis::SecondFour => deg(others[0], 4, "others[0]")?,
        Hypothesis::ThreeNeighbor => {
            deg(others[0], 4, "others[0]")?;
            deg(others[2], 3, "others[2]")?;
        }
        Hypothesis::Chain4646 => {
            deg(others[0], 4, "others[0]")?;
            if !g.has_edge(others[0], w) {
                return Err(hv("chain vertex must be adjacent to w"));
            }
        }
        Hypothesis::Chain466466 => {
            let [r, t, p] = others;
            deg(r, 4, "r")?;
            deg(t, 6, "t")?;
            deg(p, 6, "p")?;
            for (a, b, name) in [(r, t, "rt"), (t, w, "tw"), (y, p, "yp")] {
                if !g.has_edge(a, b) {
                    return Err(hv(format!("missing chain edge {name}")));
                }
            }
        }
    }
    Ok(())
}

fn classify(
    g: &Graph,
    w: VertexId,
    y: VertexId,
    others: &[VertexId],
) -> (Hypothesis, [VertexId; 3]) {
    let d = |z: VertexId| g.degree(z);
    // full chain r-t-w-u-y-p
    let mut perms: Vec<[VertexId; 3]> = Vec::new();
    let o = others;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            perms.push([o[i], o[j], o[k]]);
        }
    }
    for [r, t, p] in &perms {
        if d(*r) == 4
            && d(*t) == 6
            && d(*p) == 6
            && g.has_edge(*r, *t)
            && g.has_edge(*t, w)
            && g.has_edge(y, *p)
        {
            return (Hypothesis::Chain466466, [*r, *t, *p]);
        }
    }
    let mut sorted = others.to_vec();
    sorted.sort();
    if let Some(&t) = sorted.iter().find(|&&z| d(z) == 4 && g.has_edge(z, w)) {
        let rest: Vec<_> = sorted.iter().copied().filter(|&z| z != t).collect();
        return (Hypothesis::Chain4646, [t, rest[0], rest[1]]);
    }
    let four = sorted.iter().copied().find(|&z| d(z) == 4);
    let three = sorted.iter().copied().find(|&z| d(z) == 3);
    match (four, three) {
        (Some(v1), Some(v3)) => {
            let v2 = sorted.iter().copied().find(|&z| z != v1 && z != v3).unwrap();
            (Hypothesis::ThreeNeighbor, [v1, v2, v3])
        }
        (Some(v1), None) => {
            let rest: Vec<_> = sorted.iter().copied().filter(|&z| z != v1).collect();
            (Hypothesis::SecondFour, [v1, rest[0], rest[1]])
        }
        _ => (Hypothesis::Base, [sorted[0], sorted[1], sorted[2]]),
    }
}

/// Finds every [6,4,6] fan in `g` and annotates it with the strongest
/// hypothesis it supports. One configuration per fan; when both orientations
/// of the fan qualify, the stronger hypothesis (then the smaller `w`) wins.
pub fn locate_config(g: &Graph) -> Vec<Config646> {
    let specs = [DegreeSpec::Exact(6), DegreeSpec::Exact(4), DegreeSpec::Exact(6)];
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.degree(v) != 6 {
            continue;
        }
        for s in find_around(g, v, &specs) {
            let (a, u, b) = (s.seq[0], s.seq[1], s.seq[2]);
            let xs: Vec<VertexId> = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&q| q != a && q != b && q != v)
                .collect();
            if xs.len() != 1 {
                continue;
            }
            let x = xs[0];
            let others_for = |w: VertexId, y: VertexId| -> Vec<VertexId> {
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&q| q != w && q != u && q != y)
                    .collect()
            };
            let mut best: Option<Config646> = None;
            for (w, y) in [(a, b), (b, a)] {
                let others = others_for(w, y);
                let (hypothesis, others) = classify(g, w, y, &others);
                let cand = Config646 { v, u, w, y, x, others, hypothesis };
                let better = match &best {
                    None => true,
                    Some(prev) => hypothesis > prev.hypothesis,
                };
                if better {
                    best = Some(cand);
                }
            }
            out.push(best.unwrap());
        }
    }
    out.sort_by_key(|c| (c.v, c.u, c.w, c.y));
    out
}

// ---------------------------------------------------------------------------
// traces

/// One recoloring step. `old`/`new` are in the caller's palette; `new = None`
/// erases the element.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub case_label: String,
    #[serde(serialize_with = "elem_as_string")]
    pub element: Element,
    pub old: Option<Color>,
    pub new: Option<Color>,
}

fn elem_as_string<S: Serializer>(e: &Element, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// Serializes a trace as one JSON object per line.
pub fn trace_to_jsonl(trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for s in trace {
        out.push_str(&serde_json::to_string(s).expect("trace step serializes"));
        out.push('\n');
    }
    out
}

/// Re-applies a trace to `start`, checking that each step matches the
/// recorded prior color and keeps the coloring proper.
pub fn replay(
    g: &Graph,
    start: &PartialTotalColoring,
    trace: &[TraceStep],
) -> Result<PartialTotalColoring, String> {
    let mut c = start.clone();
    for s in trace {
        if c.get(s.element) != s.old {
            return Err(format!(
                "step {}: expected {:?} on {}, found {:?}",
                s.step, s.old, s.element, s.element_color_str(&c)
            ));
        }
        match s.new {
            None => {
                c.unset(s.element);
            }
            Some(col) => {
                c.unset(s.element);
                if !placement_ok(g, &c, s.element, col) {
                    return Err(format!("step {}: improper placement on {}", s.step, s.element));
                }
                c.set(s.element, col);
            }
        }
    }
    Ok(c)
}

impl TraceStep {
    fn element_color_str(&self, c: &PartialTotalColoring) -> Option<Color> {
        c.get(self.element)
    }
}

/// Result of a successful extension.
#[derive(Debug, Clone)]
pub struct ExtensionOutcome {
    pub coloring: PartialTotalColoring,
    pub trace: Vec<TraceStep>,
    /// Case labels in the order they fired, deduplicated.
    pub case_labels: Vec<String>,
    /// True when the tabulated cases failed and a bounded local search
    /// produced the extension instead.
    pub used_fallback: bool,
}

// ---------------------------------------------------------------------------
// scene: working coloring plus a palette permutation

type Perm = [Color; 9]; // index 1..=8

fn perm_identity() -> Perm {
    let mut p = [0; 9];
    for c in 1..=8 {
        p[c as usize] = c;
    }
    p
}

fn perm_inverse(p: &Perm) -> Perm {
    let mut inv = [0; 9];
    for c in 1..=8usize {
        inv[p[c] as usize] = c as Color;
    }
    inv
}

/// The working state: the caller-palette coloring (source of the trace) and a
/// renamed copy where the case analysis reads its colors. `to_int` maps
/// caller colors to internal ones.
struct Scene<'a> {
    g: &'a Graph,
    ext: PartialTotalColoring,
    int: PartialTotalColoring,
    to_int: Perm,
    from_int: Perm,
    trace: Vec<TraceStep>,
}

impl<'a> Scene<'a> {
    fn new(g: &'a Graph, start: &PartialTotalColoring) -> Self {
        Scene {
            g,
            ext: start.clone(),
            int: start.clone(),
            to_int: perm_identity(),
            from_int: perm_identity(),
            trace: Vec::new(),
        }
    }

    fn get(&self, e: Element) -> Option<Color> {
        self.int.get(e)
    }

    fn closed(&self, v: VertexId) -> BTreeSet<Color> {
        color_sets(self.g, &self.int, v).closed
    }

    fn incident(&self, v: VertexId) -> BTreeSet<Color> {
        color_sets(self.g, &self.int, v).incident
    }

    fn cbar1(&self, v: VertexId) -> Result<Color, ExtensionError> {
        let comp = color_sets(self.g, &self.int, v).complement_closed;
        if comp.len() == 1 {
            Ok(*comp.iter().next().unwrap())
        } else {
            Err(dff(format!("expected a single missing color at v{v}, found {comp:?}")))
        }
    }

    /// Renames the internal palette by `sigma` (internal -> internal).
    fn permute(&mut self, sigma: &Perm) {
        let pairs: Vec<(Element, Color)> = self.int.iter().collect();
        let mut renamed = PartialTotalColoring::new(self.int.k);
        for (e, c) in pairs {
            renamed.set(e, sigma[c as usize]);
        }
        self.int = renamed;
        let mut to = [0; 9];
        for c in 1..=8usize {
            to[c] = sigma[self.to_int[c] as usize];
        }
        self.to_int = to;
        self.from_int = perm_inverse(&self.to_int);
    }

    /// Applies one atomic batch: erase every element whose color changes,
    /// then assign the targets (internal palette). The whole batch is checked
    /// before anything is committed.
    fn apply(&mut self, label: &str, moves: &[(Element, Color)]) -> Result<(), ExtensionError> {
        let moves: Vec<(Element, Color)> = moves
            .iter()
            .copied()
            .filter(|&(e, c)| self.int.get(e) != Some(c))
            .collect();
        // dry run on a copy of the caller-palette coloring
        let mut sim = self.ext.clone();
        for &(e, _) in &moves {
            sim.unset(e);
        }
        for &(e, c) in &moves {
            let ec = self.from_int[c as usize];
            if !placement_ok(self.g, &sim, e, ec) {
                return Err(cnc(format!("improper move {e} -> {ec} in case {label}")));
            }
            sim.set(e, ec);
        }
        // commit with trace steps
        for &(e, _) in &moves {
            if let Some(old) = self.ext.get(e) {
                self.push_step(label, e, Some(old), None);
                self.ext.unset(e);
                self.int.unset(e);
            }
        }
        for &(e, c) in &moves {
            let ec = self.from_int[c as usize];
            self.push_step(label, e, None, Some(ec));
            self.ext.set(e, ec);
            self.int.set(e, c);
        }
        Ok(())
    }

    fn erase(&mut self, label: &str, e: Element) {
        if let Some(old) = self.ext.get(e) {
            self.push_step(label, e, Some(old), None);
            self.ext.unset(e);
            self.int.unset(e);
        }
    }

    fn push_step(&mut self, label: &str, e: Element, old: Option<Color>, new: Option<Color>) {
        self.trace.push(TraceStep {
            step: self.trace.len(),
            case_label: label.to_string(),
            element: e,
            old,
            new,
        });
    }

    fn finish(self) -> ExtensionOutcome {
        let mut labels: Vec<String> = Vec::new();
        for s in &self.trace {
            if labels.last() != Some(&s.case_label) {
                labels.push(s.case_label.clone());
            }
        }
        ExtensionOutcome {
            coloring: self.ext,
            trace: self.trace,
            case_labels: labels,
            used_fallback: false,
        }
    }
}

fn edge(a: VertexId, b: VertexId) -> Element {
    Element::edge(a, b)
}

fn vert(a: VertexId) -> Element {
    Element::Vertex(a)
}

// ---------------------------------------------------------------------------
// derived-fact reporting

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactStatus {
    /// The fact was checked on this instance and holds.
    Holds,
    /// The fact was checked and is false.
    Failed,
    /// The procedure finished before reaching the fact.
    NotReached,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fact {
    pub name: String,
    pub status: FactStatus,
    pub detail: String,
}

/// Which intermediate conclusions of the vertex procedure were reached on a
/// given instance, and whether they held.
#[derive(Debug, Clone, Serialize)]
pub struct FactReport {
    /// False when a free color existed at `u` and nothing was derived.
    pub applicable: bool,
    /// Case label that completed the coloring, if any.
    pub resolved_by: Option<String>,
    pub facts: Vec<Fact>,
}

impl FactReport {
    fn new() -> Self {
        FactReport { applicable: false, resolved_by: None, facts: Vec::new() }
    }

    fn record(&mut self, name: &str, holds: bool, detail: String) {
        self.facts.push(Fact {
            name: name.to_string(),
            status: if holds { FactStatus::Holds } else { FactStatus::Failed },
            detail,
        });
    }

    /// True when some checked fact failed.
    pub fn any_failed(&self) -> bool {
        self.facts.iter().any(|f| f.status == FactStatus::Failed)
    }
}

// ---------------------------------------------------------------------------
// edge procedure

fn check_uncolored_exactly(
    g: &Graph,
    col: &PartialTotalColoring,
    expect: &[Element],
) -> Result<(), ExtensionError> {
    if col.k != PALETTE {
        return Err(hv(format!("palette must be {PALETTE}, got {}", col.k)));
    }
    for e in g.elements() {
        let should_be_empty = expect.contains(&e);
        if col.get(e).is_some() == should_be_empty {
            return Err(hv(format!(
                "element {e} must be {}",
                if should_be_empty { "uncolored" } else { "colored" }
            )));
        }
    }
    match validate(g, col) {
        Ok(v) if v.is_empty() => Ok(()),
        Ok(_) => Err(hv("input coloring is improper")),
        Err(e) => Err(hv(format!("input coloring invalid: {e}"))),
    }
}

/// Colors the edge `uv`, recoloring nearby elements when no color is free.
/// On entry everything except `uv` and the vertex `u` is colored; on exit
/// only `u` is uncolored.
pub fn extend_edge_uv(
    g: &Graph,
    col: &PartialTotalColoring,
    cfg: &Config646,
) -> Result<ExtensionOutcome, ExtensionError> {
    validate_config(g, cfg)?;
    let uv = edge(cfg.u, cfg.v);
    check_uncolored_exactly(g, col, &[vert(cfg.u), uv])?;
    match edge_inner(g, col, cfg) {
        Ok(out) => Ok(out),
        Err(ExtensionError::CaseNotCovered(msg)) => {
            fallback_local(g, col, cfg.u, true, &msg)
        }
        Err(e) => Err(e),
    }
}

fn edge_inner(
    g: &Graph,
    col: &PartialTotalColoring,
    cfg: &Config646,
) -> Result<ExtensionOutcome, ExtensionError> {
    let mut sc = Scene::new(g, col);
    let (v, u) = (cfg.v, cfg.u);
    let (mut w, mut y) = (cfg.w, cfg.y);
    let x = cfg.x;
    let uv = edge(u, v);

    // a free color on uv ends the procedure immediately
    let mut used: BTreeSet<Color> = sc.closed(v);
    for e in [edge(w, u), edge(u, y), edge(x, u)] {
        used.insert(sc.get(e).expect("u edges colored"));
    }
    if let Some(&c) = (1..=8).collect::<BTreeSet<Color>>().difference(&used).next() {
        sc.apply("uv/free", &[(uv, c)])?;
        return Ok(sc.finish());
    }

    // no free color: |C[v]| = 6 and both missing colors sit on u's edges.
    // Orient the fan so the color playing "7" is on uy, then rename so that
    // C[v] = {1..6}, v = 1, wv = 6, vy = 2, uy = 7.
    let cv = sc.closed(v);
    if cv.len() != 6 {
        return Err(dff(format!("expected six colors on v{v}, found {cv:?}")));
    }
    let outside: Vec<Color> = (1..=8).filter(|c| !cv.contains(c)).collect();
    if !outside.contains(&sc.get(edge(u, y)).unwrap()) {
        if outside.contains(&sc.get(edge(w, u)).unwrap()) {
            std::mem::swap(&mut w, &mut y);
        } else {
            return Err(dff("neither wu nor uy carries a color missing at v"));
        }
    }
    let mut sigma = [0 as Color; 9];
    sigma[sc.get(vert(v)).unwrap() as usize] = 1;
    sigma[sc.get(edge(w, v)).unwrap() as usize] = 6;
    sigma[sc.get(edge(v, y)).unwrap() as usize] = 2;
    let mut rest: Vec<Color> = cv
        .iter()
        .copied()
        .filter(|&c| sigma[c as usize] == 0)
        .collect();
    rest.sort();
    for (i, c) in rest.into_iter().enumerate() {
        sigma[c as usize] = 3 + i as Color;
    }
    sigma[sc.get(edge(u, y)).unwrap() as usize] = 7;
    for c in 1..=8usize {
        if sigma[c] == 0 {
            sigma[c] = 8;
        }
    }
    sc.permute(&sigma);

    let a = sc.get(edge(x, u)).unwrap();
    let b = sc.get(edge(w, u)).unwrap();
    let c = sc.cbar1(y)?;
    let cp = sc.cbar1(w)?;
    let (wv, vy, wu, uy, xu) = (edge(w, v), edge(v, y), edge(w, u), edge(u, y), edge(x, u));

    if a == 8 {
        if c != 8 && c != b {
            sc.apply("uv/a8/c-plain", &[(uy, c), (uv, 7)])?;
        } else if c == b {
            if cp != 7 && cp != 8 {
                sc.apply("uv/a8/c=b/cw-low", &[(wu, cp), (uy, b), (uv, 7)])?;
            } else {
                sc.apply("uv/a8/c=b/cw-high", &[(wv, cp), (uv, 6)])?;
            }
        } else {
            // c == 8
            if b != 2 {
                sc.apply("uv/a8/c8/b-other", &[(vy, 8), (uv, 2)])?;
            } else if matches!(cp, 1 | 3 | 4 | 5) {
                sc.apply("uv/a8/c8/b2/cw-low", &[(wu, cp), (vy, 8), (uv, 2)])?;
            } else if cp == 7 || cp == 8 {
                sc.apply("uv/a8/c8/b2/cw-high", &[(wv, cp), (uv, 6)])?;
            } else {
                return Err(cnc(format!("a=8, c=8, b=2, c'={cp}")));
            }
        }
    } else if b == 8 {
        if cp != 7 && cp != a {
            sc.apply("uv/b8/cw-plain", &[(wu, cp), (uv, 8)])?;
        } else if cp == 7 {
            if a != 6 {
                sc.apply("uv/b8/cw7/a-other", &[(wv, 7), (uv, 6)])?;
            } else if matches!(c, 1 | 3 | 4 | 5) {
                sc.apply("uv/b8/cw7/a6/cy-low", &[(uy, c), (uv, 7)])?;
            } else if c == 6 || c == 8 {
                sc.apply("uv/b8/cw7/a6/cy-high", &[(vy, c), (wv, 7), (uv, 2)])?;
            } else {
                return Err(cnc(format!("b=8, c'=7, a=6, c={c}")));
            }
        } else {
            // c' == a, so a is a low color and x has a spare color c2
            if !(1..=5).contains(&a) {
                return Err(dff(format!("expected low c'=a, got {a}")));
            }
            let cx = color_sets(g, &sc.int, x).complement_closed;
            let Some(&c2) = cx.iter().find(|&&q| q != a) else {
                return Err(dff(format!("no spare color at x{x}")));
            };
            if c2 != 7 && c2 != 8 {
                sc.apply("uv/b8/cw=a/c2-low", &[(xu, c2), (wu, a), (uv, 8)])?;
            } else if c2 == 8 {
                sc.apply("uv/b8/cw=a/c2-8", &[(xu, 8), (wu, a), (wv, 8), (uv, 6)])?;
            } else if c == 6 {
                sc.apply("uv/b8/cw=a/c2-7/cy6", &[(xu, 7), (wu, a), (uy, 6), (uv, 8)])?;
            } else if c == 8 {
                sc.apply("uv/b8/cw=a/c2-7/cy8", &[(xu, 7), (wu, a), (uy, 8), (wv, 8), (uv, 6)])?;
            } else if matches!(c, 1 | 3 | 4 | 5) && c != a {
                sc.apply("uv/b8/cw=a/c2-7/cy-low", &[(xu, 7), (wu, a), (uy, c), (uv, 8)])?;
            } else if c == a {
                sc.apply("uv/b8/cw=a/c2-7/cy=a", &[(xu, 7), (uy, a), (vy, 7), (uv, 2)])?;
            } else {
                return Err(cnc(format!("b=8, c'=a={a}, c2=7, c={c}")));
            }
        }
    } else {
        return Err(dff("one of xu, wu must carry the color 8 after renaming"));
    }
    Ok(sc.finish())
}

// ---------------------------------------------------------------------------
// vertex procedure

struct Roles {
    v: VertexId,
    u: VertexId,
    w: VertexId,
    y: VertexId,
    x: VertexId,
    v1: VertexId,
    v2: VertexId,
    v3: VertexId,
}

/// Colors the vertex `u` given that everything else is colored, following the
/// staged case analysis for the configuration in `cfg`.
pub fn extend_vertex_u(
    g: &Graph,
    col: &PartialTotalColoring,
    cfg: &Config646,
) -> Result<ExtensionOutcome, ExtensionError> {
    validate_config(g, cfg)?;
    check_uncolored_exactly(g, col, &[vert(cfg.u)])?;
    let mut report = FactReport::new();
    match vertex_inner(g, col, cfg, &mut report) {
        Ok(out) => Ok(out),
        Err(ExtensionError::CaseNotCovered(msg)) => {
            fallback_local(g, col, cfg.u, false, &msg)
        }
        Err(e) => Err(e),
    }
}

/// Runs the vertex procedure on a scratch copy and reports which derived
/// facts were reached and whether they held. The input coloring is not
/// modified.
pub fn derive_facts(
    g: &Graph,
    col: &PartialTotalColoring,
    cfg: &Config646,
) -> Result<FactReport, ExtensionError> {
    validate_config(g, cfg)?;
    check_uncolored_exactly(g, col, &[vert(cfg.u)])?;
    let mut report = FactReport::new();
    match vertex_inner(g, col, cfg, &mut report) {
        Ok(_) | Err(ExtensionError::CaseNotCovered(_)) | Err(ExtensionError::DerivedFactFailed(_)) => {
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

fn vertex_inner(
    g: &Graph,
    col: &PartialTotalColoring,
    cfg: &Config646,
    report: &mut FactReport,
) -> Result<ExtensionOutcome, ExtensionError> {
    let mut sc = Scene::new(g, col);
    let mut ro = Roles {
        v: cfg.v,
        u: cfg.u,
        w: cfg.w,
        y: cfg.y,
        x: cfg.x,
        v1: cfg.others[0],
        v2: cfg.others[1],
        v3: cfg.others[2],
    };

    // free color at u
    let mut used: BTreeSet<Color> = BTreeSet::new();
    for z in [ro.v, ro.w, ro.y, ro.x] {
        used.insert(sc.get(vert(z)).expect("neighbors colored"));
        used.insert(sc.get(edge(ro.u, z)).expect("u edges colored"));
    }
    if let Some(&c) = (1..=8).collect::<BTreeSet<Color>>().difference(&used).next() {
        sc.apply("u/free", &[(vert(ro.u), c)])?;
        report.resolved_by = Some("u/free".into());
        return Ok(sc.finish());
    }
    report.applicable = true;

    // forced renaming: v=3, w=2, y=4, x=1, uv=7, wu=6, uy=8, xu=5
    let mut sigma = [0 as Color; 9];
    for (e, t) in [
        (vert(ro.v), 3),
        (vert(ro.w), 2),
        (vert(ro.y), 4),
        (vert(ro.x), 1),
        (edge(ro.u, ro.v), 7),
        (edge(ro.w, ro.u), 6),
        (edge(ro.u, ro.y), 8),
        (edge(ro.x, ro.u), 5),
    ] {
        sigma[sc.get(e).unwrap() as usize] = t;
    }
    sc.permute(&sigma);

    // cheap exits: a low color missing around v, w, or y
    for z in [ro.v, ro.w, ro.y] {
        let cz = sc.closed(z);
        for c3 in 1..=4 {
            if !cz.contains(&c3) {
                let uz = edge(ro.u, z);
                let moved = sc.get(uz).unwrap();
                sc.apply("u/c3", &[(vert(ro.u), moved), (uz, c3)])?;
                report.resolved_by = Some("u/c3".into());
                return Ok(sc.finish());
            }
        }
    }

    if cfg.hypothesis == Hypothesis::Base {
        return Err(cnc("no 4-neighbor of v to branch on"));
    }

    match stage_cv(&mut sc, &mut ro)? {
        Some(label) => {
            report.resolved_by = Some(label);
            return Ok(sc.finish());
        }
        None => {
            let cv = sc.cbar1(ro.v)?;
            report.record("cbar-v-is-5", cv == 5, format!("missing color at v: {cv}"));
            if cv != 5 {
                return Err(dff("v should miss exactly the color 5 here"));
            }
        }
    }

    // if no neighbor of v outside the fan shows 5, swap it onto v
    let nv: BTreeSet<Color> = [ro.v1, ro.v2, ro.v3]
        .iter()
        .map(|&z| sc.get(vert(z)).unwrap())
        .collect();
    if !nv.contains(&5) {
        sc.apply("u/no5-nbrs", &[(vert(ro.v), 5), (vert(ro.u), 3)])?;
        report.resolved_by = Some("u/no5-nbrs".into());
        return Ok(sc.finish());
    }

    match stage_wv(&mut sc, &ro)? {
        Some(label) => {
            report.resolved_by = Some(label);
            return Ok(sc.finish());
        }
        None => {
            let gwv = sc.get(edge(ro.w, ro.v)).unwrap();
            report.record("wv-in-14", gwv == 1 || gwv == 4, format!("wv carries {gwv}"));
            if gwv != 1 && gwv != 4 {
                return Err(dff("wv should carry 1 or 4 here"));
            }
        }
    }

    match stage_cw_cy(&mut sc, &ro, report)? {
        Some(label) => {
            report.resolved_by = Some(label);
            return Ok(sc.finish());
        }
        None => {}
    }

    match stage_others(&mut sc, &ro, report)? {
        Some(label) => {
            report.resolved_by = Some(label);
            return Ok(sc.finish());
        }
        None => {}
    }

    let label = match cfg.hypothesis {
        Hypothesis::ThreeNeighbor => stage_three_neighbor(&mut sc, &ro)?,
        Hypothesis::Chain4646 => stage_chain4(&mut sc, &ro)?,
        Hypothesis::Chain466466 => stage_chain6(&mut sc, &ro)?,
        Hypothesis::SecondFour | Hypothesis::Base => {
            return Err(cnc("all facts established but no terminal case applies"))
        }
    };
    report.resolved_by = Some(label);
    Ok(sc.finish())
}

/// Either `C[v]` misses 5 (continue) or `u` gets colored.
fn stage_cv(sc: &mut Scene, ro: &mut Roles) -> Result<Option<String>, ExtensionError> {
    let mut cv = sc.cbar1(ro.v)?;
    if cv == 6 {
        // mirror the fan: swap w and y and rename (2 4)(6 8)
        let mut sigma = perm_identity();
        sigma[2] = 4;
        sigma[4] = 2;
        sigma[6] = 8;
        sigma[8] = 6;
        sc.permute(&sigma);
        std::mem::swap(&mut ro.w, &mut ro.y);
        cv = 8;
    }
    if cv == 5 {
        return Ok(None);
    }
    if cv != 8 {
        return Err(dff(format!("missing color at v must be 5, 6, or 8, got {cv}")));
    }
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, vy, wu, uy) = (edge(u, v), edge(w, v), edge(v, y), edge(w, u), edge(u, y));
    let gvy = sc.get(vy).unwrap();
    let done = |sc: &mut Scene, label: &str, moves: &[(Element, Color)]| -> Result<Option<String>, ExtensionError> {
        sc.apply(label, moves)?;
        Ok(Some(label.to_string()))
    };
    match gvy {
        1 | 2 => done(sc, "u/cv8/vy12", &[(uy, gvy), (vy, 8), (vert(u), 8)]),
        5 => {
            let gwv = sc.get(wv).unwrap();
            let cp = sc.cbar1(w)?;
            let c = sc.cbar1(y)?;
            match cp {
                7 => done(sc, "u/cv8/vy5/cw7", &[(uv, gwv), (wv, 7), (vert(u), 7)]),
                8 => done(sc, "u/cv8/vy5/cw8", &[(wu, gwv), (wv, 8), (vert(u), 6)]),
                5 if c == 6 => done(
                    sc,
                    "u/cv8/vy5/cw5/cy6",
                    &[(wu, gwv), (wv, 5), (vy, 8), (uy, 6), (vert(u), 8)],
                ),
                5 if c == 7 => done(
                    sc,
                    "u/cv8/vy5/cw5/cy7",
                    &[(uv, gwv), (wv, 5), (vy, 7), (vert(u), 7)],
                ),
                _ => Err(cnc(format!("cv=8, vy=5, c'={cp}, c={c}"))),
            }
        }
        6 => {
            let gwv = sc.get(wv).unwrap();
            if gwv == 1 || gwv == 4 {
                return done(
                    sc,
                    "u/cv8/vy6/wv14",
                    &[(wu, gwv), (wv, 6), (uy, 6), (vy, 8), (vert(u), 8)],
                );
            }
            if gwv != 5 {
                return Err(cnc(format!("cv=8, vy=6, wv={gwv}")));
            }
            let cp = sc.cbar1(w)?;
            let c = sc.cbar1(y)?;
            let nv: BTreeSet<Color> = [ro.v1, ro.v2, ro.v3]
                .iter()
                .map(|&z| sc.get(vert(z)).unwrap())
                .collect();
            let gvv1 = sc.get(edge(v, ro.v1)).unwrap();
            let vv1 = edge(v, ro.v1);
            let cz1 = sc.closed(ro.v1);
            if !nv.contains(&5) {
                done(sc, "u/cv8/vy6/wv5/no5", &[(vert(v), 5), (uv, 3), (wv, cp), (vert(u), 7)])
            } else if !nv.contains(&8) {
                done(sc, "u/cv8/vy6/wv5/no8", &[(vert(v), 8), (vert(u), 3)])
            } else if !nv.contains(&6) {
                let mut moves = vec![(vert(v), 6), (vy, c), (uv, 3), (vert(u), 7)];
                if c == 5 {
                    moves.push((wv, cp));
                }
                done(sc, "u/cv8/vy6/wv5/no6", &moves)
            } else if !cz1.contains(&5) {
                done(sc, "u/cv8/vy6/wv5/z1-no5", &[(uv, gvv1), (vv1, 5), (wv, cp), (vert(u), 7)])
            } else if !cz1.contains(&7) {
                done(sc, "u/cv8/vy6/wv5/z1-no7", &[(uv, gvv1), (vv1, 7), (vert(u), 7)])
            } else if !cz1.contains(&8) {
                done(sc, "u/cv8/vy6/wv5/z1-no8", &[(uv, gvv1), (vv1, 8), (vert(u), 7)])
            } else if !cz1.contains(&6) {
                let mut moves = vec![(uv, gvv1), (vv1, 6), (vy, c), (vert(u), 7)];
                if c == 5 {
                    moves.push((wv, cp));
                }
                done(sc, "u/cv8/vy6/wv5/z1-no6", &moves)
            } else if !nv.contains(&7) && !cz1.contains(&3) {
                done(sc, "u/cv8/vy6/wv5/else", &[(uv, gvv1), (vv1, 3), (vert(v), 7), (vert(u), 3)])
            } else {
                Err(dff("the neighborhood of v1 should miss 3 here"))
            }
        }
        _ => Err(cnc(format!("cv=8, vy={gvy}"))),
    }
}

/// Either `wv` carries 1 or 4 (continue) or `u` gets colored.
fn stage_wv(sc: &mut Scene, ro: &Roles) -> Result<Option<String>, ExtensionError> {
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, vy, wu, uy) = (edge(u, v), edge(w, v), edge(v, y), edge(w, u), edge(u, y));
    let gwv = sc.get(wv).unwrap();
    if gwv == 1 || gwv == 4 {
        return Ok(None);
    }
    if gwv != 8 {
        return Err(dff(format!("wv must carry 1, 4, or 8 here, got {gwv}")));
    }
    let gvy = sc.get(vy).unwrap();
    let c = sc.cbar1(y)?;
    let cp = sc.cbar1(w)?;
    let done = |sc: &mut Scene, label: &str, moves: &[(Element, Color)]| -> Result<Option<String>, ExtensionError> {
        sc.apply(label, moves)?;
        Ok(Some(label.to_string()))
    };
    match gvy {
        1 | 2 => {
            if c == 5 || c == 7 {
                done(sc, "u/wv8/vy12/cy57", &[(uv, gvy), (vy, c), (vert(u), 7)])
            } else if c == 6 {
                done(
                    sc,
                    "u/wv8/vy12/cy6",
                    &[(wv, cp), (uv, gvy), (vy, 8), (uy, 6), (wu, 8), (vert(u), 7)],
                )
            } else {
                Err(cnc(format!("wv=8, vy={gvy}, c={c}")))
            }
        }
        6 => {
            let nv: BTreeSet<Color> = [ro.v1, ro.v2, ro.v3]
                .iter()
                .map(|&z| sc.get(vert(z)).unwrap())
                .collect();
            let vv1 = edge(v, ro.v1);
            let gvv1 = sc.get(vv1).unwrap();
            let cz1 = sc.closed(ro.v1);
            if !nv.contains(&6) {
                done(sc, "u/wv8/vy6/no6", &[(vert(v), 6), (uv, 3), (vy, c), (vert(u), 7)])
            } else if !nv.contains(&8) {
                done(sc, "u/wv8/vy6/no8", &[(vert(v), 8), (uv, 3), (wv, cp), (vert(u), 7)])
            } else if !cz1.contains(&5) {
                done(sc, "u/wv8/vy6/z1-no5", &[(uv, gvv1), (vv1, 5), (vert(u), 7)])
            } else if !cz1.contains(&7) {
                done(sc, "u/wv8/vy6/z1-no7", &[(uv, gvv1), (vv1, 7), (vert(u), 7)])
            } else if !cz1.contains(&6) {
                done(sc, "u/wv8/vy6/z1-no6", &[(uv, gvv1), (vv1, 6), (vy, c), (vert(u), 7)])
            } else if !cz1.contains(&8) {
                done(sc, "u/wv8/vy6/z1-no8", &[(uv, gvv1), (vv1, 8), (wv, cp), (vert(u), 7)])
            } else if !nv.contains(&7) && !cz1.contains(&3) {
                done(sc, "u/wv8/vy6/else", &[(uv, gvv1), (vv1, 3), (vert(v), 7), (vert(u), 3)])
            } else {
                Err(dff("the neighborhood of v1 should miss 3 here"))
            }
        }
        _ => Err(cnc(format!("wv=8, vy={gvy}"))),
    }
}

/// Either `w` misses 8 and `y` misses 6 (continue) or `u` gets colored.
fn stage_cw_cy(
    sc: &mut Scene,
    ro: &Roles,
    report: &mut FactReport,
) -> Result<Option<String>, ExtensionError> {
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, vy, wu, uy) = (edge(u, v), edge(w, v), edge(v, y), edge(w, u), edge(u, y));
    let gwv = sc.get(wv).unwrap();
    let cp = sc.cbar1(w)?;
    if cp == 5 || cp == 7 {
        sc.apply("u/cw57", &[(uv, gwv), (wv, cp), (vert(u), 7)])?;
        return Ok(Some("u/cw57".into()));
    }
    report.record("cbar-w-is-8", cp == 8, format!("missing color at w: {cp}"));
    if cp != 8 {
        return Err(dff("w should miss exactly the color 8 here"));
    }
    let c = sc.cbar1(y)?;
    if c == 5 || c == 7 {
        let gvy = sc.get(vy).unwrap();
        if gvy == 1 || gvy == 2 {
            sc.apply("u/cy57/vy12", &[(uv, gvy), (vy, c), (vert(u), 7)])?;
            return Ok(Some("u/cy57/vy12".into()));
        } else if gvy == 6 {
            sc.apply(
                "u/cy57/vy6",
                &[(uv, gwv), (wv, 6), (uy, 6), (wu, 8), (vy, c), (vert(u), 7)],
            )?;
            return Ok(Some("u/cy57/vy6".into()));
        }
        return Err(cnc(format!("c={c}, vy={gvy}")));
    }
    report.record("cbar-y-is-6", c == 6, format!("missing color at y: {c}"));
    if c != 6 {
        return Err(dff("y should miss exactly the color 6 here"));
    }
    let gvy = sc.get(vy).unwrap();
    report.record("vy-in-12", gvy == 1 || gvy == 2, format!("vy carries {gvy}"));
    if gvy != 1 && gvy != 2 {
        return Err(dff("vy should carry 1 or 2 here"));
    }
    Ok(None)
}

/// Either every outer neighbor of `v` has 5 and 7 nearby (continue) or `u`
/// gets colored.
fn stage_others(
    sc: &mut Scene,
    ro: &Roles,
    report: &mut FactReport,
) -> Result<Option<String>, ExtensionError> {
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, vy, wu, uy) = (edge(u, v), edge(w, v), edge(v, y), edge(w, u), edge(u, y));
    let gwv = sc.get(wv).unwrap();
    let gvy = sc.get(vy).unwrap();
    let edge_colors: BTreeSet<Color> = [ro.v1, ro.v2, ro.v3]
        .iter()
        .map(|&z| sc.get(edge(v, z)).unwrap())
        .chain([gwv, gvy])
        .collect();
    if edge_colors != BTreeSet::from([1, 2, 4, 6, 8]) {
        return Err(dff(format!("v edges outside uv should carry 1,2,4,6,8, got {edge_colors:?}")));
    }
    for (i, z) in [ro.v1, ro.v2, ro.v3].into_iter().enumerate() {
        let zi = i + 1;
        let vz = edge(v, z);
        let gvz = sc.get(vz).unwrap();
        let cz = sc.closed(z);
        if matches!(gvz, 1 | 2 | 4) {
            if !cz.contains(&5) {
                let l = format!("u/z{zi}/low-no5");
                sc.apply(&l, &[(uv, gvz), (vz, 5), (vert(u), 7)])?;
                return Ok(Some(l));
            }
            if !cz.contains(&7) {
                let l = format!("u/z{zi}/low-no7");
                sc.apply(&l, &[(uv, gvz), (vz, 7), (vert(u), 7)])?;
                return Ok(Some(l));
            }
        } else {
            if !cz.contains(&5) {
                let l = format!("u/z{zi}/high-no5");
                sc.apply(&l, &[(uy, gvy), (vy, gvz), (vz, 5), (vert(u), 8)])?;
                return Ok(Some(l));
            }
            if !cz.contains(&7) {
                let l = format!("u/z{zi}/high-no7");
                if gvz == 6 {
                    sc.apply(&l, &[(uv, gvy), (vy, 6), (vz, 7), (vert(u), 7)])?;
                } else {
                    sc.apply(&l, &[(uv, gwv), (wv, 8), (vz, 7), (vert(u), 7)])?;
                }
                return Ok(Some(l));
            }
            if !cz.contains(&gwv) {
                let l = format!("u/z{zi}/high-no-wv");
                sc.apply(&l, &[(vz, gwv), (wu, gwv), (wv, gvz), (vert(u), 6)])?;
                return Ok(Some(l));
            }
            if !cz.contains(&gvy) {
                let l = format!("u/z{zi}/high-no-vy");
                sc.apply(&l, &[(vz, gvy), (uy, gvy), (vy, gvz), (vert(u), 8)])?;
                return Ok(Some(l));
            }
        }
        report.record(
            &format!("z{zi}-has-57"),
            cz.contains(&5) && cz.contains(&7),
            format!("closed colors at v{z}: {cz:?}"),
        );
        if matches!(gvz, 6 | 8) {
            let need: BTreeSet<Color> = [gwv, gvy, 5, 7, gvz].into_iter().collect();
            report.record(
                &format!("z{zi}-closure"),
                need.is_subset(&cz),
                format!("need {need:?} within {cz:?}"),
            );
        }
    }
    Ok(None)
}

/// Terminal case: `v3` is a 3-vertex.
fn stage_three_neighbor(sc: &mut Scene, ro: &Roles) -> Result<String, ExtensionError> {
    let (v, u, y, v1, v3) = (ro.v, ro.u, ro.y, ro.v1, ro.v3);
    let (uv, vy, uy) = (edge(u, v), edge(v, y), edge(u, y));
    let (vv1, vv3) = (edge(v, v1), edge(v, v3));
    let gvy = sc.get(vy).unwrap();
    let gwv = sc.get(edge(ro.w, v)).unwrap();
    let gvv3 = sc.get(vv3).unwrap();
    if !matches!(gvv3, 1 | 2 | 4) {
        // a high color on vv3 forces five colors around a 3-vertex
        return Err(dff(format!("vv3 carries {gvv3}, impossible at a 3-vertex")));
    }
    sc.erase("u/3nbr/erase", vert(v3));
    let inc = sc.incident(v3);
    let label = if !inc.contains(&5) {
        sc.apply("u/3nbr/no5", &[(uv, gvv3), (vv3, 5), (vert(u), 7)])?;
        "u/3nbr/no5".to_string()
    } else if !inc.contains(&7) {
        sc.apply("u/3nbr/no7", &[(uv, gvv3), (vv3, 7), (vert(u), 7)])?;
        "u/3nbr/no7".to_string()
    } else {
        if inc != BTreeSet::from([gvv3, 5, 7]) {
            return Err(dff(format!("edge colors at the 3-vertex should be {{{gvv3},5,7}}, got {inc:?}")));
        }
        let gvv1 = sc.get(vv1).unwrap();
        if !matches!(gvv1, 6 | 8) {
            return Err(dff(format!("vv1 should carry 6 or 8 here, got {gvv1}")));
        }
        let cz1 = sc.closed(v1);
        let need: BTreeSet<Color> = [gwv, gvy, 5, 7, gvv1].into_iter().collect();
        if cz1 != need {
            return Err(dff(format!("closed colors at v1 should be {need:?}, got {cz1:?}")));
        }
        sc.apply(
            "u/3nbr/rotate",
            &[(vv3, gvy), (uy, gvy), (vy, gvv1), (vv1, gvv3), (vert(u), 8)],
        )?;
        "u/3nbr/rotate".to_string()
    };
    // put some color back on the 3-vertex
    let avail = (1..=8).find(|&c| {
        conflicting_elements(sc.g, vert(v3))
            .iter()
            .all(|&f| sc.int.get(f) != Some(c))
    });
    match avail {
        Some(c) => sc.apply("u/3nbr/restore", &[(vert(v3), c)])?,
        None => return Err(cnc("no color left for the erased 3-vertex")),
    }
    Ok(label)
}

/// Establishes 6 and 8 around the 4-vertex `t` adjacent to `w`, or colors `u`.
fn chain_t_colors(
    sc: &mut Scene,
    ro: &Roles,
    t: VertexId,
    prefix: &str,
) -> Result<Option<String>, ExtensionError> {
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, wu, uy) = (edge(u, v), edge(w, v), edge(w, u), edge(u, y));
    let wt = edge(w, t);
    let gwv = sc.get(wv).unwrap();
    let gwt = sc.get(wt).unwrap();
    if !matches!(gwt, 1 | 3 | 4 | 5 | 7) {
        return Err(dff(format!("wt should carry 1, 3, 4, 5, or 7, got {gwt}")));
    }
    let ct = sc.closed(t);
    let _ = (v, y);
    if matches!(gwt, 1 | 3 | 4) {
        for hi in [6, 8] {
            if !ct.contains(&hi) {
                let l = format!("{prefix}/wt-low-no{hi}");
                sc.apply(&l, &[(wu, gwt), (wt, hi), (vert(u), 6)])?;
                return Ok(Some(l));
            }
        }
    } else {
        if !ct.contains(&6) {
            let l = format!("{prefix}/wt-high-no6");
            sc.apply(&l, &[(uv, gwv), (wv, gwt), (wt, 6), (wu, 8), (uy, 6), (vert(u), 7)])?;
            return Ok(Some(l));
        }
        if !ct.contains(&8) {
            let l = format!("{prefix}/wt-high-no8");
            sc.apply(&l, &[(uv, gwv), (wv, gwt), (wt, 8), (vert(u), 7)])?;
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Terminal case: [4,6,4,6] around `v`, with `t = others[0]` adjacent to `w`.
fn stage_chain4(sc: &mut Scene, ro: &Roles) -> Result<String, ExtensionError> {
    let t = ro.v1;
    if let Some(l) = chain_t_colors(sc, ro, t, "u/4646")? {
        return Ok(l);
    }
    let (v, u, w) = (ro.v, ro.u, ro.w);
    let (uv, wv) = (edge(u, v), edge(w, v));
    let (vt, wt) = (edge(v, t), edge(w, t));
    let gvt = sc.get(vt).unwrap();
    if matches!(gvt, 6 | 8) {
        return Err(dff("a high color on vt forces six colors around the 4-vertex t"));
    }
    let ct = sc.closed(t);
    let expect: BTreeSet<Color> = [gvt, 5, 6, 7, 8].into_iter().collect();
    if ct != expect {
        return Err(dff(format!("closed colors at t should be {expect:?}, got {ct:?}")));
    }
    let gwt = sc.get(wt).unwrap();
    if gwt != 5 && gwt != 7 {
        return Err(dff(format!("wt should carry 5 or 7 here, got {gwt}")));
    }
    let gwv = sc.get(wv).unwrap();
    sc.apply("u/4646/swap", &[(uv, gwv), (wv, gwt), (wt, gwv), (vert(u), 7)])?;
    Ok("u/4646/swap".to_string())
}

/// Terminal case: [4,6,6,4,6,6] around `v` as `r-t-w-u-y-p`.
fn stage_chain6(sc: &mut Scene, ro: &Roles) -> Result<String, ExtensionError> {
    let (r, t, p) = (ro.v1, ro.v2, ro.v3);
    let (v, u, w, y) = (ro.v, ro.u, ro.w, ro.y);
    let (uv, wv, vy, wu, uy) = (edge(u, v), edge(w, v), edge(v, y), edge(w, u), edge(u, y));
    let (vr, vt, vp, tr, yp) = (edge(v, r), edge(v, t), edge(v, p), edge(t, r), edge(y, p));
    let gwv = sc.get(wv).unwrap();
    let gvy = sc.get(vy).unwrap();

    if let Some(l) = chain_t_colors(sc, ro, t, "u/466466")? {
        return Ok(l);
    }

    // establish 6 and 8 around p, or color u
    let gyp = sc.get(yp).unwrap();
    if !matches!(gyp, 1 | 2 | 3 | 5 | 7) {
        return Err(dff(format!("yp should carry 1, 2, 3, 5, or 7, got {gyp}")));
    }
    let cp = sc.closed(p);
    if matches!(gyp, 1 | 2 | 3) {
        for hi in [6, 8] {
            if !cp.contains(&hi) {
                let l = format!("u/466466/yp-low-no{hi}");
                sc.apply(&l, &[(uy, gyp), (yp, hi), (vert(u), 8)])?;
                return Ok(l);
            }
        }
    } else {
        if !cp.contains(&8) {
            let l = "u/466466/yp-high-no8";
            sc.apply(l, &[(uv, gvy), (vy, gyp), (yp, 8), (uy, 6), (wu, 8), (vert(u), 7)])?;
            return Ok(l.to_string());
        }
        if !cp.contains(&6) {
            let l = "u/466466/yp-high-no6";
            sc.apply(l, &[(uv, gvy), (vy, gyp), (yp, 6), (vert(u), 7)])?;
            return Ok(l.to_string());
        }
    }

    let gvr = sc.get(vr).unwrap();
    let nv: BTreeSet<Color> = [r, t, p].iter().map(|&z| sc.get(vert(z)).unwrap()).collect();
    let done = |sc: &mut Scene, label: &str, moves: &[(Element, Color)]| -> Result<String, ExtensionError> {
        sc.apply(label, moves)?;
        Ok(label.to_string())
    };
    let swap_wu_uy: [(Element, Color); 2] = [(wu, 8), (uy, 6)];

    if matches!(gvr, 6 | 8) {
        // case 1: the spare high color k moves around the chain
        let k: Color = 6 + 8 - gvr;
        let cr = sc.closed(r);
        let expect: BTreeSet<Color> = [gwv, gvy, 5, 7, gvr].into_iter().collect();
        if cr != expect {
            return Err(dff(format!("closed colors at r should be {expect:?}, got {cr:?}")));
        }
        let gtr = sc.get(tr).unwrap();
        if gtr != gwv && gtr != gvy && gtr != 5 && gtr != 7 {
            return Err(dff(format!("tr should carry {gwv}, {gvy}, 5, or 7, got {gtr}")));
        }
        let gvt = sc.get(vt).unwrap();
        let gvp = sc.get(vp).unwrap();
        if gvt == k {
            // case 1.1
            if gtr == gwv {
                done(sc, "u/466466/c11/tr-wv", &[(wu, gwv), (vt, gwv), (wv, k), (tr, k), (vert(u), 6)])
            } else if gtr == gvy {
                done(sc, "u/466466/c11/tr-vy", &[(uy, gvy), (vt, gvy), (vy, k), (tr, k), (vert(u), 8)])
            } else if gtr == 5 {
                done(sc, "u/466466/c11/tr5", &[(wu, gwv), (wv, k), (tr, k), (vt, 5), (vert(u), 6)])
            } else {
                let mut moves = vec![(uv, gwv), (wv, k), (tr, k), (vt, 7), (vert(u), 7)];
                if k == 6 {
                    moves.extend(swap_wu_uy);
                }
                done(sc, "u/466466/c11/tr7", &moves)
            }
        } else if gvp == k {
            // case 1.2
            let low: BTreeSet<Color> = [gwv, gvy, gvt].into_iter().collect();
            if low != BTreeSet::from([1, 2, 4]) {
                return Err(dff(format!("wv, vy, vt should carry 1, 2, 4, got {low:?}")));
            }
            let cpbar = sc.cbar1(p)?;
            if cpbar == gvt {
                if gtr == gwv {
                    done(
                        sc,
                        "u/466466/c12/pt/tr-wv",
                        &[(vp, gvt), (tr, gvt), (vt, gwv), (wu, gwv), (wv, k), (vert(u), 6)],
                    )
                } else if gtr == gvy {
                    done(
                        sc,
                        "u/466466/c12/pt/tr-vy",
                        &[(vp, gvt), (tr, gvt), (vt, gvy), (uy, gvy), (vy, k), (vert(u), 8)],
                    )
                } else {
                    done(sc, "u/466466/c12/pt/tr57", &[(uv, gvt), (vt, gtr), (tr, gvt), (vert(u), 7)])
                }
            } else if cpbar == 3 {
                if !nv.contains(&k) {
                    done(sc, "u/466466/c12/p3/no-k", &[(vert(v), k), (vp, 3), (vert(u), 3)])
                } else if !nv.contains(&gvr) {
                    done(sc, "u/466466/c12/p3/no-vr", &[(vert(v), gvr), (vr, 3), (vert(u), 3)])
                } else {
                    if nv != BTreeSet::from([5, 6, 8]) {
                        return Err(dff(format!("vertex colors at r, t, p should be 5, 6, 8, got {nv:?}")));
                    }
                    let mut moves = vec![(vert(v), 7), (vp, 3), (uv, gvy), (vy, k), (vert(u), 3)];
                    if k == 8 {
                        moves.extend(swap_wu_uy);
                    }
                    done(sc, "u/466466/c12/p3/else", &moves)
                }
            } else {
                Err(dff(format!("p should miss {gvt} or 3, misses {cpbar}")))
            }
        } else {
            Err(cnc(format!("neither vt nor vp carries the spare color {k}")))
        }
    } else {
        // case 2: vr carries the leftover low color
        let leftover: Vec<Color> = [1, 2, 4].into_iter().filter(|&c| c != gwv && c != gvy).collect();
        if leftover != [gvr] {
            return Err(dff(format!("vr should carry {leftover:?}, got {gvr}")));
        }
        let gvt = sc.get(vt).unwrap();
        if !matches!(gvt, 6 | 8) {
            return Err(dff(format!("vt should carry 6 or 8 here, got {gvt}")));
        }
        let ctbar = sc.cbar1(t)?;
        if ctbar == 3 {
            // case 2.1
            if !nv.contains(&gvt) {
                return done(sc, "u/466466/c21/no-vt", &[(vert(v), gvt), (vt, 3), (vert(u), 3)]);
            }
            if !nv.contains(&7) {
                let mut moves = vec![(vert(v), 7), (uv, gwv), (wv, gvt), (vt, 3), (vert(u), 3)];
                if gvt == 6 {
                    moves.extend(swap_wu_uy);
                }
                return done(sc, "u/466466/c21/no7", &moves);
            }
            if nv != BTreeSet::from([gvt, 7, 5]) {
                return Err(dff(format!("vertex colors at r, t, p should be {{{gvt},7,5}}, got {nv:?}")));
            }
            if gwv == 1 {
                done(sc, "u/466466/c21/wv1", &[(wu, 1), (vert(v), 1), (wv, gvt), (vt, 3), (vert(u), 3)])
            } else if gvy == 1 {
                done(sc, "u/466466/c21/vy1", &[(uy, 1), (vert(v), 1), (vy, gvt), (vt, 3), (vert(u), 3)])
            } else if gvr == 1 {
                let cr = sc.closed(r);
                if !cr.contains(&gwv) {
                    done(
                        sc,
                        "u/466466/c21/vr1/no-wv",
                        &[(vr, gwv), (wu, gwv), (wv, gvt), (vt, 3), (vert(v), 1), (vert(u), 3)],
                    )
                } else if !cr.contains(&gvy) {
                    done(
                        sc,
                        "u/466466/c21/vr1/no-vy",
                        &[(vr, gvy), (uy, gvy), (vy, gvt), (vt, 3), (vert(v), 1), (vert(u), 3)],
                    )
                } else {
                    let expect: BTreeSet<Color> = [gwv, gvy, 5, 7, gvr].into_iter().collect();
                    if cr != expect || cr.contains(&3) {
                        return Err(dff(format!("closed colors at r should be {expect:?} without 3, got {cr:?}")));
                    }
                    done(sc, "u/466466/c21/vr1/else", &[(vr, 3), (vert(v), 1), (vert(u), 3)])
                }
            } else {
                Err(dff("one of wv, vy, vr should carry 1"))
            }
        } else if ctbar == gvr {
            // case 2.2
            let cr = sc.closed(r);
            if !cr.contains(&gwv) {
                return done(
                    sc,
                    "u/466466/c22/no-wv",
                    &[(vr, gwv), (wu, gwv), (wv, gvt), (vt, gvr), (vert(u), 6)],
                );
            }
            if !cr.contains(&gvy) {
                return done(
                    sc,
                    "u/466466/c22/no-vy",
                    &[(vr, gvy), (uy, gvy), (vy, gvt), (vt, gvr), (vert(u), 8)],
                );
            }
            if cr != BTreeSet::from([1, 2, 4, 5, 7]) {
                return Err(dff(format!("closed colors at r should be 1, 2, 4, 5, 7, got {cr:?}")));
            }
            let gtr = sc.get(tr).unwrap();
            if gtr == 7 {
                let mut moves = vec![(uv, gvy), (vy, gvt), (tr, gvt), (vt, 7), (vert(u), 7)];
                if gvt == 8 {
                    moves.extend(swap_wu_uy);
                }
                done(sc, "u/466466/c22/tr7", &moves)
            } else if gtr == gwv {
                done(sc, "u/466466/c22/tr-wv", &[(wu, gwv), (vt, gwv), (wv, gvt), (tr, gvt), (vert(u), 6)])
            } else if gtr == gvy {
                done(sc, "u/466466/c22/tr-vy", &[(uy, gvy), (vt, gvy), (vy, gvt), (tr, gvt), (vert(u), 8)])
            } else if gtr == 5 {
                done(sc, "u/466466/c22/tr5", &[(wu, gwv), (wv, gvt), (tr, gvt), (vt, 5), (vert(u), 6)])
            } else {
                Err(dff(format!("tr should carry {gwv}, {gvy}, 5, or 7, got {gtr}")))
            }
        } else {
            Err(dff(format!("t should miss 3 or {gvr}, misses {ctbar}")))
        }
    }
}

// ---------------------------------------------------------------------------
// fallback: bounded local re-solve

/// Erases everything within a small radius of `u` and re-solves exactly. Used
/// when the tabulated cases fail; `keep_u_open` leaves the vertex `u`
/// uncolored on output (edge mode).
fn fallback_local(
    g: &Graph,
    col: &PartialTotalColoring,
    u: VertexId,
    keep_u_open: bool,
    reason: &str,
) -> Result<ExtensionOutcome, ExtensionError> {
    for radius in [1usize, 2] {
        // vertices within `radius` of u, edges with an endpoint strictly closer
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        dist.insert(u, 0);
        let mut frontier = vec![u];
        for d in 1..=radius {
            let mut next = Vec::new();
            for &z in &frontier {
                for &q in g.neighbors(z) {
                    dist.entry(q).or_insert_with(|| {
                        next.push(q);
                        d
                    });
                }
            }
            frontier = next;
        }
        let mut free: BTreeSet<Element> = BTreeSet::new();
        for (&z, &d) in &dist {
            free.insert(vert(z));
            if d + 1 <= radius {
                for &q in g.neighbors(z) {
                    free.insert(edge(z, q));
                }
            }
        }
        let mut fixed = PartialTotalColoring::new(col.k);
        for (e, c) in col.iter() {
            if !free.contains(&e) {
                fixed.set(e, c);
            }
        }
        let budget = 10_000_000;
        match solve(g, col.k, &fixed, budget) {
            Ok(SolveOutcome::Solution(mut s)) => {
                if keep_u_open {
                    s.unset(vert(u));
                }
                let mut trace = Vec::new();
                let mut step = 0;
                let mut push = |element, old, new| {
                    trace.push(TraceStep {
                        step,
                        case_label: "fallback".into(),
                        element,
                        old,
                        new,
                    });
                    step += 1;
                };
                for e in g.elements() {
                    if let Some(old) = col.get(e) {
                        if s.get(e) != Some(old) {
                            push(e, Some(old), None);
                        }
                    }
                }
                for e in g.elements() {
                    let (old, new) = (col.get(e), s.get(e));
                    if old != new {
                        if let Some(c) = new {
                            push(e, None, Some(c));
                        }
                    }
                }
                return Ok(ExtensionOutcome {
                    coloring: s,
                    trace,
                    case_labels: vec![format!("fallback (radius {radius}): {reason}")],
                    used_fallback: true,
                });
            }
            Ok(_) => continue,
            Err(e) => return Err(cnc(format!("fallback solve failed: {e}"))),
        }
    }
    Err(cnc(format!("{reason}; local re-solve found nothing")))
}

// ---------------------------------------------------------------------------
// reducibility

/// Outcome of [`reducibility_test`].
#[derive(Debug, Clone, Serialize)]
pub enum Reducibility {
    /// Every realizable boundary pattern extends over the removed elements.
    Reducible {
        boundary_size: usize,
        patterns_checked: usize,
    },
    /// A boundary pattern that the remainder can realize but that does not
    /// extend; colors are listed per boundary element.
    NotReducible {
        witness: Vec<(Element, Color)>,
    },
    /// The node budget ran out first.
    Timeout {
        patterns_checked: usize,
    },
}

/// The host minus `target` (a vertex with its edges, or a single edge), with
/// the vertex relabeling that was applied.
pub fn remove_element(g: &Graph, target: Element) -> (Graph, Vec<Option<VertexId>>) {
    match target {
        Element::Edge(e) => {
            let rot: Vec<Vec<VertexId>> = g
                .vertices()
                .map(|v| {
                    g.neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&q| !(v == e.0 && q == e.1 || v == e.1 && q == e.0))
                        .collect()
                })
                .collect();
            let map = (0..g.vertex_count()).map(Some).collect();
            (Graph::build(rot).expect("edge removal keeps a valid rotation"), map)
        }
        Element::Vertex(t) => {
            let map: Vec<Option<VertexId>> = (0..g.vertex_count())
                .map(|v| match v.cmp(&t) {
                    std::cmp::Ordering::Less => Some(v),
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Greater => Some(v - 1),
                })
                .collect();
            let rot: Vec<Vec<VertexId>> = g
                .vertices()
                .filter(|&v| v != t)
                .map(|v| {
                    g.neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&q| q != t)
                        .map(|q| map[q].unwrap())
                        .collect()
                })
                .collect();
            (Graph::build(rot).expect("vertex removal keeps a valid rotation"), map)
        }
    }
}

/// Exhaustively checks whether removing `target` is safe at palette `k`:
/// every proper coloring of the elements bordering the removed part, if it
/// extends to a coloring of the whole remainder, must also extend over the
/// removed elements. Patterns are enumerated once per color permutation.
pub fn reducibility_test(g: &Graph, target: Element, k: usize, budget: u64) -> Reducibility {
    let removed: Vec<Element> = match target {
        Element::Vertex(v) => {
            let mut r = vec![vert(v)];
            for &q in g.neighbors(v) {
                r.push(edge(v, q));
            }
            r
        }
        Element::Edge(_) => vec![target],
    };
    let mut boundary: BTreeSet<Element> = BTreeSet::new();
    for &e in &removed {
        for f in conflicting_elements(g, e) {
            if !removed.contains(&f) {
                boundary.insert(f);
            }
        }
    }
    let boundary: Vec<Element> = order_by_connectivity(&boundary, g);
    let n = boundary.len();
    let index: BTreeMap<Element, usize> = boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    // conflicts among boundary elements, and from removed to boundary
    let badj: Vec<Vec<usize>> = boundary
        .iter()
        .map(|&e| {
            conflicting_elements(g, e)
                .into_iter()
                .filter_map(|f| index.get(&f).copied())
                .filter(|&j| j < index[&e])
                .collect()
        })
        .collect();
    let radj: Vec<(Vec<usize>, Vec<usize>)> = removed
        .iter()
        .map(|&e| {
            let mut to_boundary = Vec::new();
            let mut to_removed = Vec::new();
            for f in conflicting_elements(g, e) {
                if let Some(&j) = index.get(&f) {
                    to_boundary.push(j);
                } else if let Some(j) = removed.iter().position(|&r| r == f) {
                    to_removed.push(j);
                }
            }
            (to_boundary, to_removed)
        })
        .collect();

    let (remainder, vmap) = remove_element(g, target);
    let map_elem = |e: Element| -> Element {
        match e {
            Element::Vertex(v) => vert(vmap[v].expect("boundary survives removal")),
            Element::Edge(ed) => edge(vmap[ed.0].unwrap(), vmap[ed.1].unwrap()),
        }
    };

    let mut colors: Vec<Color> = vec![0; n];
    let mut nodes: u64 = 0;
    let mut patterns: usize = 0;
    // iterative DFS over boundary patterns, canonical color introduction
    let mut stack: Vec<(usize, Color)> = vec![(0, 1)];
    'outer: while let Some((i, c)) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            return Reducibility::Timeout { patterns_checked: patterns };
        }
        if i >= n {
            continue;
        }
        // compute candidate ceiling: at most one more than the max used so far
        let max_used = colors[..i].iter().copied().max().unwrap_or(0);
        let ceil = (max_used + 1).min(k as Color);
        if c > ceil {
            colors[i] = 0;
            continue;
        }
        stack.push((i, c + 1));
        if badj[i].iter().any(|&j| colors[j] == c) {
            continue;
        }
        colors[i] = c;
        if i + 1 < n {
            stack.push((i + 1, 1));
            continue;
        }
        // full boundary pattern: try the local extension
        patterns += 1;
        if extend_removed(&radj, &colors, k, 0, &mut vec![0; removed.len()]) {
            colors[i] = 0;
            continue;
        }
        // locally stuck: is the pattern realizable on the remainder at all?
        let mut fixed = PartialTotalColoring::new(k);
        for (bi, &e) in boundary.iter().enumerate() {
            fixed.set(map_elem(e), colors[bi]);
        }
        match solve(&remainder, k, &fixed, budget.saturating_sub(nodes)) {
            Ok(SolveOutcome::Solution(_)) => {
                return Reducibility::NotReducible {
                    witness: boundary
                        .iter()
                        .enumerate()
                        .map(|(bi, &e)| (e, colors[bi]))
                        .collect(),
                };
            }
            Ok(SolveOutcome::Infeasible { nodes: used }) => {
                nodes += used;
                colors[i] = 0;
                continue 'outer;
            }
            Ok(SolveOutcome::Timeout { .. }) | Err(_) => {
                return Reducibility::Timeout { patterns_checked: patterns };
            }
        }
    }
    Reducibility::Reducible {
        boundary_size: n,
        patterns_checked: patterns,
    }
}

fn order_by_connectivity(set: &BTreeSet<Element>, g: &Graph) -> Vec<Element> {
    let mut rest: Vec<Element> = set.iter().copied().collect();
    let mut out: Vec<Element> = Vec::new();
    while !rest.is_empty() {
        let (pos, _) = rest
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let links = conflicting_elements(g, e)
                    .into_iter()
                    .filter(|f| out.contains(f))
                    .count();
                (i, links)
            })
            .max_by_key(|&(i, links)| (links, std::cmp::Reverse(i)))
            .unwrap();
        out.push(rest.remove(pos));
    }
    out
}

fn extend_removed(
    radj: &[(Vec<usize>, Vec<usize>)],
    boundary: &[Color],
    k: usize,
    i: usize,
    partial: &mut Vec<Color>,
) -> bool {
    if i == radj.len() {
        return true;
    }
    'colors: for c in 1..=k as Color {
        for &j in &radj[i].0 {
            if boundary[j] == c {
                continue 'colors;
            }
        }
        for &j in &radj[i].1 {
            if j < i && partial[j] == c {
                continue 'colors;
            }
        }
        partial[i] = c;
        if extend_removed(radj, boundary, k, i + 1, partial) {
            return true;
        }
    }
    partial[i] = 0;
    false
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{solve_omitting_randomized, solve_randomized};
    use crate::generate::{
        complete_k4, configuration_host, cube, partial_wheel_links, path, HostKind,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn host(kind: HostKind) -> (Graph, crate::generate::Planted) {
        configuration_host(&kind, 0).unwrap()
    }

    #[test]
    fn locate_finds_planted_646() {
        let (g, planted) = host(HostKind::Around646);
        let cfgs = locate_config(&g);
        assert_eq!(cfgs.len(), 1);
        let c = &cfgs[0];
        assert_eq!(c.v, planted.role("v"));
        assert_eq!(c.u, planted.role("u"));
        assert_eq!(c.w, planted.role("w"));
        assert_eq!(c.y, planted.role("y"));
        validate_config(&g, c).unwrap();
    }

    #[test]
    fn locate_cube_empty() {
        assert!(locate_config(&cube()).is_empty());
    }

    #[test]
    fn locate_finds_chain_hypotheses() {
        let (g, planted) = host(HostKind::Around4646);
        let cfgs = locate_config(&g);
        let c = cfgs
            .iter()
            .find(|c| c.hypothesis == Hypothesis::Chain4646)
            .expect("chain hypothesis found");
        assert_eq!(c.others[0], planted.role("t"));
        assert_eq!(c.w, planted.role("w"));

        let (g, planted) = host(HostKind::Around466466);
        let cfgs = locate_config(&g);
        let c = cfgs
            .iter()
            .find(|c| c.hypothesis == Hypothesis::Chain466466)
            .expect("full chain hypothesis found");
        assert_eq!(c.others[0], planted.role("r"));
        assert_eq!(c.others[1], planted.role("t"));
        assert_eq!(c.others[2], planted.role("p"));
        validate_config(&g, c).unwrap();
    }

    /// Host with the fan, a second 4-neighbor, and a 3-neighbor of v.
    fn three_neighbor_host() -> (Graph, Config646) {
        let mut emb = partial_wheel_links(6, &[(1, 2), (2, 3)]);
        emb.pad_to_degree(1, 6).unwrap();
        emb.pad_to_degree(2, 4).unwrap();
        emb.pad_to_degree(3, 6).unwrap();
        emb.pad_to_degree(4, 4).unwrap();
        emb.pad_to_degree(5, 6).unwrap();
        emb.pad_to_degree(6, 3).unwrap();
        let g = emb.to_graph();
        let cfgs = locate_config(&g);
        let cfg = cfgs
            .iter()
            .find(|c| c.hypothesis == Hypothesis::ThreeNeighbor)
            .expect("three-neighbor hypothesis")
            .clone();
        (g, cfg)
    }

    fn frame_pins(g: &Graph, cfg: &Config646) -> PartialTotalColoring {
        let mut pin = PartialTotalColoring::new(PALETTE);
        pin.set(vert(cfg.x), 1);
        pin.set(vert(cfg.w), 2);
        pin.set(vert(cfg.v), 3);
        pin.set(vert(cfg.y), 4);
        pin.set(edge(cfg.x, cfg.u), 5);
        pin.set(edge(cfg.w, cfg.u), 6);
        pin.set(edge(cfg.u, cfg.v), 7);
        pin.set(edge(cfg.u, cfg.y), 8);
        assert!(validate(g, &pin).unwrap().is_empty());
        pin
    }

    fn vertex_instance(
        g: &Graph,
        cfg: &Config646,
        seed: u64,
    ) -> Option<PartialTotalColoring> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pin = frame_pins(g, cfg);
        match solve_omitting_randomized(g, PALETTE, &pin, &[vert(cfg.u)], 10_000_000, &mut rng) {
            Ok(SolveOutcome::Solution(s)) => Some(s),
            _ => None,
        }
    }

    #[test]
    fn edge_extension_on_sampled_colorings() {
        let (g, _) = host(HostKind::Around646Plus4);
        let cfg = locate_config(&g).into_iter().next().unwrap();
        let empty = PartialTotalColoring::new(PALETTE);
        for seed in 0..15u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = solve_randomized(&g, PALETTE, &empty, 10_000_000, &mut rng)
                .unwrap()
                .solution()
                .cloned()
                .expect("host is 8-colorable");
            let mut start = total;
            start.unset(vert(cfg.u));
            start.unset(edge(cfg.u, cfg.v));
            let out = extend_edge_uv(&g, &start, &cfg).unwrap();
            assert!(!out.used_fallback);
            assert!(out.coloring.get(edge(cfg.u, cfg.v)).is_some());
            assert!(out.coloring.get(vert(cfg.u)).is_none());
            assert!(validate(&g, &out.coloring).unwrap().is_empty());
            let replayed = replay(&g, &start, &out.trace).unwrap();
            assert_eq!(replayed, out.coloring);
        }
    }

    #[test]
    fn edge_extension_with_no_free_color() {
        let (g, _) = host(HostKind::Around646Plus4);
        let cfg = locate_config(&g).into_iter().next().unwrap();
        // pin C[v] = {1..6} and both leftover colors onto u's other edges
        let mut deep = 0;
        for seed in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pin = PartialTotalColoring::new(PALETTE);
            pin.set(vert(cfg.v), 1);
            pin.set(edge(cfg.w, cfg.v), 6);
            pin.set(edge(cfg.v, cfg.y), 2);
            for (i, &z) in cfg.others.iter().enumerate() {
                pin.set(edge(cfg.v, z), 3 + i as Color);
            }
            pin.set(edge(cfg.u, cfg.y), 7);
            pin.set(edge(cfg.x, cfg.u), 8);
            if !validate(&g, &pin).unwrap().is_empty() {
                continue;
            }
            let omit = [vert(cfg.u), edge(cfg.u, cfg.v)];
            let Ok(SolveOutcome::Solution(start)) =
                solve_omitting_randomized(&g, PALETTE, &pin, &omit, 10_000_000, &mut rng)
            else {
                continue;
            };
            let out = extend_edge_uv(&g, &start, &cfg).unwrap();
            assert!(!out.used_fallback);
            assert_ne!(out.case_labels[0], "uv/free");
            assert!(validate(&g, &out.coloring).unwrap().is_empty());
            deep += 1;
        }
        assert!(deep >= 5, "only {deep} constrained instances");
    }

    #[test]
    fn vertex_extension_all_hypotheses() {
        let mut hosts: Vec<(Graph, Config646)> = Vec::new();
        for kind in [HostKind::Around4646, HostKind::Around466466] {
            let (g, _) = host(kind);
            let cfg = locate_config(&g)
                .into_iter()
                .max_by_key(|c| c.hypothesis)
                .unwrap();
            hosts.push((g, cfg));
        }
        hosts.push(three_neighbor_host());
        for (g, cfg) in &hosts {
            assert!(matches!(
                cfg.hypothesis,
                Hypothesis::ThreeNeighbor | Hypothesis::Chain4646 | Hypothesis::Chain466466
            ));
            let mut solved = 0;
            for seed in 0..60u64 {
                let Some(start) = vertex_instance(g, cfg, seed) else {
                    continue;
                };
                let out = extend_vertex_u(g, &start, cfg).unwrap();
                assert!(!out.used_fallback, "{:?}: fell back", cfg.hypothesis);
                assert!(out.coloring.is_total(g));
                assert!(validate(g, &out.coloring).unwrap().is_empty());
                let replayed = replay(g, &start, &out.trace).unwrap();
                assert_eq!(replayed, out.coloring);
                solved += 1;
            }
            assert!(solved >= 20, "{:?}: only {solved} instances", cfg.hypothesis);
        }
    }

    #[test]
    fn derived_facts_hold_on_pinned_instances() {
        let (g, cfg) = three_neighbor_host();
        let mut applicable = 0;
        for seed in 0..40u64 {
            let Some(start) = vertex_instance(&g, &cfg, seed) else {
                continue;
            };
            let report = derive_facts(&g, &start, &cfg).unwrap();
            assert!(!report.any_failed(), "{report:?}");
            if report.applicable {
                applicable += 1;
            }
        }
        assert!(applicable >= 10);
    }

    #[test]
    fn jsonl_trace_round_trips_by_line() {
        let (g, _) = host(HostKind::Around646);
        let cfg = locate_config(&g).into_iter().next().unwrap();
        let empty = PartialTotalColoring::new(PALETTE);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let total = solve_randomized(&g, PALETTE, &empty, 10_000_000, &mut rng)
            .unwrap()
            .solution()
            .cloned()
            .unwrap();
        let mut start = total;
        start.unset(vert(cfg.u));
        start.unset(edge(cfg.u, cfg.v));
        let out = extend_edge_uv(&g, &start, &cfg).unwrap();
        let jsonl = trace_to_jsonl(&out.trace);
        for (i, line) in jsonl.lines().enumerate() {
            let val: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(val["step"], i);
            assert!(val["element"].is_string());
        }
    }

    #[test]
    fn middle_path_vertex_reducible_at_four_not_three() {
        let g = path(3);
        match reducibility_test(&g, vert(1), 4, 1_000_000) {
            Reducibility::Reducible { .. } => {}
            other => panic!("expected reducible, got {other:?}"),
        }
        // with 3 colors, equal endpoint colors block the middle vertex
        match reducibility_test(&g, vert(1), 3, 1_000_000) {
            Reducibility::NotReducible { witness } => {
                assert_eq!(witness, vec![(vert(0), 1), (vert(2), 1)]);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn k4_vertex_not_reducible_at_four_colors() {
        let g = complete_k4();
        match reducibility_test(&g, vert(0), 4, 1_000_000) {
            Reducibility::NotReducible { witness } => {
                // the witness must be realizable on the remainder
                let (rem, map) = remove_element(&g, vert(0));
                let mut fixed = PartialTotalColoring::new(4);
                for (e, c) in witness {
                    let e = match e {
                        Element::Vertex(v) => vert(map[v].unwrap()),
                        Element::Edge(ed) => edge(map[ed.0].unwrap(), map[ed.1].unwrap()),
                    };
                    fixed.set(e, c);
                }
                assert!(matches!(
                    solve(&rem, 4, &fixed, 1_000_000).unwrap(),
                    SolveOutcome::Solution(_)
                ));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}
