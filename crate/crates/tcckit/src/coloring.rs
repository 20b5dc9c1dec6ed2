//! Total-coloring data model, properness checking, color-set queries, and the
//! exact backtracking oracle for the total chromatic number.

use crate::graph::{EdgeId, Element, Graph};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

pub type Color = u8;

/// Partial assignment of colors `1..=k` to vertices and edges. Absent means
/// uncolored. Properness of the colored portion is checked by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTotalColoring {
    pub k: usize,
    assign: BTreeMap<Element, Color>,
}

impl PartialTotalColoring {
    pub fn new(k: usize) -> Self {
        PartialTotalColoring {
            k,
            assign: BTreeMap::new(),
        }
    }

    pub fn get(&self, e: Element) -> Option<Color> {
        self.assign.get(&e).copied()
    }

    pub fn set(&mut self, e: Element, c: Color) {
        assert!(c >= 1 && (c as usize) <= self.k, "color out of palette");
        self.assign.insert(e, c);
    }

    pub fn unset(&mut self, e: Element) -> Option<Color> {
        self.assign.remove(&e)
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, Color)> + '_ {
        self.assign.iter().map(|(&e, &c)| (e, c))
    }

    /// True when every vertex and edge of `g` is colored.
    pub fn is_total(&self, g: &Graph) -> bool {
        g.elements().iter().all(|&e| self.get(e).is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConflictKind {
    VertexVertex,
    EdgeEdge,
    VertexEdge,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub a: Element,
    pub b: Element,
    pub kind: ConflictKind,
    pub color: Color,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} and {} both colored {}", self.kind, self.a, self.b, self.color)
    }
}

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("element {0} does not belong to the graph")]
    ForeignElement(Element),
    #[error("fixed part is not a proper partial coloring")]
    ImproperFixed,
    #[error("search aborted: node budget {0} exhausted")]
    Timeout(u64),
}

fn check_membership(g: &Graph, c: &PartialTotalColoring) -> Result<(), ColoringError> {
    for (e, _) in c.iter() {
        let ok = match e {
            Element::Vertex(v) => v < g.vertex_count(),
            Element::Edge(EdgeId(u, v)) => v < g.vertex_count() && g.has_edge(u, v),
        };
        if !ok {
            return Err(ColoringError::ForeignElement(e));
        }
    }
    Ok(())
}

/// All properness violations in the colored portion of `c`.
pub fn validate(g: &Graph, c: &PartialTotalColoring) -> Result<Vec<Violation>, ColoringError> {
    check_membership(g, c)?;
    let mut out = Vec::new();
    for &EdgeId(u, v) in g.edges() {
        if let (Some(cu), Some(cv)) = (c.get(Element::Vertex(u)), c.get(Element::Vertex(v))) {
            if cu == cv {
                out.push(Violation {
                    a: Element::Vertex(u),
                    b: Element::Vertex(v),
                    kind: ConflictKind::VertexVertex,
                    color: cu,
                });
            }
        }
        if let Some(ce) = c.get(Element::edge(u, v)) {
            for &w in [u, v].iter() {
                if c.get(Element::Vertex(w)) == Some(ce) {
                    out.push(Violation {
                        a: Element::Vertex(w),
                        b: Element::edge(u, v),
                        kind: ConflictKind::VertexEdge,
                        color: ce,
                    });
                }
            }
        }
    }
    for v in g.vertices() {
        let nbrs = g.neighbors(v);
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                let (e1, e2) = (Element::edge(v, nbrs[i]), Element::edge(v, nbrs[j]));
                if let (Some(c1), Some(c2)) = (c.get(e1), c.get(e2)) {
                    if c1 == c2 {
                        out.push(Violation {
                            a: e1.min(e2),
                            b: e1.max(e2),
                            kind: ConflictKind::EdgeEdge,
                            color: c1,
                        });
                    }
                }
            }
        }
    }
    // Edge-edge pairs are reported once per shared endpoint; dedup.
    out.sort_by_key(|v| (v.a, v.b, v.color));
    out.dedup_by_key(|v| (v.a, v.b, v.color));
    Ok(out)
}

/// Elements adjacent to `e` in the total-coloring conflict graph.
pub fn conflicting_elements(g: &Graph, e: Element) -> Vec<Element> {
    match e {
        Element::Vertex(v) => {
            let mut out: Vec<Element> = g.neighbors(v).iter().map(|&u| Element::Vertex(u)).collect();
            out.extend(g.neighbors(v).iter().map(|&u| Element::edge(v, u)));
            out
        }
        Element::Edge(EdgeId(u, v)) => {
            let mut out = vec![Element::Vertex(u), Element::Vertex(v)];
            for &w in g.neighbors(u) {
                if w != v {
                    out.push(Element::edge(u, w));
                }
            }
            for &w in g.neighbors(v) {
                if w != u {
                    out.push(Element::edge(v, w));
                }
            }
            out
        }
    }
}

/// True when assigning (or keeping) `color` on `e` conflicts with no currently
/// colored neighbor of `e`.
pub fn placement_ok(g: &Graph, c: &PartialTotalColoring, e: Element, color: Color) -> bool {
    conflicting_elements(g, e).iter().all(|&f| c.get(f) != Some(color))
}

/// Color sets around a vertex: `incident` is C(v), `closed` is C[v].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorSets {
    pub incident: BTreeSet<Color>,
    pub closed: BTreeSet<Color>,
    pub complement_incident: BTreeSet<Color>,
    pub complement_closed: BTreeSet<Color>,
}

pub fn color_sets(g: &Graph, c: &PartialTotalColoring, v: usize) -> ColorSets {
    let incident: BTreeSet<Color> = g
        .neighbors(v)
        .iter()
        .filter_map(|&u| c.get(Element::edge(v, u)))
        .collect();
    let mut closed = incident.clone();
    if let Some(cv) = c.get(Element::Vertex(v)) {
        closed.insert(cv);
    }
    let palette: BTreeSet<Color> = (1..=c.k as Color).collect();
    ColorSets {
        complement_incident: palette.difference(&incident).copied().collect(),
        complement_closed: palette.difference(&closed).copied().collect(),
        incident,
        closed,
    }
}

/// Outcome of an exact search.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// A proper total k-coloring extending the fixed part.
    Solution(PartialTotalColoring),
    /// The search space was exhausted: no completion exists.
    Infeasible { nodes: u64 },
    /// The node budget ran out before a verdict.
    Timeout { nodes: u64 },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&PartialTotalColoring> {
        match self {
            SolveOutcome::Solution(c) => Some(c),
            _ => None,
        }
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

struct Searcher<'a> {
    g: &'a Graph,
    elements: Vec<Element>,
    adj: Vec<Vec<u32>>,
    colors: Vec<u8>, // 0 = uncolored
    skip: Vec<bool>, // omitted from the search, left uncolored
    k: usize,
    budget: u64,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, k: usize, budget: u64) -> Self {
        let elements = g.elements();
        let index: BTreeMap<Element, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let adj = elements
            .iter()
            .map(|&e| {
                conflicting_elements(g, e)
                    .into_iter()
                    .map(|f| index[&f])
                    .collect()
            })
            .collect();
        let n = index.len();
        Searcher {
            g,
            elements,
            adj,
            colors: vec![0; n],
            skip: vec![false; n],
            k,
            budget,
            nodes: 0,
        }
    }

    fn mark_omitted(&mut self, omit: &[Element]) {
        for (i, e) in self.elements.iter().enumerate() {
            if omit.contains(e) {
                self.skip[i] = true;
            }
        }
    }

    fn forbidden_mask(&self, i: usize) -> u64 {
        let mut mask = 0u64;
        for &j in &self.adj[i] {
            let c = self.colors[j as usize];
            if c > 0 {
                mask |= 1 << (c - 1);
            }
        }
        mask
    }

    /// Most-constrained-first: fewest available colors, ties by element order.
    fn pick(&self) -> Option<(usize, u64)> {
        let full = if self.k >= 64 { !0 } else { (1u64 << self.k) - 1 };
        let mut best: Option<(usize, u64, u32)> = None;
        for i in 0..self.colors.len() {
            if self.colors[i] != 0 || self.skip[i] {
                continue;
            }
            let avail = full & !self.forbidden_mask(i);
            let n = avail.count_ones();
            match best {
                Some((_, _, bn)) if bn <= n => {}
                _ => best = Some((i, avail, n)),
            }
        }
        best.map(|(i, avail, _)| (i, avail))
    }

    fn search(&mut self, restrict_first: Option<usize>) -> Result<bool, ColoringError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ColoringError::Timeout(self.budget));
        }
        let Some((i, mut avail)) = self.pick() else {
            return Ok(true);
        };
        if Some(i) == restrict_first {
            avail &= 1; // symmetry breaking: first element takes color 1
        }
        while avail != 0 {
            let c = avail.trailing_zeros() as u8 + 1;
            avail &= avail - 1;
            self.colors[i] = c;
            if self.search(None)? {
                return Ok(true);
            }
            self.colors[i] = 0;
        }
        Ok(false)
    }

    fn extract(&self) -> PartialTotalColoring {
        let mut out = PartialTotalColoring::new(self.k);
        for (i, &e) in self.elements.iter().enumerate() {
            if self.colors[i] != 0 {
                out.set(e, self.colors[i]);
            }
        }
        out
    }

    fn load_fixed(&mut self, fixed: &PartialTotalColoring) -> Result<(), ColoringError> {
        check_membership(self.g, fixed)?;
        if !validate(self.g, fixed)?.is_empty() {
            return Err(ColoringError::ImproperFixed);
        }
        let index: BTreeMap<Element, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        for (e, c) in fixed.iter() {
            self.colors[index[&e]] = c;
        }
        Ok(())
    }
}

/// Exact backtracking search for a proper total `k`-coloring extending
/// `fixed`. Deterministic given the inputs.
pub fn solve(
    g: &Graph,
    k: usize,
    fixed: &PartialTotalColoring,
    budget: u64,
) -> Result<SolveOutcome, ColoringError> {
    assert!(k >= 1 && k <= 63);
    let mut s = Searcher::new(g, k, budget);
    s.load_fixed(fixed)?;
    // Fixing the first branching element to color 1 is sound only when no
    // colors are pinned by the caller.
    let restrict = if fixed.is_empty() {
        s.pick().map(|(i, _)| i)
    } else {
        None
    };
    match s.search(restrict) {
        Ok(true) => Ok(SolveOutcome::Solution(s.extract())),
        Ok(false) => Ok(SolveOutcome::Infeasible { nodes: s.nodes }),
        Err(ColoringError::Timeout(_)) => Ok(SolveOutcome::Timeout { nodes: s.nodes }),
        Err(e) => Err(e),
    }
}

/// Like [`solve`] but with seeded random color order, for sampling varied
/// witnesses. Never used for infeasibility certificates.
pub fn solve_randomized<R: Rng>(
    g: &Graph,
    k: usize,
    fixed: &PartialTotalColoring,
    budget: u64,
    rng: &mut R,
) -> Result<SolveOutcome, ColoringError> {
    assert!(k >= 1 && k <= 63);
    let mut s = Searcher::new(g, k, budget);
    s.load_fixed(fixed)?;
    match random_search(&mut s, rng) {
        Ok(true) => Ok(SolveOutcome::Solution(s.extract())),
        Ok(false) => Ok(SolveOutcome::Infeasible { nodes: s.nodes }),
        Err(ColoringError::Timeout(_)) => Ok(SolveOutcome::Timeout { nodes: s.nodes }),
        Err(e) => Err(e),
    }
}

/// Like [`solve`] but leaves the `omit` elements uncolored: the search covers
/// every other element and never branches on them.
pub fn solve_omitting(
    g: &Graph,
    k: usize,
    fixed: &PartialTotalColoring,
    omit: &[Element],
    budget: u64,
) -> Result<SolveOutcome, ColoringError> {
    assert!(k >= 1 && k <= 63);
    let mut s = Searcher::new(g, k, budget);
    s.load_fixed(fixed)?;
    s.mark_omitted(omit);
    match s.search(None) {
        Ok(true) => Ok(SolveOutcome::Solution(s.extract())),
        Ok(false) => Ok(SolveOutcome::Infeasible { nodes: s.nodes }),
        Err(ColoringError::Timeout(_)) => Ok(SolveOutcome::Timeout { nodes: s.nodes }),
        Err(e) => Err(e),
    }
}

/// Randomized variant of [`solve_omitting`], for sampling varied witnesses.
pub fn solve_omitting_randomized<R: Rng>(
    g: &Graph,
    k: usize,
    fixed: &PartialTotalColoring,
    omit: &[Element],
    budget: u64,
    rng: &mut R,
) -> Result<SolveOutcome, ColoringError> {
    assert!(k >= 1 && k <= 63);
    let mut s = Searcher::new(g, k, budget);
    s.load_fixed(fixed)?;
    s.mark_omitted(omit);
    match random_search(&mut s, rng) {
        Ok(true) => Ok(SolveOutcome::Solution(s.extract())),
        Ok(false) => Ok(SolveOutcome::Infeasible { nodes: s.nodes }),
        Err(ColoringError::Timeout(_)) => Ok(SolveOutcome::Timeout { nodes: s.nodes }),
        Err(e) => Err(e),
    }
}

fn random_search<R: Rng>(s: &mut Searcher, rng: &mut R) -> Result<bool, ColoringError> {
    s.nodes += 1;
    if s.nodes > s.budget {
        return Err(ColoringError::Timeout(s.budget));
    }
    let Some((i, avail)) = s.pick() else {
        return Ok(true);
    };
    let mut colors: Vec<u8> = (1..=s.k as u8).filter(|c| avail & (1 << (c - 1)) != 0).collect();
    colors.shuffle(rng);
    for c in colors {
        s.colors[i] = c;
        if random_search(s, rng)? {
            return Ok(true);
        }
        s.colors[i] = 0;
    }
    Ok(false)
}

/// Result of the chromatic search: the least feasible palette size, the
/// witness, and the exhausted-search certificate one palette below.
#[derive(Debug, Clone)]
pub enum ChiResult {
    Exact {
        chi: usize,
        witness: PartialTotalColoring,
        /// Nodes explored to exhaust the search at `chi - 1`; `None` when
        /// `chi` equals the trivial lower bound so no smaller palette was tried.
        infeasible_nodes_below: Option<u64>,
    },
    LowerBoundOnly {
        tried_up_to: usize,
    },
    Timeout {
        at_k: usize,
    },
}

/// Smallest `k <= k_max` admitting a total coloring. Starts at the trivial
/// lower bound Delta + 1.
pub fn total_chromatic_number(
    g: &Graph,
    k_max: usize,
    budget: u64,
) -> Result<ChiResult, ColoringError> {
    let lower = g.max_degree() + 1;
    let empty = PartialTotalColoring::new(1);
    let mut below: Option<u64> = None;
    for k in lower..=k_max {
        let empty_k = PartialTotalColoring { k, ..empty.clone() };
        match solve(g, k, &empty_k, budget)? {
            SolveOutcome::Solution(w) => {
                return Ok(ChiResult::Exact {
                    chi: k,
                    witness: w,
                    infeasible_nodes_below: below,
                })
            }
            SolveOutcome::Infeasible { nodes } => below = Some(nodes),
            SolveOutcome::Timeout { .. } => return Ok(ChiResult::Timeout { at_k: k }),
        }
    }
    Ok(ChiResult::LowerBoundOnly { tried_up_to: k_max })
}

/// Parses the "tcc v1" coloring format: `k <palette>`, then `v <id> <color>`
/// and `e <u> <v> <color>` lines; uncolored elements omitted.
pub fn parse_tcc(text: &str) -> Result<PartialTotalColoring, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("empty coloring file")?;
    let mut it = header.split_whitespace();
    if it.next() != Some("k") {
        return Err("expected `k <palette>`".into());
    }
    let k: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or("bad palette size")?;
    let mut c = PartialTotalColoring::new(k);
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["v", id, col] => {
                let id: usize = id.parse().map_err(|_| "bad vertex id")?;
                let col: u8 = col.parse().map_err(|_| "bad color")?;
                c.set(Element::Vertex(id), col);
            }
            ["e", u, v, col] => {
                let u: usize = u.parse().map_err(|_| "bad endpoint")?;
                let v: usize = v.parse().map_err(|_| "bad endpoint")?;
                let col: u8 = col.parse().map_err(|_| "bad color")?;
                c.set(Element::edge(u, v), col);
            }
            _ => return Err(format!("bad line `{line}`")),
        }
    }
    Ok(c)
}

pub fn write_tcc(c: &PartialTotalColoring) -> String {
    let mut out = format!("k {}\n", c.k);
    for (e, col) in c.iter() {
        match e {
            Element::Vertex(v) => out.push_str(&format!("v {v} {col}\n")),
            Element::Edge(EdgeId(u, v)) => out.push_str(&format!("e {u} {v} {col}\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::Graph;

    fn triangle() -> Graph {
        Graph::build(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn triangle_manual_coloring_valid() {
        let g = triangle();
        let mut c = PartialTotalColoring::new(6);
        c.set(Element::Vertex(0), 1);
        c.set(Element::Vertex(1), 2);
        c.set(Element::Vertex(2), 3);
        c.set(Element::edge(0, 1), 4);
        c.set(Element::edge(1, 2), 5);
        c.set(Element::edge(0, 2), 6);
        assert!(validate(&g, &c).unwrap().is_empty());
    }

    #[test]
    fn adjacent_vertices_conflict() {
        let g = triangle();
        let mut c = PartialTotalColoring::new(3);
        c.set(Element::Vertex(0), 1);
        c.set(Element::Vertex(1), 1);
        let v = validate(&g, &c).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ConflictKind::VertexVertex);
    }

    #[test]
    fn vertex_edge_conflict() {
        let g = triangle();
        let mut c = PartialTotalColoring::new(3);
        c.set(Element::Vertex(0), 2);
        c.set(Element::edge(0, 1), 2);
        let v = validate(&g, &c).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ConflictKind::VertexEdge);
    }

    #[test]
    fn foreign_element_rejected() {
        let g = triangle();
        let mut c = PartialTotalColoring::new(3);
        c.set(Element::Vertex(7), 1);
        assert!(matches!(
            validate(&g, &c),
            Err(ColoringError::ForeignElement(_))
        ));
    }

    #[test]
    fn color_sets_uncolored() {
        let g = triangle();
        let c = PartialTotalColoring::new(8);
        let cs = color_sets(&g, &c, 0);
        assert!(cs.incident.is_empty());
        assert_eq!(cs.complement_closed.len(), 8);
    }

    /// Brute force over all assignments; independent oracle for tiny graphs.
    fn brute_force_feasible(g: &Graph, k: usize) -> bool {
        let elements = g.elements();
        let m = elements.len();
        let mut assignment = vec![1u8; m];
        loop {
            let mut c = PartialTotalColoring::new(k);
            for (i, &e) in elements.iter().enumerate() {
                c.set(e, assignment[i]);
            }
            if validate(g, &c).unwrap().is_empty() {
                return true;
            }
            // next assignment
            let mut i = 0;
            loop {
                if i == m {
                    return false;
                }
                if (assignment[i] as usize) < k {
                    assignment[i] += 1;
                    break;
                }
                assignment[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn solver_matches_brute_force_on_c3() {
        let g = triangle();
        // frozen from the brute-force oracle: C3 is totally 3-colorable, not 2.
        assert!(brute_force_feasible(&g, 3));
        assert!(!brute_force_feasible(&g, 2));
        let empty3 = PartialTotalColoring::new(3);
        let sol = solve(&g, 3, &empty3, 1_000_000).unwrap();
        let w = sol.solution().expect("C3 at k=3");
        assert!(validate(&g, w).unwrap().is_empty());
        assert!(w.is_total(&g));
        let empty2 = PartialTotalColoring::new(2);
        assert!(matches!(
            solve(&g, 2, &empty2, 1_000_000).unwrap(),
            SolveOutcome::Infeasible { .. }
        ));
    }

    #[test]
    fn star_k13_chi() {
        // K1,3: brute force gives feasible at 4, infeasible at 3.
        let g = Graph::build(vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap();
        assert!(brute_force_feasible(&g, 4));
        assert!(!brute_force_feasible(&g, 3));
        match total_chromatic_number(&g, 8, 1_000_000).unwrap() {
            ChiResult::Exact { chi, witness, infeasible_nodes_below } => {
                assert_eq!(chi, 4);
                assert!(validate(&g, &witness).unwrap().is_empty());
                assert!(infeasible_nodes_below.is_none()); // 4 = Delta + 1
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn k4_chi_is_5() {
        let g = generate::complete_k4();
        match total_chromatic_number(&g, 8, 10_000_000).unwrap() {
            ChiResult::Exact { chi, infeasible_nodes_below, .. } => {
                assert_eq!(chi, 5);
                assert!(infeasible_nodes_below.is_some());
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn determinism() {
        let g = generate::complete_k4();
        let empty = PartialTotalColoring::new(5);
        let a = solve(&g, 5, &empty, 10_000_000).unwrap();
        let b = solve(&g, 5, &empty, 10_000_000).unwrap();
        assert_eq!(a.solution(), b.solution());
    }

    #[test]
    fn monotone_in_k() {
        let g = generate::complete_k4();
        for k in 5..=8 {
            let empty = PartialTotalColoring::new(k);
            assert!(solve(&g, k, &empty, 10_000_000)
                .unwrap()
                .solution()
                .is_some());
        }
    }

    #[test]
    fn fixed_part_respected() {
        let g = triangle();
        let mut fixed = PartialTotalColoring::new(5);
        fixed.set(Element::Vertex(0), 5);
        let sol = solve(&g, 5, &fixed, 1_000_000).unwrap();
        let w = sol.solution().unwrap();
        assert_eq!(w.get(Element::Vertex(0)), Some(5));
    }

    #[test]
    fn improper_fixed_rejected() {
        let g = triangle();
        let mut fixed = PartialTotalColoring::new(5);
        fixed.set(Element::Vertex(0), 1);
        fixed.set(Element::Vertex(1), 1);
        assert!(matches!(
            solve(&g, 5, &fixed, 1000),
            Err(ColoringError::ImproperFixed)
        ));
    }

    #[test]
    fn tcc_round_trip() {
        let g = triangle();
        let empty = PartialTotalColoring::new(3);
        let w = solve(&g, 3, &empty, 100_000).unwrap().solution().unwrap().clone();
        let text = write_tcc(&w);
        assert_eq!(parse_tcc(&text).unwrap(), w);
    }
}
