//! Embedded planar graphs given by rotation systems, plus face tracing.
//!
//! A graph is stored as one cyclic neighbor list per vertex. The embedding is
//! part of the input: we never try to planarize an edge list. Faces are traced
//! with a fixed dart convention so that face ids are reproducible.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

pub type VertexId = usize;

/// Canonical unordered edge, smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub VertexId, pub VertexId);

impl EdgeId {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            EdgeId(u, v)
        } else {
            EdgeId(v, u)
        }
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A colorable element of a graph: a vertex or an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl Element {
    pub fn edge(u: VertexId, v: VertexId) -> Self {
        Element::Edge(EdgeId::new(u, v))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "v{v}"),
            Element::Edge(e) => write!(f, "e{e}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} lists itself as a neighbor")]
    SelfLoop(VertexId),
    #[error("vertex {0} lists neighbor {1} more than once")]
    DuplicateNeighbor(VertexId, VertexId),
    #[error("vertex {0} lists {1} but {1} does not list {0}")]
    AsymmetricRotation(VertexId, VertexId),
    #[error("vertex id {0} out of range (n = {1})")]
    InvalidVertexId(VertexId, usize),
    #[error("face {0} is not a triangle")]
    NotATriangle(usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// Simple undirected graph with a rotation system (cyclic neighbor order per
/// vertex). The rotation defines the planar embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    rotation: Vec<Vec<VertexId>>,
    edges: Vec<EdgeId>,
}

impl Graph {
    /// Validates rotation lists and derives the edge set.
    pub fn build(rotation: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let n = rotation.len();
        let mut edges = BTreeSet::new();
        for (v, nbrs) in rotation.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &u in nbrs {
                if u >= n {
                    return Err(GraphError::InvalidVertexId(u, n));
                }
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if !seen.insert(u) {
                    return Err(GraphError::DuplicateNeighbor(v, u));
                }
                edges.insert(EdgeId::new(v, u));
            }
        }
        for &EdgeId(u, v) in &edges {
            if !rotation[u].contains(&v) {
                return Err(GraphError::AsymmetricRotation(v, u));
            }
            if !rotation[v].contains(&u) {
                return Err(GraphError::AsymmetricRotation(u, v));
            }
        }
        Ok(Graph {
            rotation,
            edges: edges.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertex_count()
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.rotation[u].contains(&v)
    }

    /// Successor of `u` in the cyclic rotation at `v`. Panics if `u` is not a
    /// neighbor of `v`.
    pub fn rotation_successor(&self, v: VertexId, u: VertexId) -> VertexId {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == u).expect("u in rotation of v");
        rot[(i + 1) % rot.len()]
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.rotation[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// All elements (vertices then edges) in canonical order.
    pub fn elements(&self) -> Vec<Element> {
        let mut out: Vec<Element> = self.vertices().map(Element::Vertex).collect();
        out.extend(self.edges.iter().map(|&e| Element::Edge(e)));
        out
    }

    /// All triangles (3-cycles, not necessarily faces), as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[VertexId; 3]> {
        let mut out = Vec::new();
        for &EdgeId(u, v) in &self.edges {
            for &w in &self.rotation[u] {
                if w > v && self.has_edge(v, w) {
                    out.push([u, v, w]);
                }
            }
        }
        out
    }
}

/// Faces traced from the rotation system. A dart is an ordered pair `(u, v)`
/// with `uv` an edge; the dart following `(u, v)` is `(v, w)` where `w` is the
/// successor of `u` in the rotation at `v`. Every dart lies on exactly one
/// face; face degree counts cut-edges twice.
#[derive(Debug, Clone)]
pub struct FaceSet {
    faces: Vec<Vec<(VertexId, VertexId)>>,
}

impl FaceSet {
    pub fn trace(g: &Graph) -> FaceSet {
        let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        let mut faces = Vec::new();
        let mut darts: Vec<(VertexId, VertexId)> = Vec::new();
        for &EdgeId(u, v) in g.edges() {
            darts.push((u, v));
            darts.push((v, u));
        }
        darts.sort();
        for start in darts {
            if seen.contains(&start) {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            loop {
                face.push(d);
                seen.insert(d);
                let (u, v) = d;
                d = (v, g.rotation_successor(v, u));
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
        FaceSet { faces }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<(VertexId, VertexId)>] {
        &self.faces
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    /// Distinct vertices on the boundary of face `f`, in first-visit order.
    pub fn face_vertices(&self, f: usize) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &(u, _) in &self.faces[f] {
            if !out.contains(&u) {
                out.push(u);
            }
        }
        out
    }

    /// Face containing the dart `(u, v)`.
    pub fn face_of_dart(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.faces.iter().position(|fc| fc.contains(&(u, v)))
    }

    /// Number of `k`-faces incident with `v`, counting one per incidence
    /// (a face touching `v` at two corners counts twice).
    pub fn incident_face_count(&self, v: VertexId, k: usize) -> usize {
        self.faces
            .iter()
            .filter(|fc| fc.len() == k)
            .map(|fc| fc.iter().filter(|&&(u, _)| u == v).count())
            .sum()
    }

    /// Euler check for connected graphs: |V| - |E| + |F| = 2.
    pub fn euler_holds(&self, g: &Graph) -> bool {
        g.vertex_count() + self.face_count() == g.edge_count() + 2
    }
}

/// Sorted degree triple of a triangular face, with an admissibility flag.
///
/// A triple is flagged inadmissible when it cannot occur in a graph with the
/// structural properties checked by [`crate::patterns::counterexample_report`]:
/// it contains a vertex of degree at most 3, two vertices of degree at most 4,
/// or equals (4, 5, 5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriangleClass {
    pub degrees: [usize; 3],
    pub admissible: bool,
}

pub fn classify_triangle(g: &Graph, fs: &FaceSet, f: usize) -> Result<TriangleClass, GraphError> {
    if fs.face_degree(f) != 3 {
        return Err(GraphError::NotATriangle(f));
    }
    let vs = fs.face_vertices(f);
    if vs.len() != 3 {
        return Err(GraphError::NotATriangle(f));
    }
    let mut degrees = [g.degree(vs[0]), g.degree(vs[1]), g.degree(vs[2])];
    degrees.sort();
    let admissible = !(degrees[0] <= 3 || degrees[1] <= 4 || degrees == [4, 5, 5]);
    Ok(TriangleClass { degrees, admissible })
}

/// Per-vertex degrees with the extremes.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeSummary {
    pub degrees: Vec<usize>,
    pub max: usize,
    pub min: usize,
}

pub fn degree_summary(g: &Graph) -> DegreeSummary {
    DegreeSummary {
        degrees: g.vertices().map(|v| g.degree(v)).collect(),
        max: g.max_degree(),
        min: g.min_degree(),
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("bad header, expected `tcg 1`")]
    BadHeader,
    #[error("missing `n` line")]
    MissingCount,
    #[error("rotation line for vertex {0} out of range")]
    BadVertex(usize),
    #[error("missing rotation line for vertex {0}")]
    MissingRotation(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parses the "tcg v1" text format.
///
/// Line 1 `tcg 1`; line 2 `n <count>`; then `r <v> <u1> ... <uk>` per vertex.
/// `#` starts a comment line. Trailing whitespace is ignored.
pub fn parse_tcg(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or(ParseError::BadHeader)?;
    if header.trim() != "tcg 1" {
        return Err(ParseError::Malformed(ln, "expected `tcg 1`".into()));
    }
    let (ln, count_line) = lines.next().ok_or(ParseError::MissingCount)?;
    let mut it = count_line.split_whitespace();
    if it.next() != Some("n") {
        return Err(ParseError::Malformed(ln, "expected `n <count>`".into()));
    }
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ParseError::Malformed(ln, "bad vertex count".into()))?;
    if it.next().is_some() {
        return Err(ParseError::Malformed(ln, "trailing tokens".into()));
    }
    let mut rotation: Vec<Option<Vec<VertexId>>> = vec![None; n];
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        if it.next() != Some("r") {
            return Err(ParseError::Malformed(ln, "expected `r <v> <u...>`".into()));
        }
        let v: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::Malformed(ln, "bad vertex id".into()))?;
        if v >= n {
            return Err(ParseError::BadVertex(v));
        }
        if rotation[v].is_some() {
            return Err(ParseError::Malformed(ln, format!("duplicate rotation for {v}")));
        }
        let mut nbrs = Vec::new();
        for tok in it {
            let u: usize = tok
                .parse()
                .map_err(|_| ParseError::Malformed(ln, format!("bad neighbor `{tok}`")))?;
            nbrs.push(u);
        }
        rotation[v] = Some(nbrs);
    }
    let rotation: Vec<Vec<VertexId>> = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or(ParseError::MissingRotation(v)))
        .collect::<Result<_, _>>()?;
    Ok(Graph::build(rotation)?)
}

/// Serializes a graph in the "tcg v1" format. `parse_tcg` round-trips this.
pub fn write_tcg(g: &Graph) -> String {
    let mut out = String::from("tcg 1\n");
    out.push_str(&format!("n {}\n", g.vertex_count()));
    for v in g.vertices() {
        out.push_str(&format!("r {v}"));
        for &u in g.rotation(v) {
            out.push_str(&format!(" {u}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn triangle() -> Graph {
        Graph::build(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    /// K4 embedded as the tetrahedron.
    pub fn k4() -> Graph {
        Graph::build(vec![
            vec![1, 2, 3],
            vec![2, 0, 3],
            vec![0, 1, 3],
            vec![0, 2, 1],
        ])
        .unwrap()
    }

    #[test]
    fn triangle_builds() {
        let g = triangle();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::build(vec![vec![0, 1], vec![0]]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(0));
    }

    #[test]
    fn asymmetric_rejected() {
        let err = Graph::build(vec![vec![1], vec![]]).unwrap_err();
        assert_eq!(err, GraphError::AsymmetricRotation(0, 1));
    }

    #[test]
    fn duplicate_neighbor_rejected() {
        let err = Graph::build(vec![vec![1, 1], vec![0]]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateNeighbor(0, 1));
    }

    #[test]
    fn k4_faces() {
        let g = k4();
        let fs = FaceSet::trace(&g);
        assert_eq!(fs.face_count(), 4);
        assert!(fs.faces().iter().all(|f| f.len() == 3));
        assert!(fs.euler_holds(&g));
    }

    #[test]
    fn tree_single_face() {
        // Path with 3 edges: one face of degree 6 (cut-edges counted twice).
        let g = Graph::build(vec![vec![1], vec![0, 2], vec![1, 3], vec![2]]).unwrap();
        let fs = FaceSet::trace(&g);
        assert_eq!(fs.face_count(), 1);
        assert_eq!(fs.face_degree(0), 6);
        assert!(fs.euler_holds(&g));
    }

    #[test]
    fn cube_faces() {
        let g = cube();
        let fs = FaceSet::trace(&g);
        assert_eq!(fs.face_count(), 6);
        assert!(fs.faces().iter().all(|f| f.len() == 4));
        assert!(fs.euler_holds(&g));
    }

    /// Q3 with the standard embedding: outer square 0-1-2-3, inner 4-5-6-7.
    pub fn cube() -> Graph {
        Graph::build(vec![
            vec![1, 3, 4],
            vec![2, 0, 5],
            vec![3, 1, 6],
            vec![0, 2, 7],
            vec![0, 7, 5],
            vec![1, 4, 6],
            vec![2, 5, 7],
            vec![3, 6, 4],
        ])
        .unwrap()
    }

    #[test]
    fn wheel5_degrees() {
        let g = crate::generate::wheel(5);
        let d = degree_summary(&g);
        assert_eq!(d.degrees[0], 5);
        assert!(d.degrees[1..].iter().all(|&x| x == 3));
    }

    #[test]
    fn wheel5_incident_triangles() {
        let g = crate::generate::wheel(5);
        let fs = FaceSet::trace(&g);
        assert_eq!(fs.incident_face_count(0, 3), 5);
    }

    #[test]
    fn classify_456_triangle() {
        // Host with a (4,5,6)-triangle among its faces.
        let (g, _) = crate::generate::configuration_host(
            &crate::generate::HostKind::Triangle(4, 5, 6),
            1,
        )
        .unwrap();
        let fs = FaceSet::trace(&g);
        let found = (0..fs.face_count())
            .filter(|&f| fs.face_degree(f) == 3)
            .map(|f| classify_triangle(&g, &fs, f).unwrap())
            .any(|c| c.degrees == [4, 5, 6] && c.admissible);
        assert!(found);
    }

    #[test]
    fn tcg_round_trip() {
        let g = k4();
        let text = write_tcg(&g);
        let h = parse_tcg(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn tcg_rejects_garbage() {
        assert!(parse_tcg("hello").is_err());
        assert!(parse_tcg("tcg 1\nn 2\nr 0 1\n").is_err()); // missing rotation for 1
        assert!(parse_tcg("tcg 1\nn 1\nr 0 0\n").is_err()); // self loop
    }
}
