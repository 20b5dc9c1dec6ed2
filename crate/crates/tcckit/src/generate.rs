//! Seeded construction of embedded planar graphs, class samples, and
//! configuration hosts with exact planted degrees.

use crate::graph::{FaceSet, Graph, VertexId};
use crate::patterns::{contains_forbidden, PatternCatalog};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Identifier of the construction algorithm, recorded in metadata so corpora
/// can be reproduced.
pub const ALGORITHM_ID: &str = "tri-insert-v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("spec cannot be satisfied: {0}")]
    InfeasibleSpec(String),
    #[error("rejection budget exhausted after {attempts} attempts")]
    BudgetExhausted { attempts: usize },
    #[error("unknown configuration kind {0}")]
    UnknownKind(String),
}

/// Rotation system under construction. Operations keep the embedding valid;
/// callers finalize with [`MutableEmbedding::to_graph`].
#[derive(Debug, Clone)]
pub struct MutableEmbedding {
    rot: Vec<Vec<VertexId>>,
}

impl MutableEmbedding {
    pub fn triangle() -> Self {
        MutableEmbedding {
            rot: vec![vec![1, 2], vec![2, 0], vec![0, 1]],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        MutableEmbedding {
            rot: g.vertices().map(|v| g.rotation(v).to_vec()).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rot[v].len()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::build(self.rot.clone()).expect("embedding operations keep the rotation valid")
    }

    fn insert_after(&mut self, v: VertexId, anchor: VertexId, z: VertexId) {
        let pos = self.rot[v]
            .iter()
            .position(|&x| x == anchor)
            .expect("anchor must be a neighbor");
        self.rot[v].insert(pos + 1, z);
    }

    /// Places a new vertex inside the face given by its dart cycle and joins
    /// it to every boundary vertex. The boundary vertices must be distinct.
    pub fn insert_vertex_in_face(&mut self, face: &[(VertexId, VertexId)]) -> VertexId {
        let boundary: Vec<VertexId> = face.iter().map(|&(u, _)| u).collect();
        let z = self.rot.len();
        let mut rot_z = boundary.clone();
        rot_z.reverse();
        self.rot.push(rot_z);
        for i in 0..boundary.len() {
            let vi = boundary[i];
            let vnext = boundary[(i + 1) % boundary.len()];
            // the new triangle (z, vi, vnext) becomes a face
            self.insert_after(vnext, vi, z);
        }
        z
    }

    /// Adds a degree-1 vertex joined to `v`, placed in the face containing
    /// the dart `(anchor, v)`.
    pub fn add_leaf(&mut self, v: VertexId, anchor: VertexId) -> VertexId {
        let z = self.rot.len();
        self.rot.push(vec![v]);
        self.insert_after(v, anchor, z);
        z
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) {
        self.rot[u].retain(|&x| x != v);
        self.rot[v].retain(|&x| x != u);
    }

    /// Repeatedly adds leaves at `t`, always inside a non-triangular face, so
    /// existing 3-faces are untouched, until `t` reaches `target` degree.
    pub fn pad_to_degree(&mut self, t: VertexId, target: usize) -> Result<(), GenError> {
        while self.degree(t) < target {
            let g = self.to_graph();
            let fs = FaceSet::trace(&g);
            let mut anchor: Option<(usize, VertexId)> = None;
            for f in 0..fs.face_count() {
                let deg = fs.face_degree(f);
                if deg < 4 {
                    continue;
                }
                for &(x, y) in &fs.faces()[f] {
                    if y == t {
                        match anchor {
                            Some((best, bx)) if (best, std::cmp::Reverse(bx)) >= (deg, std::cmp::Reverse(x)) => {}
                            _ => anchor = Some((deg, x)),
                        }
                    }
                }
            }
            let (_, x) = anchor.ok_or_else(|| {
                GenError::InfeasibleSpec(format!("no non-triangular face at vertex {t}"))
            })?;
            self.add_leaf(t, x);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// Maximal planar graph: |E| = 3|V| - 6.
    Triangulation,
    /// Triangulation with roughly a third of the edges removed.
    Sparse,
}

impl GenMode {
    pub fn name(&self) -> &'static str {
        match self {
            GenMode::Triangulation => "triangulation",
            GenMode::Sparse => "sparse",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenSpec {
    /// Target vertex count.
    pub budget: usize,
    pub seed: u64,
    pub mode: GenMode,
    pub max_degree: Option<usize>,
}

/// Seeded planar graph: start from a triangle, repeatedly insert a vertex in
/// a uniformly chosen face joined to its boundary; optionally delete random
/// edges (keeping the graph connected) and enforce the degree cap.
pub fn gen_planar(spec: &GenSpec) -> Result<Graph, GenError> {
    if spec.budget < 3 {
        return Err(GenError::InfeasibleSpec("budget must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut emb = MutableEmbedding::triangle();
    // faces maintained incrementally: inserting into a triangle yields three
    // triangles, so every face stays a triangle with distinct corners
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    while emb.vertex_count() < spec.budget {
        let f = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(f);
        let z = emb.insert_vertex_in_face(&[(a, b), (b, c), (c, a)]);
        faces.push([a, b, z]);
        faces.push([b, c, z]);
        faces.push([c, a, z]);
    }
    if spec.mode == GenMode::Sparse {
        let deletions = rot_edges(&emb.rot).len() / 3;
        for _ in 0..deletions {
            let edges = rot_edges(&emb.rot);
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            try_delete_edge(&mut emb, u, v);
        }
    }
    if let Some(cap) = spec.max_degree {
        enforce_degree_cap(&mut emb, cap, &mut rng)?;
    }
    Ok(emb.to_graph())
}

fn rot_edges(rot: &[Vec<VertexId>]) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    for (u, nbrs) in rot.iter().enumerate() {
        for &v in nbrs {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    edges.sort();
    edges
}

fn rot_connected(rot: &[Vec<VertexId>]) -> bool {
    let n = rot.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &rot[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

/// Deletes the edge if the graph stays connected; reports whether it did.
fn try_delete_edge(emb: &mut MutableEmbedding, u: VertexId, v: VertexId) -> bool {
    let save_u = emb.rot[u].clone();
    let save_v = emb.rot[v].clone();
    emb.delete_edge(u, v);
    if rot_connected(&emb.rot) {
        true
    } else {
        emb.rot[u] = save_u;
        emb.rot[v] = save_v;
        false
    }
}

fn enforce_degree_cap(
    emb: &mut MutableEmbedding,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), GenError> {
    loop {
        let g = emb.to_graph();
        let over: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) > cap).collect();
        let Some(&v) = over.first() else {
            return Ok(());
        };
        let mut nbrs = g.neighbors(v).to_vec();
        nbrs.shuffle(rng);
        let mut removed = false;
        for u in nbrs {
            if try_delete_edge(emb, v, u) {
                removed = true;
                break;
            }
        }
        if !removed {
            return Err(GenError::InfeasibleSpec(format!(
                "cannot reduce degree of vertex {v} below {cap}"
            )));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleStats {
    pub attempts: usize,
    pub repairs: usize,
}

/// Rejection-samples sparse capped graphs until none of the catalog's
/// forbidden shapes occurs (repairing by deleting an edge of a found match)
/// and the maximum degree is exactly 6.
pub fn sample_theorem_class(
    spec: &GenSpec,
    catalog: &PatternCatalog,
) -> Result<(Graph, SampleStats), GenError> {
    let mut stats = SampleStats {
        attempts: 0,
        repairs: 0,
    };
    for attempt in 0..200 {
        stats.attempts += 1;
        let sub = GenSpec {
            seed: spec.seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9)),
            mode: GenMode::Sparse,
            max_degree: Some(6),
            ..*spec
        };
        let mut rng = ChaCha8Rng::seed_from_u64(sub.seed ^ 0xabcd);
        let Ok(g) = gen_planar(&sub) else { continue };
        let mut emb = MutableEmbedding::from_graph(&g);
        let mut ok = true;
        'repair: for _ in 0..200 {
            let g = emb.to_graph();
            let report = contains_forbidden(&g, catalog);
            let Some((name, Some(m))) = report.found.iter().find(|(_, m)| m.is_some()).cloned()
            else {
                ok = true;
                break 'repair;
            };
            let _ = name;
            // delete one host edge realizing the match, keeping connectivity
            let mut order: Vec<(VertexId, VertexId)> = Vec::new();
            for i in 0..m.map.len() {
                for j in i + 1..m.map.len() {
                    if g.has_edge(m.map[i], m.map[j]) {
                        order.push((m.map[i], m.map[j]));
                    }
                }
            }
            order.shuffle(&mut rng);
            let mut repaired = false;
            for (u, v) in order {
                let mut trial = emb.clone();
                trial.delete_edge(u, v);
                if trial.to_graph().is_connected() {
                    emb = trial;
                    stats.repairs += 1;
                    repaired = true;
                    break;
                }
            }
            if !repaired {
                ok = false;
                break 'repair;
            }
            ok = false;
        }
        if !ok {
            continue;
        }
        let g = emb.to_graph();
        if g.max_degree() != 6 {
            continue;
        }
        let report = contains_forbidden(&g, catalog);
        if report.admissible {
            return Ok((g, stats));
        }
    }
    Err(GenError::BudgetExhausted {
        attempts: stats.attempts,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GenMetadata {
    pub algorithm: &'static str,
    pub seed: u64,
    pub mode: String,
    pub n: usize,
    pub m: usize,
    pub attempts: usize,
    pub repairs: usize,
}

pub fn metadata(g: &Graph, spec: &GenSpec, stats: Option<&SampleStats>) -> GenMetadata {
    GenMetadata {
        algorithm: ALGORITHM_ID,
        seed: spec.seed,
        mode: spec.mode.name().to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        attempts: stats.map(|s| s.attempts).unwrap_or(1),
        repairs: stats.map(|s| s.repairs).unwrap_or(0),
    }
}

// ---------------------------------------------------------------------------
// fixed hosts

/// k-wheel: hub 0, rim 1..=k; all inner faces are triangles.
pub fn wheel(k: usize) -> Graph {
    assert!(k >= 3);
    let mut rot = vec![(1..=k).collect::<Vec<_>>()];
    for i in 1..=k {
        let prev = if i == 1 { k } else { i - 1 };
        let next = if i == k { 1 } else { i + 1 };
        rot.push(vec![0, prev, next]);
    }
    Graph::build(rot).unwrap()
}

/// k-fan host: hub 0 joined to the path 1..=k+1.
pub fn fan_host(k: usize) -> Graph {
    partial_wheel(k + 1, true).to_graph()
}

/// Hub 0 with neighbors 1..=m in rotation order; consecutive neighbors are
/// linked when `full` (otherwise callers add links through `partial_wheel_links`).
pub fn partial_wheel(m: usize, full: bool) -> MutableEmbedding {
    let links: Vec<(usize, usize)> = if full {
        (1..m).map(|i| (i, i + 1)).collect()
    } else {
        Vec::new()
    };
    partial_wheel_links(m, &links)
}

/// Hub 0 with neighbors 1..=m; `links` lists consecutive rim pairs (i, i+1)
/// to be joined. Each linked pair bounds a triangular face with the hub.
pub fn partial_wheel_links(m: usize, links: &[(usize, usize)]) -> MutableEmbedding {
    let has = |i: usize, j: usize| links.contains(&(i, j)) || links.contains(&(j, i));
    let mut rot = vec![(1..=m).collect::<Vec<_>>()];
    for i in 1..=m {
        let mut r = vec![0];
        if i > 1 && has(i - 1, i) {
            r.push(i - 1);
        }
        if i < m && has(i, i + 1) {
            r.push(i + 1);
        }
        rot.push(r);
    }
    MutableEmbedding { rot }
}

pub fn complete_k4() -> Graph {
    wheel(3)
}

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

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let rot = (0..n)
        .map(|i| vec![(i + n - 1) % n, (i + 1) % n])
        .collect();
    Graph::build(rot).unwrap()
}

pub fn path(n: usize) -> Graph {
    assert!(n >= 2);
    let rot = (0..n)
        .map(|i| {
            let mut r = Vec::new();
            if i > 0 {
                r.push(i - 1);
            }
            if i + 1 < n {
                r.push(i + 1);
            }
            r
        })
        .collect();
    Graph::build(rot).unwrap()
}

/// Star K_{1,k}: hub 0.
pub fn star(k: usize) -> Graph {
    let mut rot = vec![(1..=k).collect::<Vec<_>>()];
    for _ in 1..=k {
        rot.push(vec![0]);
    }
    Graph::build(rot).unwrap()
}

/// Builds a closed triangulation from consistently oriented faces: for each
/// oriented face (x, y, z), the successor of x in the rotation at y is z.
fn graph_from_oriented_faces(n: usize, faces: &[[VertexId; 3]]) -> Graph {
    use std::collections::BTreeMap;
    let mut succ: Vec<BTreeMap<VertexId, VertexId>> = vec![BTreeMap::new(); n];
    for f in faces {
        for i in 0..3 {
            let (x, y, z) = (f[i], f[(i + 1) % 3], f[(i + 2) % 3]);
            succ[y].insert(x, z);
        }
    }
    let rot = (0..n)
        .map(|v| {
            let mut r = Vec::new();
            let Some((&start, _)) = succ[v].iter().next() else {
                return r;
            };
            let mut cur = start;
            loop {
                r.push(cur);
                cur = succ[v][&cur];
                if cur == start {
                    break;
                }
            }
            r
        })
        .collect();
    Graph::build(rot).unwrap()
}

/// The icosahedron: 12 vertices of degree 5, 20 triangular faces.
pub fn icosahedron() -> Graph {
    let mut faces = Vec::new();
    for i in 1..=5usize {
        let n = i % 5 + 1;
        let a = i + 5;
        let b = n + 5;
        faces.push([0, i, n]);
        faces.push([n, i, b]);
        faces.push([i, a, b]);
        faces.push([11, b, a]);
    }
    graph_from_oriented_faces(12, &faces)
}

// ---------------------------------------------------------------------------
// configuration hosts

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostKind {
    /// 3-face with the given vertex degrees.
    Triangle(usize, usize, usize),
    Fan4,
    Fan5,
    Wheel5,
    Wheel6,
    /// A vertex of degree 2 in an otherwise padded triangle.
    TwoVertex,
    /// A 3-vertex whose three neighbors are 6-vertices.
    ThreeVertex,
    /// [6,4,6] around a 6-vertex.
    Around646,
    /// [6,4,6] around a 6-vertex that has a second 4-neighbor.
    Around646Plus4,
    /// [4,6,4,6] around a 6-vertex.
    Around4646,
    /// [4,6,6,4,6,6] around a 6-vertex.
    Around466466,
    /// 5-vertex on exactly four 3-faces; its fan's middle neighbor has the
    /// given degree (5 or 6) and a phase-1 remainder of 1/3.
    FanReceiver5 { donor_degree: usize },
    /// 5-wheel center whose rim vertices are 5-vertices on two 3-faces.
    WheelReceiver5,
}

impl HostKind {
    pub fn parse(s: &str) -> Option<HostKind> {
        match s {
            "fan4" => Some(HostKind::Fan4),
            "fan5" => Some(HostKind::Fan5),
            "wheel5" => Some(HostKind::Wheel5),
            "wheel6" => Some(HostKind::Wheel6),
            "2vertex" => Some(HostKind::TwoVertex),
            "3vertex" => Some(HostKind::ThreeVertex),
            "646" => Some(HostKind::Around646),
            "646+4nbr" => Some(HostKind::Around646Plus4),
            "4646" => Some(HostKind::Around4646),
            "466466" => Some(HostKind::Around466466),
            "receiver5-donor5" => Some(HostKind::FanReceiver5 { donor_degree: 5 }),
            "receiver5-donor6" => Some(HostKind::FanReceiver5 { donor_degree: 6 }),
            "receiver5-wheel" => Some(HostKind::WheelReceiver5),
            _ => {
                let inner = s.strip_prefix("triangle(")?.strip_suffix(')')?;
                let parts: Vec<usize> = inner
                    .split(',')
                    .map(|p| p.trim().parse().ok())
                    .collect::<Option<_>>()?;
                if parts.len() == 3 {
                    Some(HostKind::Triangle(parts[0], parts[1], parts[2]))
                } else {
                    None
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            HostKind::Triangle(a, b, c) => format!("triangle({a},{b},{c})"),
            HostKind::Fan4 => "fan4".into(),
            HostKind::Fan5 => "fan5".into(),
            HostKind::Wheel5 => "wheel5".into(),
            HostKind::Wheel6 => "wheel6".into(),
            HostKind::TwoVertex => "2vertex".into(),
            HostKind::ThreeVertex => "3vertex".into(),
            HostKind::Around646 => "646".into(),
            HostKind::Around646Plus4 => "646+4nbr".into(),
            HostKind::Around4646 => "4646".into(),
            HostKind::Around466466 => "466466".into(),
            HostKind::FanReceiver5 { donor_degree } => format!("receiver5-donor{donor_degree}"),
            HostKind::WheelReceiver5 => "receiver5-wheel".into(),
        }
    }
}

/// Role map of a planted configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Planted {
    pub kind: String,
    pub roles: Vec<(String, VertexId)>,
    /// Trace index of the planted 3-face, for triangle kinds.
    pub face: Option<usize>,
    /// Hub-first around-sequence, for around kinds.
    pub around: Option<Vec<VertexId>>,
}

impl Planted {
    pub fn role(&self, name: &str) -> VertexId {
        self.roles
            .iter()
            .find(|(r, _)| r == name)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("no role {name} in {}", self.kind))
    }
}

/// Smallest-reasonable host realizing the configuration with exact degrees;
/// padding leaves are placed outside the planted faces. The `seed` is recorded
/// but the construction is canonical.
pub fn configuration_host(kind: &HostKind, seed: u64) -> Result<(Graph, Planted), GenError> {
    let _ = seed;
    let mut planted = Planted {
        kind: kind.name(),
        roles: Vec::new(),
        face: None,
        around: None,
    };
    let emb = match *kind {
        HostKind::Triangle(a, b, c) => {
            if a.min(b).min(c) < 2 {
                return Err(GenError::InfeasibleSpec("triangle degrees must be >= 2".into()));
            }
            let mut emb = MutableEmbedding::triangle();
            // break the face symmetry so pads go to one side only
            if a > 2 {
                emb.add_leaf(0, 1);
            } else if b > 2 {
                emb.add_leaf(1, 2);
            } else if c > 2 {
                emb.add_leaf(2, 0);
            }
            emb.pad_to_degree(0, a)?;
            emb.pad_to_degree(1, b)?;
            emb.pad_to_degree(2, c)?;
            planted.roles = vec![("t0".into(), 0), ("t1".into(), 1), ("t2".into(), 2)];
            emb
        }
        HostKind::TwoVertex => {
            let mut emb = MutableEmbedding::triangle();
            emb.add_leaf(1, 2);
            emb.pad_to_degree(1, 5)?;
            emb.pad_to_degree(2, 5)?;
            planted.roles = vec![("target".into(), 0)];
            emb
        }
        HostKind::Fan4 | HostKind::Fan5 => {
            let k = if *kind == HostKind::Fan4 { 4 } else { 5 };
            planted.roles = vec![("hub".into(), 0)];
            planted.around = Some((0..=k + 1).collect());
            partial_wheel(k + 1, true)
        }
        HostKind::Wheel5 | HostKind::Wheel6 => {
            let k = if *kind == HostKind::Wheel5 { 5 } else { 6 };
            planted.roles = vec![("hub".into(), 0)];
            planted.around = Some((0..=k).collect());
            MutableEmbedding::from_graph(&wheel(k))
        }
        HostKind::ThreeVertex => {
            let mut emb = MutableEmbedding {
                rot: vec![vec![1, 2, 3], vec![0], vec![0], vec![0]],
            };
            for t in 1..=3 {
                emb.pad_to_degree(t, 6)?;
            }
            planted.roles = vec![("center".into(), 0)];
            emb
        }
        HostKind::Around646 | HostKind::Around646Plus4 => {
            let mut emb = partial_wheel_links(6, &[(1, 2), (2, 3)]);
            emb.pad_to_degree(1, 6)?;
            emb.pad_to_degree(2, 4)?;
            emb.pad_to_degree(3, 6)?;
            planted.roles = vec![
                ("v".into(), 0),
                ("w".into(), 1),
                ("u".into(), 2),
                ("y".into(), 3),
            ];
            planted.around = Some(vec![0, 1, 2, 3]);
            if *kind == HostKind::Around646Plus4 {
                emb.pad_to_degree(4, 4)?;
                emb.pad_to_degree(5, 6)?;
                emb.pad_to_degree(6, 5)?;
                planted.roles.push(("v1".into(), 4));
                planted.roles.push(("v2".into(), 5));
                planted.roles.push(("v3".into(), 6));
            }
            emb
        }
        HostKind::Around4646 => {
            let mut emb = partial_wheel_links(6, &[(1, 2), (2, 3), (3, 4)]);
            emb.pad_to_degree(1, 4)?;
            emb.pad_to_degree(2, 6)?;
            emb.pad_to_degree(3, 4)?;
            emb.pad_to_degree(4, 6)?;
            emb.pad_to_degree(5, 6)?;
            emb.pad_to_degree(6, 5)?;
            planted.roles = vec![
                ("v".into(), 0),
                ("t".into(), 1),
                ("w".into(), 2),
                ("u".into(), 3),
                ("y".into(), 4),
                ("v2".into(), 5),
                ("v3".into(), 6),
            ];
            planted.around = Some(vec![0, 1, 2, 3, 4]);
            emb
        }
        HostKind::Around466466 => {
            let links: Vec<(usize, usize)> = (1..6).map(|i| (i, i + 1)).collect();
            let mut emb = partial_wheel_links(6, &links);
            for (i, d) in [(1, 4), (2, 6), (3, 6), (4, 4), (5, 6), (6, 6)] {
                emb.pad_to_degree(i, d)?;
            }
            planted.roles = vec![
                ("v".into(), 0),
                ("r".into(), 1),
                ("t".into(), 2),
                ("w".into(), 3),
                ("u".into(), 4),
                ("y".into(), 5),
                ("p".into(), 6),
            ];
            planted.around = Some(vec![0, 1, 2, 3, 4, 5, 6]);
            emb
        }
        HostKind::FanReceiver5 { donor_degree } => {
            if donor_degree != 5 && donor_degree != 6 {
                return Err(GenError::InfeasibleSpec("donor degree must be 5 or 6".into()));
            }
            let mut emb = partial_wheel(5, true);
            emb.pad_to_degree(2, 5)?;
            emb.pad_to_degree(4, 5)?;
            if donor_degree == 5 {
                emb.pad_to_degree(3, 5)?;
            } else {
                // three 3-neighbors so the donor's remainder is again 1/3
                for _ in 0..3 {
                    let g = emb.to_graph();
                    let fs = FaceSet::trace(&g);
                    let anchor = g
                        .neighbors(3)
                        .iter()
                        .copied()
                        .find(|&x| {
                            fs.face_of_dart(x, 3)
                                .map(|f| fs.face_degree(f) >= 4)
                                .unwrap_or(false)
                        })
                        .expect("outer face at donor");
                    let t = emb.add_leaf(3, anchor);
                    emb.pad_to_degree(t, 3)?;
                }
            }
            planted.roles = vec![("receiver".into(), 0), ("donor".into(), 3)];
            emb
        }
        HostKind::WheelReceiver5 => {
            let mut emb = MutableEmbedding::from_graph(&wheel(5));
            for i in 1..=5 {
                emb.pad_to_degree(i, 5)?;
            }
            planted.roles = vec![("receiver".into(), 0)];
            emb
        }
    };
    let g = emb.to_graph();
    if let HostKind::Triangle(..) = kind {
        let fs = FaceSet::trace(&g);
        planted.face = fs
            .faces()
            .iter()
            .position(|f| f.len() == 3 && f.contains(&(0, 1)));
    }
    Ok((g, planted))
}

// ---------------------------------------------------------------------------
// exhaustive small-graph corpus

/// All connected graphs on at most `max_n` (<= 7) vertices, one per
/// isomorphism class, with an arbitrary rotation order.
pub fn connected_graphs_up_to_iso(max_n: usize) -> Vec<Graph> {
    assert!(max_n <= 7);
    let mut out = Vec::new();
    // graphs on n vertices as edge bitmasks over pairs (i < j)
    let pair_index = |n: usize| {
        let mut idx = vec![vec![0usize; n]; n];
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                idx[i][j] = c;
                idx[j][i] = c;
                c += 1;
            }
        }
        (idx, c)
    };
    let mut level: Vec<u32> = vec![0]; // the single graph on 1 vertex
    if max_n >= 1 {
        out.push(Graph::build(vec![vec![]]).unwrap());
    }
    for n in 2..=max_n {
        let (idx, bits) = pair_index(n);
        // precompute permutation tables for canonical forms
        let perms = permutations(n);
        let canon = |mask: u32| -> u32 {
            let mut best = u32::MAX;
            for p in &perms {
                let mut m = 0u32;
                for i in 0..n {
                    for j in i + 1..n {
                        if mask & (1 << idx[i][j]) != 0 {
                            m |= 1 << idx[p[i]][p[j]];
                        }
                    }
                }
                best = best.min(m);
            }
            best
        };
        let mut seen = std::collections::BTreeSet::new();
        let (idx_prev, _) = pair_index(n - 1);
        for &prev in &level {
            for nbrs in 0u32..(1 << (n - 1)) {
                // lift prev to n vertices and attach vertex n-1 to `nbrs`
                let mut mask = 0u32;
                for i in 0..n - 1 {
                    for j in i + 1..n - 1 {
                        if prev & (1 << idx_prev[i][j]) != 0 {
                            mask |= 1 << idx[i][j];
                        }
                    }
                }
                for i in 0..n - 1 {
                    if nbrs & (1 << i) != 0 {
                        mask |= 1 << idx[i][n - 1];
                    }
                }
                seen.insert(canon(mask));
            }
        }
        level = seen.into_iter().collect();
        let _ = bits;
        for &mask in &level {
            let mut rot: Vec<Vec<VertexId>> = vec![Vec::new(); n];
            for i in 0..n {
                for j in i + 1..n {
                    if mask & (1 << idx[i][j]) != 0 {
                        rot[i].push(j);
                        rot[j].push(i);
                    }
                }
            }
            let g = Graph::build(rot).unwrap();
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}
