//! Rotation-system plane graphs.
//!
//! Rotations are clockwise. The face to the left of a walk is traced with
//! `next(u -> v) = (v -> succ_v(u))`, where `succ_v` is the clockwise
//! successor in the rotation at `v`. Vertex ids are dense and stable under
//! every derived-graph operation: deleting a vertex isolates it.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub type Vertex = usize;

/// Undirected edge with `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    Loop { v: Vertex },
    DuplicateNeighbor { v: Vertex, u: Vertex },
    Asymmetric { v: Vertex, u: Vertex },
    VertexOutOfRange { v: Vertex, u: Vertex },
    /// A face list does not describe a disk around `v`.
    BadFaceSystem { v: Vertex },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Loop { v } => write!(f, "loop at vertex {v}"),
            GraphError::DuplicateNeighbor { v, u } => {
                write!(f, "vertex {u} listed twice in the rotation of {v}")
            }
            GraphError::Asymmetric { v, u } => {
                write!(f, "{u} is in the rotation of {v} but not conversely")
            }
            GraphError::VertexOutOfRange { v, u } => {
                write!(f, "rotation of {v} names out-of-range vertex {u}")
            }
            GraphError::BadFaceSystem { v } => {
                write!(f, "faces around vertex {v} do not close into one rotation")
            }
        }
    }
}

/// Malformed text input; `line` is 1-based, 0 when the error is global.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

impl TextError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        TextError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// Non-comment content of each line with its 1-based number.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    rotation: Vec<Vec<Vertex>>,
    // slot[v] = (neighbor, index in rotation[v]), sorted by neighbor
    slot: Vec<Vec<(Vertex, usize)>>,
    // face_of[v][i] = face to the left of dart v -> rotation[v][i]
    face_of: Vec<Vec<usize>>,
    faces: Vec<Vec<Vertex>>,
    edge_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub two_connected: bool,
    pub euler_ok: bool,
    pub simple: bool,
}

impl PlaneGraph {
    /// Parses `v: n1 n2 ...` lines (clockwise). Unlisted ids below the
    /// largest one are isolated.
    pub fn parse_text(text: &str) -> Result<Self, TextError> {
        let mut rows: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for (no, line) in content_lines(text) {
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| TextError::new(no, "expected `v: n1 n2 ...`"))?;
            let v: Vertex = head
                .trim()
                .parse()
                .map_err(|_| TextError::new(no, format!("bad vertex id `{}`", head.trim())))?;
            let rot = tail
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| TextError::new(no, format!("bad neighbor `{x}`"))))
                .collect::<Result<Vec<Vertex>, _>>()?;
            if rows.insert(v, rot).is_some() {
                return Err(TextError::new(no, format!("vertex {v} listed twice")));
            }
        }
        let n = rows.keys().next_back().map_or(0, |&v| v + 1);
        let mut rotation = vec![Vec::new(); n];
        for (v, rot) in rows {
            rotation[v] = rot;
        }
        PlaneGraph::from_rotation(rotation).map_err(|e| TextError::new(0, format!("{e}")))
    }

    /// Inverse of [`PlaneGraph::parse_text`]; every id gets a line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, rot) in self.rotation.iter().enumerate() {
            out.push_str(&format!("{v}:"));
            for u in rot {
                out.push_str(&format!(" {u}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_rotation(rotation: Vec<Vec<Vertex>>) -> Result<Self, GraphError> {
        let n = rotation.len();
        let mut slot: Vec<Vec<(Vertex, usize)>> = Vec::with_capacity(n);
        for (v, rot) in rotation.iter().enumerate() {
            let mut s: Vec<(Vertex, usize)> = Vec::with_capacity(rot.len());
            for (i, &u) in rot.iter().enumerate() {
                if u >= n {
                    return Err(GraphError::VertexOutOfRange { v, u });
                }
                if u == v {
                    return Err(GraphError::Loop { v });
                }
                s.push((u, i));
            }
            s.sort_unstable();
            for w in s.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(GraphError::DuplicateNeighbor { v, u: w[0].0 });
                }
            }
            slot.push(s);
        }
        let mut degree_sum = 0;
        for (v, rot) in rotation.iter().enumerate() {
            degree_sum += rot.len();
            for &u in rot {
                if slot[u].binary_search_by_key(&v, |p| p.0).is_err() {
                    return Err(GraphError::Asymmetric { v, u });
                }
            }
        }
        let mut g = PlaneGraph {
            face_of: rotation.iter().map(|r| vec![usize::MAX; r.len()]).collect(),
            rotation,
            slot,
            faces: Vec::new(),
            edge_count: degree_sum / 2,
        };
        g.trace_faces();
        Ok(g)
    }

    /// Builds the embedding whose faces are exactly the given vertex cycles.
    /// Each consecutive triple `(u, v, x)` of a face fixes `succ_v(u) = x`.
    pub fn from_faces(n: usize, faces: &[Vec<Vertex>]) -> Result<Self, GraphError> {
        let mut succ: Vec<BTreeMap<Vertex, Vertex>> = vec![BTreeMap::new(); n];
        for face in faces {
            let l = face.len();
            for i in 0..l {
                let u = face[i];
                let v = face[(i + 1) % l];
                let x = face[(i + 2) % l];
                if u >= n || v >= n || x >= n {
                    return Err(GraphError::VertexOutOfRange { v, u: u.max(x) });
                }
                if succ[v].insert(u, x).is_some() {
                    return Err(GraphError::BadFaceSystem { v });
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, s) in succ.iter().enumerate() {
            let Some((&start, _)) = s.iter().next() else {
                rotation.push(Vec::new());
                continue;
            };
            let mut rot = vec![start];
            let mut cur = start;
            loop {
                let nxt = *s.get(&cur).ok_or(GraphError::BadFaceSystem { v })?;
                if nxt == start {
                    break;
                }
                if rot.len() > s.len() {
                    return Err(GraphError::BadFaceSystem { v });
                }
                rot.push(nxt);
                cur = nxt;
            }
            if rot.len() != s.len() {
                return Err(GraphError::BadFaceSystem { v });
            }
            rotation.push(rot);
        }
        let g = PlaneGraph::from_rotation(rotation)?;
        if g.faces.len() != faces.len() {
            return Err(GraphError::BadFaceSystem { v: 0 });
        }
        Ok(g)
    }

    fn trace_faces(&mut self) {
        let mut faces = Vec::new();
        for v in 0..self.rotation.len() {
            for i in 0..self.rotation[v].len() {
                if self.face_of[v][i] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut face = Vec::new();
                let (mut a, mut ai) = (v, i);
                while self.face_of[a][ai] == usize::MAX {
                    self.face_of[a][ai] = id;
                    face.push(a);
                    let b = self.rotation[a][ai];
                    let bi = self.index_of(b, a).expect("symmetric");
                    let ni = (bi + 1) % self.rotation[b].len();
                    a = b;
                    ai = ni;
                }
                faces.push(face);
            }
        }
        self.faces = faces;
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn index_of(&self, v: Vertex, u: Vertex) -> Option<usize> {
        self.slot[v]
            .binary_search_by_key(&u, |p| p.0)
            .ok()
            .map(|k| self.slot[v][k].1)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && v < self.vertex_count() && self.index_of(u, v).is_some()
    }

    /// Clockwise successor of `u` around `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Option<Vertex> {
        let i = self.index_of(v, u)?;
        let r = &self.rotation[v];
        Some(r[(i + 1) % r.len()])
    }

    pub fn pred(&self, v: Vertex, u: Vertex) -> Option<Vertex> {
        let i = self.index_of(v, u)?;
        let r = &self.rotation[v];
        Some(r[(i + r.len() - 1) % r.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.rotation.iter().enumerate().flat_map(|(v, r)| {
            r.iter().filter(move |&&u| v < u).map(move |&u| Edge(v, u))
        })
    }

    /// Faces as vertex cycles; darts are `(f[i], f[i+1])`.
    pub fn faces(&self) -> &[Vec<Vertex>] {
        &self.faces
    }

    /// Face to the left of dart `u -> v`.
    pub fn face_of_dart(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index_of(u, v).map(|i| self.face_of[u][i])
    }

    /// Face of dart `u -> v` as a vertex cycle starting at `u`.
    pub fn face_from(&self, u: Vertex, v: Vertex) -> Option<Vec<Vertex>> {
        let f = &self.faces[self.face_of_dart(u, v)?];
        let l = f.len();
        (0..l)
            .find(|&i| f[i] == u && f[(i + 1) % l] == v)
            .map(|s| (0..l).map(|j| f[(s + j) % l]).collect())
    }

    /// Non-isolated vertices.
    pub fn active_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).filter(|&v| self.degree(v) > 0)
    }

    /// Connected components over all vertices, each sorted, ordered by least member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.rotation[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components that contain at least one edge.
    pub fn active_components(&self) -> Vec<Vec<Vertex>> {
        self.components()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Articulation points, ascending.
    pub fn cut_vertices(&self) -> Vec<Vertex> {
        let n = self.vertex_count();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (vertex, parent, next rotation index)
            let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (x, parent, i) = *top;
                if i < self.rotation[x].len() {
                    top.2 += 1;
                    let y = self.rotation[x][i];
                    if disc[y] == usize::MAX {
                        disc[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        if x == root {
                            root_children += 1;
                        }
                        stack.push((y, x, 0));
                    } else if y != parent {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[x]);
                        if parent != root && low[x] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Euler's formula checked per component: each traces its own outer face, so V - E + F = 2C.
    pub fn euler_ok(&self) -> bool {
        let comps = self.components();
        let v = self.vertex_count() as i64;
        let e = self.edge_count as i64;
        // An isolated vertex contributes one vertex and no dart, hence no traced face.
        let isolated = comps.iter().filter(|c| c.len() == 1).count() as i64;
        let f = self.faces.len() as i64 + isolated;
        v - e + f == 2 * comps.len() as i64
    }

    pub fn validate(&self) -> ValidationReport {
        let connected = self.vertex_count() > 0 && self.is_connected();
        ValidationReport {
            connected,
            two_connected: connected && self.vertex_count() >= 3 && self.cut_vertices().is_empty(),
            euler_ok: self.euler_ok(),
            simple: true,
        }
    }

    /// Same embedding with the listed edges deleted.
    pub fn without_edges(&self, edges: &[Edge]) -> PlaneGraph {
        let drop: BTreeSet<Edge> = edges.iter().copied().collect();
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, r)| {
                r.iter()
                    .copied()
                    .filter(|&u| !drop.contains(&Edge::new(v, u)))
                    .collect()
            })
            .collect();
        PlaneGraph::from_rotation(rotation).expect("edge deletion preserves validity")
    }

    /// Same embedding with every edge at `v` deleted; `v` stays as an isolated id.
    pub fn without_vertex(&self, v: Vertex) -> PlaneGraph {
        let edges: Vec<Edge> = self.rotation[v].iter().map(|&u| Edge::new(v, u)).collect();
        self.without_edges(&edges)
    }

    /// Subgraph induced by `keep`, ids preserved, other vertices isolated.
    pub fn induced(&self, keep: &[Vertex]) -> PlaneGraph {
        let mut mark = vec![false; self.vertex_count()];
        for &v in keep {
            mark[v] = true;
        }
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, r)| {
                if mark[v] {
                    r.iter().copied().filter(|&u| mark[u]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        PlaneGraph::from_rotation(rotation).expect("induced subgraph of a valid embedding")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> PlaneGraph {
        let mut rotation = vec![Vec::new(); self.vertex_count()];
        for (v, r) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = r.iter().map(|&u| perm[u]).collect();
        }
        PlaneGraph::from_rotation(rotation).expect("relabeling preserves validity")
    }
}

/// Threshold parameters. Defaults are the full-scale values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub big: usize,
    pub very_big_offset: usize,
    pub palette: Option<usize>,
    pub rc3_cap: usize,
    pub rc4_cap: usize,
    pub rc2: [usize; 4],
    pub long_bunch_min: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            big: 8680,
            very_big_offset: 4 * 8680,
            palette: None,
            rc3_cap: 35,
            rc4_cap: 141415,
            rc2: [8889, 17655, 26401, 35137],
            long_bunch_min: 11,
        }
    }
}

impl Thresholds {
    /// Full-scale defaults with only the big threshold changed.
    pub fn with_big(big: usize) -> Self {
        Thresholds {
            big,
            ..Thresholds::default()
        }
    }

    pub fn is_big(&self, g: &PlaneGraph, v: Vertex) -> bool {
        g.degree(v) >= self.big
    }

    pub fn is_very_big(&self, g: &PlaneGraph, v: Vertex) -> bool {
        g.degree(v) + self.very_big_offset >= g.max_degree()
    }

    /// Palette used by the reducibility argument: `max(Δ, 5 * big)` unless overridden.
    pub fn palette_for(&self, g: &PlaneGraph) -> usize {
        self.palette.unwrap_or_else(|| g.max_degree().max(5 * self.big))
    }
}

/// How the 4-cycle `v x_{i-1} w x_i` is filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GapKind {
    QuadFace,
    TwoTriangles,
}

/// A maximal bunch. `x_0..x_{t+1}` appear in this order clockwise around
/// `parents.0` and counterclockwise around `parents.1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bunch {
    pub parents: (Vertex, Vertex),
    pub anchors: (Vertex, Vertex),
    pub vertices: Vec<Vertex>,
    /// `gaps[i]` fills the 4-cycle on `x_i, x_{i+1}`, for `i` in `0..=t`.
    pub gaps: Vec<GapKind>,
}

impl Bunch {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `x_i` for `i` in `0..=t+1`.
    pub fn x(&self, i: usize) -> Vertex {
        let t = self.len();
        if i == 0 {
            self.anchors.0
        } else if i == t + 1 {
            self.anchors.1
        } else {
            self.vertices[i - 1]
        }
    }

    pub fn has_parent(&self, v: Vertex) -> bool {
        self.parents.0 == v || self.parents.1 == v
    }

    pub fn coparent(&self, v: Vertex) -> Vertex {
        if self.parents.0 == v {
            self.parents.1
        } else {
            self.parents.0
        }
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.vertices.contains(&x)
    }

    /// Edges `x_i x_{i+1}` for `1 <= i <= t-1` present in `g`.
    pub fn horizontal_edges(&self, g: &PlaneGraph) -> Vec<Edge> {
        self.vertices
            .windows(2)
            .filter(|w| g.has_edge(w[0], w[1]))
            .map(|w| Edge::new(w[0], w[1]))
            .collect()
    }

    /// Re-checks every bunch invariant from the face list alone.
    pub fn check(&self, g: &PlaneGraph, th: &Thresholds) -> Result<(), BunchDefect> {
        let (v, w) = self.parents;
        let t = self.len();
        if t == 0 || self.gaps.len() != t + 1 {
            return Err(BunchDefect::Shape);
        }
        if !th.is_big(g, v) || !th.is_big(g, w) || v == w {
            return Err(BunchDefect::ParentNotBig);
        }
        for &x in &self.vertices {
            if g.degree(x) > 4 {
                return Err(BunchDefect::DegreeTooHigh(x));
            }
        }
        let face_sets: BTreeSet<Vec<Vertex>> = g
            .faces()
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let has_face = |vs: &[Vertex]| {
            let mut s = vs.to_vec();
            s.sort_unstable();
            face_sets.contains(&s)
        };
        for i in 0..=t {
            let (a, b) = (self.x(i), self.x(i + 1));
            if g.succ(v, a) != Some(b) || g.pred(w, a) != Some(b) {
                return Err(BunchDefect::NotConsecutive(i));
            }
            let ok = match self.gaps[i] {
                GapKind::QuadFace => has_face(&[v, a, w, b]),
                GapKind::TwoTriangles => has_face(&[v, a, b]) && has_face(&[w, a, b]),
            };
            if !ok {
                return Err(BunchDefect::Separating(i));
            }
        }
        let extendable_left = g.degree(self.anchors.0) <= 4
            && g
                .pred(v, self.anchors.0)
                .is_some_and(|p| p != self.anchors.1 && good_gap(g, v, w, p, self.anchors.0).is_some());
        let extendable_right = g.degree(self.anchors.1) <= 4
            && g
                .succ(v, self.anchors.1)
                .is_some_and(|s| s != self.anchors.0 && good_gap(g, v, w, self.anchors.1, s).is_some());
        if extendable_left || extendable_right {
            return Err(BunchDefect::NotMaximal);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BunchDefect {
    Shape,
    ParentNotBig,
    DegreeTooHigh(Vertex),
    NotConsecutive(usize),
    Separating(usize),
    NotMaximal,
}

impl fmt::Display for BunchDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BunchDefect::Shape => write!(f, "malformed bunch record"),
            BunchDefect::ParentNotBig => write!(f, "a parent is not big"),
            BunchDefect::DegreeTooHigh(x) => write!(f, "bunch vertex {x} has degree above 4"),
            BunchDefect::NotConsecutive(i) => write!(f, "gap {i} is not consecutive at both parents"),
            BunchDefect::Separating(i) => write!(f, "gap {i} does not bound the recorded faces"),
            BunchDefect::NotMaximal => write!(f, "bunch extends past an anchor"),
        }
    }
}

/// Gap between consecutive neighbors `a`, `b = succ_v(a)` with respect to `w`.
fn good_gap(g: &PlaneGraph, v: Vertex, w: Vertex, a: Vertex, b: Vertex) -> Option<GapKind> {
    if a == w || b == w || a == b || !g.has_edge(a, w) || !g.has_edge(b, w) {
        return None;
    }
    let f = g.face_from(a, v)?;
    if f.len() == 4 && f[2] == b && f[3] == w {
        return Some(GapKind::QuadFace);
    }
    if f.len() == 3 && f[2] == b {
        let h = g.face_from(b, w)?;
        if h.len() == 3 && h[2] == a {
            return Some(GapKind::TwoTriangles);
        }
    }
    None
}

/// Every maximal bunch, sorted by `(parents, vertices)`.
pub fn find_bunches(g: &PlaneGraph, th: &Thresholds) -> Vec<Bunch> {
    let mut out = Vec::new();
    let n = g.vertex_count();
    for v in 0..n {
        if !th.is_big(g, v) {
            continue;
        }
        let mut partners = BTreeSet::new();
        for &y in g.neighbors(v) {
            for &w in g.neighbors(y) {
                if w > v && th.is_big(g, w) {
                    partners.insert(w);
                }
            }
        }
        for w in partners {
            bunches_for_pair(g, v, w, &mut out);
        }
    }
    out.sort();
    out
}

fn bunches_for_pair(g: &PlaneGraph, v: Vertex, w: Vertex, out: &mut Vec<Bunch>) {
    let rot = g.neighbors(v);
    let d = rot.len();
    let gaps: Vec<Option<GapKind>> = (0..d)
        .map(|i| good_gap(g, v, w, rot[i], rot[(i + 1) % d]))
        .collect();
    let emit = |run: &[Vertex], kinds: &[GapKind], out: &mut Vec<Bunch>| {
        // run = y_0..y_m with kinds[i] between y_i and y_{i+1}; split at 5+ interior vertices
        let mut start = 0;
        for j in 1..run.len() {
            let cut = j == run.len() - 1 || g.degree(run[j]) > 4;
            if cut {
                if j - start >= 2 {
                    out.push(Bunch {
                        parents: (v, w),
                        anchors: (run[start], run[j]),
                        vertices: run[start + 1..j].to_vec(),
                        gaps: kinds[start..j].to_vec(),
                    });
                }
                start = j;
            }
        }
    };
    if gaps.iter().all(Option::is_some) {
        let kinds_at = |i: usize| gaps[i % d].expect("all gaps good");
        let begin = (0..d)
            .find(|&i| g.degree(rot[i]) > 4)
            .unwrap_or_else(|| (0..d).min_by_key(|&i| rot[i]).expect("nonempty"));
        let run: Vec<Vertex> = (0..=d).map(|j| rot[(begin + j) % d]).collect();
        let kinds: Vec<GapKind> = (0..d).map(|j| kinds_at(begin + j)).collect();
        emit(&run, &kinds, out);
        return;
    }
    let first_bad = (0..d).find(|&i| gaps[i].is_none()).expect("some gap bad");
    let mut i = 1;
    while i <= d {
        let idx = (first_bad + i) % d;
        if gaps[idx].is_none() {
            i += 1;
            continue;
        }
        let mut run = vec![rot[idx]];
        let mut kinds = Vec::new();
        let mut j = i;
        while j <= d && gaps[(first_bad + j) % d].is_some() {
            let k = (first_bad + j) % d;
            kinds.push(gaps[k].expect("good"));
            run.push(rot[(k + 1) % d]);
            j += 1;
        }
        emit(&run, &kinds, out);
        i = j;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> PlaneGraph {
        PlaneGraph::from_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let g = k4().without_vertex(2);
        let text = g.to_text();
        assert_eq!(text, "0: 1 3\n1: 0 3\n2:\n3: 0 1\n");
        assert_eq!(PlaneGraph::parse_text(&text).unwrap(), g);
        let commented: String = k4().to_text().lines().map(|l| format!("# note\n\n{l}  # trailing\n")).collect();
        assert_eq!(PlaneGraph::parse_text(&commented).unwrap(), k4());
    }

    #[test]
    fn text_errors_name_the_line() {
        assert_eq!(PlaneGraph::parse_text("0: 1\nx: 0").unwrap_err().line, 2);
        assert_eq!(PlaneGraph::parse_text("0: 1\n0: 1").unwrap_err().line, 2);
        assert_eq!(PlaneGraph::parse_text("0: 1\n1:").unwrap_err().line, 0);
    }

    fn cube() -> PlaneGraph {
        PlaneGraph::from_faces(
            8,
            &[
                vec![0, 1, 2, 3],
                vec![4, 7, 6, 5],
                vec![0, 4, 5, 1],
                vec![1, 5, 6, 2],
                vec![2, 6, 7, 3],
                vec![3, 7, 4, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn k4_has_four_triangles() {
        let g = k4();
        assert_eq!(g.face_count(), 4);
        assert!(g.faces().iter().all(|f| f.len() == 3));
        assert_eq!(g.edge_count(), 6);
        let r = g.validate();
        assert!(r.connected && r.two_connected && r.euler_ok && r.simple);
    }

    #[test]
    fn cube_has_six_quads() {
        let g = cube();
        assert_eq!(g.face_count(), 6);
        assert!(g.faces().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn rotation_errors_name_the_pair() {
        assert_eq!(PlaneGraph::from_rotation(vec![vec![0]]), Err(GraphError::Loop { v: 0 }));
        assert_eq!(
            PlaneGraph::from_rotation(vec![vec![1, 1], vec![0]]),
            Err(GraphError::DuplicateNeighbor { v: 0, u: 1 })
        );
        assert_eq!(
            PlaneGraph::from_rotation(vec![vec![1], vec![]]),
            Err(GraphError::Asymmetric { v: 0, u: 1 })
        );
        assert_eq!(
            PlaneGraph::from_rotation(vec![vec![5]]),
            Err(GraphError::VertexOutOfRange { v: 0, u: 5 })
        );
    }

    #[test]
    fn bowtie_is_not_two_connected() {
        let g = PlaneGraph::from_faces(5, &[vec![0, 1, 2], vec![0, 3, 4], vec![0, 2, 1, 0, 4, 3]]).unwrap();
        let r = g.validate();
        assert!(r.connected && !r.two_connected && r.euler_ok);
        assert_eq!(g.cut_vertices(), vec![0]);
    }

    #[test]
    fn single_edge_is_below_size_floor() {
        let g = PlaneGraph::from_rotation(vec![vec![1], vec![0]]).unwrap();
        let r = g.validate();
        assert!(r.connected && !r.two_connected && r.euler_ok);
    }

    #[test]
    fn face_darts_partition() {
        let g = cube();
        let total: usize = g.faces().iter().map(Vec::len).sum();
        assert_eq!(total, 2 * g.edge_count());
        assert_eq!(g.face_from(0, 1).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn deletion_keeps_ids() {
        let g = k4().without_vertex(3);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(g.euler_ok());
        assert_eq!(g.active_components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn small_graphs_have_no_bunches() {
        assert!(find_bunches(&k4(), &Thresholds::default()).is_empty());
    }

    #[test]
    fn wheel_pair_bunch() {
        // Two hubs 0 and 1 sharing a fan of 2-vertices 2..=7 between anchors 8 and 9.
        let xs: Vec<Vertex> = (2..8).collect();
        let mut faces = Vec::new();
        let seq: Vec<Vertex> = core::iter::once(8).chain(xs.iter().copied()).chain([9]).collect();
        for p in seq.windows(2) {
            faces.push(vec![p[0], 0, p[1], 1]);
        }
        faces.push(vec![9, 0, 8, 10]);
        faces.push(vec![8, 1, 9, 10]);
        let g = PlaneGraph::from_faces(11, &faces).unwrap();
        assert!(g.validate().euler_ok);
        let bs = find_bunches(&g, &Thresholds::with_big(8));
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].vertices, xs);
        assert!(bs[0].check(&g, &Thresholds::with_big(8)).is_ok());
    }
}
