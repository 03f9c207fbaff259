//! Fixture graphs. Every construction is expressed as a face list and
//! rebuilt through [`PlaneGraph::from_faces`], which re-validates it.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::acyclic_coloring::{extend_acyclic, EdgeColoring};
use crate::plane_graph::{Bunch, Edge, GapKind, GraphError, PlaneGraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    Parameter(&'static str),
    /// Position `i` cannot take the requested degree given its neighbors.
    InconsistentDegrees { position: usize },
    BaseFaces { length: usize },
    Graph(GraphError),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::Parameter(p) => write!(f, "invalid parameter: {p}"),
            GenError::InconsistentDegrees { position } => {
                write!(f, "degree at bunch position {position} cannot be realized")
            }
            GenError::BaseFaces { length } => write!(f, "base graph has a face of length {length}"),
            GenError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl From<GraphError> for GenError {
    fn from(e: GraphError) -> Self {
        GenError::Graph(e)
    }
}

type P3 = [f64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Convex polyhedron centered at the origin: joins pairs at minimum distance
/// and orders each rotation clockwise as seen from outside.
pub fn polyhedron(points: &[P3]) -> Result<PlaneGraph, GenError> {
    let n = points.len();
    let mut min = f64::MAX;
    for i in 0..n {
        for j in i + 1..n {
            let d = sub(points[i], points[j]);
            min = min.min(dot(d, d));
        }
    }
    let mut rotation = Vec::with_capacity(n);
    for i in 0..n {
        let p = points[i];
        let nbrs: Vec<usize> = (0..n)
            .filter(|&j| {
                let d = sub(points[j], p);
                j != i && dot(d, d) <= min * (1.0 + 1e-9)
            })
            .collect();
        let e1 = {
            let d = sub(points[nbrs[0]], p);
            let k = dot(d, p) / dot(p, p);
            [d[0] - k * p[0], d[1] - k * p[1], d[2] - k * p[2]]
        };
        let e2 = cross(p, e1);
        let planar = |j: usize| {
            let d = sub(points[j], p);
            (dot(d, e1), dot(d, e2))
        };
        let half = |(x, y): (f64, f64)| if y > 0.0 || (y == 0.0 && x > 0.0) { 0 } else { 1 };
        let mut sorted = nbrs.clone();
        // Counterclockwise by angle, then reversed for clockwise.
        sorted.sort_by(|&a, &b| {
            let (pa, pb) = (planar(a), planar(b));
            half(pa).cmp(&half(pb)).then_with(|| {
                let c = pa.0 * pb.1 - pa.1 * pb.0;
                if c > 0.0 {
                    Ordering::Less
                } else if c < 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            })
        });
        sorted.reverse();
        rotation.push(sorted);
    }
    Ok(PlaneGraph::from_rotation(rotation)?)
}

const PHI: f64 = 1.618_033_988_749_895;

fn signs(k: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1usize << k).map(move |m| (0..k).map(|b| if m >> b & 1 == 1 { -1.0 } else { 1.0 }).collect())
}

pub fn tetrahedron() -> PlaneGraph {
    polyhedron(&[[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]).expect("tetrahedron")
}

pub fn cube() -> PlaneGraph {
    let pts: Vec<P3> = signs(3).map(|s| [s[0], s[1], s[2]]).collect();
    polyhedron(&pts).expect("cube")
}

pub fn octahedron() -> PlaneGraph {
    let pts = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    polyhedron(&pts).expect("octahedron")
}

pub fn icosahedron() -> PlaneGraph {
    let mut pts = Vec::new();
    for s in signs(2) {
        pts.push([0.0, s[0], s[1] * PHI]);
        pts.push([s[0], s[1] * PHI, 0.0]);
        pts.push([s[1] * PHI, 0.0, s[0]]);
    }
    polyhedron(&pts).expect("icosahedron")
}

pub fn dodecahedron() -> PlaneGraph {
    let mut pts: Vec<P3> = signs(3).map(|s| [s[0], s[1], s[2]]).collect();
    for s in signs(2) {
        pts.push([0.0, s[0] / PHI, s[1] * PHI]);
        pts.push([s[0] / PHI, s[1] * PHI, 0.0]);
        pts.push([s[1] * PHI, 0.0, s[0] / PHI]);
    }
    polyhedron(&pts).expect("dodecahedron")
}

/// Wheel with hub 0 and rim `1..=n`.
pub fn wheel(n: usize) -> PlaneGraph {
    let mut faces: Vec<Vec<Vertex>> = (1..=n).map(|i| vec![0, i, i % n + 1]).collect();
    faces.push((1..=n).rev().collect());
    PlaneGraph::from_faces(n + 1, &faces).expect("wheel")
}

/// Cuts every vertex corner: one new vertex per dart `u -> v`, placed near `u`.
pub fn truncate(g: &PlaneGraph) -> PlaneGraph {
    let mut offset = vec![0usize; g.vertex_count() + 1];
    for v in 0..g.vertex_count() {
        offset[v + 1] = offset[v] + g.degree(v);
    }
    let id = |u: Vertex, v: Vertex| offset[u] + g.index_of(u, v).expect("dart");
    let mut faces = Vec::new();
    for u in 0..g.vertex_count() {
        if g.degree(u) > 0 {
            faces.push(g.neighbors(u).iter().rev().map(|&v| id(u, v)).collect());
        }
    }
    for f in g.faces() {
        let l = f.len();
        let mut out = Vec::with_capacity(2 * l);
        for i in 0..l {
            let (a, b) = (f[i], f[(i + 1) % l]);
            out.push(id(a, b));
            out.push(id(b, a));
        }
        faces.push(out);
    }
    PlaneGraph::from_faces(offset[g.vertex_count()], &faces).expect("truncation of a valid embedding")
}

pub fn truncated_dodecahedron() -> PlaneGraph {
    truncate(&dodecahedron())
}

/// Replaces each listed edge by a path through `times` new vertices.
pub fn subdivide(g: &PlaneGraph, edges: &[Edge], times: usize) -> PlaneGraph {
    let mut next = g.vertex_count();
    let mut inner: alloc::collections::BTreeMap<Edge, Vec<Vertex>> = alloc::collections::BTreeMap::new();
    for &e in edges {
        inner.insert(e, (next..next + times).collect());
        next += times;
    }
    let faces: Vec<Vec<Vertex>> = g
        .faces()
        .iter()
        .map(|f| {
            let l = f.len();
            let mut out = Vec::new();
            for i in 0..l {
                let (a, b) = (f[i], f[(i + 1) % l]);
                out.push(a);
                if let Some(path) = inner.get(&Edge::new(a, b)) {
                    if a < b {
                        out.extend(path.iter().copied());
                    } else {
                        out.extend(path.iter().rev().copied());
                    }
                }
            }
            out
        })
        .collect();
    PlaneGraph::from_faces(next, &faces).expect("subdivision of a valid embedding")
}

/// Adds a hub inside every face selected by `pick`, joined to its boundary in order.
pub fn stellate(g: &PlaneGraph, pick: impl Fn(&[Vertex]) -> bool) -> PlaneGraph {
    let mut next = g.vertex_count();
    let mut faces = Vec::new();
    for f in g.faces() {
        if pick(f) {
            let hub = next;
            next += 1;
            let l = f.len();
            for i in 0..l {
                faces.push(vec![f[i], f[(i + 1) % l], hub]);
            }
        } else {
            faces.push(f.clone());
        }
    }
    PlaneGraph::from_faces(next, &faces).expect("stellation of a valid embedding")
}

/// Subdivide `t` times each edge between two non-triangular faces of the
/// truncation of `base`, then stellate every face of length at least 4.
pub fn borodin_from_base(base: &PlaneGraph, t: usize) -> Result<PlaneGraph, GenError> {
    if t < 1 {
        return Err(GenError::Parameter("t must be at least 1"));
    }
    if let Some(f) = base.faces().iter().find(|f| f.len() != 5 && f.len() != 6) {
        return Err(GenError::BaseFaces { length: f.len() });
    }
    let tr = truncate(base);
    let long: Vec<Edge> = tr
        .edges()
        .filter(|e| {
            let fa = tr.face_of_dart(e.0, e.1).expect("dart");
            let fb = tr.face_of_dart(e.1, e.0).expect("dart");
            tr.faces()[fa].len() >= 4 && tr.faces()[fb].len() >= 4
        })
        .collect();
    let sub = subdivide(&tr, &long, t);
    Ok(stellate(&sub, |f| f.len() >= 4))
}

pub fn borodin_construction(t: usize) -> Result<PlaneGraph, GenError> {
    borodin_from_base(&dodecahedron(), t)
}

/// One bunch side of a hub gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentSpec {
    /// `t + 1` gap kinds from anchor to anchor.
    pub gaps: Vec<GapKind>,
    /// Extra path vertices on the co-parent's far side.
    pub coparent_padding: usize,
    /// Hub neighbors on the path after this segment's right anchor.
    pub free_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubGadget {
    pub graph: PlaneGraph,
    pub hub: Vertex,
    pub coparents: Vec<Vertex>,
    pub bunches: Vec<Bunch>,
    pub free: Vec<Vertex>,
}

/// Hub `0` with one co-parent per segment. Segment `j` contributes anchors
/// `A_j, B_j`, bunch vertices between them, padding on the co-parent side,
/// and free hub neighbors between `B_j` and `A_{j+1}`.
pub fn hub_gadget(segments: &[SegmentSpec]) -> Result<HubGadget, GenError> {
    if segments.is_empty() {
        return Err(GenError::Parameter("at least one segment"));
    }
    let hub = 0;
    let mut next = 1;
    let mut alloc = |k: usize| {
        let r: Vec<Vertex> = (next..next + k).collect();
        next += k;
        r
    };
    struct Laid {
        w: Vertex,
        run: Vec<Vertex>,
        pad: Vec<Vertex>,
        free: Vec<Vertex>,
    }
    let mut laid = Vec::new();
    for s in segments {
        if s.gaps.len() < 2 {
            return Err(GenError::Parameter("a segment needs at least one bunch vertex"));
        }
        let w = alloc(1)[0];
        let run = alloc(s.gaps.len() + 1);
        let pad = alloc(s.coparent_padding);
        let free = alloc(s.free_after);
        laid.push(Laid { w, run, pad, free });
    }
    let outer_len: usize = laid.iter().map(|l| 2 + l.pad.len() + l.free.len()).sum();
    if outer_len < 3 {
        return Err(GenError::Parameter("outer face would have fewer than 3 vertices"));
    }
    let mut faces = Vec::new();
    let mut outer = Vec::new();
    for (j, (l, s)) in laid.iter().zip(segments).enumerate() {
        for (i, kind) in s.gaps.iter().enumerate() {
            let (a, b) = (l.run[i], l.run[i + 1]);
            match kind {
                GapKind::QuadFace => faces.push(vec![a, hub, b, l.w]),
                GapKind::TwoTriangles => {
                    faces.push(vec![a, hub, b]);
                    faces.push(vec![b, l.w, a]);
                }
            }
        }
        let first = l.run[0];
        let last = *l.run.last().expect("nonempty");
        let back: Vec<Vertex> = core::iter::once(first)
            .chain(l.pad.iter().copied())
            .chain([last])
            .collect();
        for p in back.windows(2) {
            faces.push(vec![p[0], l.w, p[1]]);
        }
        let next_anchor = laid[(j + 1) % laid.len()].run[0];
        let fan: Vec<Vertex> = core::iter::once(last)
            .chain(l.free.iter().copied())
            .chain([next_anchor])
            .collect();
        for p in fan.windows(2) {
            faces.push(vec![p[0], hub, p[1]]);
        }
        outer.extend(back.iter().copied());
        outer.extend(l.free.iter().copied());
    }
    faces.push(outer);
    let graph = PlaneGraph::from_faces(next, &faces)?;
    let bunches = laid
        .iter()
        .zip(segments)
        .map(|(l, s)| Bunch {
            parents: (hub, l.w),
            anchors: (l.run[0], *l.run.last().expect("nonempty")),
            vertices: l.run[1..l.run.len() - 1].to_vec(),
            gaps: s.gaps.clone(),
        })
        .collect();
    Ok(HubGadget {
        graph,
        hub,
        coparents: laid.iter().map(|l| l.w).collect(),
        bunches,
        free: laid.iter().flat_map(|l| l.free.iter().copied()).collect(),
    })
}

/// Single-bunch gadget described by bunch-vertex degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    /// Degree of `x_1..x_t`, each in `2..=4`.
    pub degrees: Vec<usize>,
    /// Whether `x_0 x_1` is an edge.
    pub left_anchor_edge: bool,
    /// Whether `x_t x_{t+1}` is an edge.
    pub right_anchor_edge: bool,
    pub coparent_padding: usize,
    pub free_neighbors: usize,
}

impl GadgetSpec {
    pub fn from_gaps(gaps: &[GapKind], coparent_padding: usize, free_neighbors: usize) -> Self {
        let tri = |k: GapKind| usize::from(k == GapKind::TwoTriangles);
        GadgetSpec {
            degrees: gaps.windows(2).map(|w| 2 + tri(w[0]) + tri(w[1])).collect(),
            left_anchor_edge: gaps[0] == GapKind::TwoTriangles,
            right_anchor_edge: gaps[gaps.len() - 1] == GapKind::TwoTriangles,
            coparent_padding,
            free_neighbors,
        }
    }

    /// Uniform gap kinds from `seed`.
    pub fn random(t: usize, seed: u64, coparent_padding: usize, free_neighbors: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gaps: Vec<GapKind> = (0..=t)
            .map(|_| if rng.gen_bool(0.5) { GapKind::TwoTriangles } else { GapKind::QuadFace })
            .collect();
        GadgetSpec::from_gaps(&gaps, coparent_padding, free_neighbors)
    }

    /// Gap kinds forced by the degrees: `h_i = d_i - 2 - h_{i-1}`.
    pub fn gaps(&self) -> Result<Vec<GapKind>, GenError> {
        if self.degrees.is_empty() {
            return Err(GenError::Parameter("bunch length must be positive"));
        }
        let mut h = vec![usize::from(self.left_anchor_edge)];
        for (i, &d) in self.degrees.iter().enumerate() {
            let prev = h[i];
            if !(2..=4).contains(&d) || d < 2 + prev || d - 2 - prev > 1 {
                return Err(GenError::InconsistentDegrees { position: i + 1 });
            }
            h.push(d - 2 - prev);
        }
        if h[self.degrees.len()] != usize::from(self.right_anchor_edge) {
            return Err(GenError::InconsistentDegrees {
                position: self.degrees.len(),
            });
        }
        Ok(h.into_iter()
            .map(|x| if x == 1 { GapKind::TwoTriangles } else { GapKind::QuadFace })
            .collect())
    }
}

pub fn bunch_gadget(spec: &GadgetSpec) -> Result<(PlaneGraph, Bunch), GenError> {
    let seg = SegmentSpec {
        gaps: spec.gaps()?,
        coparent_padding: spec.coparent_padding,
        free_after: spec.free_neighbors,
    };
    let mut h = hub_gadget(&[seg])?;
    Ok((h.graph, h.bunches.remove(0)))
}

/// Twelve-thread bunch whose conflict graph is two 6-cycles, with an acyclic
/// coloring of the graph minus its horizontals.
#[derive(Clone, Debug)]
pub struct TwelveThreadExample {
    pub graph: PlaneGraph,
    pub bunch: Bunch,
    pub stripped: PlaneGraph,
    pub coloring: EdgeColoring,
    pub k: usize,
}

/// `(color at v, color at w)` per thread.
pub const TWELVE_THREAD_COLORS: [(usize, usize); 12] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (6, 1),
    (7, 8),
    (8, 9),
    (9, 10),
    (10, 11),
    (11, 12),
    (12, 7),
];

pub fn twelve_thread_example() -> Result<TwelveThreadExample, GenError> {
    use GapKind::{QuadFace as Q, TwoTriangles as T};
    let gaps = vec![T, T, Q, Q, Q, Q, T, Q, Q, Q, Q, T, T];
    let (graph, bunch) = bunch_gadget(&GadgetSpec::from_gaps(&gaps, 1, 1))?;
    let stripped = graph.without_edges(&bunch.horizontal_edges(&graph));
    let k = 15;
    let (v, w) = bunch.parents;
    let mut partial = EdgeColoring::new(k);
    for (i, &(a, b)) in TWELVE_THREAD_COLORS.iter().enumerate() {
        let x = bunch.x(i + 1);
        partial.set(v, x, a).expect("within palette");
        partial.set(x, w, b).expect("within palette");
    }
    partial.set(bunch.x(0), bunch.x(1), 4).expect("within palette");
    partial.set(bunch.x(12), bunch.x(13), 9).expect("within palette");
    let coloring = extend_acyclic(&stripped, &partial, k, 5_000_000).ok_or(GenError::Parameter("example is not completable"))?;
    Ok(TwelveThreadExample {
        graph,
        bunch,
        stripped,
        coloring,
        k,
    })
}

/// Random plane triangulation grown by face insertions and edge splits.
pub fn random_triangulation(n: usize, rng: &mut ChaCha8Rng) -> PlaneGraph {
    let n = n.max(3);
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for z in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[fi];
        // Split the edge a -> b, whose other face runs b -> a.
        let (u, v, x) = (a, b, c);
        let fj = faces
            .iter()
            .position(|f| (0..3).any(|i| f[i] == v && f[(i + 1) % 3] == u))
            .expect("every dart has a twin");
        let f2 = faces[fj];
        let i = (0..3).find(|&i| f2[i] == v && f2[(i + 1) % 3] == u).expect("twin");
        let y = f2[(i + 2) % 3];
        // x == y would double the new edge zx.
        if x == y || rng.gen_bool(0.7) {
            faces.swap_remove(fi);
            faces.extend([[a, b, z], [b, c, z], [c, a, z]]);
        } else {
            let (hi, lo) = (fi.max(fj), fi.min(fj));
            faces.swap_remove(hi);
            faces.swap_remove(lo);
            faces.extend([[u, z, x], [z, v, x], [v, z, y], [z, u, y]]);
        }
    }
    let lists: Vec<Vec<Vertex>> = faces.iter().map(|f| f.to_vec()).collect();
    PlaneGraph::from_faces(n, &lists).expect("triangulation")
}

fn thin_out(mut g: PlaneGraph, rng: &mut ChaCha8Rng, keep_two_connected: bool) -> PlaneGraph {
    let budget = rng.gen_range(0..=g.vertex_count());
    let mut edges: Vec<Edge> = g.edges().collect();
    edges.shuffle(rng);
    let mut removed = 0;
    for e in edges {
        if removed >= budget {
            break;
        }
        let h = g.without_edges(&[e]);
        let r = h.validate();
        let ok = if keep_two_connected { r.two_connected } else { r.connected };
        if ok {
            g = h;
            removed += 1;
        }
    }
    g
}

/// Connected plane graph on `n` vertices, deterministic per seed.
pub fn random_planar(n: usize, seed: u64) -> PlaneGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_triangulation(n, &mut rng);
    thin_out(g, &mut rng, false)
}

/// 2-connected plane graph on `n` vertices, deterministic per seed.
pub fn random_two_connected_planar(n: usize, seed: u64) -> PlaneGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_triangulation(n, &mut rng);
    thin_out(g, &mut rng, true)
}

/// Distinct vertex degrees.
pub fn degree_classes(g: &PlaneGraph) -> BTreeSet<usize> {
    (0..g.vertex_count()).map(|v| g.degree(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::{find_bunches, Thresholds};

    fn face_lengths(g: &PlaneGraph) -> Vec<usize> {
        let mut l: Vec<usize> = g.faces().iter().map(Vec::len).collect();
        l.sort_unstable();
        l
    }

    #[test]
    fn platonic_solids() {
        for (g, v, e, f) in [
            (tetrahedron(), 4, 6, 4),
            (cube(), 8, 12, 6),
            (octahedron(), 6, 12, 8),
            (icosahedron(), 12, 30, 20),
            (dodecahedron(), 20, 30, 12),
        ] {
            assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (v, e, f));
            assert!(g.validate().two_connected);
        }
    }

    #[test]
    fn truncated_dodecahedron_census() {
        let g = truncated_dodecahedron();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (60, 90, 32));
        let l = face_lengths(&g);
        assert_eq!(l.iter().filter(|&&x| x == 3).count(), 20);
        assert_eq!(l.iter().filter(|&&x| x == 10).count(), 12);
        assert!((0..60).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn borodin_degrees() {
        for t in 1..=3 {
            let g = borodin_construction(t).unwrap();
            assert_eq!(g.max_degree(), 5 * t + 10);
            assert_eq!(g.min_degree(), 4);
            assert!(g.faces().iter().all(|f| f.len() == 3));
            assert_eq!(degree_classes(&g), BTreeSet::from([4, 5, 5 * t + 10]));
            for v in g.active_vertices().filter(|&v| g.degree(v) <= 5) {
                let hubs = g.neighbors(v).iter().filter(|&&u| g.degree(u) == 5 * t + 10).count();
                assert_eq!(hubs, 2, "t = {t}, vertex {v}");
            }
        }
        assert!(borodin_construction(0).is_err());
    }

    #[test]
    fn borodin_bunches() {
        let g = borodin_construction(3).unwrap();
        let bs = find_bunches(&g, &Thresholds::with_big(25));
        assert_eq!(bs.len(), 30);
        assert!(bs.iter().all(|b| b.len() == 3));
        assert!(bs.iter().all(|b| !g.has_edge(b.parents.0, b.parents.1)));
    }

    #[test]
    fn generalized_base_rejects_triangles() {
        assert_eq!(borodin_from_base(&icosahedron(), 1), Err(GenError::BaseFaces { length: 3 }));
    }

    #[test]
    fn gadget_roundtrip() {
        let spec = GadgetSpec::random(11, 7, 2, 2);
        let (g, b) = bunch_gadget(&spec).unwrap();
        let th = Thresholds::with_big(12);
        assert_eq!(find_bunches(&g, &th), vec![b.clone()]);
        assert!(b.check(&g, &th).is_ok());
    }

    #[test]
    fn all_two_vertices_means_quads() {
        let spec = GadgetSpec {
            degrees: vec![2; 6],
            left_anchor_edge: false,
            right_anchor_edge: false,
            coparent_padding: 1,
            free_neighbors: 1,
        };
        let (g, b) = bunch_gadget(&spec).unwrap();
        assert!(b.gaps.iter().all(|&k| k == GapKind::QuadFace));
        assert!(b.horizontal_edges(&g).is_empty());
    }

    #[test]
    fn four_vertex_at_end_needs_support() {
        let spec = GadgetSpec {
            degrees: vec![4, 2],
            left_anchor_edge: false,
            right_anchor_edge: false,
            coparent_padding: 1,
            free_neighbors: 1,
        };
        assert_eq!(spec.gaps(), Err(GenError::InconsistentDegrees { position: 1 }));
    }

    #[test]
    fn random_planar_is_deterministic() {
        assert_eq!(random_planar(10, 1), random_planar(10, 1));
        for seed in 0..20 {
            let g = random_planar(30, seed);
            assert!(g.validate().connected && g.validate().euler_ok);
            let h = random_two_connected_planar(30, seed);
            assert!(h.validate().two_connected && h.validate().euler_ok);
        }
    }

    #[test]
    fn twelve_thread_example_rethreads() {
        let ex = twelve_thread_example().unwrap();
        assert!(crate::acyclic_coloring::verify_acyclic(&ex.stripped, &ex.coloring).acyclic);
        let out = crate::rethreading::rethread_bunch(&ex.graph, &ex.bunch, &ex.coloring, ex.k).unwrap();
        assert!(crate::acyclic_coloring::verify_acyclic(&ex.graph, &out.coloring).acyclic);
    }

    #[test]
    fn wheel_shape() {
        let g = wheel(20);
        assert_eq!(g.degree(0), 20);
        assert_eq!(face_lengths(&g).last(), Some(&20));
    }
}
