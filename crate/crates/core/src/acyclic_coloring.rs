//! Edge colorings, acyclicity checks, the exact oracle, and the vertex and
//! cut-vertex extension kernels.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::plane_graph::{content_lines, Edge, PlaneGraph, TextError, Vertex};

pub type Color = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringError {
    UnknownEdge(Edge),
    ColorOutOfPalette { edge: Edge, color: Color, palette: usize },
    SameColor(Color),
    DegreeSumTooLarge { v: Vertex, sum: usize, palette: usize },
    VertexAlreadyColored { v: Vertex },
    PaletteExhausted { needed: usize, palette: usize },
}

impl fmt::Display for ColoringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringError::UnknownEdge(e) => write!(f, "edge {e} is not in the graph"),
            ColoringError::ColorOutOfPalette { edge, color, palette } => {
                write!(f, "edge {edge} has color {color} outside 1..={palette}")
            }
            ColoringError::SameColor(c) => write!(f, "both colors are {c}"),
            ColoringError::DegreeSumTooLarge { v, sum, palette } => {
                write!(f, "neighbor degree sum {sum} at vertex {v} exceeds palette {palette}")
            }
            ColoringError::VertexAlreadyColored { v } => {
                write!(f, "vertex {v} already has a colored edge")
            }
            ColoringError::PaletteExhausted { needed, palette } => {
                write!(f, "need {needed} colors but the palette has {palette}")
            }
        }
    }
}

/// Partial map from edges to colors in `1..=palette`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    palette: usize,
    colors: BTreeMap<Edge, Color>,
}

impl EdgeColoring {
    pub fn new(palette: usize) -> Self {
        EdgeColoring {
            palette,
            colors: BTreeMap::new(),
        }
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn with_palette(mut self, palette: usize) -> Result<Self, ColoringError> {
        if let Some((&edge, &color)) = self.colors.iter().find(|(_, &c)| c > palette) {
            return Err(ColoringError::ColorOutOfPalette { edge, color, palette });
        }
        self.palette = palette;
        Ok(self)
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<Color> {
        self.colors.get(&Edge::new(u, v)).copied()
    }

    pub fn set(&mut self, u: Vertex, v: Vertex, color: Color) -> Result<Option<Color>, ColoringError> {
        let edge = Edge::new(u, v);
        if color == 0 || color > self.palette {
            return Err(ColoringError::ColorOutOfPalette {
                edge,
                color,
                palette: self.palette,
            });
        }
        Ok(self.colors.insert(edge, color))
    }

    /// Parses `u v c` lines; rejects non-edges, repeats and colors outside `1..=palette`.
    pub fn parse_text(g: &PlaneGraph, text: &str, palette: usize) -> Result<Self, TextError> {
        let mut c = EdgeColoring::new(palette);
        for (no, line) in content_lines(text) {
            let nums = line
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| TextError::new(no, format!("bad number `{x}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let [u, v, col] = nums[..] else {
                return Err(TextError::new(no, "expected `u v c`"));
            };
            if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_edge(u, v) {
                return Err(TextError::new(no, format!("{u} {v} is not an edge")));
            }
            match c.set(u, v, col) {
                Ok(None) => {}
                Ok(Some(_)) => return Err(TextError::new(no, format!("edge {u} {v} colored twice"))),
                Err(e) => return Err(TextError::new(no, format!("{e}"))),
            }
        }
        Ok(c)
    }

    /// One `u v c` line per colored edge, `u < v`, in edge order.
    pub fn to_text(&self) -> String {
        self.colors.iter().map(|(e, c)| format!("{} {} {c}\n", e.0, e.1)).collect()
    }

    pub fn remove(&mut self, u: Vertex, v: Vertex) -> Option<Color> {
        self.colors.remove(&Edge::new(u, v))
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        self.colors.iter().map(|(&e, &c)| (e, c))
    }

    /// Colors on edges at `v`, in rotation order, skipping uncolored edges.
    pub fn colors_at(&self, g: &PlaneGraph, v: Vertex) -> Vec<Color> {
        g.neighbors(v).iter().filter_map(|&u| self.get(v, u)).collect()
    }

    pub fn seen_by(&self, g: &PlaneGraph, v: Vertex) -> BTreeSet<Color> {
        self.colors_at(g, v).into_iter().collect()
    }

    /// Neighbor reached from `v` along an edge of color `c`.
    pub fn neighbor_via(&self, g: &PlaneGraph, v: Vertex, c: Color) -> Option<Vertex> {
        g.neighbors(v).iter().copied().find(|&u| self.get(v, u) == Some(c))
    }

    /// Keeps only edges present in `g`.
    pub fn restricted_to(&self, g: &PlaneGraph) -> EdgeColoring {
        EdgeColoring {
            palette: self.palette,
            colors: self
                .colors
                .iter()
                .filter(|(e, _)| g.has_edge(e.0, e.1))
                .map(|(&e, &c)| (e, c))
                .collect(),
        }
    }

    fn check_edges(&self, g: &PlaneGraph) -> Result<(), ColoringError> {
        for (e, _) in self.iter() {
            if !g.has_edge(e.0, e.1) {
                return Err(ColoringError::UnknownEdge(e));
            }
        }
        Ok(())
    }
}

pub fn is_proper(g: &PlaneGraph, c: &EdgeColoring) -> Result<bool, ColoringError> {
    c.check_edges(g)?;
    Ok(improper_vertex(g, c).is_none())
}

fn improper_vertex(g: &PlaneGraph, c: &EdgeColoring) -> Option<(Vertex, Color)> {
    for v in 0..g.vertex_count() {
        let mut seen = BTreeSet::new();
        for col in c.colors_at(g, v) {
            if !seen.insert(col) {
                return Some((v, col));
            }
        }
    }
    None
}

/// Cycle whose edges all carry `alpha` or `beta`, as a closed vertex walk
/// without the repeated endpoint.
pub fn find_bicolored_cycle(
    g: &PlaneGraph,
    c: &EdgeColoring,
    alpha: Color,
    beta: Color,
) -> Result<Option<Vec<Vertex>>, ColoringError> {
    if alpha == beta {
        return Err(ColoringError::SameColor(alpha));
    }
    c.check_edges(g)?;
    Ok(cycle_in_classes(g.vertex_count(), c, alpha, beta))
}

fn cycle_in_classes(n: usize, c: &EdgeColoring, alpha: Color, beta: Color) -> Option<Vec<Vertex>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (e, col) in c.iter() {
        if col != alpha && col != beta {
            continue;
        }
        let (ra, rb) = (find(&mut parent, e.0), find(&mut parent, e.1));
        if ra == rb {
            return Some(forest_path(&adj, e.1, e.0));
        }
        parent[ra] = rb;
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    None
}

fn forest_path(adj: &BTreeMap<Vertex, Vec<Vertex>>, from: Vertex, to: Vertex) -> Vec<Vertex> {
    let mut prev: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if let alloc::collections::btree_map::Entry::Vacant(e) = prev.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[&cur];
        path.push(cur);
    }
    path
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    UnknownEdge(Edge),
    OutOfPalette { edge: Edge, color: Color },
    Uncolored(Edge),
    Improper { vertex: Vertex, color: Color },
    BicoloredCycle { colors: (Color, Color), cycle: Vec<Vertex> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    pub violation: Option<Violation>,
}

/// Total, proper, and free of two-colored cycles.
pub fn verify_acyclic(g: &PlaneGraph, c: &EdgeColoring) -> AcyclicityReport {
    let violation = first_violation(g, c, true);
    AcyclicityReport {
        acyclic: violation.is_none(),
        violation,
    }
}

/// Same checks without demanding totality.
pub fn is_acyclic_partial(g: &PlaneGraph, c: &EdgeColoring) -> bool {
    first_violation(g, c, false).is_none()
}

fn first_violation(g: &PlaneGraph, c: &EdgeColoring, total: bool) -> Option<Violation> {
    for (e, col) in c.iter() {
        if !g.has_edge(e.0, e.1) {
            return Some(Violation::UnknownEdge(e));
        }
        if col == 0 || col > c.palette() {
            return Some(Violation::OutOfPalette { edge: e, color: col });
        }
    }
    if total {
        if let Some(e) = g.edges().find(|e| c.get(e.0, e.1).is_none()) {
            return Some(Violation::Uncolored(e));
        }
    }
    if let Some((vertex, color)) = improper_vertex(g, c) {
        return Some(Violation::Improper { vertex, color });
    }
    for (a, b) in cooccurring_pairs(g, c) {
        if let Some(cycle) = cycle_in_classes(g.vertex_count(), c, a, b) {
            return Some(Violation::BicoloredCycle { colors: (a, b), cycle });
        }
    }
    None
}

fn cooccurring_pairs(g: &PlaneGraph, c: &EdgeColoring) -> BTreeSet<(Color, Color)> {
    let mut pairs = BTreeSet::new();
    for v in 0..g.vertex_count() {
        let cols = c.colors_at(g, v);
        for (i, &a) in cols.iter().enumerate() {
            for &b in &cols[i + 1..] {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    pairs
}

/// Every two-colored cycle of a proper coloring, as `(colors, vertices)`.
pub fn bicolored_cycles(g: &PlaneGraph, c: &EdgeColoring) -> Vec<((Color, Color), Vec<Vertex>)> {
    let mut out = Vec::new();
    for (a, b) in cooccurring_pairs(g, c) {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        for v in 0..g.vertex_count() {
            if seen.contains(&v) {
                continue;
            }
            let (Some(_), Some(_)) = (c.neighbor_via(g, v, a), c.neighbor_via(g, v, b)) else {
                continue;
            };
            // Walk alternately; a cycle returns to v.
            let mut cycle = vec![v];
            let mut cur = v;
            let mut col = a;
            let closed = loop {
                match c.neighbor_via(g, cur, col) {
                    None => break false,
                    Some(nx) if nx == v => break true,
                    Some(nx) => {
                        cycle.push(nx);
                        cur = nx;
                        col = if col == a { b } else { a };
                    }
                }
            };
            if closed {
                seen.extend(cycle.iter().copied());
                out.push(((a, b), cycle));
            } else {
                seen.insert(v);
            }
        }
    }
    out
}

/// Partner color of a two-colored cycle that coloring `uv` with `color` would close.
pub fn closes_bicolored_cycle(
    g: &PlaneGraph,
    c: &EdgeColoring,
    u: Vertex,
    v: Vertex,
    color: Color,
) -> Option<Color> {
    let at_v = c.seen_by(g, v);
    for beta in c.colors_at(g, u) {
        if beta == color || !at_v.contains(&beta) {
            continue;
        }
        let mut cur = u;
        let mut want = beta;
        let mut steps = 0;
        while let Some(nx) = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&x| !(cur == u && x == v) && !(cur == v && x == u) && c.get(cur, x) == Some(want))
        {
            if nx == v && want == beta {
                return Some(beta);
            }
            cur = nx;
            want = if want == beta { color } else { beta };
            steps += 1;
            if steps > g.vertex_count() {
                break;
            }
        }
    }
    None
}

/// Incremental acyclic-coloring state with per-vertex color lookup.
struct Search {
    k: usize,
    at: Vec<Vec<(Color, Vertex)>>,
    nodes: u64,
    limit: u64,
}

impl Search {
    fn new(g: &PlaneGraph, k: usize, limit: u64) -> Self {
        Search {
            k,
            at: vec![Vec::new(); g.vertex_count()],
            nodes: 0,
            limit,
        }
    }

    fn via(&self, x: Vertex, c: Color) -> Option<Vertex> {
        self.at[x].iter().find(|p| p.0 == c).map(|p| p.1)
    }

    fn admissible(&self, u: Vertex, v: Vertex, c: Color) -> bool {
        if self.via(u, c).is_some() || self.via(v, c).is_some() {
            return false;
        }
        for &(beta, first) in &self.at[u] {
            if self.via(v, beta).is_none() {
                continue;
            }
            // u -beta- first -c- ... must not reach v by a beta edge.
            let mut cur = first;
            let mut want = c;
            loop {
                if cur == v {
                    return false;
                }
                match self.via(cur, want) {
                    None => break,
                    Some(nx) => {
                        cur = nx;
                        want = if want == c { beta } else { c };
                    }
                }
            }
        }
        true
    }

    fn put(&mut self, u: Vertex, v: Vertex, c: Color) {
        self.at[u].push((c, v));
        self.at[v].push((c, u));
    }

    fn take(&mut self, u: Vertex, v: Vertex) {
        self.at[u].retain(|p| p.1 != v);
        self.at[v].retain(|p| p.1 != u);
    }

    fn load(&mut self, c: &EdgeColoring) {
        for (e, col) in c.iter() {
            self.put(e.0, e.1, col);
        }
    }

    /// Colors `order[i..]`; `choices` yields the candidate list for an edge.
    fn run(
        &mut self,
        order: &[Edge],
        i: usize,
        max_used: Color,
        symmetric: bool,
        out: &mut Vec<Color>,
        choices: &mut dyn FnMut(Edge) -> Vec<Color>,
    ) -> Option<bool> {
        if i == order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let e = order[i];
        let cap = if symmetric { (max_used + 1).min(self.k) } else { self.k };
        for c in choices(e) {
            if c > cap || !self.admissible(e.0, e.1, c) {
                continue;
            }
            self.put(e.0, e.1, c);
            out.push(c);
            match self.run(order, i + 1, max_used.max(c), symmetric, out, choices) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            out.pop();
            self.take(e.0, e.1);
        }
        Some(false)
    }
}

/// Edges ordered so that dense cores come first: reverse min-degree elimination.
fn degeneracy_edge_order(g: &PlaneGraph, edges: &[Edge]) -> Vec<Edge> {
    let n = g.vertex_count();
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for e in edges {
        deg[e.0] += 1;
        deg[e.1] += 1;
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    let mut removed = vec![false; n];
    let mut elim = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        elim.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(edges.len());
    for &v in elim.iter().rev() {
        placed[v] = true;
        let mut later: Vec<Vertex> = adj[v].iter().copied().filter(|&u| placed[u] && u != v).collect();
        later.sort_unstable();
        for u in later {
            order.push(Edge::new(u, v));
        }
    }
    order
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleOutcome {
    Found { index: usize, witness: EdgeColoring },
    Exceeds { k_max: usize },
}

/// Exact acyclic chromatic index by backtracking, trying `k = Δ, Δ+1, ..`.
pub fn brute_force_index(g: &PlaneGraph, k_max: usize) -> OracleOutcome {
    let edges: Vec<Edge> = g.edges().collect();
    if edges.is_empty() {
        return OracleOutcome::Found {
            index: 0,
            witness: EdgeColoring::new(0),
        };
    }
    let order = degeneracy_edge_order(g, &edges);
    for k in g.max_degree()..=k_max {
        let mut s = Search::new(g, k, u64::MAX);
        let mut out = Vec::new();
        let mut all = |_: Edge| (1..=k).collect::<Vec<_>>();
        if s.run(&order, 0, 0, true, &mut out, &mut all) == Some(true) {
            let mut witness = EdgeColoring::new(k);
            for (e, c) in order.iter().zip(out) {
                witness.set(e.0, e.1, c).expect("within palette");
            }
            return OracleOutcome::Found { index: k, witness };
        }
    }
    OracleOutcome::Exceeds { k_max }
}

/// Completes `partial` to an acyclic coloring of `g` with colors `1..=k` by
/// exhaustive search, giving up after `node_limit` search nodes.
pub fn extend_acyclic(g: &PlaneGraph, partial: &EdgeColoring, k: usize, node_limit: u64) -> Option<EdgeColoring> {
    if !is_acyclic_partial(g, partial) {
        return None;
    }
    let rest: Vec<Edge> = g.edges().filter(|e| partial.get(e.0, e.1).is_none()).collect();
    let order = degeneracy_edge_order(g, &rest);
    let mut s = Search::new(g, k, node_limit);
    s.load(partial);
    let mut out = Vec::new();
    let symmetric = partial.is_empty();
    let mut all = |_: Edge| (1..=k).collect::<Vec<_>>();
    if s.run(&order, 0, 0, symmetric, &mut out, &mut all) != Some(true) {
        return None;
    }
    let mut c = partial.clone().with_palette(k).ok()?;
    for (e, col) in order.iter().zip(out) {
        c.set(e.0, e.1, col).expect("within palette");
    }
    Some(c)
}

/// Random acyclic `k`-coloring of `g` by randomized backtracking.
pub fn random_acyclic(g: &PlaneGraph, k: usize, rng: &mut dyn RngCore, node_limit: u64) -> Option<EdgeColoring> {
    random_extension(g, &EdgeColoring::new(k), k, rng, node_limit)
}

/// Random acyclic completion of `partial`.
pub fn random_extension(
    g: &PlaneGraph,
    partial: &EdgeColoring,
    k: usize,
    rng: &mut dyn RngCore,
    node_limit: u64,
) -> Option<EdgeColoring> {
    if !is_acyclic_partial(g, partial) {
        return None;
    }
    let mut order: Vec<Edge> = g.edges().filter(|e| partial.get(e.0, e.1).is_none()).collect();
    order.shuffle(rng);
    let mut s = Search::new(g, k, node_limit);
    s.load(partial);
    let mut out = Vec::new();
    let mut shuffled = |_: Edge| {
        let mut v: Vec<Color> = (1..=k).collect();
        v.shuffle(rng);
        v
    };
    if s.run(&order, 0, 0, false, &mut out, &mut shuffled) != Some(true) {
        return None;
    }
    let mut c = partial.clone().with_palette(k).ok()?;
    for (e, col) in order.iter().zip(out) {
        c.set(e.0, e.1, col).expect("within palette");
    }
    Some(c)
}

/// Colors the edges at `v` with the smallest colors absent from every edge
/// at every neighbor of `v`.
pub fn greedy_extend_vertex(
    g: &PlaneGraph,
    c: &EdgeColoring,
    v: Vertex,
    k: usize,
) -> Result<EdgeColoring, ColoringError> {
    let sum: usize = g.neighbors(v).iter().map(|&w| g.degree(w)).sum();
    if sum > k {
        return Err(ColoringError::DegreeSumTooLarge { v, sum, palette: k });
    }
    if !c.colors_at(g, v).is_empty() {
        return Err(ColoringError::VertexAlreadyColored { v });
    }
    let mut forbidden: BTreeSet<Color> = BTreeSet::new();
    for &w in g.neighbors(v) {
        forbidden.extend(c.colors_at(g, w));
    }
    let mut out = c.clone().with_palette(k.max(c.palette()))?;
    let mut next = 1;
    for &w in g.neighbors(v) {
        while forbidden.contains(&next) {
            next += 1;
        }
        if next > k {
            return Err(ColoringError::PaletteExhausted { needed: next, palette: k });
        }
        out.set(v, w, next)?;
        forbidden.insert(next);
    }
    Ok(out)
}

/// Unions block colorings sharing only `v`, renaming each block's palette so
/// that the color sets at `v` are pairwise disjoint.
pub fn merge_at_cut_vertex(v: Vertex, blocks: &[EdgeColoring], k: usize) -> Result<EdgeColoring, ColoringError> {
    let mut out = EdgeColoring::new(k);
    let mut taken_at_v: BTreeSet<Color> = BTreeSet::new();
    let needed: usize = blocks
        .iter()
        .map(|b| b.iter().filter(|(e, _)| e.touches(v)).count())
        .sum();
    if needed > k {
        return Err(ColoringError::PaletteExhausted { needed, palette: k });
    }
    for block in blocks {
        let at_v: BTreeSet<Color> = block.iter().filter(|(e, _)| e.touches(v)).map(|(_, c)| c).collect();
        let used: BTreeSet<Color> = block.iter().map(|(_, c)| c).collect();
        if at_v.is_disjoint(&taken_at_v) {
            taken_at_v.extend(at_v.iter().copied());
            for (e, c) in block.iter() {
                out.set(e.0, e.1, c)?;
            }
            continue;
        }
        // Colors at v go to the smallest fresh colors; the rest keep their order.
        let mut map: BTreeMap<Color, Color> = BTreeMap::new();
        let mut fresh = (1..=k).filter(|c| !taken_at_v.contains(c));
        for &c in &at_v {
            let to = fresh.next().ok_or(ColoringError::PaletteExhausted { needed, palette: k })?;
            map.insert(c, to);
        }
        let images: BTreeSet<Color> = map.values().copied().collect();
        let mut rest = (1..=k).filter(|c| !images.contains(c));
        for &c in used.iter().filter(|c| !at_v.contains(c)) {
            let to = rest.next().ok_or(ColoringError::PaletteExhausted {
                needed: used.len(),
                palette: k,
            })?;
            map.insert(c, to);
        }
        taken_at_v.extend(images);
        for (e, c) in block.iter() {
            out.set(e.0, e.1, map[&c])?;
        }
    }
    Ok(out)
}
