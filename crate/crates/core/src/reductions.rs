//! Recoloring kernels for big vertices and the recursive coloring driver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::acyclic_coloring::{
    bicolored_cycles, extend_acyclic, greedy_extend_vertex, is_acyclic_partial, merge_at_cut_vertex,
    verify_acyclic, Color, EdgeColoring, Violation,
};
use crate::discharging::{detect_rc1, outside_counts};
use crate::plane_graph::{find_bunches, Bunch, Edge, PlaneGraph, Thresholds, Vertex};
use crate::rethreading::{rethread_bunch, RethreadError};

/// Bunches of length at most this are short.
pub const SHORT_MAX: usize = 10;
/// Edge count at or below which the driver searches exhaustively.
pub const BRUTE_FORCE_EDGES: usize = 12;
const BRUTE_FORCE_NODES: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeError {
    /// `q` below 100.
    SmallQ { q: usize },
    /// A listed vertex is not a qualifying neighbor of `v`.
    NotInW { w: Vertex },
    NotBig { v: Vertex },
    NoLongBunch { v: Vertex },
    Pigeonhole { length: usize, c_good: usize, k: usize },
    /// `C_good` has fewer colors than edges waiting for them.
    ShortOfGoodColors { needed: usize, available: usize },
    GreedyStuck { edge: Edge },
    Availability { degree: usize, bunches: usize, removed: usize },
    /// A two-colored cycle avoids `v`, or no swap makes progress.
    CycleShape,
    InputNotAcyclic,
    Verification(Violation),
    Rethread(String),
}

impl fmt::Display for RegimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeError::SmallQ { q } => write!(f, "q = {q} is below 100"),
            RegimeError::NotInW { w } => write!(f, "vertex {w} does not qualify for W"),
            RegimeError::NotBig { v } => write!(f, "vertex {v} is not big"),
            RegimeError::NoLongBunch { v } => write!(f, "vertex {v} is a parent of no long bunch"),
            RegimeError::Pigeonhole { length, c_good, k } => {
                write!(f, "length {length} + |C_good| {c_good} < k + 2 = {}", k + 2)
            }
            RegimeError::ShortOfGoodColors { needed, available } => {
                write!(f, "{needed} edges need good colors but only {available} exist")
            }
            RegimeError::GreedyStuck { edge } => write!(f, "greedy completion stuck at {edge}"),
            RegimeError::Availability { degree, bunches, removed } => write!(
                f,
                "d(v) - T^2 - (k - |C_good|) = {degree} - {bunches}^2 - {removed} is not positive"
            ),
            RegimeError::CycleShape => write!(f, "two-colored cycles are not of the repairable shape"),
            RegimeError::InputNotAcyclic => write!(f, "input coloring is not acyclic"),
            RegimeError::Verification(v) => write!(f, "output failed verification: {v:?}"),
            RegimeError::Rethread(e) => write!(f, "rethreading failed: {e}"),
        }
    }
}

impl From<RethreadError> for RegimeError {
    fn from(e: RethreadError) -> Self {
        RegimeError::Rethread(alloc::format!("{e}"))
    }
}

fn verified(g: &PlaneGraph, c: EdgeColoring) -> Result<EdgeColoring, RegimeError> {
    match verify_acyclic(g, &c).violation {
        None => Ok(c),
        Some(v) => Err(RegimeError::Verification(v)),
    }
}

/// Counting facts when no recoloring pair exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Certificate {
    pub w: usize,
    pub q: usize,
    pub s1: Vec<Color>,
    /// `sum |S_i|` over `i` in `S_1`.
    pub pair_count: usize,
    /// Edges at some `w_j` but not at `v`.
    pub w_edges: usize,
    /// `pair_count <= w_edges <= 4|W|`.
    pub counting_holds: bool,
    /// `|W| <= q + 2 + sqrt(4q + 4)`.
    pub bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma2Step {
    Direct { edge: Edge, color: Color },
    Swap { edge: Edge, color: Color, moved: Edge, to: Color },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma2Outcome {
    Extended { coloring: EdgeColoring, steps: Vec<Lemma2Step> },
    Certificate(Lemma2Certificate),
}

/// Sum of the degrees of `w`'s neighbors other than `v`.
pub fn outer_degree_sum(g: &PlaneGraph, v: Vertex, w: Vertex) -> usize {
    g.neighbors(w).iter().filter(|&&x| x != v).map(|&x| g.degree(x)).sum()
}

/// `|W| <= q + 2 + sqrt(4q + 4)`, exactly.
pub fn lemma2_bound_holds(w: usize, q: usize) -> bool {
    let d = w as i128 - q as i128 - 2;
    d <= 0 || d * d <= 4 * q as i128 + 4
}

/// Colors every edge at `w[0]` starting from a coloring in which only `v w[0]`
/// may already be colored there.
pub fn lemma2_extend(
    g: &PlaneGraph,
    v: Vertex,
    w: &[Vertex],
    q: usize,
    coloring: &EdgeColoring,
    k: usize,
) -> Result<Lemma2Outcome, RegimeError> {
    if q < 100 {
        return Err(RegimeError::SmallQ { q });
    }
    for &x in w {
        if !g.has_edge(v, x) || g.degree(x) > 5 || outer_degree_sum(g, v, x) > q {
            return Err(RegimeError::NotInW { w: x });
        }
    }
    let w1 = *w.first().ok_or(RegimeError::NotInW { w: v })?;
    if !is_acyclic_partial(g, coloring) {
        return Err(RegimeError::InputNotAcyclic);
    }
    let mut c = coloring.clone().with_palette(k.max(coloring.palette())).map_err(|_| RegimeError::InputNotAcyclic)?;
    if c.get(v, w1).is_none() {
        let at_v = c.seen_by(g, v);
        let col = (1..=k)
            .find(|x| !at_v.contains(x) && !c.seen_by(g, w1).contains(x))
            .ok_or(RegimeError::ShortOfGoodColors { needed: 1, available: 0 })?;
        c.set(v, w1, col).expect("within palette");
    }
    let mut steps = Vec::new();
    let todo: Vec<Vertex> = g.neighbors(w1).iter().copied().filter(|&x| x != v && c.get(w1, x).is_none()).collect();
    for x1 in todo {
        match lemma2_step(g, v, w, q, &mut c, k, x1) {
            Ok(step) => steps.push(step),
            Err(cert) => return Ok(Lemma2Outcome::Certificate(cert)),
        }
    }
    Ok(Lemma2Outcome::Extended {
        coloring: verified(g, c)?,
        steps,
    })
}

fn lemma2_step(
    g: &PlaneGraph,
    v: Vertex,
    w: &[Vertex],
    q: usize,
    c: &mut EdgeColoring,
    k: usize,
    x1: Vertex,
) -> Result<Lemma2Step, Lemma2Certificate> {
    let w1 = w[0];
    let one = c.get(v, w1).expect("colored first");
    // The W vertex reached from v by each color.
    let by_color: BTreeMap<Color, Vertex> = w.iter().filter_map(|&x| c.get(v, x).map(|col| (col, x))).collect();
    let at_v = c.seen_by(g, v);
    let s: BTreeSet<Color> = (1..=k).filter(|x| !at_v.contains(x) || by_color.contains_key(x)).collect();
    let around = |x: Vertex, c: &EdgeColoring| -> BTreeSet<Color> {
        g.neighbors(x)
            .iter()
            .filter(|&&y| y != v)
            .flat_map(|&y| c.colors_at(g, y))
            .collect()
    };
    let s_of = |x: Vertex, c: &EdgeColoring| -> BTreeSet<Color> {
        let cx = around(x, c);
        s.iter().copied().filter(|col| !cx.contains(col)).collect()
    };
    let sees = |x: Vertex, col: Color, c: &EdgeColoring| c.seen_by(g, x).contains(&col);
    let s1: Vec<Color> = s_of(w1, c).into_iter().filter(|&i| i != one).collect();

    for &i in &s1 {
        if by_color.get(&i).is_none_or(|&wi| !sees(wi, one, c)) {
            c.set(w1, x1, i).expect("within palette");
            return Ok(Lemma2Step::Direct {
                edge: Edge::new(w1, x1),
                color: i,
            });
        }
    }
    for &i in &s1 {
        let wi = by_color[&i];
        let xi = c.neighbor_via(g, wi, one).expect("w_i sees the color");
        if xi == x1 || xi == v {
            continue;
        }
        for j in s_of(wi, c) {
            if j == i || j == one {
                continue;
            }
            if by_color.get(&j).is_none_or(|&wj| !sees(wj, i, c)) {
                c.set(wi, xi, j).expect("within palette");
                c.set(w1, x1, i).expect("within palette");
                return Ok(Lemma2Step::Swap {
                    edge: Edge::new(w1, x1),
                    color: i,
                    moved: Edge::new(wi, xi),
                    to: j,
                });
            }
        }
    }
    let pair_count = s1.iter().map(|&i| by_color.get(&i).map_or(0, |&wi| s_of(wi, c).len())).sum();
    let w_edges = w
        .iter()
        .flat_map(|&x| g.neighbors(x).iter().filter(|&&y| y != v).map(move |&y| Edge::new(x, y)))
        .collect::<BTreeSet<_>>()
        .len();
    Err(Lemma2Certificate {
        w: w.len(),
        q,
        s1,
        pair_count,
        w_edges,
        counting_holds: w_edges <= 4 * w.len(),
        bound_holds: lemma2_bound_holds(w.len(), q),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    /// Other colors at the neighbor.
    AtNeighbor,
    /// Colors on `v u` for 2-vertices `u` with an edge of that color.
    AtTwoVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub neighbor: Vertex,
    pub alpha: Color,
    pub clause: Clause,
    pub colors: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionState {
    pub v: Vertex,
    pub k: usize,
    pub c_good: BTreeSet<Color>,
    pub long: Vec<Bunch>,
    pub short: Vec<Bunch>,
    pub nf: usize,
    pub ns: usize,
    pub s: usize,
    pub removals: Vec<Removal>,
}

impl ReductionState {
    /// `5 nf + ns (nf + ns + 1 - s) + 10 s + 2`.
    pub fn removal_bound(&self) -> i64 {
        let (nf, ns, s) = (self.nf as i64, self.ns as i64, self.s as i64);
        5 * nf + ns * (nf + ns + 1 - s) + 10 * s + 2
    }

    /// `k - |C_good| + 2` against [`Self::removal_bound`].
    pub fn bound_holds(&self) -> bool {
        self.k as i64 - self.c_good.len() as i64 + 2 <= self.removal_bound()
    }

    pub fn bunch_count(&self) -> usize {
        self.long.len() + self.short.len()
    }
}

/// `bunches` are those with `v` as a parent; `g` is the working graph.
pub fn build_c_good(g: &PlaneGraph, v: Vertex, c: &EdgeColoring, bunches: &[Bunch], k: usize) -> ReductionState {
    let mine: Vec<Bunch> = bunches.iter().filter(|b| b.has_parent(v)).cloned().collect();
    let members: BTreeSet<Vertex> = mine.iter().flat_map(|b| b.vertices.iter().copied()).collect();
    let mut removed: BTreeSet<Color> = BTreeSet::new();
    let mut removals = Vec::new();
    for &p in g.neighbors(v).iter().filter(|p| !members.contains(p)) {
        let Some(alpha) = c.get(v, p) else { continue };
        removed.insert(alpha);
        let at_p: Vec<Color> = c.colors_at(g, p).into_iter().filter(|&x| x != alpha).collect();
        let at_twos: Vec<Color> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| g.degree(u) == 2 && c.colors_at(g, u).contains(&alpha))
            .filter_map(|&u| c.get(v, u))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let (clause, colors) = if at_twos.len() < at_p.len() {
            (Clause::AtTwoVertices, at_twos)
        } else {
            (Clause::AtNeighbor, at_p)
        };
        removed.extend(colors.iter().copied());
        removals.push(Removal {
            neighbor: p,
            alpha,
            clause,
            colors,
        });
    }
    let (short, long): (Vec<Bunch>, Vec<Bunch>) = mine.into_iter().partition(|b| b.len() <= SHORT_MAX);
    for b in &short {
        removed.extend(b.vertices.iter().filter_map(|&x| c.get(v, x)));
    }
    let (nf, ns) = outside_counts(g, bunches, v);
    ReductionState {
        v,
        k,
        c_good: (1..=k).filter(|x| !removed.contains(x)).collect(),
        s: short.len(),
        long,
        short,
        nf,
        ns,
        removals,
    }
}

/// Deletes the horizontals of long bunches with `v` as a parent.
pub fn working_graph(g: &PlaneGraph, v: Vertex, bunches: &[Bunch]) -> PlaneGraph {
    let drop: Vec<Edge> = bunches
        .iter()
        .filter(|b| b.has_parent(v) && b.len() > SHORT_MAX)
        .flat_map(|b| b.horizontal_edges(g))
        .collect();
    g.without_edges(&drop)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapLog {
    pub swaps: Vec<(Color, Color)>,
    pub cycles_before: usize,
}

fn cycles_through(g: &PlaneGraph, c: &EdgeColoring, v: Vertex) -> (usize, Vec<(Color, Color)>) {
    let all = bicolored_cycles(g, c);
    let through: Vec<(Color, Color)> = all.iter().filter(|(_, cyc)| cyc.contains(&v)).map(|(p, _)| *p).collect();
    (all.len(), through)
}

fn swap_at(g: &PlaneGraph, c: &EdgeColoring, v: Vertex, a: Color, b: Color) -> Option<EdgeColoring> {
    let ea = c.neighbor_via(g, v, a);
    let eb = c.neighbor_via(g, v, b);
    let mut out = c.clone();
    if let Some(u) = ea {
        out.set(v, u, b).ok()?;
    }
    if let Some(u) = eb {
        out.set(v, u, a).ok()?;
    }
    for u in [ea, eb].into_iter().flatten() {
        let cols = out.colors_at(g, u);
        if cols.iter().collect::<BTreeSet<_>>().len() != cols.len() {
            return None;
        }
    }
    Some(out)
}

/// Clears two-colored cycles through `v` by swapping colors on `v`'s edges.
/// `bunches` is the number of bunches with `v` as a parent.
pub fn swap_repair(
    g: &PlaneGraph,
    v: Vertex,
    c: &EdgeColoring,
    c_good: &BTreeSet<Color>,
    bunches: usize,
    k: usize,
) -> Result<(EdgeColoring, SwapLog), RegimeError> {
    let (total, through) = cycles_through(g, c, v);
    let mut log = SwapLog {
        swaps: Vec::new(),
        cycles_before: through.len(),
    };
    if total != through.len() {
        return Err(RegimeError::CycleShape);
    }
    if through.is_empty() {
        return Ok((c.clone(), log));
    }
    let removed = k - c_good.len();
    if g.degree(v) as i64 - (bunches * bunches) as i64 - removed as i64 <= 0 {
        return Err(RegimeError::Availability {
            degree: g.degree(v),
            bunches,
            removed,
        });
    }
    let mut cur = c.clone();
    loop {
        let (total, through) = cycles_through(g, &cur, v);
        if total != through.len() {
            return Err(RegimeError::CycleShape);
        }
        if through.is_empty() {
            return Ok((cur, log));
        }
        let good = |p: (Color, Color)| -> Vec<Color> { [p.0, p.1].into_iter().filter(|x| c_good.contains(x)).collect() };
        let mut candidates: Vec<(Color, Color)> = Vec::new();
        // Pairs of cycles first: one good color from each.
        for (a, pa) in through.iter().enumerate() {
            for pb in through.iter().skip(a + 1) {
                for b1 in good(*pa) {
                    for g1 in good(*pb) {
                        if b1 != g1 {
                            candidates.push((b1, g1));
                        }
                    }
                }
            }
        }
        // Then one cycle against the thread colors (gamma_1 at v, gamma_2 beyond).
        let beta1 = good(through[0]);
        if beta1.is_empty() {
            return Err(RegimeError::CycleShape);
        }
        let threads: Vec<(Color, Color)> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| g.degree(u) == 2)
            .filter_map(|&u| {
                let far = g.neighbors(u).iter().copied().find(|&y| y != v)?;
                Some((cur.get(v, u)?, cur.get(u, far)?))
            })
            .collect();
        for &b1 in &beta1 {
            for &(g1, g2) in &threads {
                if g1 != b1 && c_good.contains(&g1) && !threads.iter().any(|t| t.0 == g2 && t.1 == b1) {
                    candidates.push((b1, g1));
                }
            }
            candidates.extend(c_good.iter().copied().filter(|&x| x != b1).map(|x| (b1, x)));
        }
        let mut progressed = false;
        for (a, b) in candidates {
            if let Some(next) = swap_at(g, &cur, v, a, b) {
                let (t2, th2) = cycles_through(g, &next, v);
                if t2 == th2.len() && th2.len() < through.len() {
                    cur = next;
                    log.swaps.push((a, b));
                    progressed = true;
                    break;
                }
            }
        }
        if !progressed {
            return Err(RegimeError::CycleShape);
        }
    }
}

/// The working graph, the longest bunch with `v` as a parent, the vertex
/// `x` removed from it, and all bunches with `v` as a parent.
#[derive(Clone, Debug)]
pub struct Setup {
    pub working: PlaneGraph,
    pub bunch: Bunch,
    pub x: Vertex,
    pub mine: Vec<Bunch>,
}

pub fn setup(g: &PlaneGraph, v: Vertex, th: &Thresholds) -> Result<Setup, RegimeError> {
    if !th.is_big(g, v) {
        return Err(RegimeError::NotBig { v });
    }
    let mine: Vec<Bunch> = find_bunches(g, th).into_iter().filter(|b| b.has_parent(v)).collect();
    let bunch = mine
        .iter()
        .filter(|b| b.len() > SHORT_MAX)
        .max_by_key(|b| (b.len(), core::cmp::Reverse(b.x(1))))
        .cloned()
        .ok_or(RegimeError::NoLongBunch { v })?;
    Ok(Setup {
        working: working_graph(g, v, &mine),
        x: bunch.x(2),
        bunch,
        mine,
    })
}

#[derive(Clone, Debug)]
pub struct ReduceOutcome {
    pub working: PlaneGraph,
    pub coloring: EdgeColoring,
    pub state: ReductionState,
    pub x: Vertex,
    /// `Some(y)` when the pigeonhole step recolored `v y`; `None` for the shortcut.
    pub y: Option<Vertex>,
    pub shortcut: bool,
    pub swaps: SwapLog,
}

/// Colors the working graph around big vertex `v` starting from an acyclic
/// coloring `base` of the working graph minus [`Setup::x`].
pub fn reduce_big_vertex(
    g: &PlaneGraph,
    v: Vertex,
    th: &Thresholds,
    k: usize,
    base: &EdgeColoring,
) -> Result<ReduceOutcome, RegimeError> {
    let Setup { working: gp, bunch: b, x, mine } = setup(g, v, th)?;
    let w = b.coparent(v);
    let gx = gp.without_vertex(x);
    let mut c = base.clone().with_palette(k.max(base.palette())).map_err(|_| RegimeError::InputNotAcyclic)?;
    if c.iter().any(|(e, _)| e.touches(x)) || verify_acyclic(&gx, &c).violation.is_some() {
        return Err(RegimeError::InputNotAcyclic);
    }
    // x is a leaf of G' - x + wx, so any color free at w keeps acyclicity.
    let at_w = c.seen_by(&gp, w);
    let beta = (1..=k)
        .find(|col| !at_w.contains(col))
        .ok_or(RegimeError::ShortOfGoodColors { needed: 1, available: 0 })?;
    c.set(w, x, beta).expect("within palette");

    let state = build_c_good(&gp, v, &c, &mine, k);
    let good = &state.c_good;
    let mut pending: Vec<Vertex> = gp
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| c.get(v, u).is_some_and(|col| good.contains(&col)))
        .collect();
    for &u in &pending {
        c.remove(v, u);
    }
    if b.len() + good.len() < k + 2 {
        return Err(RegimeError::Pigeonhole {
            length: b.len(),
            c_good: good.len(),
            k,
        });
    }

    let on_v = |c: &EdgeColoring, y: Vertex| c.get(v, y);
    let shortcut_y = b.vertices.iter().copied().find(|&y| y != x && on_v(&c, y) == Some(beta));
    let mut y_used = None;
    if let Some(y) = shortcut_y {
        let wy = c.get(w, y).expect("thread colored");
        let col = good
            .iter()
            .copied()
            .find(|&a| a != beta && a != wy)
            .ok_or(RegimeError::ShortOfGoodColors { needed: 1, available: 0 })?;
        c.set(v, x, col).expect("within palette");
    } else {
        let (alpha, y) = good
            .iter()
            .copied()
            .filter(|&a| a != beta)
            .find_map(|a| {
                b.vertices
                    .iter()
                    .copied()
                    .find(|&y| y != x && c.get(w, y) == Some(a))
                    .map(|y| (a, y))
            })
            .ok_or(RegimeError::Pigeonhole {
                length: b.len(),
                c_good: good.len(),
                k,
            })?;
        c.set(v, x, alpha).expect("within palette");
        c.remove(v, y);
        pending.retain(|&u| u != y);
        let at_v = c.seen_by(&gp, v);
        let at_y = c.seen_by(&gp, y);
        let col = good
            .iter()
            .copied()
            .find(|&a| a != beta && a != alpha && !at_v.contains(&a) && !at_y.contains(&a))
            .ok_or(RegimeError::ShortOfGoodColors { needed: 1, available: 0 })?;
        c.set(v, y, col).expect("within palette");
        y_used = Some(y);
    }

    let free = good.iter().filter(|&&a| !c.seen_by(&gp, v).contains(&a)).count();
    if pending.len() > free {
        return Err(RegimeError::ShortOfGoodColors {
            needed: pending.len(),
            available: free,
        });
    }
    order_last_two(&mine, &mut pending);
    greedy_good(&gp, v, &mut c, good, &pending)?;

    let (c, swaps) = swap_repair(&gp, v, &c, good, mine.len(), k)?;
    let coloring = verified(&gp, c)?;
    Ok(ReduceOutcome {
        working: gp,
        coloring,
        x,
        y: y_used,
        shortcut: shortcut_y.is_some(),
        swaps,
        state,
    })
}

/// Moves two pending edges of one bunch to the end.
fn order_last_two(mine: &[Bunch], pending: &mut Vec<Vertex>) {
    for b in mine {
        let here: Vec<Vertex> = pending.iter().copied().filter(|u| b.vertices.contains(u)).collect();
        if here.len() >= 2 {
            let last = [here[here.len() - 2], here[here.len() - 1]];
            pending.retain(|u| !last.contains(u));
            pending.extend(last);
            return;
        }
    }
}

/// Smallest admissible good color per edge; on failure at the last edge,
/// moves the penultimate edge to its next admissible color once.
fn greedy_good(
    g: &PlaneGraph,
    v: Vertex,
    c: &mut EdgeColoring,
    good: &BTreeSet<Color>,
    pending: &[Vertex],
) -> Result<(), RegimeError> {
    let admissible = |c: &EdgeColoring, u: Vertex| -> Vec<Color> {
        let at_v = c.seen_by(g, v);
        let at_u = c.seen_by(g, u);
        good.iter().copied().filter(|a| !at_v.contains(a) && !at_u.contains(a)).collect()
    };
    for (idx, &u) in pending.iter().enumerate() {
        if let Some(&col) = admissible(c, u).first() {
            c.set(v, u, col).expect("within palette");
            continue;
        }
        if idx + 1 == pending.len() && idx > 0 {
            let prev = pending[idx - 1];
            let old = c.remove(v, prev).expect("colored");
            for alt in admissible(c, prev).into_iter().filter(|&a| a != old) {
                c.set(v, prev, alt).expect("within palette");
                if let Some(&col) = admissible(c, u).first() {
                    c.set(v, u, col).expect("within palette");
                    return Ok(());
                }
                c.remove(v, prev);
            }
            c.set(v, prev, old).expect("within palette");
        }
        return Err(RegimeError::GreedyStuck { edge: Edge::new(v, u) });
    }
    Ok(())
}

/// Restores the horizontals of `long` bunches one at a time. `c` colors
/// `g` minus all of their horizontals.
pub fn restore_long_bunches(g: &PlaneGraph, long: &[Bunch], c: &EdgeColoring, k: usize) -> Result<EdgeColoring, RegimeError> {
    let mut cur = c.clone();
    for (i, b) in long.iter().enumerate() {
        let later: Vec<Edge> = long[i + 1..].iter().flat_map(|b| b.horizontal_edges(g)).collect();
        let target = g.without_edges(&later);
        cur = rethread_bunch(&target, b, &cur, k)?.coloring;
    }
    verified(g, cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriverFailure {
    /// No reduction applies at this vertex, the one with least neighbor degree sum.
    Stuck { vertex: Vertex, sum: usize },
    BruteForce { edges: usize },
    Merge,
    Verification(Violation),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverStats {
    pub brute_force: usize,
    pub components: usize,
    pub cut_vertices: usize,
    pub rc1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverReport {
    pub result: Result<EdgeColoring, DriverFailure>,
    pub stats: DriverStats,
}

/// Acyclic `k`-edge-coloring by the reductions, each step checked.
pub fn color_planar(g: &PlaneGraph, k: usize) -> DriverReport {
    let mut stats = DriverStats::default();
    let result = drive(g, k, &mut stats).and_then(|c| match verify_acyclic(g, &c).violation {
        None => Ok(c),
        Some(v) => Err(DriverFailure::Verification(v)),
    });
    DriverReport { result, stats }
}

fn drive(g: &PlaneGraph, k: usize, stats: &mut DriverStats) -> Result<EdgeColoring, DriverFailure> {
    let edges = g.edge_count();
    if edges <= BRUTE_FORCE_EDGES {
        stats.brute_force += 1;
        return extend_acyclic(g, &EdgeColoring::new(k), k, BRUTE_FORCE_NODES).ok_or(DriverFailure::BruteForce { edges });
    }
    let comps = g.active_components();
    if comps.len() > 1 {
        stats.components += 1;
        let mut out = EdgeColoring::new(k);
        for comp in comps {
            for (e, col) in drive(&g.induced(&comp), k, stats)?.iter() {
                out.set(e.0, e.1, col).expect("within palette");
            }
        }
        return Ok(out);
    }
    if let Some(&v) = g.cut_vertices().first() {
        stats.cut_vertices += 1;
        let rest = g.without_vertex(v);
        let mut blocks = Vec::new();
        for comp in rest.components().into_iter().filter(|c| c.iter().any(|&x| g.has_edge(v, x))) {
            let mut keep = comp;
            keep.push(v);
            blocks.push(drive(&g.induced(&keep), k, stats)?);
        }
        return merge_at_cut_vertex(v, &blocks, k).map_err(|_| DriverFailure::Merge);
    }
    if let Some(w) = detect_rc1(g, k) {
        stats.rc1 += 1;
        let v = w.vertex();
        let c = drive(&g.without_vertex(v), k, stats)?;
        return greedy_extend_vertex(g, &c, v, k).map_err(|_| DriverFailure::Stuck {
            vertex: v,
            sum: g.neighbors(v).iter().map(|&u| g.degree(u)).sum(),
        });
    }
    let (vertex, sum) = g
        .active_vertices()
        .map(|v| (v, g.neighbors(v).iter().map(|&u| g.degree(u)).sum::<usize>()))
        .min_by_key(|&(v, s)| (s, v))
        .expect("graph has edges");
    Err(DriverFailure::Stuck { vertex, sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dodecahedron, icosahedron};
    use alloc::vec;

    fn star(d: usize) -> PlaneGraph {
        let mut rot = vec![(1..=d).collect::<Vec<_>>()];
        rot.extend((1..=d).map(|_| vec![0]));
        PlaneGraph::from_rotation(rot).unwrap()
    }

    #[test]
    fn driver_fixtures() {
        for (g, k) in [(icosahedron(), 25), (dodecahedron(), 15), (star(6), 6)] {
            let r = color_planar(&g, k);
            let c = r.result.unwrap();
            assert!(verify_acyclic(&g, &c).acyclic);
        }
    }

    #[test]
    fn driver_reports_stuck_vertex() {
        let r = color_planar(&icosahedron(), 24);
        assert!(matches!(r.result, Err(DriverFailure::Stuck { sum: 25, .. })));
    }

    #[test]
    fn bound_arithmetic() {
        assert!(lemma2_bound_holds(3, 100));
        assert!(lemma2_bound_holds(122, 100));
        assert!(!lemma2_bound_holds(123, 100));
    }
}
