//! Restoring the horizontal edges of a long bunch: permute threads so that
//! consecutive bunch vertices share no color, then color horizontals greedily.
//!
//! Threads and positions are 1-based throughout, matching `x_1..x_t`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::acyclic_coloring::{verify_acyclic, Color, EdgeColoring, Violation};
use crate::plane_graph::{Bunch, Edge, PlaneGraph, Vertex};

pub const MIN_LENGTH: usize = 11;
pub const MIN_PALETTE: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RethreadError {
    NotABunch,
    TooShort { t: usize },
    PaletteTooSmall { k: usize },
    InputNotAcyclic(Violation),
    Uncolored(Edge),
    ImproperThreads { color: Color },
    ConflictDegree { thread: usize },
    /// The odd set does not have the shape the placement cases assume.
    OddSetShape,
    /// No admissible thread for an odd position.
    Placement { position: usize },
    NoPerfectMatching { attempts: usize },
    NoAdmissibleColor(Edge),
    Verification(Violation),
}

impl fmt::Display for RethreadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RethreadError::NotABunch => write!(f, "bunch does not match the graph"),
            RethreadError::TooShort { t } => write!(f, "bunch length {t} is below {MIN_LENGTH}"),
            RethreadError::PaletteTooSmall { k } => write!(f, "palette {k} is below {MIN_PALETTE}"),
            RethreadError::InputNotAcyclic(v) => write!(f, "input coloring is not acyclic: {v:?}"),
            RethreadError::Uncolored(e) => write!(f, "thread edge {e} is uncolored"),
            RethreadError::ImproperThreads { color } => write!(f, "color {color} repeats at a parent"),
            RethreadError::ConflictDegree { thread } => {
                write!(f, "thread {thread} has more than two conflicts")
            }
            RethreadError::OddSetShape => write!(f, "odd set violates its component condition"),
            RethreadError::Placement { position } => {
                write!(f, "no admissible thread for position {position}")
            }
            RethreadError::NoPerfectMatching { attempts } => {
                write!(f, "position graph has no perfect matching after {attempts} attempts")
            }
            RethreadError::NoAdmissibleColor(e) => write!(f, "no color left for horizontal edge {e}"),
            RethreadError::Verification(v) => write!(f, "result failed verification: {v:?}"),
        }
    }
}

/// The pair of colors on `v x_i` and `x_i w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thread {
    pub index: usize,
    pub vertex: Vertex,
    pub at_v: Color,
    pub at_w: Color,
}

impl Thread {
    pub fn has(&self, c: Color) -> bool {
        self.at_v == c || self.at_w == c
    }

    pub fn conflicts(&self, other: &Thread) -> bool {
        self.has(other.at_v) || self.has(other.at_w)
    }
}

/// Colors on `x_0 x_1` and `x_t x_{t+1}` when those edges exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndColors {
    pub left: Option<Color>,
    pub right: Option<Color>,
}

fn check_shape(g: &PlaneGraph, b: &Bunch) -> Result<(), RethreadError> {
    let t = b.vertices.len();
    let (v, w) = b.parents;
    let n = g.vertex_count();
    let ok = t >= 1
        && b.gaps.len() == t + 1
        && v < n
        && w < n
        && (0..t + 2).all(|i| b.x(i) < n && g.has_edge(v, b.x(i)) && g.has_edge(w, b.x(i)));
    if ok {
        Ok(())
    } else {
        Err(RethreadError::NotABunch)
    }
}

/// Removes `x_i x_{i+1}` for `1 <= i <= t-1`; the anchor edges stay.
pub fn strip_horizontals(g: &PlaneGraph, b: &Bunch) -> Result<PlaneGraph, RethreadError> {
    check_shape(g, b)?;
    Ok(g.without_edges(&b.horizontal_edges(g)))
}

pub fn threads(g: &PlaneGraph, b: &Bunch, c: &EdgeColoring) -> Result<Vec<Thread>, RethreadError> {
    let (v, w) = b.parents;
    b.vertices
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let at_v = c.get(v, x).ok_or(RethreadError::Uncolored(Edge::new(v, x)))?;
            let at_w = c.get(x, w).ok_or(RethreadError::Uncolored(Edge::new(x, w)))?;
            debug_assert!(g.has_edge(v, x));
            Ok(Thread {
                index: i + 1,
                vertex: x,
                at_v,
                at_w,
            })
        })
        .collect()
}

pub fn end_colors(g: &PlaneGraph, b: &Bunch, c: &EdgeColoring) -> EndColors {
    let t = b.len();
    let get = |a: Vertex, z: Vertex| if g.has_edge(a, z) { c.get(a, z) } else { None };
    EndColors {
        left: get(b.x(0), b.x(1)),
        right: get(b.x(t), b.x(t + 1)),
    }
}

/// Threads adjacent when they share a color. A union of paths and cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadConflictGraph {
    adj: Vec<Vec<usize>>,
}

impl ThreadConflictGraph {
    pub fn edgeless(t: usize) -> Self {
        ThreadConflictGraph { adj: vec![Vec::new(); t + 1] }
    }

    pub fn from_edges(t: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::edgeless(t);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        if a != b && !self.adj[a].contains(&b) {
            self.adj[a].push(b);
            self.adj[b].push(a);
            self.adj[a].sort_unstable();
            self.adj[b].sort_unstable();
        }
    }

    pub fn t(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.t())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    /// Components, each listed along its path (from the lower endpoint) or
    /// around its cycle (from its lowest thread), ordered by lowest thread.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let t = self.t();
        let mut seen = vec![false; t + 1];
        let mut out = Vec::new();
        for s in 1..=t {
            if seen[s] {
                continue;
            }
            let mut members = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                members.push(x);
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            let start = members
                .iter()
                .copied()
                .filter(|&x| self.adj[x].len() < 2)
                .min()
                .unwrap_or_else(|| *members.iter().min().expect("nonempty"));
            let mut walk = vec![start];
            let mut prev = 0;
            let mut cur = start;
            while let Some(&nx) = self.adj[cur].iter().find(|&&y| y != prev && !walk.contains(&y)) {
                walk.push(nx);
                prev = cur;
                cur = nx;
            }
            out.push(walk);
        }
        out.sort_by_key(|c| *c.iter().min().expect("nonempty"));
        out
    }

    fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[from] = from;
        let mut q = VecDeque::from([from]);
        while let Some(x) = q.pop_front() {
            if x == to {
                let mut path = vec![to];
                while *path.last().expect("nonempty") != from {
                    path.push(parent[*path.last().expect("nonempty")]);
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    q.push_back(y);
                }
            }
        }
        None
    }
}

pub fn build_conflict_graph(threads: &[Thread]) -> Result<ThreadConflictGraph, RethreadError> {
    let t = threads.len();
    let mut by_v: BTreeMap<Color, usize> = BTreeMap::new();
    let mut by_w: BTreeMap<Color, usize> = BTreeMap::new();
    for th in threads {
        if by_v.insert(th.at_v, th.index).is_some() {
            return Err(RethreadError::ImproperThreads { color: th.at_v });
        }
        if by_w.insert(th.at_w, th.index).is_some() {
            return Err(RethreadError::ImproperThreads { color: th.at_w });
        }
        if th.at_v == th.at_w {
            return Err(RethreadError::ImproperThreads { color: th.at_v });
        }
    }
    let mut g = ThreadConflictGraph::edgeless(t);
    for th in threads {
        if let Some(&j) = by_w.get(&th.at_v) {
            g.add_edge(th.index, j);
        }
    }
    if let Some(i) = (1..=t).find(|&i| g.adj[i].len() > 2) {
        return Err(RethreadError::ConflictDegree { thread: i });
    }
    Ok(g)
}

/// `⌈(t+1)/2⌉`.
pub fn odd_set_size(t: usize) -> usize {
    t / 2 + 1
}

/// Grows `o` inside `comp` by adjacent threads until the component is
/// exhausted or `o` reaches `m`. The part of `comp` in `o` stays connected.
fn grow_arc(conf: &ThreadConflictGraph, comp: &[usize], o: &mut BTreeSet<usize>, m: usize) {
    if comp.iter().all(|x| !o.contains(x)) {
        if o.len() < m {
            o.insert(comp[0]);
        } else {
            return;
        }
    }
    while o.len() < m {
        let next = comp
            .iter()
            .copied()
            .filter(|x| !o.contains(x) && conf.neighbors(*x).iter().any(|y| o.contains(y)))
            .min();
        match next {
            Some(x) => {
                o.insert(x);
            }
            None => break,
        }
    }
}

/// The set of threads destined for odd positions together with thread `t`.
pub fn choose_odd_set(conf: &ThreadConflictGraph) -> BTreeSet<usize> {
    let t = conf.t();
    let m = odd_set_size(t);
    let comps = conf.components();
    let comp_of = |x: usize| comps.iter().position(|c| c.contains(&x)).expect("covered");
    let mut o = BTreeSet::new();
    let (c1, ct) = (comp_of(1), comp_of(t));
    let mut done: BTreeSet<usize> = BTreeSet::new();
    if c1 != ct {
        let (first, second, start) = if comps[c1].len() < comps[ct].len() {
            (c1, ct, t)
        } else {
            (ct, c1, 1)
        };
        o.extend(comps[first].iter().copied());
        o.insert(start);
        grow_arc(conf, &comps[second], &mut o, m);
        done.extend([first, second]);
    } else {
        let comp = &comps[c1];
        let mut route = conf.clone();
        let mut path = conf.shortest_path(1, t).expect("same component");
        if path.len() > m {
            // Only a path component can be this long; close it into a cycle.
            let ends: Vec<usize> = comp.iter().copied().filter(|&x| conf.neighbors(x).len() < 2).collect();
            route.add_edge(ends[0], ends[ends.len() - 1]);
            path = route.shortest_path(1, t).expect("same component");
        }
        o.extend(path.iter().copied());
        grow_arc(&route, comp, &mut o, m);
        done.insert(c1);
    }
    // Whole components next, preferring those led by an odd thread.
    let mut rest: Vec<usize> = (0..comps.len()).filter(|c| !done.contains(c)).collect();
    rest.sort_by_key(|&c| (comps[c][0].is_multiple_of(2), *comps[c].iter().min().expect("nonempty")));
    for c in rest {
        if o.len() >= m {
            break;
        }
        let comp = &comps[c];
        if o.len() + comp.len() <= m {
            o.extend(comp.iter().copied());
        } else {
            grow_arc(conf, comp, &mut o, m);
        }
    }
    o
}

/// Threads of `o` with a conflict outside `o`, and how many such conflicts each has.
pub fn boundary(conf: &ThreadConflictGraph, o: &BTreeSet<usize>) -> BTreeMap<usize, usize> {
    o.iter()
        .map(|&i| (i, conf.neighbors(i).iter().filter(|j| !o.contains(j)).count()))
        .filter(|&(_, c)| c > 0)
        .collect()
}

/// Component condition on `o`: at most one component is split, and its part
/// in `o` induces a path.
pub fn odd_set_condition(conf: &ThreadConflictGraph, o: &BTreeSet<usize>) -> bool {
    let b = boundary(conf, o);
    let total: usize = b.values().sum();
    let split = conf
        .components()
        .into_iter()
        .filter(|c| c.iter().any(|x| o.contains(x)) && c.iter().any(|x| !o.contains(x)))
        .count();
    split <= 1 && b.len() <= 2 && total <= 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementCase {
    /// No interior thread has conflicts outside the odd set.
    Plain,
    /// Thread 1 and an interior thread `i` have outside conflicts; `i` goes to `t-2`.
    FirstAndInterior { i: usize },
    /// Thread `t` and an interior thread `i`; `i` goes to 3.
    LastAndInterior { i: usize },
    /// One interior thread with outside conflicts, placed at 3.
    OneInterior { i: usize },
    /// Two interior threads, placed at 3 and 5.
    TwoInterior { i: usize, j: usize },
}

/// Threads of the odd set in position; `slots[p-1]` holds the thread at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddPlacement {
    pub t: usize,
    pub odd_set: BTreeSet<usize>,
    pub case: PlacementCase,
    pub slots: Vec<Option<usize>>,
}

impl OddPlacement {
    pub fn at(&self, p: usize) -> Option<usize> {
        self.slots.get(p.wrapping_sub(1)).copied().flatten()
    }

    /// Positions left for the matching stage.
    pub fn open(&self) -> Vec<usize> {
        (1..=self.t).filter(|&p| self.at(p).is_none()).collect()
    }

    pub fn placed(&self) -> BTreeSet<usize> {
        self.slots.iter().flatten().copied().collect()
    }
}

pub fn select_odd_set(
    conf: &ThreadConflictGraph,
    threads: &[Thread],
    ends: EndColors,
) -> Result<OddPlacement, RethreadError> {
    let t = conf.t();
    if t < MIN_LENGTH {
        return Err(RethreadError::TooShort { t });
    }
    place_odd(conf, threads, ends, &choose_odd_set(conf), 0)
}

/// Places `o` per the case analysis. `attempt` rotates the otherwise
/// arbitrary filling order.
pub fn place_odd(
    conf: &ThreadConflictGraph,
    threads: &[Thread],
    ends: EndColors,
    o: &BTreeSet<usize>,
    attempt: usize,
) -> Result<OddPlacement, RethreadError> {
    let t = conf.t();
    if o.len() != odd_set_size(t) || !o.contains(&1) || !o.contains(&t) || !odd_set_condition(conf, o) {
        return Err(RethreadError::OddSetShape);
    }
    let th = |i: usize| &threads[i - 1];
    let b = boundary(conf, o);
    let inner: Vec<usize> = b.keys().copied().filter(|&i| i != 1 && i != t).collect();
    let case = match (b.contains_key(&1), b.contains_key(&t), inner.as_slice()) {
        (_, _, []) => PlacementCase::Plain,
        (true, false, &[i]) => PlacementCase::FirstAndInterior { i },
        (false, true, &[i]) => PlacementCase::LastAndInterior { i },
        (false, false, &[i]) => PlacementCase::OneInterior { i },
        (false, false, &[i, j]) => PlacementCase::TwoInterior { i, j },
        _ => return Err(RethreadError::OddSetShape),
    };

    let mut slots = vec![None; t];
    slots[0] = Some(1);
    slots[t - 1] = Some(t);
    let mut fixed = Vec::new();
    match case {
        PlacementCase::Plain => {}
        PlacementCase::FirstAndInterior { i } => fixed.push((t - 2, i)),
        PlacementCase::LastAndInterior { i } | PlacementCase::OneInterior { i } => fixed.push((3, i)),
        PlacementCase::TwoInterior { i, j } => fixed.extend([(3, i), (5, j)]),
    }
    for &(p, i) in &fixed {
        slots[p - 1] = Some(i);
    }
    let shifted = matches!(case, PlacementCase::FirstAndInterior { .. }) && t.is_multiple_of(2);
    let mut odd_slots: Vec<usize> = (3..t).step_by(2).filter(|&p| slots[p - 1].is_none()).collect();
    if shifted {
        // The interior thread took t-2, so t-1 joins the matching side.
        odd_slots.retain(|&p| p != t - 1);
        odd_slots.push(t - 3);
        odd_slots.sort_unstable();
        odd_slots.dedup();
        odd_slots.retain(|&p| slots[p - 1].is_none());
    }

    let mut pool: Vec<usize> = o.iter().copied().filter(|&x| !slots.contains(&Some(x))).collect();
    if !pool.is_empty() {
        let r = attempt % pool.len();
        pool.rotate_left(r);
    }
    if pool.len() != odd_slots.len() {
        return Err(RethreadError::OddSetShape);
    }

    let constrained = |p: usize| (t.is_multiple_of(2) && !shifted && p == t - 1) || (shifted && p == t - 3);
    let admissible = |p: usize, x: usize| match case {
        _ if t.is_multiple_of(2) && !shifted && p == t - 1 => {
            !th(x).conflicts(th(t)) && ends.right.is_none_or(|c| !th(x).has(c))
        }
        PlacementCase::FirstAndInterior { i } if shifted && p == t - 3 => !th(x).conflicts(th(i)),
        _ => true,
    };
    // Constrained slots first; otherwise keep a thread in its own slot when possible.
    odd_slots.sort_by_key(|&p| (!constrained(p), p));
    for p in odd_slots {
        let pick = pool
            .iter()
            .position(|&x| attempt == 0 && x == p && admissible(p, x))
            .or_else(|| pool.iter().position(|&x| admissible(p, x)))
            .ok_or(RethreadError::Placement { position: p })?;
        slots[p - 1] = Some(pool.remove(pick));
    }
    Ok(OddPlacement {
        t,
        odd_set: o.clone(),
        case,
        slots,
    })
}

/// Open positions against unplaced threads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionGraph {
    pub positions: Vec<usize>,
    pub threads: Vec<usize>,
    /// `adj[a]` lists indices into `threads` compatible with `positions[a]`.
    pub adj: Vec<Vec<usize>>,
}

impl PositionGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (self.positions[a], self.threads[b])))
            .collect()
    }

    pub fn degree_of_position(&self, p: usize) -> Option<usize> {
        self.positions.iter().position(|&x| x == p).map(|a| self.adj[a].len())
    }
}

pub fn build_position_graph(placement: &OddPlacement, threads: &[Thread], ends: EndColors) -> PositionGraph {
    let t = placement.t;
    let placed = placement.placed();
    let positions = placement.open();
    let free: Vec<usize> = (1..=t).filter(|i| !placed.contains(i)).collect();
    let th = |i: usize| &threads[i - 1];
    let adj = positions
        .iter()
        .map(|&p| {
            let mut near: Vec<&Thread> = Vec::new();
            for q in [p.wrapping_sub(1), p + 1] {
                if let Some(x) = placement.at(q) {
                    near.push(th(x));
                }
            }
            free.iter()
                .enumerate()
                .filter(|&(_, &x)| {
                    let cand = th(x);
                    near.iter().all(|n| !cand.conflicts(n))
                        && !(p == 2 && ends.left.is_some_and(|c| cand.has(c)))
                        && !(p + 1 == t && ends.right.is_some_and(|c| cand.has(c)))
                })
                .map(|(b, _)| b)
                .collect()
        })
        .collect();
    PositionGraph {
        positions,
        threads: free,
        adj,
    }
}

fn augment(h: &PositionGraph, a: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for &b in &h.adj[a] {
        if seen[b] {
            continue;
        }
        seen[b] = true;
        if owner[b].is_none_or(|a2| augment(h, a2, seen, owner)) {
            owner[b] = Some(a);
            return true;
        }
    }
    false
}

/// Augmenting-path matching; `(position, thread)` pairs when perfect.
pub fn perfect_matching(h: &PositionGraph) -> Option<Vec<(usize, usize)>> {
    if h.positions.len() != h.threads.len() {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; h.threads.len()];
    for a in 0..h.positions.len() {
        let mut seen = vec![false; h.threads.len()];
        if !augment(h, a, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .map(|(b, a)| (h.positions[a.expect("perfect")], h.threads[b]))
        .collect();
    out.sort_unstable();
    Some(out)
}

/// Conditions the reordered threads must meet before horizontals are added.
pub fn order_is_admissible(order: &[usize], threads: &[Thread], ends: EndColors) -> bool {
    let t = order.len();
    let th = |p: usize| &threads[order[p - 1] - 1];
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    order.iter().all(|&x| seen.insert(x))
        && seen.len() == t
        && order[0] == 1
        && order[t - 1] == t
        && (1..t).all(|p| !th(p).conflicts(th(p + 1)))
        && ends.left.is_none_or(|c| !th(2).has(c))
        && ends.right.is_none_or(|c| !th(t - 1).has(c))
}

/// Moves thread `order[p-1]`'s colors onto `v x_p` and `x_p w`.
pub fn apply_order(b: &Bunch, threads: &[Thread], order: &[usize], c: &EdgeColoring) -> EdgeColoring {
    let (v, w) = b.parents;
    let mut out = c.clone();
    for (p, &j) in order.iter().enumerate() {
        let x = b.vertices[p];
        let src = &threads[j - 1];
        out.set(v, x, src.at_v).expect("color already in palette");
        out.set(x, w, src.at_w).expect("color already in palette");
    }
    out
}

/// Colors each horizontal `x_i x_{i+1}` in order with the smallest color not
/// on any edge at `x_{i-1}..x_{i+2}` (indices within `1..=t`).
pub fn color_horizontals(
    g: &PlaneGraph,
    b: &Bunch,
    c: &EdgeColoring,
    k: usize,
) -> Result<(EdgeColoring, Vec<(Edge, Color)>), RethreadError> {
    if k < MIN_PALETTE {
        return Err(RethreadError::PaletteTooSmall { k });
    }
    let t = b.len();
    let mut out = c.clone().with_palette(k.max(c.palette())).map_err(|_| RethreadError::PaletteTooSmall { k })?;
    let mut log = Vec::new();
    for i in 1..t {
        let (a, z) = (b.x(i), b.x(i + 1));
        if !g.has_edge(a, z) {
            continue;
        }
        let mut forbidden = BTreeSet::new();
        for j in i.saturating_sub(1).max(1)..=(i + 2).min(t) {
            forbidden.extend(out.colors_at(g, b.x(j)));
        }
        let color = (1..=k)
            .find(|x| !forbidden.contains(x))
            .ok_or(RethreadError::NoAdmissibleColor(Edge::new(a, z)))?;
        out.set(a, z, color).expect("within palette");
        log.push((Edge::new(a, z), color));
    }
    Ok((out, log))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RethreadTrace {
    pub threads: Vec<Thread>,
    pub ends: EndColors,
    pub conflict_edges: Vec<(usize, usize)>,
    pub odd_set: Vec<usize>,
    pub case: PlacementCase,
    pub odd_positions: Vec<(usize, usize)>,
    pub position_graph: Vec<(usize, usize)>,
    pub matching: Vec<(usize, usize)>,
    /// `order[p-1]` is the thread moved to position `p`.
    pub order: Vec<usize>,
    pub horizontals: Vec<(Edge, Color)>,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RethreadOutcome {
    pub coloring: EdgeColoring,
    pub trace: RethreadTrace,
}

/// Extends an acyclic `k`-coloring of `G_B` to an acyclic `k`-coloring of `g`.
pub fn rethread_bunch(g: &PlaneGraph, b: &Bunch, c: &EdgeColoring, k: usize) -> Result<RethreadOutcome, RethreadError> {
    let t = b.len();
    if t < MIN_LENGTH {
        return Err(RethreadError::TooShort { t });
    }
    if k < MIN_PALETTE {
        return Err(RethreadError::PaletteTooSmall { k });
    }
    let gb = strip_horizontals(g, b)?;
    let c = c.clone().with_palette(k.max(c.palette())).map_err(|_| RethreadError::PaletteTooSmall { k })?;
    if let Some(v) = verify_acyclic(&gb, &c).violation {
        return Err(RethreadError::InputNotAcyclic(v));
    }
    let ths = threads(&gb, b, &c)?;
    let conf = build_conflict_graph(&ths)?;
    let ends = end_colors(g, b, &c);
    let o = choose_odd_set(&conf);
    let tries = o.len().max(1);
    let mut found = None;
    let mut last_err = RethreadError::NoPerfectMatching { attempts: tries };
    for attempt in 0..tries {
        let placement = match place_odd(&conf, &ths, ends, &o, attempt) {
            Ok(p) => p,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let h = build_position_graph(&placement, &ths, ends);
        if let Some(m) = perfect_matching(&h) {
            found = Some((placement, h, m, attempt + 1));
            break;
        }
        last_err = RethreadError::NoPerfectMatching { attempts: attempt + 1 };
    }
    let (placement, h, matching, attempts) = found.ok_or(last_err)?;
    let mut order = vec![0; t];
    for p in 1..=t {
        if let Some(x) = placement.at(p) {
            order[p - 1] = x;
        }
    }
    for &(p, x) in &matching {
        order[p - 1] = x;
    }
    debug_assert!(order_is_admissible(&order, &ths, ends));
    let reordered = apply_order(b, &ths, &order, &c);
    let (out, horizontals) = color_horizontals(g, b, &reordered, k)?;
    if let Some(v) = verify_acyclic(g, &out).violation {
        return Err(RethreadError::Verification(v));
    }
    Ok(RethreadOutcome {
        coloring: out,
        trace: RethreadTrace {
            threads: ths,
            ends,
            conflict_edges: conf.edges(),
            odd_set: o.iter().copied().collect(),
            case: placement.case,
            odd_positions: (1..=t).filter_map(|p| placement.at(p).map(|x| (p, x))).collect(),
            position_graph: h.edges(),
            matching,
            order,
            horizontals,
            attempts,
        },
    })
}
