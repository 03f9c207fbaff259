//! Charge accounting for the structural argument and detectors for the four
//! reducible configurations. Charges are doubled so every transfer is integral.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::plane_graph::{find_bunches, Bunch, PlaneGraph, Thresholds, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Holder {
    Vertex(Vertex),
    /// Index into [`PlaneGraph::faces`].
    Face(usize),
    Bank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Single big neighbor.
    R1Single,
    /// Bunch member from a parent.
    R1Bunch,
    /// Two big neighbors that are not bunch parents.
    R1Pair,
    R2,
    R3Bank,
    R3Deposit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: Holder,
    pub to: Holder,
    /// Doubled amount.
    pub amount: i64,
    pub rule: Rule,
}

/// Doubled charges. `vertex[v]` is zero for isolated ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeLedger {
    pub vertex: Vec<i64>,
    pub face: Vec<i64>,
    pub bank: i64,
    pub log: Vec<Transfer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DischargeError {
    Disconnected,
    NotTwoConnected,
    /// No configuration found; impossible under the default thresholds.
    NoConfiguration,
}

impl fmt::Display for DischargeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DischargeError::Disconnected => write!(f, "graph is not connected"),
            DischargeError::NotTwoConnected => write!(f, "graph is not 2-connected"),
            DischargeError::NoConfiguration => write!(f, "no reducible configuration found"),
        }
    }
}

impl ChargeLedger {
    /// Doubled total; `-24` for any connected plane graph.
    pub fn total(&self) -> i64 {
        self.vertex.iter().sum::<i64>() + self.face.iter().sum::<i64>() + self.bank
    }

    pub fn get(&self, h: Holder) -> i64 {
        match h {
            Holder::Vertex(v) => self.vertex[v],
            Holder::Face(f) => self.face[f],
            Holder::Bank => self.bank,
        }
    }

    fn slot(&mut self, h: Holder) -> &mut i64 {
        match h {
            Holder::Vertex(v) => &mut self.vertex[v],
            Holder::Face(f) => &mut self.face[f],
            Holder::Bank => &mut self.bank,
        }
    }

    pub fn apply(&mut self, t: Transfer) {
        *self.slot(t.from) -= t.amount;
        *self.slot(t.to) += t.amount;
        self.log.push(t);
    }
}

/// `d(v) - 6` per vertex and `2l(f) - 6` per face, doubled.
pub fn initial_charges(g: &PlaneGraph) -> Result<ChargeLedger, DischargeError> {
    if !g.is_connected() {
        return Err(DischargeError::Disconnected);
    }
    let vertex = (0..g.vertex_count())
        .map(|v| if g.degree(v) == 0 { 0 } else { 2 * (g.degree(v) as i64 - 6) })
        .collect();
    let face = g.faces().iter().map(|f| 2 * (2 * f.len() as i64 - 6)).collect();
    Ok(ChargeLedger {
        vertex,
        face,
        bank: 0,
        log: Vec::new(),
    })
}

/// The transfers of R1, R2, R3 in that order, each computed from structure only.
pub fn rule_transfers(g: &PlaneGraph, th: &Thresholds, bunches: &[Bunch]) -> Vec<Transfer> {
    let big = |v: Vertex| th.is_big(g, v);
    let small = |v: Vertex| g.degree(v) > 0 && g.degree(v) <= 5;
    let mut out = Vec::new();
    let mut push = |from, to, amount, rule| {
        out.push(Transfer { from, to, amount, rule });
    };

    for v in (0..g.vertex_count()).filter(|&v| small(v)) {
        let bigs: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| big(w)).collect();
        let member: Vec<&Bunch> = bunches.iter().filter(|b| b.vertices.contains(&v)).collect();
        if bigs.len() == 1 {
            push(Holder::Vertex(bigs[0]), Holder::Vertex(v), 2 * (6 - g.degree(v) as i64), Rule::R1Single);
        }
        for b in &member {
            push(Holder::Vertex(b.parents.0), Holder::Vertex(v), 2, Rule::R1Bunch);
            push(Holder::Vertex(b.parents.1), Holder::Vertex(v), 2, Rule::R1Bunch);
        }
        if bigs.len() == 2 && !member.iter().any(|b| b.has_parent(bigs[0]) && b.has_parent(bigs[1])) {
            for &w in &bigs {
                push(Holder::Vertex(w), Holder::Vertex(v), 1, Rule::R1Pair);
            }
        }
    }

    for (fi, f) in g.faces().iter().enumerate() {
        let l = f.len();
        for i in 0..l {
            let v = f[i];
            if !small(v) {
                continue;
            }
            let (a, b) = (f[(i + l - 1) % l], f[(i + 1) % l]);
            let (ba, bb) = (big(a), big(b));
            if !(ba || bb) {
                continue;
            }
            let amount = match l {
                0..=3 => 0,
                4 => 2,
                _ if ba && bb => 4,
                _ => 2,
            };
            if amount > 0 {
                push(Holder::Face(fi), Holder::Vertex(v), amount, Rule::R2);
            }
        }
    }

    for v in (0..g.vertex_count()).filter(|&v| big(v)) {
        push(Holder::Vertex(v), Holder::Bank, 24, Rule::R3Deposit);
    }
    for f in g.faces().iter().filter(|f| f.len() == 3) {
        for i in 0..3 {
            let v = f[i];
            if small(v) && big(f[(i + 1) % 3]) && big(f[(i + 2) % 3]) {
                push(Holder::Bank, Holder::Vertex(v), 4, Rule::R3Bank);
            }
        }
    }
    out
}

pub fn apply_rules(g: &PlaneGraph, th: &Thresholds, bunches: &[Bunch]) -> Result<ChargeLedger, DischargeError> {
    let mut ledger = initial_charges(g)?;
    for t in rule_transfers(g, th, bunches) {
        ledger.apply(t);
    }
    Ok(ledger)
}

/// Re-applies `log` to a fresh copy of `start`.
pub fn replay(start: &ChargeLedger, log: &[Transfer]) -> ChargeLedger {
    let mut l = start.clone();
    for t in log {
        l.apply(t.clone());
    }
    l
}

pub fn unhappy_elements(ledger: &ChargeLedger) -> Vec<Holder> {
    let mut out: Vec<Holder> = ledger
        .vertex
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 0)
        .map(|(v, _)| Holder::Vertex(v))
        .collect();
    out.extend(ledger.face.iter().enumerate().filter(|(_, &c)| c < 0).map(|(f, _)| Holder::Face(f)));
    if ledger.bank < 0 {
        out.push(Holder::Bank);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rc2Class {
    /// 2⁻-vertices.
    I,
    /// 3⁻-vertices.
    II,
    /// 4⁻-vertices.
    III,
    /// 5⁻-vertices.
    IV,
}

impl Rc2Class {
    pub const ALL: [Rc2Class; 4] = [Rc2Class::I, Rc2Class::II, Rc2Class::III, Rc2Class::IV];

    pub fn max_degree(self) -> usize {
        self as usize + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigurationWitness {
    Rc1 { v: Vertex, sum: usize, palette: usize },
    Rc2 { v: Vertex, class: Rc2Class, vertices: Vec<Vertex>, needed: usize },
    Rc3 { v: Vertex, nf: usize, ns: usize },
    Rc4 { v: Vertex, nf: usize, ns: usize },
}

impl ConfigurationWitness {
    pub fn vertex(&self) -> Vertex {
        match *self {
            ConfigurationWitness::Rc1 { v, .. }
            | ConfigurationWitness::Rc2 { v, .. }
            | ConfigurationWitness::Rc3 { v, .. }
            | ConfigurationWitness::Rc4 { v, .. } => v,
        }
    }

    /// Recomputes the witness from `g` and `th` alone.
    pub fn verify(&self, g: &PlaneGraph, th: &Thresholds) -> bool {
        match self {
            ConfigurationWitness::Rc1 { v, sum, palette } => {
                *palette == th.palette_for(g) && neighbor_degree_sum(g, *v) == *sum && sum <= palette
            }
            ConfigurationWitness::Rc2 { v, class, vertices, needed } => {
                let counted = rc2_candidates(g, th, *v, *class);
                th.is_big(g, *v)
                    && *needed == rc2_threshold(g, th, *v, *class)
                    && vertices.len() >= *needed
                    && vertices.iter().all(|x| counted.contains(x))
            }
            ConfigurationWitness::Rc3 { v, nf, ns } => {
                let bunches = find_bunches(g, th);
                th.is_big(g, *v) && outside_counts(g, &bunches, *v) == (*nf, *ns) && nf + 2 * ns <= th.rc3_cap
            }
            ConfigurationWitness::Rc4 { v, nf, ns } => {
                let bunches = find_bunches(g, th);
                th.is_very_big(g, *v) && outside_counts(g, &bunches, *v) == (*nf, *ns) && nf + 2 * ns <= th.rc4_cap
            }
        }
    }
}

pub fn neighbor_degree_sum(g: &PlaneGraph, v: Vertex) -> usize {
    g.neighbors(v).iter().map(|&w| g.degree(w)).sum()
}

/// Lowest-id non-isolated vertex whose neighbor degree sum is at most `k`.
pub fn detect_rc1(g: &PlaneGraph, k: usize) -> Option<ConfigurationWitness> {
    (0..g.vertex_count())
        .filter(|&v| g.degree(v) > 0)
        .map(|v| (v, neighbor_degree_sum(g, v)))
        .find(|&(_, s)| s <= k)
        .map(|(v, sum)| ConfigurationWitness::Rc1 { v, sum, palette: k })
}

fn rc2_candidates(g: &PlaneGraph, th: &Thresholds, v: Vertex, class: Rc2Class) -> Vec<Vertex> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| {
            g.degree(u) <= class.max_degree()
                && g.neighbors(u).iter().filter(|&&x| th.is_big(g, x)).count() == 1
        })
        .collect()
}

fn rc2_threshold(g: &PlaneGraph, th: &Thresholds, v: Vertex, class: Rc2Class) -> usize {
    let bound = g.degree(v) as i64 - g.max_degree() as i64 + th.rc2[class as usize] as i64;
    bound.max(1) as usize
}

pub fn detect_rc2(g: &PlaneGraph, th: &Thresholds) -> Option<ConfigurationWitness> {
    for v in (0..g.vertex_count()).filter(|&v| th.is_big(g, v)) {
        for class in Rc2Class::ALL {
            let vertices = rc2_candidates(g, th, v, class);
            let needed = rc2_threshold(g, th, v, class);
            if vertices.len() >= needed {
                return Some(ConfigurationWitness::Rc2 { v, class, vertices, needed });
            }
        }
    }
    None
}

/// `(nf, ns)`: 5⁻- and 6⁺-neighbors of `v` in no bunch that has `v` as a parent.
pub fn outside_counts(g: &PlaneGraph, bunches: &[Bunch], v: Vertex) -> (usize, usize) {
    let inside: BTreeSet<Vertex> = bunches
        .iter()
        .filter(|b| b.has_parent(v))
        .flat_map(|b| b.vertices.iter().copied())
        .collect();
    let mut nf = 0;
    let mut ns = 0;
    for &u in g.neighbors(v).iter().filter(|u| !inside.contains(u)) {
        if g.degree(u) <= 5 {
            nf += 1;
        } else {
            ns += 1;
        }
    }
    (nf, ns)
}

pub fn detect_rc34(g: &PlaneGraph, th: &Thresholds, bunches: &[Bunch]) -> Option<ConfigurationWitness> {
    for v in (0..g.vertex_count()).filter(|&v| g.degree(v) > 0) {
        let (nf, ns) = outside_counts(g, bunches, v);
        if th.is_big(g, v) && nf + 2 * ns <= th.rc3_cap {
            return Some(ConfigurationWitness::Rc3 { v, nf, ns });
        }
        if th.is_very_big(g, v) && nf + 2 * ns <= th.rc4_cap {
            return Some(ConfigurationWitness::Rc4 { v, nf, ns });
        }
    }
    None
}

/// First configuration found, trying RC1, RC2, then RC3/RC4.
pub fn structural_scan(g: &PlaneGraph, th: &Thresholds) -> Result<ConfigurationWitness, DischargeError> {
    if !g.validate().two_connected {
        return Err(DischargeError::NotTwoConnected);
    }
    detect_rc1(g, th.palette_for(g))
        .or_else(|| detect_rc2(g, th))
        .or_else(|| detect_rc34(g, th, &find_bunches(g, th)))
        .ok_or(DischargeError::NoConfiguration)
}

/// Charges after the rules, with the bunches found under `th`.
pub fn discharge(g: &PlaneGraph, th: &Thresholds) -> Result<ChargeLedger, DischargeError> {
    apply_rules(g, th, &find_bunches(g, th))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::generators::{bunch_gadget, cube, icosahedron, wheel, GadgetSpec};
    use crate::plane_graph::GapKind;

    fn k4() -> PlaneGraph {
        PlaneGraph::from_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]).unwrap()
    }

    #[test]
    fn initial_totals() {
        let l = initial_charges(&k4()).unwrap();
        assert_eq!(l.vertex, vec![-6; 4]);
        assert_eq!(l.face, vec![0; 4]);
        assert_eq!(l.total(), -24);
        let c = initial_charges(&cube()).unwrap();
        assert_eq!(c.vertex, vec![-6; 8]);
        assert_eq!(c.face, vec![4; 6]);
        assert_eq!(unhappy_elements(&l).len(), 4);
    }

    #[test]
    fn wheel_ledger() {
        let g = wheel(20);
        let th = Thresholds::with_big(10);
        let l = discharge(&g, &th).unwrap();
        assert!((1..=20).all(|v| l.vertex[v] == 0));
        assert_eq!(l.vertex[0], -116);
        let outer = g.faces().iter().position(|f| f.len() == 20).unwrap();
        assert_eq!(l.face[outer], 68);
        assert_eq!(l.bank, 24);
        assert_eq!(l.total(), -24);
        assert_eq!(unhappy_elements(&l), vec![Holder::Vertex(0)]);
        assert_eq!(replay(&initial_charges(&g).unwrap(), &l.log), l);
    }

    #[test]
    fn no_big_vertex_means_no_transfer() {
        let g = icosahedron();
        let l = discharge(&g, &Thresholds::default()).unwrap();
        assert_eq!(l, initial_charges(&g).unwrap());
    }

    #[test]
    fn bunch_two_vertex_ends_at_zero() {
        let spec = GadgetSpec::from_gaps(&[GapKind::QuadFace; 5], 8, 8);
        let (g, b) = bunch_gadget(&spec).unwrap();
        let th = Thresholds::with_big(10);
        let l = discharge(&g, &th).unwrap();
        for &x in &b.vertices {
            assert_eq!(g.degree(x), 2);
            assert_eq!(l.vertex[x], 0);
        }
    }

    #[test]
    fn rc1_examples() {
        assert!(matches!(detect_rc1(&k4(), 43400), Some(ConfigurationWitness::Rc1 { v: 0, sum: 9, .. })));
        assert_eq!(detect_rc1(&k4(), 8), None);
        assert!(detect_rc1(&icosahedron(), 25).is_some());
        assert_eq!(detect_rc1(&icosahedron(), 24), None);
    }

    #[test]
    fn rc2_star() {
        let mut rot = vec![(1..=8).collect::<Vec<_>>()];
        rot.extend((1..=8).map(|_| vec![0]));
        let g = PlaneGraph::from_rotation(rot).unwrap();
        let th = Thresholds {
            rc2: [1, 1, 1, 1],
            ..Thresholds::with_big(5)
        };
        let w = detect_rc2(&g, &th).unwrap();
        assert!(matches!(&w, ConfigurationWitness::Rc2 { class: Rc2Class::I, vertices, .. } if vertices.len() == 8));
        assert!(w.verify(&g, &th));
        assert_eq!(detect_rc2(&g, &Thresholds::with_big(5)), None);
    }

    #[test]
    fn scan_rejects_cut_vertex() {
        let g = PlaneGraph::from_rotation(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        assert_eq!(structural_scan(&g, &Thresholds::default()), Err(DischargeError::NotTwoConnected));
    }
}
