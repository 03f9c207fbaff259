//! Exact checks of the numeric constants behind the reducibility bounds.
//!
//! Both product bounds share one shape. With `nf = C - 2 ns` substituted,
//! `f(ns, s) = (5 nf + ns (nf + ns + 1 - s) + 10 s + 1) (nf + ns - s + 1)`.
//! Square-root comparisons are decided by squaring integers.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub const BIG: i64 = 8680;
pub const RC3_CAP: i64 = 35;
pub const RC4_CAP: i64 = 141_415;
pub const RC4_NS_MAX: i64 = 70_707;
pub const RC2_THRESHOLDS: [i64; 4] = [8889, 17655, 26401, 35137];
pub const DELTA_FLOOR: i128 = 420_000_000_000_000;

/// Product bound with `nf`, `ns`, `s` free.
pub fn product_bound(nf: i128, ns: i128, s: i128) -> i128 {
    (5 * nf + ns * (nf + ns + 1 - s) + 10 * s + 1) * (nf + ns - s + 1)
}

/// Nested form with `nf = cap - 2 ns`, as a direct transcription.
pub fn capped_bound(cap: i128, ns: i128, s: i128) -> i128 {
    (5 * (cap - 2 * ns) + ns * ((cap - 2 * ns) + ns + 1 - s) + 10 * s + 1) * (cap - ns - s + 1)
}

/// Monomial coefficients `(i, j, c)` of `c ns^i s^j` for the capped bound.
pub fn expanded_coefficients(cap: i128) -> [(u32, u32, i128); 9] {
    [
        (0, 0, 5 * cap * cap + 6 * cap + 1),
        (0, 1, 5 * cap + 9),
        (0, 2, -10),
        (1, 0, cap * cap - 13 * cap - 10),
        (1, 1, -2 * cap - 2),
        (1, 2, 1),
        (2, 0, 8 - 2 * cap),
        (2, 1, 2),
        (3, 0, 1),
    ]
}

pub fn expanded_bound(cap: i128, ns: i128, s: i128) -> i128 {
    expanded_coefficients(cap)
        .iter()
        .map(|&(i, j, c)| c * ns.pow(i) * s.pow(j))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridMax {
    pub value: i128,
    pub ns: i64,
    pub s: i64,
}

/// Maximum over integers `0 <= ns <= 17`, `0 <= s <= 35 - ns` by nested loops.
pub fn rc3_max() -> GridMax {
    let mut best = GridMax { value: i128::MIN, ns: 0, s: 0 };
    for ns in 0..=RC3_CAP / 2 {
        for s in 0..=RC3_CAP - ns {
            let value = capped_bound(RC3_CAP as i128, ns as i128, s as i128);
            if value > best.value {
                best = GridMax { value, ns, s };
            }
        }
    }
    best
}

/// Same maximum from the expanded polynomial, iterating over `(nf, ns)`
/// with `nf = 35 - 2 ns` imposed before expansion.
pub fn rc3_max_expanded() -> GridMax {
    let cap = RC3_CAP as i128;
    let mut best = GridMax { value: i128::MIN, ns: 0, s: 0 };
    for s in 0..=RC3_CAP {
        for ns in 0..=(RC3_CAP - s).min(RC3_CAP / 2) {
            let value = expanded_bound(cap, ns as i128, s as i128);
            if value > best.value || (value == best.value && (ns, s) < (best.ns, best.s)) {
                best = GridMax { value, ns, s };
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rc4Report {
    /// Exact integer maximum over the whole integer domain.
    pub exact: GridMax,
    /// Best point on the `s = 0` edge.
    pub s_zero_edge: GridMax,
    pub ns_zero_edge: GridMax,
    pub ns_max_edge: GridMax,
    pub diagonal_edge: GridMax,
    /// Whether the exact maximizer lies off every edge of the domain.
    pub interior_wins: bool,
    pub refined_value: f64,
    pub refined_ns: f64,
    pub refined_s: f64,
    pub relative_gap: f64,
}

fn better(best: &mut GridMax, value: i128, ns: i64, s: i64) {
    if value > best.value || (value == best.value && (ns, s) < (best.ns, best.s)) {
        *best = GridMax { value, ns, s };
    }
}

/// Two routes over `0 <= ns <= 70707`, `0 <= s <= 141415 - ns`:
/// per-`ns` exact maximization of the quadratic in `s`, and a floating-point
/// coarse-to-fine refinement of the continuous relaxation.
pub fn rc4_max() -> Rc4Report {
    let cap = RC4_CAP as i128;
    let empty = GridMax { value: i128::MIN, ns: 0, s: 0 };
    let (mut exact, mut s0, mut n0, mut nmax, mut diag) = (empty, empty, empty, empty, empty);
    for ns in 0..=RC4_NS_MAX {
        let hi = RC4_CAP - ns;
        let n = ns as i128;
        let mut local = empty;
        for s in [0, hi] {
            better(&mut local, capped_bound(cap, n, s as i128), ns, s);
        }
        // f is quadratic in s with leading coefficient ns - 10.
        let a2 = n - 10;
        if a2 < 0 {
            let a1 = 2 * n * n - (2 * cap + 2) * n + 5 * cap + 9;
            let vertex = a1 / (-2 * a2);
            for s in [vertex - 1, vertex, vertex + 1] {
                if s > 0 && s < hi as i128 {
                    better(&mut local, capped_bound(cap, n, s), ns, s as i64);
                }
            }
        }
        better(&mut exact, local.value, local.ns, local.s);
        better(&mut s0, capped_bound(cap, n, 0), ns, 0);
        better(&mut diag, capped_bound(cap, n, hi as i128), ns, hi);
    }
    for s in 0..=RC4_CAP {
        better(&mut n0, capped_bound(cap, 0, s as i128), 0, s);
        if s <= RC4_CAP - RC4_NS_MAX {
            better(&mut nmax, capped_bound(cap, RC4_NS_MAX as i128, s as i128), RC4_NS_MAX, s);
        }
    }
    let interior_wins =
        exact.s > 0 && exact.s < RC4_CAP - exact.ns && exact.ns > 0 && exact.ns < RC4_NS_MAX;
    let (refined_value, refined_ns, refined_s) = refine(RC4_CAP as f64, RC4_NS_MAX as f64);
    let e = exact.value as f64;
    let gap = refined_value - e;
    let relative_gap = if gap < 0.0 { -gap } else { gap } / e;
    Rc4Report {
        exact,
        s_zero_edge: s0,
        ns_zero_edge: n0,
        ns_max_edge: nmax,
        diagonal_edge: diag,
        interior_wins,
        refined_value,
        refined_ns,
        refined_s,
        relative_gap,
    }
}

fn eval_f64(cap: f64, ns: f64, s: f64) -> f64 {
    (5.0 * (cap - 2.0 * ns) + ns * ((cap - 2.0 * ns) + ns + 1.0 - s) + 10.0 * s + 1.0) * (cap - ns - s + 1.0)
}

/// Coarse grid over the triangle, then repeated zoom around the best cell.
fn refine(cap: f64, ns_max: f64) -> (f64, f64, f64) {
    const STEPS: usize = 64;
    let (mut lo_n, mut hi_n, mut lo_s, mut hi_s) = (0.0, ns_max, 0.0, cap);
    let mut best = (f64::MIN, 0.0, 0.0);
    for _ in 0..60 {
        let dn = (hi_n - lo_n) / STEPS as f64;
        let ds = (hi_s - lo_s) / STEPS as f64;
        for i in 0..=STEPS {
            let ns = lo_n + dn * i as f64;
            for j in 0..=STEPS {
                let s = lo_s + ds * j as f64;
                if ns < 0.0 || ns > ns_max || s < 0.0 || s > cap - ns {
                    continue;
                }
                let v = eval_f64(cap, ns, s);
                if v > best.0 {
                    best = (v, ns, s);
                }
            }
        }
        let (_, bn, bs) = best;
        lo_n = bn - 2.0 * dn;
        hi_n = bn + 2.0 * dn;
        lo_s = bs - 2.0 * ds;
        hi_s = bs + 2.0 * ds;
    }
    best
}

/// `a + sqrt(5a) <= target`, decided exactly.
pub fn root_margin_holds(a: i64, target: i64) -> bool {
    let d = target - a;
    d >= 0 && (d as i128) * (d as i128) >= 5 * a as i128
}

/// `q + 2 + sqrt(4q + 4) < q + sqrt(5q)`, decided exactly.
///
/// Equivalent to `4 sqrt(4q + 4) < q - 8`, i.e. `q - 8 > 0` and `16 (4q + 4) < (q - 8)^2`.
pub fn lemma2_gap_holds(q: i64) -> bool {
    let q = q as i128;
    q > 8 && 16 * (4 * q + 4) < (q - 8) * (q - 8)
}

/// Smallest `q` in `1..=limit` from which the comparison holds through `limit`.
pub fn lemma2_threshold(limit: i64) -> Option<i64> {
    let mut first = None;
    for q in 1..=limit {
        match (lemma2_gap_holds(q), first) {
            (true, None) => first = Some(q),
            (false, Some(_)) => first = None,
            _ => {}
        }
    }
    first
}

/// `(|W| - q)^2 <= 4 |W|`, the counting bound when no recoloring pair exists.
pub fn lemma2_certificate_holds(w: i64, q: i64) -> bool {
    let d = (w - q) as i128;
    d * d <= 4 * w as i128
}

/// For `d = (X + 1)(Y + 1)` with `Y >= 1`: `(d - X) / Y > X + 1`, cross-multiplied.
pub fn average_length_implication(nf: i128, ns: i128, s: i128) -> Option<bool> {
    let x = 5 * nf + ns * (nf + ns + 1 - s) + 10 * s;
    let y = nf + ns - s;
    if y < 1 {
        return None;
    }
    let d = (x + 1) * (y + 1);
    Some(d - x > (x + 1) * y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCheck {
    pub sum: i64,
    pub target: i64,
    pub square_gap: i128,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub rc3: GridMax,
    pub rc3_expanded: GridMax,
    pub rc3_within_big: bool,
    pub rc4: Rc4Report,
    pub rc4_within_delta_floor: bool,
    pub corollary: Vec<RootCheck>,
    pub lemma2_holds_81_to_1e6: bool,
    pub lemma2_fails_at_80: bool,
    pub lemma2_threshold: Option<i64>,
    pub implication_chain_ok: bool,
    pub big: i64,
    pub palette_floor: i64,
    pub delta_floor: i128,
}

pub fn verify_arithmetic() -> ConstantsReport {
    let rc3 = rc3_max();
    let rc4 = rc4_max();
    let corollary = RC2_THRESHOLDS
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let sum = BIG * (i as i64 + 1);
            let d = (target - sum) as i128;
            RootCheck {
                sum,
                target,
                square_gap: d * d - 5 * sum as i128,
                holds: root_margin_holds(sum, target),
            }
        })
        .collect();
    let mut implication_chain_ok = true;
    for nf in 0..=35 {
        for ns in 0..=17 {
            for s in 0..=35 {
                if average_length_implication(nf, ns, s) == Some(false) {
                    implication_chain_ok = false;
                }
            }
        }
    }
    ConstantsReport {
        rc3,
        rc3_expanded: rc3_max_expanded(),
        rc3_within_big: rc3.value <= BIG as i128,
        rc4_within_delta_floor: rc4.exact.value <= DELTA_FLOOR - 4 * BIG as i128,
        rc4,
        corollary,
        lemma2_holds_81_to_1e6: (81..=1_000_000).all(lemma2_gap_holds),
        lemma2_fails_at_80: !lemma2_gap_holds(80),
        lemma2_threshold: lemma2_threshold(1_000_000),
        implication_chain_ok,
        big: BIG,
        palette_floor: 5 * BIG,
        delta_floor: DELTA_FLOOR,
    }
}
