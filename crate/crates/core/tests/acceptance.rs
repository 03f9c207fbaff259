//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every line prints even when an earlier criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use acyclic_core::acyclic_coloring::{brute_force_index, verify_acyclic, OracleOutcome};
use acyclic_core::constants::{self, rc3_max, rc4_max};
use acyclic_core::discharging::{apply_rules, initial_charges, replay, structural_scan};
use acyclic_core::generators::*;
use acyclic_core::plane_graph::find_bunches;
use acyclic_core::reductions::*;
use acyclic_core::rethreading::*;
use acyclic_core::{EdgeColoring, PlaneGraph, Thresholds};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "rc3 constant", budget: Duration::from_secs(1), run: c1_rc3 },
        Criterion { id: 2, name: "rc4 constant", budget: Duration::from_secs(5), run: c2_rc4 },
        Criterion { id: 3, name: "root margins and quadratic", budget: Duration::from_secs(5), run: c3_arithmetic },
        Criterion { id: 4, name: "charge accounting", budget: Duration::from_secs(60), run: c4_charges },
        Criterion { id: 5, name: "structural scan", budget: Duration::from_secs(60), run: c5_scan },
        Criterion { id: 6, name: "rethreading suite", budget: Duration::from_secs(60), run: c6_rethread },
        Criterion { id: 7, name: "worked example", budget: Duration::from_secs(30), run: c7_worked_example },
        Criterion { id: 8, name: "oracle values", budget: Duration::from_secs(10), run: c8_oracle },
        Criterion { id: 9, name: "driver", budget: Duration::from_secs(120), run: c9_driver },
        Criterion { id: 10, name: "tight construction", budget: Duration::from_secs(5), run: c10_tight_construction },
        Criterion { id: 11, name: "big-vertex kernels", budget: Duration::from_secs(120), run: c11_kernels },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .map_or("panicked".into(), |m| format!("panicked: {m}")))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > c.budget => Err(format!("over budget of {:?}", c.budget)),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} [{}] {tag}: {detail} ({:.2}s)", c.id, c.name, elapsed.as_secs_f64());
        failed += usize::from(result.is_err());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn c1_rc3() -> Outcome {
    let m = rc3_max();
    ensure!(m.value == 8680, "rc3_max = {} at (ns, s) = ({}, {}), expected 8680", m.value, m.ns, m.s);
    Ok(format!("8680 at ({}, {})", m.ns, m.s))
}

fn c2_rc4() -> Outcome {
    let r = rc4_max();
    let v = r.exact.value as f64;
    ensure!((4.18e14..=4.20e14).contains(&v), "rc4 maximum {v:e} outside [4.18e14, 4.20e14]");
    ensure!(r.exact.s == 0, "argmax s = {}", r.exact.s);
    ensure!((r.exact.ns - 47134).abs() <= 1, "argmax ns = {}", r.exact.ns);
    let rel = (r.refined_value - v).abs() / v;
    let agree = rel <= 1e-6;
    ensure!(agree, "exact and refined maxima differ by {rel:e}");
    Ok(format!("{} ({v:.4e}) at ns = {}, s = 0; methods agree to {rel:.1e}", r.exact.value, r.exact.ns))
}

/// `target > sum + sqrt(5 sum)` by squaring.
fn margin(sum: i128, target: i128) -> bool {
    target > sum && (target - sum) * (target - sum) > 5 * sum
}

fn c3_arithmetic() -> Outcome {
    let pairs = [(8680, 8889), (17360, 17655), (26040, 26401), (34720, 35137)];
    for (sum, target) in pairs {
        ensure!(margin(sum, target), "{target} vs {sum} fails");
        ensure!(constants::root_margin_holds(sum as i64, target as i64), "library disagrees at {target}");
    }
    let r = constants::verify_arithmetic();
    ensure!(r.corollary.iter().all(|c| c.holds), "report flags a root margin");
    ensure!((81..=1_000_000).all(constants::lemma2_gap_holds), "quadratic fails in 81..=10^6");
    ensure!(r.lemma2_holds_81_to_1e6, "report flags the quadratic");
    Ok("4 root margins by exact squaring; quadratic holds for 81 <= q <= 10^6".into())
}

fn fixtures() -> Vec<(String, PlaneGraph)> {
    let mut out: Vec<(String, PlaneGraph)> = vec![
        ("tetrahedron".into(), tetrahedron()),
        ("cube".into(), cube()),
        ("octahedron".into(), octahedron()),
        ("icosahedron".into(), icosahedron()),
        ("dodecahedron".into(), dodecahedron()),
        ("truncated dodecahedron".into(), truncated_dodecahedron()),
        ("wheel 20".into(), wheel(20)),
        ("twelve-thread gadget".into(), twelve_thread_example().unwrap().graph),
    ];
    for t in 1..=3 {
        out.push((format!("borodin {t}"), borodin_construction(t).unwrap()));
    }
    for seed in 0..4 {
        let (g, _) = bunch_gadget(&GadgetSpec::random(11 + seed as usize, seed, 2, 2)).unwrap();
        out.push((format!("bunch gadget {seed}"), g));
    }
    out
}

fn c4_charges() -> Outcome {
    let mut graphs: Vec<(String, PlaneGraph)> = (0..100u64)
        .map(|seed| (format!("random {seed}"), random_two_connected_planar(8 + (seed as usize * 7) % 43, seed)))
        .collect();
    graphs.extend(fixtures());
    let mut transfers = 0;
    for (i, (name, g)) in graphs.iter().enumerate() {
        let start = initial_charges(g).map_err(|e| format!("{name}: {e}"))?;
        ensure!(start.total() == -24, "{name}: doubled initial total {}", start.total());
        for big in [g.max_degree(), 3 + i % 6] {
            let th = Thresholds::with_big(big);
            let bunches = find_bunches(g, &th);
            let end = apply_rules(g, &th, &bunches).map_err(|e| format!("{name}: {e}"))?;
            ensure!(end.total() == -24, "{name}, big {big}: total {}", end.total());
            ensure!(replay(&start, &end.log) == end, "{name}, big {big}: replay differs");
            transfers += end.log.len();
        }
    }
    Ok(format!("{} graphs, doubled total -24 before and after, {transfers} transfers", graphs.len()))
}

fn c5_scan() -> Outcome {
    let th = Thresholds::default();
    let mut graphs: Vec<(String, PlaneGraph)> = fixtures();
    graphs.extend((0..100u64).map(|seed| (format!("random {seed}"), random_two_connected_planar(8 + (seed as usize * 7) % 43, seed))));
    let mut scanned = 0;
    for (name, g) in graphs.iter().filter(|(_, g)| g.validate().two_connected) {
        let w = structural_scan(g, &th).map_err(|e| format!("{name}: {e}"))?;
        ensure!(w.verify(g, &th), "{name}: witness {w:?} fails re-verification");
        scanned += 1;
    }
    ensure!(scanned >= 100, "only {scanned} 2-connected fixtures");
    Ok(format!("{scanned} 2-connected fixtures, every witness re-verified"))
}

fn c6_rethread() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = BTreeSet::new();
    let mut attempts = 0;
    for trial in 0..200u64 {
        let t = rng.gen_range(11..=30);
        let (g, b) = bunch_gadget(&GadgetSpec::random(t, 10_000 + trial, 1, 1)).unwrap();
        let k = rng.gen_range(13..=20).max(g.max_degree());
        let gb = strip_horizontals(&g, &b).unwrap();
        let c = acyclic_core::acyclic_coloring::random_acyclic(&gb, k, &mut rng, 2_000_000)
            .ok_or(format!("trial {trial}: no input coloring"))?;
        let out = rethread_bunch(&g, &b, &c, k).map_err(|e| format!("trial {trial} (t = {t}): {e}"))?;
        ensure!(verify_acyclic(&g, &out.coloring).acyclic, "trial {trial}: output not acyclic");
        let mut deg = vec![0; t + 1];
        for &(i, j) in &out.trace.conflict_edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        ensure!(deg.iter().all(|&d| d <= 2), "trial {trial}: conflict degree above 2");
        ensure!(out.trace.odd_set.len() == (t + 2) / 2, "trial {trial}: |O| = {}", out.trace.odd_set.len());
        attempts = attempts.max(out.trace.attempts);
        cases.insert(format!("{:?}", out.trace.case).split([' ', '{']).next().unwrap().to_string());
    }
    Ok(format!(
        "200 trials, at most {attempts} placement attempt(s), cases seen: {}",
        cases.into_iter().collect::<Vec<_>>().join(", ")
    ))
}

fn c7_worked_example() -> Outcome {
    let ex = twelve_thread_example().unwrap();
    let (g, b, k) = (&ex.graph, &ex.bunch, ex.k);
    // The gadget: one bunch of length 12 whose threads carry the reference colors.
    let found = find_bunches(g, &Thresholds::with_big(14));
    ensure!(found.len() == 1 && found[0] == *b && b.len() == 12, "bunch detection: {found:?}");
    ensure!(verify_acyclic(&ex.stripped, &ex.coloring).acyclic, "input coloring not acyclic");
    let ths = threads(&ex.stripped, b, &ex.coloring).unwrap();
    let colors: Vec<(usize, usize)> = ths.iter().map(|t| (t.at_v, t.at_w)).collect();
    ensure!(colors == TWELVE_THREAD_COLORS, "thread colors {colors:?}");
    let ends = end_colors(&ex.stripped, b, &ex.coloring);
    ensure!((ends.left, ends.right) == (Some(4), Some(9)), "end colors {ends:?}");

    // Conflict graph: two 6-cycles; the reference odd set.
    let conf = build_conflict_graph(&ths).unwrap();
    ensure!(
        conf.components() == vec![vec![1, 2, 3, 4, 5, 6], vec![7, 8, 9, 10, 11, 12]],
        "components {:?}",
        conf.components()
    );
    let o: Vec<usize> = choose_odd_set(&conf).into_iter().collect();
    ensure!(o == vec![1, 7, 8, 9, 10, 11, 12], "odd set {o:?}");

    // A reference placement and its auxiliary graph.
    let reference_slots = [(1, 1), (3, 7), (5, 8), (7, 11), (9, 9), (11, 10), (12, 12)];
    let mut slots = vec![None; 12];
    for (p, i) in reference_slots {
        slots[p - 1] = Some(i);
    }
    let placement = OddPlacement {
        t: 12,
        odd_set: o.iter().copied().collect(),
        case: PlacementCase::Plain,
        slots,
    };
    let h = build_position_graph(&placement, &ths, ends);
    let mut expect = vec![(2, 5)];
    for p in [4, 6, 8, 10] {
        expect.extend((2..=6).map(|i| (p, i)));
    }
    ensure!(h.edges() == expect, "auxiliary graph {:?}", h.edges());
    let reference_matching = [(2, 5), (4, 2), (6, 3), (8, 6), (10, 4)];
    ensure!(reference_matching.iter().all(|e| expect.contains(e)), "reference matching not in H");
    ensure!(perfect_matching(&h).is_some(), "no perfect matching");

    // A reference final order, completed and verified.
    let order = [1, 5, 7, 2, 8, 3, 11, 6, 9, 4, 10, 12];
    ensure!(order_is_admissible(&order, &ths, ends), "reference order not admissible");
    let moved = apply_order(b, &ths, &order, &ex.coloring);
    let (full, _) = color_horizontals(g, b, &moved, k).map_err(|e| format!("horizontals: {e}"))?;
    ensure!(verify_acyclic(g, &full).acyclic, "reference order coloring not acyclic");

    // The library's own run on the same input.
    let out = rethread_bunch(g, b, &ex.coloring, k).map_err(|e| e.to_string())?;
    ensure!(verify_acyclic(g, &out.coloring).acyclic, "rethread output not acyclic");
    Ok(format!("gadget, odd set, H with {} edges, matching, and order verified", expect.len()))
}

fn star(d: usize) -> PlaneGraph {
    let mut rot = vec![(1..=d).collect::<Vec<_>>()];
    rot.extend((1..=d).map(|_| vec![0]));
    PlaneGraph::from_rotation(rot).unwrap()
}

fn cycle(n: usize) -> PlaneGraph {
    PlaneGraph::from_rotation((0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()).unwrap()
}

/// Smallest `k` for which some assignment of `1..=k` is proper and leaves
/// every two color classes a forest; plain enumeration.
fn naive_index(g: &PlaneGraph) -> usize {
    let edges: Vec<_> = g.edges().collect();
    let n = g.vertex_count();
    let forest = |sel: &[usize]| {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        sel.iter().all(|&i| {
            let (a, b) = (find(&mut parent, edges[i].0), find(&mut parent, edges[i].1));
            parent[a] = b;
            a != b
        })
    };
    for k in 1.. {
        let mut col = vec![1usize; edges.len()];
        loop {
            let proper = (0..n).all(|v| {
                let at: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].touches(v)).map(|i| col[i]).collect();
                at.iter().collect::<BTreeSet<_>>().len() == at.len()
            });
            let acyclic = proper
                && (1..=k).all(|a| {
                    (a + 1..=k).all(|b| forest(&(0..edges.len()).filter(|&i| col[i] == a || col[i] == b).collect::<Vec<_>>()))
                });
            if acyclic {
                return k;
            }
            let Some(i) = (0..edges.len()).find(|&i| col[i] < k) else { break };
            col[i] += 1;
            col[..i].iter_mut().for_each(|c| *c = 1);
        }
    }
    unreachable!()
}

fn c8_oracle() -> Outcome {
    let k4 = tetrahedron();
    // Frozen after the plain enumeration below agreed.
    let cases = [("K1,4", star(4), 4), ("C5", cycle(5), 3), ("K4", k4, 5)];
    let mut parts = Vec::new();
    for (name, g, frozen) in cases {
        let naive = naive_index(&g);
        ensure!(naive == frozen, "{name}: enumeration gives {naive}, frozen {frozen}");
        match brute_force_index(&g, 8) {
            OracleOutcome::Found { index, witness } => {
                ensure!(index == frozen, "{name}: oracle {index}, expected {frozen}");
                ensure!(index >= g.max_degree(), "{name}: index below max degree");
                ensure!(verify_acyclic(&g, &witness).acyclic, "{name}: witness fails");
            }
            OracleOutcome::Exceeds { k_max } => return Err(format!("{name}: exceeds {k_max}")),
        }
        parts.push(format!("{name} = {frozen}"));
    }
    Ok(parts.join(", "))
}

fn c9_driver() -> Outcome {
    let mut graphs: Vec<PlaneGraph> = (0..100u64).map(|seed| random_planar(4 + (seed as usize * 13) % 57, seed)).collect();
    graphs.push(icosahedron());
    graphs.push(dodecahedron());
    let mut stats = DriverStats::default();
    for (i, g) in graphs.iter().enumerate() {
        let k = 5 * g.max_degree();
        let r = color_planar(g, k);
        let c: EdgeColoring = r.result.map_err(|e| format!("graph {i}: {e:?}"))?;
        ensure!(verify_acyclic(g, &c).acyclic, "graph {i}: output fails verification");
        stats.rc1 += r.stats.rc1;
        stats.cut_vertices += r.stats.cut_vertices;
        stats.components += r.stats.components;
        stats.brute_force += r.stats.brute_force;
    }
    Ok(format!(
        "{} graphs; {} vertex reductions, {} cut-vertex splits, {} component splits, {} exhaustive bases",
        graphs.len(),
        stats.rc1,
        stats.cut_vertices,
        stats.components,
        stats.brute_force
    ))
}

fn c10_tight_construction() -> Outcome {
    for t in 1..=3 {
        let g = borodin_construction(t).map_err(|e| e.to_string())?;
        let delta = 5 * t + 10;
        ensure!(g.validate().euler_ok && g.faces().iter().all(|f| f.len() == 3), "t = {t}: not a triangulation");
        ensure!(g.max_degree() == delta, "t = {t}: max degree {}", g.max_degree());
        ensure!(g.min_degree() == 4, "t = {t}: min degree {}", g.min_degree());
        for v in g.active_vertices().filter(|&v| g.degree(v) <= 5) {
            let hubs = g.neighbors(v).iter().filter(|&&u| g.degree(u) == delta).count();
            ensure!(hubs == 2, "t = {t}: vertex {v} has {hubs} max-degree neighbors");
        }
    }
    Ok("t = 1, 2, 3: triangulation, max degree 5t+10, min degree 4, two max-degree neighbors at every 5- vertex".into())
}

fn kernel_gadget(seed: u64) -> HubGadget {
    let t = 12 + (seed % 9) as usize;
    hub_gadget(&[SegmentSpec {
        gaps: GadgetSpec::random(t, seed, 1, 1).gaps().unwrap(),
        coparent_padding: 1,
        free_after: 1,
    }])
    .unwrap()
}

fn c11_kernels() -> Outcome {
    let th = Thresholds::with_big(10);
    let (mut reduced, mut repaired, mut extended) = (0, 0, 0);
    for seed in 0..24u64 {
        let hub = kernel_gadget(seed);
        let (g, v) = (&hub.graph, hub.hub);
        let k = g.max_degree();
        let s = setup(g, v, &th).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = acyclic_core::acyclic_coloring::random_acyclic(&s.working.without_vertex(s.x), k, &mut rng, 2_000_000)
            .ok_or(format!("seed {seed}: no base coloring"))?;
        let out = reduce_big_vertex(g, v, &th, k, &base).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(verify_acyclic(&out.working, &out.coloring).acyclic, "seed {seed}: reduction output");
        let st = &out.state;
        // Removal count, exactly.
        let removed = k as i64 - st.c_good.len() as i64 + 2;
        let (nf, ns, sh) = (st.nf as i64, st.ns as i64, st.s as i64);
        ensure!(removed <= 5 * nf + ns * (nf + ns + 1 - sh) + 10 * sh + 2, "seed {seed}: removal bound");
        // Availability, exactly.
        let tb = st.bunch_count() as i64;
        ensure!(g.degree(v) as i64 - tb * tb - (k - st.c_good.len()) as i64 > 0, "seed {seed}: availability");
        let full = restore_long_bunches(g, &st.long, &out.coloring, k).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(verify_acyclic(g, &full).acyclic, "seed {seed}: restored coloring");
        reduced += 1;

        // Swap two good colors at v until a cycle appears, then repair.
        let good: Vec<usize> = st.c_good.iter().copied().collect();
        'pairs: for &a in &good {
            for &b2 in good.iter().filter(|&&b2| b2 > a) {
                let w = &out.working;
                let (Some(ua), Some(ub)) = (out.coloring.neighbor_via(w, v, a), out.coloring.neighbor_via(w, v, b2)) else {
                    continue;
                };
                let mut c = out.coloring.clone();
                c.set(v, ua, b2).unwrap();
                c.set(v, ub, a).unwrap();
                if !acyclic_core::acyclic_coloring::is_proper(w, &c).unwrap() || verify_acyclic(w, &c).acyclic {
                    continue;
                }
                let (fixed, log) = swap_repair(w, v, &c, &st.c_good, st.bunch_count(), k).map_err(|e| format!("seed {seed}: {e}"))?;
                ensure!(log.cycles_before >= 1 && verify_acyclic(w, &fixed).acyclic, "seed {seed}: repair");
                repaired += 1;
                break 'pairs;
            }
        }
    }
    for seed in 0..24u64 {
        let n = 21 + 2 * (seed % 5) as usize;
        let (g, base) = forced_swap_wheel(n, seed);
        let w: Vec<usize> = (1..=n).collect();
        match lemma2_extend(&g, 0, &w, 100, &base, n).map_err(|e| format!("wheel {seed}: {e}"))? {
            Lemma2Outcome::Extended { coloring, steps } => {
                ensure!(verify_acyclic(&g, &coloring).acyclic, "wheel {seed}: output");
                ensure!(steps.iter().any(|s| matches!(s, Lemma2Step::Swap { .. })), "wheel {seed}: no swap step");
            }
            Lemma2Outcome::Certificate(c) => ensure!(c.counting_holds && c.bound_holds, "wheel {seed}: {c:?}"),
        }
        extended += 1;
    }
    ensure!(reduced >= 20 && repaired >= 20 && extended >= 20, "reduced {reduced}, repaired {repaired}, extended {extended}");
    Ok(format!("{reduced} reductions with C_good checks, {repaired} swap repairs, {extended} forced-swap extensions"))
}

/// Wheel with the rim minus `w_1` perfectly matched in the color of `v w_1`.
fn forced_swap_wheel(n: usize, seed: u64) -> (PlaneGraph, EdgeColoring) {
    use rand::seq::SliceRandom;
    let g = wheel(n);
    let mut colors: Vec<usize> = (1..=n).collect();
    colors.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut partial = EdgeColoring::new(n);
    for (i, &col) in colors.iter().enumerate().skip(1) {
        partial.set(0, i + 1, col).unwrap();
    }
    for a in (2..n).step_by(2) {
        partial.set(a, a + 1, colors[0]).unwrap();
    }
    let mut base = acyclic_core::acyclic_coloring::extend_acyclic(&g.without_vertex(1), &partial, n, 2_000_000).unwrap();
    base.set(0, 1, colors[0]).unwrap();
    (g, base)
}
