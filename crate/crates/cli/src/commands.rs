use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use acyclic_core::acyclic_coloring::{brute_force_index, verify_acyclic, OracleOutcome, Violation};
use acyclic_core::constants::verify_arithmetic;
use acyclic_core::discharging::{self, structural_scan, unhappy_elements, ConfigurationWitness, Holder};
use acyclic_core::generators::{self, twelve_thread_example, GadgetSpec};
use acyclic_core::plane_graph::find_bunches;
use acyclic_core::reductions::{color_planar, DriverFailure};
use acyclic_core::rethreading::{rethread_bunch, RethreadTrace};
use acyclic_core::{EdgeColoring, PlaneGraph, Thresholds};
use serde_json::{json, Value};

use crate::Kind;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Output {
    pub stdout: String,
    pub status: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, status: 0 }
    }

    fn failed(stdout: String) -> Self {
        Output { stdout, status: 1 }
    }
}

pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }

    pub fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

type Run = Result<Output, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<PlaneGraph, CliError> {
    PlaneGraph::parse_text(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_coloring(g: &PlaneGraph, path: &Path, k: Option<usize>) -> Result<EdgeColoring, CliError> {
    let text = read(path)?;
    let bad = |e| CliError::Usage(format!("{}: {e}", path.display()));
    match k {
        Some(k) => EdgeColoring::parse_text(g, &text, k).map_err(bad),
        None => {
            let c = EdgeColoring::parse_text(g, &text, usize::MAX).map_err(bad)?;
            let top = c.iter().map(|(_, col)| col).max().unwrap_or(1);
            Ok(c.with_palette(top).expect("largest color fits"))
        }
    }
}

fn thresholds(big: Option<usize>) -> Thresholds {
    big.map(Thresholds::with_big).unwrap_or_default()
}

fn envelope(command: &str, body: Value) -> String {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn triples(c: &EdgeColoring) -> Value {
    c.iter().map(|(e, col)| json!([e.0, e.1, col])).collect()
}

fn describe_violation(v: &Violation) -> String {
    match v {
        Violation::UnknownEdge(e) => format!("{e} is not an edge"),
        Violation::OutOfPalette { edge, color } => format!("{edge} has out-of-palette color {color}"),
        Violation::Uncolored(e) => format!("{e} is uncolored"),
        Violation::Improper { vertex, color } => format!("color {color} repeats at vertex {vertex}"),
        Violation::BicoloredCycle { colors, cycle } => {
            let walk: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            format!("cycle {} uses only colors {} and {}", walk.join(" "), colors.0, colors.1)
        }
    }
}

pub fn verify(graph: &Path, coloring: &Path, k: Option<usize>, json: bool) -> Run {
    let g = load_graph(graph)?;
    let c = load_coloring(&g, coloring, k)?;
    let report = verify_acyclic(&g, &c);
    let stdout = if json {
        envelope(
            "verify",
            json!({
                "edges": g.edge_count(),
                "colored": c.len(),
                "palette": c.palette(),
                "acyclic": report.acyclic,
                "violation": report.violation,
            }),
        )
    } else {
        let mut s = format!("edges: {}\ncolored: {}\npalette: {}\n", g.edge_count(), c.len(), c.palette());
        match &report.violation {
            None => s.push_str("acyclic: yes\n"),
            Some(v) => writeln!(s, "acyclic: no\nviolation: {}", describe_violation(v)).unwrap(),
        }
        s
    };
    Ok(if report.acyclic { Output::ok(stdout) } else { Output::failed(stdout) })
}

pub fn color(graph: &Path, k: Option<usize>, json: bool) -> Run {
    let g = load_graph(graph)?;
    let k = k.unwrap_or(5 * g.max_degree()).max(1);
    let report = color_planar(&g, k);
    let c = report.result.map_err(|f| {
        CliError::Domain(match f {
            DriverFailure::Stuck { vertex, sum } => {
                format!("no reduction applies; vertex {vertex} has neighbor degree sum {sum} > {k}")
            }
            DriverFailure::BruteForce { edges } => format!("no {k}-coloring of a {edges}-edge piece"),
            DriverFailure::Merge => "blocks could not be merged at a cut vertex".into(),
            DriverFailure::Verification(v) => format!("output failed verification: {}", describe_violation(&v)),
        })
    })?;
    Ok(Output::ok(if json {
        envelope("color", json!({ "palette": k, "coloring": triples(&c), "stats": report.stats }))
    } else {
        c.to_text()
    }))
}

pub fn oracle(graph: &Path, max_k: Option<usize>, json: bool) -> Run {
    let g = load_graph(graph)?;
    let max_k = max_k.unwrap_or(g.max_degree() + 3);
    match brute_force_index(&g, max_k) {
        OracleOutcome::Found { index, witness } => Ok(Output::ok(if json {
            envelope("oracle", json!({ "index": index, "witness": triples(&witness) }))
        } else {
            format!("index: {index}\n{}", witness.to_text())
        })),
        OracleOutcome::Exceeds { k_max } => Err(CliError::Domain(format!("index exceeds {k_max}"))),
    }
}

fn describe_witness(w: &ConfigurationWitness) -> String {
    match w {
        ConfigurationWitness::Rc1 { v, sum, palette } => {
            format!("RC1 at vertex {v}: neighbor degree sum {sum} <= palette {palette}")
        }
        ConfigurationWitness::Rc2 { v, class, vertices, needed } => format!(
            "RC2 at vertex {v}: class {class:?}, {} small neighbors (need {needed}): {}",
            vertices.len(),
            vertices.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        ),
        ConfigurationWitness::Rc3 { v, nf, ns } => format!("RC3 at vertex {v}: nf {nf}, ns {ns}"),
        ConfigurationWitness::Rc4 { v, nf, ns } => format!("RC4 at vertex {v}: nf {nf}, ns {ns}"),
    }
}

pub fn scan(graph: &Path, big: Option<usize>, json: bool) -> Run {
    let g = load_graph(graph)?;
    let th = thresholds(big);
    let w = structural_scan(&g, &th).map_err(|e| CliError::Domain(e.to_string()))?;
    let verified = w.verify(&g, &th);
    let stdout = if json {
        envelope("scan", json!({ "witness": w, "verified": verified }))
    } else {
        format!("{}\nverified: {}\n", describe_witness(&w), if verified { "yes" } else { "no" })
    };
    Ok(if verified { Output::ok(stdout) } else { Output::failed(stdout) })
}

fn holder_name(h: Holder) -> String {
    match h {
        Holder::Vertex(v) => format!("vertex {v}"),
        Holder::Face(f) => format!("face {f}"),
        Holder::Bank => "bank".into(),
    }
}

pub fn discharge(graph: &Path, big: Option<usize>, json: bool) -> Run {
    let g = load_graph(graph)?;
    let th = thresholds(big);
    let start = discharging::initial_charges(&g).map_err(|e| CliError::Domain(e.to_string()))?;
    let ledger = discharging::discharge(&g, &th).map_err(|e| CliError::Domain(e.to_string()))?;
    let unhappy = unhappy_elements(&ledger);
    let stdout = if json {
        let unhappy: Vec<Value> = unhappy.iter().map(|&h| json!({ "holder": h, "charge": ledger.get(h) })).collect();
        envelope(
            "discharge",
            json!({
                "charges_doubled": true,
                "initial_total": start.total(),
                "final_total": ledger.total(),
                "transfers": ledger.log,
                "unhappy": unhappy,
            }),
        )
    } else {
        let mut s = format!(
            "charges are doubled\ninitial total: {}\nfinal total: {}\ntransfers: {}\nunhappy: {}\n",
            start.total(),
            ledger.total(),
            ledger.log.len(),
            unhappy.len()
        );
        for &h in &unhappy {
            writeln!(s, "  {}: {}", holder_name(h), ledger.get(h)).unwrap();
        }
        s
    };
    Ok(if unhappy.is_empty() { Output::ok(stdout) } else { Output::failed(stdout) })
}

pub struct BunchInput {
    pub graph: PathBuf,
    pub coloring: PathBuf,
    pub parents: (usize, usize),
    pub k: usize,
}

fn describe_trace(t: &RethreadTrace) -> String {
    let list = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let pairs = |xs: &[(usize, usize)], l: &str, r: &str| {
        xs.iter().map(|(a, b)| format!("{l}{a}-{r}{b}")).collect::<Vec<_>>().join(" ")
    };
    let end = |c: Option<usize>| c.map_or("none".into(), |c| c.to_string());
    let mut s = String::new();
    writeln!(s, "threads: {}", t.threads.len()).unwrap();
    for th in &t.threads {
        writeln!(s, "  {}: vertex {}, at v {}, at w {}", th.index, th.vertex, th.at_v, th.at_w).unwrap();
    }
    writeln!(s, "end colors: left {}, right {}", end(t.ends.left), end(t.ends.right)).unwrap();
    writeln!(s, "conflicts: {}", pairs(&t.conflict_edges, "t", "t")).unwrap();
    writeln!(s, "odd set: {}", list(&t.odd_set)).unwrap();
    writeln!(s, "case: {:?}", t.case).unwrap();
    writeln!(s, "odd positions: {}", pairs(&t.odd_positions, "p", "t")).unwrap();
    writeln!(s, "position graph: {}", pairs(&t.position_graph, "p", "t")).unwrap();
    writeln!(s, "matching: {}", pairs(&t.matching, "p", "t")).unwrap();
    writeln!(s, "order: {}", list(&t.order)).unwrap();
    let hz: Vec<String> = t.horizontals.iter().map(|(e, c)| format!("{e}={c}")).collect();
    writeln!(s, "horizontals: {}", hz.join(" ")).unwrap();
    writeln!(s, "attempts: {}", t.attempts).unwrap();
    s
}

pub fn rethread_demo(files: Option<BunchInput>, big: Option<usize>, json: bool) -> Run {
    let (g, b, c, k) = match files {
        None => {
            let ex = twelve_thread_example().map_err(|e| CliError::Domain(e.to_string()))?;
            (ex.graph, ex.bunch, ex.coloring, ex.k)
        }
        Some(input) => {
            let g = load_graph(&input.graph)?;
            let c = load_coloring(&g, &input.coloring, Some(input.k))?;
            let (v, w) = input.parents;
            let b = find_bunches(&g, &thresholds(big))
                .into_iter()
                .filter(|b| b.parents == (v, w) || b.parents == (w, v))
                .max_by_key(|b| b.len())
                .ok_or_else(|| CliError::Domain(format!("no bunch with parents {v} and {w}")))?;
            (g, b, c, input.k)
        }
    };
    let out = rethread_bunch(&g, &b, &c, k).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(Output::ok(if json {
        envelope("rethread-demo", json!({ "palette": k, "trace": out.trace, "coloring": triples(&out.coloring) }))
    } else {
        format!("{}coloring:\n{}", describe_trace(&out.trace), out.coloring.to_text())
    }))
}

pub fn constants(json: bool) -> Run {
    let r = verify_arithmetic();
    if json {
        let body = serde_json::to_value(&r).map_err(|e| CliError::Domain(e.to_string()))?;
        return Ok(Output::ok(envelope("constants", json!({ "report": body }))));
    }
    let mut s = String::new();
    writeln!(s, "big threshold: {}", r.big).unwrap();
    writeln!(s, "rc3 maximum: {} at ns = {}, s = {}", r.rc3.value, r.rc3.ns, r.rc3.s).unwrap();
    writeln!(s, "rc3 maximum (expanded form): {}", r.rc3_expanded.value).unwrap();
    writeln!(s, "rc3 maximum within big threshold: {}", r.rc3_within_big).unwrap();
    writeln!(
        s,
        "rc4 maximum: {} ({:.3e}) at ns = {}, s = {}",
        r.rc4.exact.value, r.rc4.exact.value as f64, r.rc4.exact.ns, r.rc4.exact.s
    )
    .unwrap();
    writeln!(s, "rc4 refined: {:.6e}, relative gap {:.2e}", r.rc4.refined_value, r.rc4.relative_gap).unwrap();
    writeln!(s, "rc4 within delta floor {}: {}", r.delta_floor, r.rc4_within_delta_floor).unwrap();
    for c in &r.corollary {
        writeln!(s, "root margin {} vs {}: {}", c.target, c.sum, c.holds).unwrap();
    }
    writeln!(s, "lemma2 quadratic holds for 81..=1000000: {}", r.lemma2_holds_81_to_1e6).unwrap();
    writeln!(s, "lemma2 quadratic fails at 80: {}", r.lemma2_fails_at_80).unwrap();
    writeln!(s, "average-length implication: {}", r.implication_chain_ok).unwrap();
    Ok(Output::ok(s))
}

pub fn generate(kind: Kind, t: Option<usize>, n: Option<usize>, seed: Option<u64>) -> Run {
    let need = |x: Option<u64>, flag: &str| x.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this kind")));
    let g = match kind {
        Kind::TruncDodec => generators::truncated_dodecahedron(),
        Kind::Borodin => {
            let t = need(t.map(|x| x as u64), "t")? as usize;
            generators::borodin_construction(t).map_err(|e| CliError::Usage(e.to_string()))?
        }
        Kind::Bunch => {
            let t = need(t.map(|x| x as u64), "t")? as usize;
            let seed = need(seed, "seed")?;
            if t == 0 {
                return Err(CliError::Usage("--t must be positive".into()));
            }
            generators::bunch_gadget(&GadgetSpec::random(t, seed, 1, 1))
                .map_err(|e| CliError::Usage(e.to_string()))?
                .0
        }
        Kind::Random => {
            let n = need(n.map(|x| x as u64), "n")? as usize;
            let seed = need(seed, "seed")?;
            if n < 4 {
                return Err(CliError::Usage("--n must be at least 4".into()));
            }
            generators::random_planar(n, seed)
        }
    };
    Ok(Output::ok(g.to_text()))
}
