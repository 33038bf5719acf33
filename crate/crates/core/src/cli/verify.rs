//! Randomized equivalence checks of the fast paths against the oracles.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anchor::compute_followers;
use crate::graph::{write_delta, write_snapshot, Edge, EdgeDelta, Snapshot, Vertex};
use crate::maintain::{edge_insert, edge_remove};
use crate::oracle::{oracle_core_numbers, oracle_followers};
use crate::peel::decompose;

/// Implementations under test. `default()` wires in the library's own.
#[derive(Clone, Copy)]
pub struct FastPaths {
    pub cores: fn(&Snapshot) -> Vec<u32>,
    /// Core numbers after applying `delta` to `s` incrementally.
    pub maintained_cores: fn(&Snapshot, &EdgeDelta) -> Vec<u32>,
    /// Followers of the single anchor `u` at threshold `k`.
    pub followers: fn(&Snapshot, Vertex, u32) -> Vec<Vertex>,
}

fn fast_cores(s: &Snapshot) -> Vec<u32> {
    decompose(s).cores().to_vec()
}

fn fast_maintained(s: &Snapshot, d: &EdgeDelta) -> Vec<u32> {
    let mut st = decompose(s);
    let plus = s.with_inserted(&d.inserts).expect("valid delta");
    edge_insert(&mut st, &plus, &d.inserts, 2).expect("valid insert batch");
    let next = plus.with_removed(&d.deletes).expect("valid delta");
    edge_remove(&mut st, &next, &d.deletes, 2).expect("valid delete batch");
    st.cores().to_vec()
}

fn fast_followers(s: &Snapshot, u: Vertex, k: u32) -> Vec<Vertex> {
    compute_followers(s, &decompose(s), &[], u, k).expect("u is not committed")
}

impl Default for FastPaths {
    fn default() -> Self {
        FastPaths {
            cores: fast_cores,
            maintained_cores: fast_maintained,
            followers: fast_followers,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_n: usize,
}

/// A failing case after minimization.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub suite: &'static str,
    pub graph: Snapshot,
    pub operation: String,
    pub expected: String,
    pub got: String,
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Snapshot {
    let n = rng.gen_range(2..=max_n.max(2));
    let p: f64 = rng.gen_range(0.02..0.4);
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Snapshot::from_edges(n, edges).expect("generated edges are simple")
}

fn random_delta(rng: &mut ChaCha8Rng, s: &Snapshot) -> EdgeDelta {
    let present: Vec<Edge> = s.edges().collect();
    let mut deletes: Vec<Edge> = present.iter().copied().filter(|_| rng.gen_bool(0.2)).collect();
    deletes.truncate(20);
    let n = s.n() as Vertex;
    let mut inserts = Vec::new();
    for _ in 0..rng.gen_range(0..=20) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let e = Edge::new(u, v);
        if u != v && !s.has_edge(u, v) && !inserts.contains(&e) {
            inserts.push(e);
        }
    }
    EdgeDelta { inserts, deletes }
}

/// Greedily drops edges from `s` while `fails` keeps returning true. Edges in
/// `keep` are never dropped.
fn minimize(s: &Snapshot, keep: &[Edge], fails: impl Fn(&Snapshot) -> bool) -> Snapshot {
    let mut cur = s.clone();
    let mut i = 0;
    loop {
        let edges: Vec<Edge> = cur.edges().collect();
        if i >= edges.len() {
            return cur;
        }
        if keep.contains(&edges[i]) {
            i += 1;
            continue;
        }
        let smaller = cur.with_removed(&edges[i..=i]).expect("edge is present");
        if fails(&smaller) {
            cur = smaller;
        } else {
            i += 1;
        }
    }
}

fn check_cores(fast: &FastPaths, rng: &mut ChaCha8Rng, max_n: usize) -> Option<Counterexample> {
    let s = random_graph(rng, max_n);
    let fails = |g: &Snapshot| (fast.cores)(g) != oracle_core_numbers(g);
    if !fails(&s) {
        return None;
    }
    let g = minimize(&s, &[], fails);
    Some(Counterexample {
        suite: "decompose",
        operation: "decompose".into(),
        expected: format!("{:?}", oracle_core_numbers(&g)),
        got: format!("{:?}", (fast.cores)(&g)),
        graph: g,
    })
}

fn check_maintenance(fast: &FastPaths, rng: &mut ChaCha8Rng, max_n: usize) -> Option<Counterexample> {
    let s = random_graph(rng, max_n);
    let d = random_delta(rng, &s);
    let expect = |g: &Snapshot| oracle_core_numbers(&g.apply_delta(&d).expect("valid delta"));
    let fails = |g: &Snapshot| (fast.maintained_cores)(g, &d) != expect(g);
    if !fails(&s) {
        return None;
    }
    let g = minimize(&s, &d.deletes, fails);
    Some(Counterexample {
        suite: "maintenance",
        operation: format!("apply delta\n{}", write_delta(&d)),
        expected: format!("{:?}", expect(&g)),
        got: format!("{:?}", (fast.maintained_cores)(&g, &d)),
        graph: g,
    })
}

fn check_followers(fast: &FastPaths, rng: &mut ChaCha8Rng, max_n: usize) -> Option<Counterexample> {
    let s = random_graph(rng, max_n);
    let k = rng.gen_range(2..=4);
    for u in s.vertices() {
        let fails = |g: &Snapshot| (fast.followers)(g, u, k) != oracle_followers(g, &[u], k);
        if fails(&s) {
            let g = minimize(&s, &[], fails);
            return Some(Counterexample {
                suite: "followers",
                operation: format!("followers of anchor {u} with k={k}"),
                expected: format!("{:?}", oracle_followers(&g, &[u], k)),
                got: format!("{:?}", (fast.followers)(&g, u, k)),
                graph: g,
            });
        }
    }
    None
}

/// Runs every suite for `cfg.cases` cases each. Returns the first
/// counterexample, minimized.
pub fn verify_with(cfg: &VerifyConfig, fast: &FastPaths, log: &mut dyn Write) -> io::Result<Option<Counterexample>> {
    type Check = fn(&FastPaths, &mut ChaCha8Rng, usize) -> Option<Counterexample>;
    let suites: [(&str, Check); 3] = [
        ("decompose", check_cores),
        ("maintenance", check_maintenance),
        ("followers", check_followers),
    ];
    for (i, (name, check)) in suites.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        for case in 0..cfg.cases {
            if let Some(cx) = check(fast, &mut rng, cfg.max_n) {
                writeln!(log, "{name}: FAIL at case {case}")?;
                return Ok(Some(cx));
            }
        }
        writeln!(log, "{name}: ok ({} cases)", cfg.cases)?;
    }
    Ok(None)
}

pub fn report(cx: &Counterexample, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "counterexample ({}):", cx.suite)?;
    write!(out, "{}", write_snapshot(&cx.graph))?;
    writeln!(out, "operation: {}", cx.operation.trim_end())?;
    writeln!(out, "expected: {}", cx.expected)?;
    writeln!(out, "got: {}", cx.got)
}
