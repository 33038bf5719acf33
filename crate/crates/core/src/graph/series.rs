//! Synthetic snapshot series: a uniform random base graph, then per step a
//! random removal of present edges followed by insertion of absent ones.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, EdgeDelta, EvolvingGraph, GraphError, Snapshot, Vertex};

/// Per-step churn. When `add` is `None` each step inserts exactly as many
/// edges as it removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Churn {
    pub remove: RangeInclusive<usize>,
    pub add: Option<RangeInclusive<usize>>,
}

impl Churn {
    pub fn equal(range: RangeInclusive<usize>) -> Self {
        Churn {
            remove: range,
            add: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesParams {
    pub n: usize,
    pub m0: usize,
    /// Number of snapshots `T` (so `T - 1` deltas).
    pub snapshots: usize,
    pub churn: Churn,
    pub seed: u64,
}

fn max_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn infeasible(msg: String) -> GraphError {
    GraphError::InfeasibleChurn(msg)
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> Edge {
    loop {
        let u = rng.gen_range(0..n) as Vertex;
        let v = rng.gen_range(0..n) as Vertex;
        if u != v {
            return Edge::new(u, v);
        }
    }
}

/// Draws `count` distinct pairs absent from `present` and `exclude`.
fn sample_absent(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    present: &HashSet<Edge>,
    exclude: &HashSet<Edge>,
) -> Vec<Edge> {
    let blocked = present.len() + exclude.len();
    let free = max_pairs(n) - blocked;
    debug_assert!(free >= count);
    let mut out = Vec::with_capacity(count);
    if free >= 4 * count.max(1) || free * 2 >= max_pairs(n) {
        let mut chosen = HashSet::with_capacity(count);
        while out.len() < count {
            let e = random_pair(rng, n);
            if !present.contains(&e) && !exclude.contains(&e) && chosen.insert(e) {
                out.push(e);
            }
        }
    } else {
        let mut pool: Vec<Edge> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| Edge::new(u, v)))
            .filter(|e| !present.contains(e) && !exclude.contains(e))
            .collect();
        let (picked, _) = pool.partial_shuffle(rng, count);
        out.extend_from_slice(picked);
    }
    out
}

/// Generates a deterministic series for `params`.
pub fn generate_series(params: &SeriesParams) -> Result<EvolvingGraph, GraphError> {
    let SeriesParams {
        n,
        m0,
        snapshots,
        ref churn,
        seed,
    } = *params;
    if snapshots == 0 {
        return Err(infeasible("at least one snapshot is required".into()));
    }
    if m0 > max_pairs(n) {
        return Err(infeasible(format!(
            "m0={m0} exceeds the {} possible edges on {n} vertices",
            max_pairs(n)
        )));
    }
    if snapshots > 1 {
        if churn.remove.is_empty() || churn.add.as_ref().is_some_and(|r| r.is_empty()) {
            return Err(infeasible("empty churn range".into()));
        }
        if *churn.remove.end() > m0 {
            return Err(infeasible(format!(
                "churn max {} exceeds m0={m0}",
                churn.remove.end()
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let none = HashSet::new();
    let mut edges = sample_absent(&mut rng, n, m0, &none, &none);
    edges.sort_unstable();
    let mut present: HashSet<Edge> = edges.iter().copied().collect();
    let base = Snapshot::from_edges(n, edges.iter().copied())?;

    let mut deltas = Vec::with_capacity(snapshots - 1);
    for step in 1..snapshots {
        let n_del = rng.gen_range(churn.remove.clone());
        let n_add = match &churn.add {
            Some(r) => rng.gen_range(r.clone()),
            None => n_del,
        };
        if n_del > edges.len() {
            return Err(infeasible(format!(
                "step {step}: cannot remove {n_del} of {} edges",
                edges.len()
            )));
        }
        let mut deletes = Vec::with_capacity(n_del);
        for _ in 0..n_del {
            let i = rng.gen_range(0..edges.len());
            let e = edges.swap_remove(i);
            present.remove(&e);
            deletes.push(e);
        }
        let removed: HashSet<Edge> = deletes.iter().copied().collect();
        let free = max_pairs(n) - present.len() - removed.len();
        if n_add > free {
            return Err(infeasible(format!(
                "step {step}: only {free} absent pairs available to insert {n_add} edges"
            )));
        }
        let mut inserts = sample_absent(&mut rng, n, n_add, &present, &removed);
        for &e in &inserts {
            present.insert(e);
            edges.push(e);
        }
        inserts.sort_unstable();
        deletes.sort_unstable();
        deltas.push(EdgeDelta { inserts, deletes });
    }
    EvolvingGraph::new(base, deltas)
}
