use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{candidate_anchors, is_candidate, AVTConfig, AnchorError, AnchorSolution, AnchoredOrder};
use crate::graph::{EvolvingGraph, Snapshot, Vertex};
use crate::maintain::{edge_insert, edge_remove};
use crate::peel::{decompose, KOrderState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    /// Greedy from scratch on every snapshot.
    Greedy,
    /// Incremental maintenance with local anchor swaps.
    Inc,
    /// First snapshot's greedy anchors reused unchanged.
    Carry,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Greedy => "greedy",
            Algo::Inc => "inc",
            Algo::Carry => "carry",
        })
    }
}

/// Larger gain wins, then the smaller id.
fn better(a: (usize, Vertex), b: (usize, Vertex)) -> (usize, Vertex) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

/// Best marginal gain over `pool` as `(gain, vertex)`.
fn best_probe(w: &mut AnchoredOrder<'_>, pool: &[Vertex], parallel: bool) -> Option<(usize, Vertex)> {
    if parallel && pool.len() > 1 {
        let base = w.clone();
        pool.par_iter()
            .map_init(|| base.clone(), |wk, &v| (wk.probe(v).len(), v))
            .reduce_with(better)
    } else {
        pool.iter().map(|&v| (w.probe(v).len(), v)).reduce(better)
    }
}

fn finish(t: usize, w: &AnchoredOrder<'_>, probed: u64, start: Instant) -> AnchorSolution {
    let mut anchors = w.anchors().to_vec();
    anchors.sort_unstable();
    AnchorSolution {
        t,
        anchors,
        followers: w.followers(),
        anchored_core_size: w.anchored_core_size(),
        candidates_probed: probed,
        elapsed: start.elapsed(),
    }
}

/// Up to `l` rounds, each committing the candidate with the largest positive
/// marginal follower gain.
fn greedy_rounds<'a>(
    s: &'a Snapshot,
    st: &'a KOrderState,
    cfg: &AVTConfig,
) -> (AnchoredOrder<'a>, u64) {
    let k = cfg.k();
    let mut w = AnchoredOrder::new(s, st, k);
    let mut probed = 0u64;
    for _ in 0..cfg.l() {
        let cands = candidate_anchors(s, w.state(), k);
        probed += cands.len() as u64;
        match best_probe(&mut w, &cands, cfg.parallel()) {
            Some((gain, v)) if gain > 0 => w.commit(v),
            _ => break,
        }
    }
    (w, probed)
}

pub fn greedy_snapshot(s: &Snapshot, st: &KOrderState, cfg: &AVTConfig) -> AnchorSolution {
    let start = Instant::now();
    let (w, probed) = greedy_rounds(s, st, cfg);
    finish(1, &w, probed, start)
}

/// Greedy on every snapshot with a fresh decomposition each time.
pub fn greedy_avt(g: &EvolvingGraph, cfg: &AVTConfig) -> Vec<AnchorSolution> {
    g.snapshots()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let start = Instant::now();
            let st = decompose(s);
            let (w, probed) = greedy_rounds(s, &st, cfg);
            finish(i + 1, &w, probed, start)
        })
        .collect()
}

/// Greedy on the first snapshot, then the same anchors on every later one,
/// dropping any that have entered the k-core.
pub fn carry(g: &EvolvingGraph, cfg: &AVTConfig) -> Vec<AnchorSolution> {
    let k = cfg.k();
    let snaps = g.snapshots();
    let mut out = Vec::with_capacity(snaps.len());
    let mut anchors: Vec<Vertex> = Vec::new();
    for (i, s) in snaps.iter().enumerate() {
        let start = Instant::now();
        let st = decompose(s);
        if i == 0 {
            let (w, probed) = greedy_rounds(s, &st, cfg);
            anchors = w.anchors().to_vec();
            out.push(finish(1, &w, probed, start));
            continue;
        }
        anchors.retain(|&a| st.core(a) < k);
        let w = AnchoredOrder::with_anchors(s, &st, k, &anchors);
        out.push(finish(i + 1, &w, 0, start));
    }
    out
}

/// Vertices near the impacted sets that satisfy the candidate condition in
/// the maintained order, ascending.
fn probe_pool(s: &Snapshot, st: &KOrderState, impacted: &[Vertex], k: u32) -> Vec<Vertex> {
    let mut mark = vec![false; s.n()];
    for &v in impacted {
        mark[v as usize] = true;
        for &w in s.neighbors(v) {
            mark[w as usize] = true;
        }
    }
    s.vertices()
        .filter(|&v| mark[v as usize] && st.core(v) < k && is_candidate(s, st, v, k))
        .collect()
}

/// Per-slot swap pass over the carried anchors. Slot `i` is probed against a
/// state holding every other anchor; those leave-one-out states are built by
/// halving the slot range so each anchor is folded O(log l) times.
struct SwapPass<'p> {
    pool: &'p [Vertex],
    parallel: bool,
    /// Follower count of the current anchor set, once known.
    current: Option<usize>,
    probed: u64,
}

impl SwapPass<'_> {
    /// `w` holds every anchor outside `lo..hi`. Slots are visited left to
    /// right, so later states see earlier swaps. With `need`, returns `w`
    /// with the slots of `lo..hi` folded in too.
    fn run<'a>(
        &mut self,
        mut w: AnchoredOrder<'a>,
        anchors: &mut [Vertex],
        lo: usize,
        hi: usize,
        need: bool,
    ) -> Option<AnchoredOrder<'a>> {
        if hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let mut left = w.clone();
            for &a in &anchors[mid..hi] {
                left.commit(a);
            }
            self.run(left, anchors, lo, mid, false);
            for &a in &anchors[lo..mid] {
                w.commit(a);
            }
            return self.run(w, anchors, mid, hi, need);
        }
        let without = w.follower_count();
        let current = *self.current.get_or_insert_with(|| {
            let mut full = w.clone();
            full.commit(anchors[lo]);
            full.follower_count()
        });
        // anchors and vertices already following cannot beat `current`
        let eligible: Vec<Vertex> = self
            .pool
            .iter()
            .copied()
            .filter(|&v| !anchors.contains(&v) && w.core(v) < w.k)
            .collect();
        self.probed += eligible.len() as u64;
        if let Some((gain, v)) = best_probe(&mut w, &eligible, self.parallel) {
            if without + gain > current {
                anchors[lo] = v;
                self.current = Some(without + gain);
            }
        }
        need.then(|| {
            w.commit(anchors[lo]);
            w
        })
    }
}

/// Incremental solver. The K-order is maintained across snapshots; each
/// carried anchor may be swapped for a probed vertex near the impacted sets
/// when the swap strictly increases the follower count, and free slots are
/// filled from the same pool.
pub fn inc_avt(g: &EvolvingGraph, cfg: &AVTConfig) -> Result<Vec<AnchorSolution>, AnchorError> {
    let k = cfg.k();
    let snaps = g.snapshots();
    let mut out = Vec::with_capacity(snaps.len());

    let start = Instant::now();
    let mut st = decompose(&snaps[0]);
    let (w, probed) = greedy_rounds(&snaps[0], &st, cfg);
    let mut anchors = w.anchors().to_vec();
    out.push(finish(1, &w, probed, start));
    drop(w);

    for (i, d) in g.deltas().iter().enumerate() {
        let s = &snaps[i + 1];
        let plus = snaps[i].with_inserted(&d.inserts)?;
        let start = Instant::now();
        let rep_i = edge_insert(&mut st, &plus, &d.inserts, k)?;
        let rep_r = edge_remove(&mut st, s, &d.deletes, k)?;
        anchors.retain(|&a| st.core(a) < k);

        let mut impacted = rep_i.v_i;
        impacted.extend(rep_r.v_r);
        let pool = probe_pool(s, &st, &impacted, k);
        let mut probed = 0u64;
        let mut w = if pool.is_empty() || anchors.is_empty() {
            AnchoredOrder::with_anchors(s, &st, k, &anchors)
        } else {
            let mut pass = SwapPass {
                pool: &pool,
                parallel: cfg.parallel(),
                current: None,
                probed: 0,
            };
            let len = anchors.len();
            let w = pass.run(AnchoredOrder::new(s, &st, k), &mut anchors, 0, len, true);
            probed = pass.probed;
            w.expect("the last range returns its state")
        };

        while anchors.len() < cfg.l() && !pool.is_empty() {
            let eligible: Vec<Vertex> = pool.iter().copied().filter(|&v| w.core(v) < k).collect();
            probed += eligible.len() as u64;
            match best_probe(&mut w, &eligible, cfg.parallel()) {
                Some((gain, v)) if gain > 0 => {
                    w.commit(v);
                    anchors.push(v);
                }
                _ => break,
            }
        }
        out.push(finish(i + 2, &w, probed, start));
    }
    Ok(out)
}

pub fn solve_series(
    g: &EvolvingGraph,
    cfg: &AVTConfig,
    algo: Algo,
) -> Result<Vec<AnchorSolution>, AnchorError> {
    match algo {
        Algo::Greedy => Ok(greedy_avt(g, cfg)),
        Algo::Inc => inc_avt(g, cfg),
        Algo::Carry => Ok(carry(g, cfg)),
    }
}
