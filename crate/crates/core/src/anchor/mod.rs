//! Anchored k-cores: follower computation on a working K-order, candidate
//! pruning and the per-snapshot and incremental solvers.

mod solve;

use std::collections::{BTreeMap, VecDeque};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Snapshot, Vertex};
use crate::maintain::sweep::{probe_level, raise, refresh_mcd, RaiseOutcome, Scratch};
use crate::maintain::MaintainError;
use crate::peel::{KOrderState, ANCHORED};

pub use solve::{carry, greedy_avt, greedy_snapshot, inc_avt, solve_series, Algo};

#[derive(Debug, Error)]
pub enum AnchorError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("vertex {0} is already anchored")]
    AlreadyAnchored(Vertex),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error(transparent)]
    Maintain(#[from] MaintainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AVTConfig {
    k: u32,
    l: usize,
    parallel: bool,
}

impl AVTConfig {
    pub fn new(k: u32, l: usize) -> Result<Self, AnchorError> {
        if k < 1 {
            return Err(AnchorError::Config(format!("k must be at least 1, got {k}")));
        }
        if l < 1 {
            return Err(AnchorError::Config(format!("l must be at least 1, got {l}")));
        }
        Ok(AVTConfig {
            k,
            l,
            parallel: false,
        })
    }

    /// Probe candidates on worker threads. Results are identical to the
    /// sequential mode.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn parallel(&self) -> bool {
        self.parallel
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSolution {
    /// 1-based snapshot index.
    pub t: usize,
    /// Ascending.
    pub anchors: Vec<Vertex>,
    /// Ascending.
    pub followers: Vec<Vertex>,
    pub anchored_core_size: usize,
    pub candidates_probed: u64,
    pub elapsed: Duration,
}

/// One snapshot's entry in the JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub t: usize,
    pub anchors: Vec<Vertex>,
    pub followers: usize,
    pub anchored_core_size: usize,
    pub candidates_probed: u64,
    pub elapsed_ms: f64,
}

impl AnchorSolution {
    pub fn record(&self) -> SolutionRecord {
        SolutionRecord {
            t: self.t,
            anchors: self.anchors.clone(),
            followers: self.followers.len(),
            anchored_core_size: self.anchored_core_size,
            candidates_probed: self.candidates_probed,
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        }
    }
}

/// k-core of `s` with `anchors` exempt from the degree constraint, ascending.
pub fn anchored_kcore(s: &Snapshot, anchors: &[Vertex], k: u32) -> Vec<Vertex> {
    let n = s.n();
    let mut exempt = vec![false; n];
    for &a in anchors {
        exempt[a as usize] = true;
    }
    let mut deg: Vec<usize> = s.degrees();
    let mut gone = vec![false; n];
    let mut queue: VecDeque<Vertex> = s
        .vertices()
        .filter(|&v| !exempt[v as usize] && deg[v as usize] < k as usize)
        .collect();
    for &v in &queue {
        gone[v as usize] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in s.neighbors(v) {
            let wi = w as usize;
            if gone[wi] {
                continue;
            }
            deg[wi] -= 1;
            if !exempt[wi] && deg[wi] < k as usize {
                gone[wi] = true;
                queue.push_back(w);
            }
        }
    }
    s.vertices().filter(|&v| !gone[v as usize]).collect()
}

/// Whether anchoring `x` can produce followers: `x` has core in `1..k` and a
/// core-`(k-1)` neighbor after it in the K-order.
pub fn is_candidate(s: &Snapshot, st: &KOrderState, x: Vertex, k: u32) -> bool {
    let c = st.core(x);
    if c == 0 || c >= k {
        return false;
    }
    s.neighbors(x)
        .iter()
        .any(|&y| st.core(y) == k - 1 && st.before(x, y))
}

pub fn candidate_anchors(s: &Snapshot, st: &KOrderState, k: u32) -> Vec<Vertex> {
    s.vertices().filter(|&x| is_candidate(s, st, x, k)).collect()
}

/// A K-order of `s` with a set of committed anchors folded in. Anchors get
/// an unbounded core and sit after every shell; every other vertex carries
/// its core number in the anchored graph.
#[derive(Debug, Clone)]
pub struct AnchoredOrder<'a> {
    s: &'a Snapshot,
    base: &'a KOrderState,
    st: KOrderState,
    anchors: Vec<Vertex>,
    k: u32,
    sc: Scratch,
}

impl<'a> AnchoredOrder<'a> {
    pub fn new(s: &'a Snapshot, base: &'a KOrderState, k: u32) -> Self {
        assert_eq!(s.n(), base.n(), "state and snapshot sizes differ");
        AnchoredOrder {
            s,
            base,
            st: base.clone(),
            anchors: Vec::new(),
            k,
            sc: Scratch::new(s.n()),
        }
    }

    /// Folds each of `anchors` in turn.
    pub fn with_anchors(s: &'a Snapshot, base: &'a KOrderState, k: u32, anchors: &[Vertex]) -> Self {
        let mut w = AnchoredOrder::new(s, base, k);
        for &a in anchors {
            w.commit(a);
        }
        w
    }

    pub fn state(&self) -> &KOrderState {
        &self.st
    }

    /// Committed anchors in commit order.
    pub fn anchors(&self) -> &[Vertex] {
        &self.anchors
    }

    pub fn is_anchor(&self, v: Vertex) -> bool {
        self.st.core(v) == ANCHORED
    }

    /// Core of `v` in the anchored graph, `u32::MAX` for anchors.
    pub fn core(&self, v: Vertex) -> u32 {
        self.st.core(v)
    }

    /// Anchors `u` permanently. Re-anchoring is a no-op.
    pub fn commit(&mut self, u: Vertex) {
        if self.is_anchor(u) {
            return;
        }
        let (s, st) = (self.s, &mut self.st);
        let mut triggers: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
        for &w in s.neighbors(u) {
            if st.core(w) != ANCHORED && st.before(u, w) {
                st.deg_plus[w as usize] += 1;
                triggers.entry(st.core(w)).or_default().push(w);
            }
        }
        if st.core(u) > 0 {
            st.order.remove(u);
        }
        st.core[u as usize] = ANCHORED;
        st.deg_plus[u as usize] = 0;
        self.anchors.push(u);
        let mut out = RaiseOutcome::default();
        raise(st, s, triggers, &mut self.sc, &mut out);
        refresh_mcd(st, s, s.neighbors(u), self.sc.mark());
    }

    /// Followers gained by additionally anchoring `v`, ascending. Leaves the
    /// working state untouched.
    pub fn probe(&mut self, v: Vertex) -> Vec<Vertex> {
        let lvl = self.k - 1;
        if lvl == 0 || self.st.core(v) > lvl {
            return Vec::new();
        }
        probe_level(&mut self.st, self.s, lvl, v, &mut self.sc)
    }

    /// Non-anchors inside the anchored k-core but outside the plain one.
    pub fn followers(&self) -> Vec<Vertex> {
        self.s
            .vertices()
            .filter(|&v| {
                let c = self.st.core(v);
                c != ANCHORED && c >= self.k && self.base.core(v) < self.k
            })
            .collect()
    }

    pub fn follower_count(&self) -> usize {
        self.followers().len()
    }

    /// `|kcore| + |anchors outside kcore| + |followers|`.
    pub fn anchored_core_size(&self) -> usize {
        self.s
            .vertices()
            .filter(|&v| self.st.core(v) >= self.k)
            .count()
    }
}

/// Marginal followers of `u` given `committed`, ascending.
pub fn compute_followers(
    s: &Snapshot,
    st: &KOrderState,
    committed: &[Vertex],
    u: Vertex,
    k: u32,
) -> Result<Vec<Vertex>, AnchorError> {
    if u as usize >= s.n() {
        return Err(AnchorError::OutOfRange { vertex: u, n: s.n() });
    }
    if committed.contains(&u) {
        return Err(AnchorError::AlreadyAnchored(u));
    }
    let mut w = AnchoredOrder::with_anchors(s, st, k, committed);
    Ok(w.probe(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peel::decompose;

    fn five() -> Snapshot {
        Snapshot::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]).unwrap()
    }

    fn six() -> Snapshot {
        Snapshot::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(AVTConfig::new(0, 1).is_err());
        assert!(AVTConfig::new(1, 0).is_err());
        let c = AVTConfig::new(3, 2).unwrap();
        assert_eq!((c.k(), c.l(), c.parallel()), (3, 2, false));
    }

    #[test]
    fn anchored_kcore_examples() {
        let g = five();
        assert_eq!(anchored_kcore(&g, &[], 2), vec![0, 1, 2]);
        assert_eq!(anchored_kcore(&g, &[4], 2), vec![0, 1, 2, 3, 4]);
        assert_eq!(anchored_kcore(&g, &[0], 2), vec![0, 1, 2]);
    }

    #[test]
    fn candidates_examples() {
        let tri = Snapshot::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(candidate_anchors(&tri, &decompose(&tri), 2).is_empty());
        let g = six();
        assert_eq!(candidate_anchors(&g, &decompose(&g), 2), vec![4, 5]);
    }

    #[test]
    fn followers_examples() {
        let g = six();
        let st = decompose(&g);
        assert_eq!(compute_followers(&g, &st, &[], 5, 2).unwrap(), vec![3, 4]);
        assert_eq!(compute_followers(&g, &st, &[], 4, 2).unwrap(), vec![3]);
        assert!(compute_followers(&g, &st, &[], 3, 2).unwrap().is_empty());
        assert!(compute_followers(&g, &st, &[], 0, 2).unwrap().is_empty());
        assert!(compute_followers(&g, &st, &[5], 4, 2).unwrap().is_empty());
        assert!(matches!(
            compute_followers(&g, &st, &[5], 5, 2),
            Err(AnchorError::AlreadyAnchored(5))
        ));
    }

    #[test]
    fn probe_restores_state() {
        let g = six();
        let st = decompose(&g);
        let mut w = AnchoredOrder::new(&g, &st, 2);
        let before = w.state().clone();
        for v in g.vertices() {
            w.probe(v);
            assert_eq!(w.state(), &before);
        }
    }

    #[test]
    fn commit_tracks_followers() {
        let g = six();
        let st = decompose(&g);
        let mut w = AnchoredOrder::new(&g, &st, 2);
        w.commit(5);
        assert_eq!(w.followers(), vec![3, 4]);
        assert_eq!(w.anchored_core_size(), 6);
        assert_eq!(w.anchors(), &[5]);
        w.commit(5);
        assert_eq!(w.anchors(), &[5]);
    }
}
