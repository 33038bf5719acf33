//! Core decomposition and the K-order.
//!
//! Decomposition peels level by level: at level `k` every remaining vertex
//! with fewer than `k` remaining neighbors is eligible, and the smallest
//! eligible id is removed first. The removal sequence, split by core number,
//! is the K-order: shell `O_k` lists the core-`k` vertices in removal order.
//! Isolated (core-0) vertices belong to no shell.

mod order;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Snapshot, Vertex};
pub use order::ShellOrder;

/// Core value used for anchored vertices in working states: after every
/// shell and never peeled.
pub(crate) const ANCHORED: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("vertex {0} has core number 0 and is not in the K-order")]
    CoreZero(Vertex),
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
}

/// Core numbers plus the K-order and the per-vertex degree statistics the
/// maintenance and follower routines rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KOrderState {
    pub(crate) core: Vec<u32>,
    /// Neighbors positioned after the vertex in the K-order.
    pub(crate) deg_plus: Vec<u32>,
    /// Scratch counter for shell sweeps; zero whenever no sweep is running.
    pub(crate) deg_minus: Vec<u32>,
    /// Neighbors whose core is at least the vertex's core.
    pub(crate) mcd: Vec<u32>,
    pub(crate) order: ShellOrder,
}

impl KOrderState {
    pub fn n(&self) -> usize {
        self.core.len()
    }

    pub fn core(&self, u: Vertex) -> u32 {
        self.core[u as usize]
    }

    pub fn cores(&self) -> &[u32] {
        &self.core
    }

    pub fn deg_plus(&self, u: Vertex) -> u32 {
        self.deg_plus[u as usize]
    }

    pub fn deg_minus(&self, u: Vertex) -> u32 {
        self.deg_minus[u as usize]
    }

    pub fn mcd(&self, u: Vertex) -> u32 {
        self.mcd[u as usize]
    }

    pub fn max_core(&self) -> u32 {
        self.order.max_shell()
    }

    /// Vertices of shell `O_k` in order.
    pub fn shell(&self, k: u32) -> Vec<Vertex> {
        if k == 0 {
            return Vec::new();
        }
        self.order.iter(k).collect()
    }

    pub fn shells(&self) -> Vec<Vec<Vertex>> {
        (1..=self.max_core()).map(|k| self.shell(k)).collect()
    }

    /// Strict K-order comparison. Both vertices must have core at least 1.
    pub fn precedes(&self, u: Vertex, v: Vertex) -> Result<bool, OrderError> {
        for x in [u, v] {
            if x as usize >= self.n() {
                return Err(OrderError::OutOfRange(x));
            }
            if self.core[x as usize] == 0 {
                return Err(OrderError::CoreZero(x));
            }
        }
        Ok(self.before(u, v))
    }

    /// Unchecked total order used internally: core-0 vertices first (by id),
    /// then shells in order, then anchored vertices (by id).
    #[inline]
    pub(crate) fn before(&self, u: Vertex, v: Vertex) -> bool {
        let (cu, cv) = (self.core[u as usize], self.core[v as usize]);
        if cu != cv {
            return cu < cv;
        }
        if cu == 0 || cu == ANCHORED {
            return u < v;
        }
        self.order.before(u, v)
    }

    /// `{u : core(u) >= k}` in ascending id order.
    pub fn kcore(&self, k: u32) -> Vec<Vertex> {
        (0..self.n() as Vertex).filter(|&u| self.core[u as usize] >= k).collect()
    }

    /// One line per shell, `O<k>: v1 v2 ...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for k in 1..=self.max_core() {
            let _ = write!(out, "O{k}:");
            for v in self.order.iter(k) {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub(crate) fn count_mcd(&self, s: &Snapshot, u: Vertex) -> u32 {
        let c = self.core[u as usize];
        s.neighbors(u)
            .iter()
            .filter(|&&v| self.core[v as usize] >= c)
            .count() as u32
    }

    pub(crate) fn count_deg_plus(&self, s: &Snapshot, u: Vertex) -> u32 {
        s.neighbors(u).iter().filter(|&&v| self.before(u, v)).count() as u32
    }
}

/// Bucket-queue peeling with a smallest-id heap for the eligible set.
pub fn decompose(s: &Snapshot) -> KOrderState {
    let n = s.n();
    let mut deg: Vec<u32> = s.degrees().into_iter().map(|d| d as u32).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); max_deg + 1];
    for (v, &d) in deg.iter().enumerate() {
        buckets[d as usize].push(v as Vertex);
    }
    let mut removed = vec![false; n];
    let mut queued = vec![false; n];
    let mut core = vec![0u32; n];
    let mut deg_plus = vec![0u32; n];
    let mut order = ShellOrder::new(n);
    let mut heap: BinaryHeap<Reverse<Vertex>> = BinaryHeap::new();
    let mut remaining = n;
    let mut level: u32 = 1;
    while remaining > 0 {
        // at the start of level k every remaining vertex has degree >= k - 1
        let floor = (level - 1) as usize;
        if floor < buckets.len() {
            for v in std::mem::take(&mut buckets[floor]) {
                let vi = v as usize;
                if !removed[vi] && !queued[vi] && deg[vi] as usize == floor {
                    queued[vi] = true;
                    heap.push(Reverse(v));
                }
            }
        }
        while let Some(Reverse(v)) = heap.pop() {
            let vi = v as usize;
            removed[vi] = true;
            remaining -= 1;
            core[vi] = level - 1;
            deg_plus[vi] = deg[vi];
            if level > 1 {
                order.push_back(level - 1, v);
            }
            for &w in s.neighbors(v) {
                let wi = w as usize;
                if removed[wi] {
                    continue;
                }
                deg[wi] -= 1;
                if deg[wi] < level {
                    if !queued[wi] {
                        queued[wi] = true;
                        heap.push(Reverse(w));
                    }
                } else {
                    buckets[deg[wi] as usize].push(w);
                }
            }
        }
        level += 1;
    }
    let mut st = KOrderState {
        core,
        deg_plus,
        deg_minus: vec![0; n],
        mcd: vec![0; n],
        order,
    };
    for u in 0..n as Vertex {
        st.mcd[u as usize] = st.count_mcd(s, u);
    }
    st
}

/// Vertex set of the `k`-core, ascending.
pub fn kcore(s: &Snapshot, k: u32) -> Vec<Vertex> {
    decompose(s).kcore(k)
}

/// `|{v in nbr(u) : core(v) >= core(u)}|` counted from scratch.
pub fn recompute_mcd(s: &Snapshot, st: &KOrderState, u: Vertex) -> u32 {
    st.count_mcd(s, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Snapshot {
        Snapshot::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn five() -> Snapshot {
        Snapshot::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]).unwrap()
    }

    pub(crate) fn six() -> Snapshot {
        Snapshot::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn triangle_cores() {
        let st = decompose(&tri());
        assert_eq!(st.cores(), &[2, 2, 2]);
        assert_eq!(st.shell(2), vec![0, 1, 2]);
    }

    #[test]
    fn five_vertex_shells() {
        let st = decompose(&five());
        assert_eq!(st.cores(), &[2, 2, 2, 1, 1]);
        assert_eq!(st.shell(1), vec![4, 3]);
    }

    #[test]
    fn six_vertex_shells_and_dump() {
        let st = decompose(&six());
        assert_eq!(st.cores(), &[2, 2, 2, 1, 1, 1]);
        assert_eq!(st.shell(1), vec![5, 4, 3]);
        assert_eq!(st.dump(), "O1: 5 4 3\nO2: 0 1 2\n");
        // remaining degree at removal
        assert_eq!(
            (0..6).map(|v| st.deg_plus(v)).collect::<Vec<_>>(),
            vec![2, 1, 0, 1, 1, 1]
        );
    }

    #[test]
    fn kcore_queries() {
        assert_eq!(kcore(&tri(), 2), vec![0, 1, 2]);
        assert_eq!(kcore(&six(), 0), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(kcore(&six(), 2), vec![0, 1, 2]);
        assert!(kcore(&six(), 3).is_empty());
    }

    #[test]
    fn precedes_queries() {
        let st = decompose(&six());
        assert_eq!(st.precedes(3, 0), Ok(true));
        assert_eq!(st.precedes(0, 3), Ok(false));
        assert_eq!(st.precedes(4, 4), Ok(false));
        assert_eq!(st.precedes(5, 3), Ok(true));
        let iso = decompose(&Snapshot::from_edges(3, [(0, 1)]).unwrap());
        assert_eq!(iso.precedes(2, 0), Err(OrderError::CoreZero(2)));
        assert_eq!(iso.precedes(0, 7), Err(OrderError::OutOfRange(7)));
    }

    #[test]
    fn mcd_values() {
        let iso = Snapshot::from_edges(4, [(0, 1)]).unwrap();
        let st = decompose(&iso);
        assert_eq!(recompute_mcd(&iso, &st, 3), 0);
        let g = six();
        let st = decompose(&g);
        assert_eq!(recompute_mcd(&g, &st, 3), 2);
        assert_eq!(recompute_mcd(&tri(), &decompose(&tri()), 0), 2);
        for u in g.vertices() {
            assert!(st.mcd(u) >= st.core(u));
            assert_eq!(st.mcd(u), recompute_mcd(&g, &st, u));
        }
    }

    #[test]
    fn empty_graph() {
        let st = decompose(&Snapshot::empty(0));
        assert_eq!(st.max_core(), 0);
        assert!(st.shells().is_empty());
        let st = decompose(&Snapshot::empty(4));
        assert_eq!(st.cores(), &[0, 0, 0, 0]);
        assert_eq!(st.dump(), "");
    }

    #[test]
    fn decompose_is_deterministic() {
        let g = six();
        assert_eq!(decompose(&g), decompose(&g));
    }
}
