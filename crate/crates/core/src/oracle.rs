//! Brute-force references for tests and `verify`. Nothing here touches the
//! K-order or the peeling code; each routine rebuilds its own adjacency and
//! deletes vertices one full scan at a time.

use thiserror::Error;

use crate::anchor::AVTConfig;
use crate::graph::{Snapshot, Vertex};

/// Subsets enumerated by [`oracle_best_anchor_set`] before it refuses.
pub const MAX_SUBSETS: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {subsets} anchor subsets exceed the limit of {limit}")]
    TooLarge { subsets: u64, limit: u64 },
}

fn adjacency(s: &Snapshot) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); s.n()];
    for e in s.edges() {
        let (u, v) = (e.lo() as usize, e.hi() as usize);
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Survivors of repeatedly deleting every non-exempt vertex with fewer than
/// `k` surviving neighbors.
fn survivors(adj: &[Vec<usize>], exempt: &[bool], k: u32) -> Vec<bool> {
    let mut alive = vec![true; adj.len()];
    loop {
        let doomed: Vec<usize> = (0..adj.len())
            .filter(|&u| {
                alive[u] && !exempt[u] && adj[u].iter().filter(|&&v| alive[v]).count() < k as usize
            })
            .collect();
        if doomed.is_empty() {
            return alive;
        }
        for u in doomed {
            alive[u] = false;
        }
    }
}

pub fn oracle_core_numbers(s: &Snapshot) -> Vec<u32> {
    let adj = adjacency(s);
    let none = vec![false; adj.len()];
    let mut core = vec![0u32; adj.len()];
    let mut k = 1;
    loop {
        let alive = survivors(&adj, &none, k);
        if !alive.iter().any(|&a| a) {
            return core;
        }
        for (u, &a) in alive.iter().enumerate() {
            if a {
                core[u] = k;
            }
        }
        k += 1;
    }
}

fn mask(n: usize, vs: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v as usize] = true;
    }
    m
}

/// Vertices of the k-core with `anchors` exempt, ascending.
pub fn oracle_anchored_core(s: &Snapshot, anchors: &[Vertex], k: u32) -> Vec<Vertex> {
    let adj = adjacency(s);
    let alive = survivors(&adj, &mask(s.n(), anchors), k);
    (0..s.n()).filter(|&u| alive[u]).map(|u| u as Vertex).collect()
}

/// Follower set of `anchors` as a whole, ascending.
pub fn oracle_followers(s: &Snapshot, anchors: &[Vertex], k: u32) -> Vec<Vertex> {
    let adj = adjacency(s);
    let exempt = mask(s.n(), anchors);
    let with = survivors(&adj, &exempt, k);
    let plain = survivors(&adj, &vec![false; s.n()], k);
    (0..s.n())
        .filter(|&u| with[u] && !plain[u] && !exempt[u])
        .map(|u| u as Vertex)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOptimum {
    /// First subset reaching the maximum follower count, in order of size
    /// then lexicographic order.
    pub anchors: Vec<Vertex>,
    pub followers: usize,
    /// Largest anchored core over the same subsets.
    pub max_anchored_core_size: usize,
}

fn binomial_sum(n: u64, l: u64) -> u64 {
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for i in 0..=l.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul(n - i) / (i + 1);
    }
    total
}

/// Exhaustive search over every subset of at most `l` vertices outside the
/// k-core.
pub fn oracle_best_anchor_set(s: &Snapshot, cfg: &AVTConfig) -> Result<OracleOptimum, OracleError> {
    let k = cfg.k();
    let adj = adjacency(s);
    let n = s.n();
    let plain = survivors(&adj, &vec![false; n], k);
    let pool: Vec<usize> = (0..n).filter(|&u| !plain[u]).collect();
    let l = cfg.l().min(pool.len());
    let subsets = binomial_sum(pool.len() as u64, l as u64);
    if subsets > MAX_SUBSETS {
        return Err(OracleError::TooLarge {
            subsets,
            limit: MAX_SUBSETS,
        });
    }
    let core_size = plain.iter().filter(|&&a| a).count();
    let mut best = OracleOptimum {
        anchors: Vec::new(),
        followers: 0,
        max_anchored_core_size: core_size,
    };
    let mut exempt = vec![false; n];
    let mut idx: Vec<usize> = Vec::new();
    for size in 1..=l {
        idx.clear();
        idx.extend(0..size);
        loop {
            for &i in &idx {
                exempt[pool[i]] = true;
            }
            let alive = survivors(&adj, &exempt, k);
            let total = alive.iter().filter(|&&a| a).count();
            let followers = total - core_size - size;
            if followers > best.followers {
                best.followers = followers;
                best.anchors = idx.iter().map(|&i| pool[i] as Vertex).collect();
            }
            best.max_anchored_core_size = best.max_anchored_core_size.max(total);
            for &i in &idx {
                exempt[pool[i]] = false;
            }
            // next combination in lexicographic order
            let mut j = size;
            while j > 0 && idx[j - 1] == pool.len() - size + j - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            idx[j - 1] += 1;
            for t in j..size {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> Snapshot {
        Snapshot::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn core_numbers() {
        assert_eq!(oracle_core_numbers(&Snapshot::empty(4)), vec![0; 4]);
        let k4 = Snapshot::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(oracle_core_numbers(&k4), vec![3; 4]);
        assert_eq!(oracle_core_numbers(&six()), vec![2, 2, 2, 1, 1, 1]);
    }

    #[test]
    fn followers() {
        let g = six();
        assert!(oracle_followers(&g, &[0, 1], 2).is_empty());
        assert_eq!(oracle_followers(&g, &[5], 2), vec![3, 4]);
        assert!(oracle_followers(&g, &[0, 1, 2, 3, 4, 5], 2).is_empty());
    }

    #[test]
    fn best_sets() {
        let g = six();
        let best = oracle_best_anchor_set(&g, &AVTConfig::new(2, 1).unwrap()).unwrap();
        assert_eq!((best.anchors, best.followers), (vec![5], 2));
        let best = oracle_best_anchor_set(&g, &AVTConfig::new(2, 2).unwrap()).unwrap();
        assert_eq!(best.followers, 2);
        // budget covering every non-core vertex puts the whole graph in
        let best = oracle_best_anchor_set(&g, &AVTConfig::new(2, 3).unwrap()).unwrap();
        assert_eq!(best.max_anchored_core_size, 6);
    }

    #[test]
    fn guard_rejects_large_instances() {
        let g = Snapshot::empty(200);
        assert!(matches!(
            oracle_best_anchor_set(&g, &AVTConfig::new(2, 4).unwrap()),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
