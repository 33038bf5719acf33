//! Incremental K-order maintenance under batches of edge insertions and
//! deletions.

pub(crate) mod sweep;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Snapshot, Vertex};
use crate::peel::{decompose, KOrderState, ANCHORED};
use sweep::{raise, refresh_mcd, RaiseOutcome, Scratch};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaintainError {
    #[error("state has {state} vertices but the snapshot has {snapshot}")]
    SizeMismatch { state: usize, snapshot: usize },
    #[error("inserted edge {0} is missing from the snapshot")]
    InsertedEdgeMissing(Edge),
    #[error("deleted edge {0} is still present in the snapshot")]
    DeletedEdgePresent(Edge),
    #[error("edge {0} appears twice in the batch")]
    DuplicateEdge(Edge),
}

/// Impacted vertices of one maintenance call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MaintenanceReport {
    /// Vertices promoted or moved by insertion that end with core `k - 1`.
    pub v_i: Vec<Vertex>,
    /// Vertices demoted by deletion that end with core `k - 1`.
    pub v_r: Vec<Vertex>,
    /// Distinct vertices whose core or shell position changed.
    pub touched: usize,
}

fn check_batch(
    st: &KOrderState,
    s: &Snapshot,
    edges: &[Edge],
    present: bool,
) -> Result<(), MaintainError> {
    if st.n() != s.n() {
        return Err(MaintainError::SizeMismatch {
            state: st.n(),
            snapshot: s.n(),
        });
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(MaintainError::DuplicateEdge(w[0]));
    }
    for &e in edges {
        let (u, v) = e.endpoints();
        let inside = (u as usize) < s.n() && (v as usize) < s.n() && s.has_edge(u, v);
        match (present, inside) {
            (true, false) => return Err(MaintainError::InsertedEdgeMissing(e)),
            (false, true) => return Err(MaintainError::DeletedEdgePresent(e)),
            _ => {}
        }
    }
    Ok(())
}

/// Updates `st` from `s` minus `e_plus` to `s`.
pub fn edge_insert(
    st: &mut KOrderState,
    s: &Snapshot,
    e_plus: &[Edge],
    k: u32,
) -> Result<MaintenanceReport, MaintainError> {
    check_batch(st, s, e_plus, true)?;
    if e_plus.is_empty() {
        return Ok(MaintenanceReport::default());
    }
    let mut triggers: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
    let mut isolated = Vec::new();
    let mut dirty = Vec::new();
    for &e in e_plus {
        let (u, v) = e.endpoints();
        let a = if st.before(u, v) { u } else { v };
        st.deg_plus[a as usize] += 1;
        for x in [u, v] {
            if st.core[x as usize] == 0 {
                isolated.push(x);
            }
            dirty.push(x);
        }
        if st.core[a as usize] != 0 {
            triggers.entry(st.core[a as usize]).or_default().push(a);
        }
    }
    let mut out = RaiseOutcome::default();
    if !isolated.is_empty() {
        // every previously isolated endpoint now has degree >= 1
        isolated.sort_unstable();
        isolated.dedup();
        for &x in &isolated {
            st.core[x as usize] = 1;
        }
        st.order.prepend_block(1, &isolated);
        for &x in &isolated {
            st.deg_plus[x as usize] = st.count_deg_plus(s, x);
            dirty.extend_from_slice(s.neighbors(x));
        }
        out.changed.extend_from_slice(&isolated);
        triggers.entry(1).or_default().extend_from_slice(&isolated);
    }
    let mut sc = Scratch::new(s.n());
    raise(st, s, triggers, &mut sc, &mut out);
    let mut mark = vec![false; s.n()];
    refresh_mcd(st, s, &dirty, &mut mark);

    let mut changed = out.changed;
    changed.sort_unstable();
    changed.dedup();
    let v_i = changed
        .iter()
        .copied()
        .filter(|&v| k >= 1 && st.core[v as usize] == k - 1)
        .collect();
    Ok(MaintenanceReport {
        v_i,
        v_r: Vec::new(),
        touched: changed.len(),
    })
}

/// Updates `st` from `s` plus `e_minus` to `s`.
pub fn edge_remove(
    st: &mut KOrderState,
    s: &Snapshot,
    e_minus: &[Edge],
    k: u32,
) -> Result<MaintenanceReport, MaintainError> {
    check_batch(st, s, e_minus, false)?;
    if e_minus.is_empty() {
        return Ok(MaintenanceReport::default());
    }
    let n = s.n();
    let mut queue = VecDeque::new();
    let mut queued = vec![false; n];
    let push = |queue: &mut VecDeque<Vertex>, queued: &mut [bool], v: Vertex| {
        if !queued[v as usize] {
            queued[v as usize] = true;
            queue.push_back(v);
        }
    };
    for &e in e_minus {
        let (u, v) = e.endpoints();
        let a = if st.before(u, v) { u } else { v };
        st.deg_plus[a as usize] -= 1;
    }
    for &e in e_minus {
        for x in [e.lo(), e.hi()] {
            st.mcd[x as usize] = st.count_mcd(s, x);
            if st.mcd[x as usize] < st.core[x as usize] {
                push(&mut queue, &mut queued, x);
            }
        }
    }

    let old_core = st.core.clone();
    let mut demoted: Vec<Vertex> = Vec::new();
    let mut is_demoted = vec![false; n];
    while let Some(x) = queue.pop_front() {
        let xi = x as usize;
        queued[xi] = false;
        if st.mcd[xi] >= st.core[xi] {
            continue;
        }
        let c = st.core[xi];
        st.core[xi] = c - 1;
        if !is_demoted[xi] {
            is_demoted[xi] = true;
            demoted.push(x);
        }
        for &w in s.neighbors(x) {
            let wi = w as usize;
            if st.core[wi] == c {
                st.mcd[wi] -= 1;
                if st.mcd[wi] < st.core[wi] {
                    push(&mut queue, &mut queued, w);
                }
            }
        }
        st.mcd[xi] = st.count_mcd(s, x);
        if st.mcd[xi] < st.core[xi] {
            push(&mut queue, &mut queued, x);
        }
    }
    if demoted.is_empty() {
        return Ok(MaintenanceReport::default());
    }

    // untouched vertices lose the demoted neighbors that now sit in a lower shell
    let old_before = |st: &KOrderState, x: Vertex, d: Vertex| {
        let (cx, cd) = (old_core[x as usize], old_core[d as usize]);
        cx < cd || (cx == cd && st.order.before(x, d))
    };
    for &d in &demoted {
        for &x in s.neighbors(d) {
            if !is_demoted[x as usize]
                && st.core[d as usize] < st.core[x as usize]
                && old_before(st, x, d)
            {
                st.deg_plus[x as usize] -= 1;
            }
        }
    }

    for &d in &demoted {
        st.order.remove(d);
    }
    let mut by_level: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
    for &d in &demoted {
        by_level.entry(st.core[d as usize]).or_default().push(d);
    }
    let mut placed = vec![false; n];
    let mut rem = vec![0u32; n];
    for (j, group) in by_level {
        if j == 0 {
            for &d in &group {
                st.deg_plus[d as usize] = 0;
            }
            continue;
        }
        // append the group to the end of O_j in a local peeling order
        let in_group = |st: &KOrderState, placed: &[bool], w: Vertex| {
            is_demoted[w as usize] && st.core[w as usize] == j && !placed[w as usize]
        };
        let mut ready = BinaryHeap::new();
        for &d in &group {
            rem[d as usize] = s
                .neighbors(d)
                .iter()
                .filter(|&&w| st.core[w as usize] > j || in_group(st, &placed, w))
                .count() as u32;
            if rem[d as usize] <= j {
                ready.push(Reverse(d));
            }
        }
        let mut done = 0;
        while let Some(Reverse(d)) = ready.pop() {
            let di = d as usize;
            if placed[di] {
                continue;
            }
            placed[di] = true;
            done += 1;
            st.order.push_back(j, d);
            st.deg_plus[di] = rem[di];
            for &w in s.neighbors(d) {
                if in_group(st, &placed, w) {
                    rem[w as usize] -= 1;
                    if rem[w as usize] == j {
                        ready.push(Reverse(w));
                    }
                }
            }
        }
        assert_eq!(done, group.len(), "demoted vertices at level {j} admit no peeling order");
    }

    demoted.sort_unstable();
    let v_r = demoted
        .iter()
        .copied()
        .filter(|&v| k >= 1 && st.core[v as usize] == k - 1)
        .collect();
    Ok(MaintenanceReport {
        v_i: Vec::new(),
        v_r,
        touched: demoted.len(),
    })
}

/// First inconsistency found by [`validate_order`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OrderViolation {
    #[error("state has {state} vertices but the snapshot has {snapshot}")]
    SizeMismatch { state: usize, snapshot: usize },
    #[error("vertex {vertex}: core {found}, expected {expected}")]
    Core { vertex: Vertex, expected: u32, found: u32 },
    #[error("vertex {vertex} with core {core} sits in shell {shell}")]
    Shell { vertex: Vertex, core: u32, shell: u32 },
    #[error("shell {shell}: labels not increasing at vertex {vertex}")]
    Labels { shell: u32, vertex: Vertex },
    #[error("vertex {vertex} has {remaining} neighbors after it but core {core}")]
    Remaining { vertex: Vertex, remaining: u32, core: u32 },
    #[error("vertex {vertex}: deg+ is {stored}, actual {actual}")]
    DegPlus { vertex: Vertex, stored: u32, actual: u32 },
    #[error("vertex {vertex}: mcd is {stored}, actual {actual}")]
    Mcd { vertex: Vertex, stored: u32, actual: u32 },
    #[error("vertex {vertex}: deg- is {stored} at rest")]
    DegMinus { vertex: Vertex, stored: u32 },
}

/// Checks cores against a fresh decomposition, replays the shells as a
/// peeling order, and checks the stored counters.
pub fn validate_order(st: &KOrderState, s: &Snapshot) -> Result<(), OrderViolation> {
    if st.n() != s.n() {
        return Err(OrderViolation::SizeMismatch {
            state: st.n(),
            snapshot: s.n(),
        });
    }
    let fresh = decompose(s);
    for u in s.vertices() {
        let (expected, found) = (fresh.core(u), st.core(u));
        if expected != found || found == ANCHORED {
            return Err(OrderViolation::Core {
                vertex: u,
                expected,
                found,
            });
        }
        let shell = st.order.shell_of(u);
        if shell != found {
            return Err(OrderViolation::Shell {
                vertex: u,
                core: found,
                shell,
            });
        }
    }
    for k in 1..=st.max_core() {
        let mut prev: Option<u64> = None;
        for v in st.order.iter(k) {
            let l = st.order.label(v);
            if prev.is_some_and(|p| p >= l) || st.core(v) != k {
                return Err(OrderViolation::Labels { shell: k, vertex: v });
            }
            prev = Some(l);
        }
    }
    for u in s.vertices() {
        let actual = if st.core(u) == 0 { 0 } else { st.count_deg_plus(s, u) };
        if actual > st.core(u) {
            return Err(OrderViolation::Remaining {
                vertex: u,
                remaining: actual,
                core: st.core(u),
            });
        }
        if st.deg_plus(u) != actual {
            return Err(OrderViolation::DegPlus {
                vertex: u,
                stored: st.deg_plus(u),
                actual,
            });
        }
        let mcd = st.count_mcd(s, u);
        if st.mcd(u) != mcd {
            return Err(OrderViolation::Mcd {
                vertex: u,
                stored: st.mcd(u),
                actual: mcd,
            });
        }
        if st.deg_minus(u) != 0 {
            return Err(OrderViolation::DegMinus {
                vertex: u,
                stored: st.deg_minus(u),
            });
        }
    }
    Ok(())
}
