//! The upward shell sweep shared by edge insertion, anchor folding and
//! follower probing.
//!
//! A sweep at level `i` visits core-`i` vertices in K-order starting from a
//! set of triggers. A visited vertex whose `deg+ + deg-` exceeds `i` joins
//! the candidate block `V_C` (it may move up to level `i + 1`); otherwise it
//! stays and every candidate neighbor loses one unit of support. Candidates
//! whose support drops to `i` or below are evicted and re-placed right after
//! the vertex being visited, behind any earlier evictions of the same visit.
//!
//! The sweep itself only writes scratch state and `deg_minus`, so the same
//! pass serves both the read-only probe and the applying update.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::graph::{Snapshot, Vertex};
use crate::peel::{KOrderState, ANCHORED};

const UNSEEN: u8 = 0;
const QUEUED: u8 = 1;
const IN_VC: u8 = 2;
const KEPT: u8 = 3;
const EVICTED: u8 = 4;

#[derive(Debug, Clone)]
pub(crate) struct Scratch {
    state: Vec<u8>,
    sup: Vec<u32>,
    touched: Vec<Vertex>,
    heap: BinaryHeap<Reverse<(u64, Vertex)>>,
    vc: Vec<Vertex>,
    placements: Vec<(Vertex, Vertex)>,
    stack: Vec<Vertex>,
    mark: Vec<bool>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch {
            state: vec![UNSEEN; n],
            sup: vec![0; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            vc: Vec::new(),
            placements: Vec::new(),
            stack: Vec::new(),
            mark: vec![false; n],
        }
    }

    pub(crate) fn mark(&mut self) -> &mut [bool] {
        &mut self.mark
    }

    fn reset(&mut self, st: &mut KOrderState) {
        for &v in &self.touched {
            self.state[v as usize] = UNSEEN;
            self.sup[v as usize] = 0;
            st.deg_minus[v as usize] = 0;
        }
        self.touched.clear();
        self.vc.clear();
        self.placements.clear();
        self.stack.clear();
        self.heap.clear();
    }

    fn enqueue(&mut self, st: &KOrderState, v: Vertex) {
        let vi = v as usize;
        if self.state[vi] == UNSEEN {
            self.state[vi] = QUEUED;
            self.touched.push(v);
            self.heap.push(Reverse((st.order.label(v), v)));
        }
    }
}

fn unvisited(state: u8) -> bool {
    state == UNSEEN || state == QUEUED
}

/// Runs the sweep phase at level `i`. Leaves the outcome in `sc`.
fn sweep(st: &mut KOrderState, s: &Snapshot, i: u32, triggers: &[Vertex], sc: &mut Scratch) {
    for &t in triggers {
        if st.core[t as usize] == i {
            sc.enqueue(st, t);
        }
    }
    while let Some(Reverse((lx, x))) = sc.heap.pop() {
        let xi = x as usize;
        let p = st.deg_plus[xi] + st.deg_minus[xi];
        if p > i {
            sc.state[xi] = IN_VC;
            sc.sup[xi] = p;
            sc.vc.push(x);
            for &w in s.neighbors(x) {
                let wi = w as usize;
                if st.core[wi] == i && unvisited(sc.state[wi]) && st.order.label(w) > lx {
                    st.deg_minus[wi] += 1;
                    sc.enqueue(st, w);
                }
            }
            continue;
        }
        sc.state[xi] = KEPT;
        let mut last = x;
        for &w in s.neighbors(x) {
            if sc.state[w as usize] == IN_VC {
                sc.sup[w as usize] -= 1;
                if sc.sup[w as usize] <= i {
                    sc.stack.push(w);
                }
            }
        }
        while let Some(z) = sc.stack.pop() {
            let zi = z as usize;
            if sc.state[zi] != IN_VC {
                continue;
            }
            sc.state[zi] = EVICTED;
            sc.placements.push((last, z));
            last = z;
            let lz = st.order.label(z);
            for &w in s.neighbors(z) {
                let wi = w as usize;
                match sc.state[wi] {
                    IN_VC => {
                        sc.sup[wi] -= 1;
                        if sc.sup[wi] <= i {
                            sc.stack.push(w);
                        }
                    }
                    st_w if unvisited(st_w) && st.core[wi] == i && st.order.label(w) > lz => {
                        st.deg_minus[wi] -= 1;
                    }
                    _ => {}
                }
            }
        }
    }
}

/// Vertices whose core or shell position changed during [`raise`].
#[derive(Debug, Default)]
pub(crate) struct RaiseOutcome {
    pub(crate) changed: Vec<Vertex>,
}

/// Applies the sweep at each level that has triggers, lowest first, until no
/// level has any. Candidates left at the end of a level are prepended to the
/// next shell and become triggers there. `deg_plus` is recomputed for every
/// visited vertex and `mcd` for promoted vertices and their neighbors.
pub(crate) fn raise(
    st: &mut KOrderState,
    s: &Snapshot,
    mut triggers: BTreeMap<u32, Vec<Vertex>>,
    sc: &mut Scratch,
    out: &mut RaiseOutcome,
) {
    let mut dirty: Vec<Vertex> = Vec::new();
    while let Some((i, trig)) = triggers.pop_first() {
        debug_assert!(i >= 1 && i != ANCHORED);
        sweep(st, s, i, &trig, sc);
        let promoted: Vec<Vertex> = sc
            .vc
            .iter()
            .copied()
            .filter(|&v| sc.state[v as usize] == IN_VC)
            .collect();
        for &(_, z) in &sc.placements {
            st.order.remove(z);
        }
        for &v in &promoted {
            st.order.remove(v);
        }
        for &(a, z) in &sc.placements {
            st.order.insert_after(z, a);
        }
        st.order.prepend_block(i + 1, &promoted);
        for &v in &promoted {
            st.core[v as usize] = i + 1;
        }
        for &v in &sc.touched {
            if sc.state[v as usize] != UNSEEN {
                st.deg_plus[v as usize] = st.count_deg_plus(s, v);
            }
        }
        out.changed.extend(sc.placements.iter().map(|&(_, z)| z));
        out.changed.extend_from_slice(&promoted);
        for &v in &promoted {
            dirty.push(v);
            dirty.extend_from_slice(s.neighbors(v));
        }
        sc.reset(st);
        if !promoted.is_empty() {
            triggers.entry(i + 1).or_default().extend(promoted);
        }
    }
    refresh_mcd(st, s, &dirty, &mut sc.mark);
}

/// Recomputes `mcd` once for each distinct vertex of `dirty`.
pub(crate) fn refresh_mcd(st: &mut KOrderState, s: &Snapshot, dirty: &[Vertex], mark: &mut [bool]) {
    for &v in dirty {
        if !mark[v as usize] {
            mark[v as usize] = true;
            st.mcd[v as usize] = st.count_mcd(s, v);
        }
    }
    for &v in dirty {
        mark[v as usize] = false;
    }
}

/// Read-only sweep at level `i` with `v` treated as anchored. Returns the
/// core-`i` vertices that would rise above `i`, ascending. The state is left
/// exactly as it was.
pub(crate) fn probe_level(
    st: &mut KOrderState,
    s: &Snapshot,
    i: u32,
    v: Vertex,
    sc: &mut Scratch,
) -> Vec<Vertex> {
    let cv = st.core[v as usize];
    debug_assert!(cv <= i);
    let mut trig = Vec::new();
    for &w in s.neighbors(v) {
        if st.core[w as usize] == i && st.before(v, w) {
            st.deg_plus[w as usize] += 1;
            trig.push(w);
        }
    }
    if trig.is_empty() {
        return Vec::new();
    }
    st.core[v as usize] = ANCHORED;
    sweep(st, s, i, &trig, sc);
    let mut found: Vec<Vertex> = sc
        .vc
        .iter()
        .copied()
        .filter(|&x| sc.state[x as usize] == IN_VC)
        .collect();
    sc.reset(st);
    st.core[v as usize] = cv;
    for &w in &trig {
        st.deg_plus[w as usize] -= 1;
    }
    found.sort_unstable();
    found
}
