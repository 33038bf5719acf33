//! Per-shell order lists with monotone `u64` labels.
//!
//! Every vertex lives in at most one shell. Inside a shell, labels strictly
//! increase from head to tail, so comparing two vertices of the same shell is
//! a label comparison. Inserting between two labels that are adjacent
//! triggers a relabel of the smallest surrounding window that has room; the
//! whole shell is respread only when no window does.

use crate::graph::Vertex;

pub(crate) const NIL: Vertex = Vertex::MAX;
const GAP: u64 = 1 << 32;
const START: u64 = 1 << 40;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ShellList {
    head: Vertex,
    tail: Vertex,
    len: usize,
}

impl ShellList {
    fn new() -> Self {
        ShellList {
            head: NIL,
            tail: NIL,
            len: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellOrder {
    prev: Vec<Vertex>,
    next: Vec<Vertex>,
    label: Vec<u64>,
    /// Shell index of each vertex, `0` when it is in no shell.
    shell: Vec<u32>,
    lists: Vec<ShellList>,
}

impl ShellOrder {
    pub fn new(n: usize) -> Self {
        ShellOrder {
            prev: vec![NIL; n],
            next: vec![NIL; n],
            label: vec![0; n],
            shell: vec![0; n],
            lists: vec![ShellList::new()],
        }
    }

    fn list_mut(&mut self, k: u32) -> &mut ShellList {
        let k = k as usize;
        if self.lists.len() <= k {
            self.lists.resize_with(k + 1, ShellList::new);
        }
        &mut self.lists[k]
    }

    /// Highest shell index that has ever held a vertex (empty shells included).
    pub fn max_shell(&self) -> u32 {
        let mut k = self.lists.len() - 1;
        while k > 0 && self.lists[k].len == 0 {
            k -= 1;
        }
        k as u32
    }

    pub fn shell_of(&self, v: Vertex) -> u32 {
        self.shell[v as usize]
    }

    pub fn label(&self, v: Vertex) -> u64 {
        self.label[v as usize]
    }

    pub fn len(&self, k: u32) -> usize {
        self.lists.get(k as usize).map_or(0, |l| l.len)
    }

    pub fn head(&self, k: u32) -> Option<Vertex> {
        self.lists
            .get(k as usize)
            .map(|l| l.head)
            .filter(|&h| h != NIL)
    }

    pub fn next(&self, v: Vertex) -> Option<Vertex> {
        Some(self.next[v as usize]).filter(|&x| x != NIL)
    }

    pub fn prev(&self, v: Vertex) -> Option<Vertex> {
        Some(self.prev[v as usize]).filter(|&x| x != NIL)
    }

    pub fn iter(&self, k: u32) -> ShellIter<'_> {
        ShellIter {
            order: self,
            cur: self.head(k).unwrap_or(NIL),
        }
    }

    /// Same-shell comparison: `u` strictly before `v`.
    pub fn before(&self, u: Vertex, v: Vertex) -> bool {
        self.label[u as usize] < self.label[v as usize]
    }

    pub fn push_back(&mut self, k: u32, v: Vertex) {
        debug_assert!(k > 0 && self.shell[v as usize] == 0);
        let tail = self.list_mut(k).tail;
        if tail == NIL {
            self.link_only(k, v, NIL, NIL);
            self.label[v as usize] = START;
            return;
        }
        let t = self.label[tail as usize];
        if t <= u64::MAX - 2 * GAP {
            self.link_only(k, v, tail, NIL);
            self.label[v as usize] = t + GAP;
        } else {
            self.insert_after(v, tail);
        }
    }

    pub fn push_front(&mut self, k: u32, v: Vertex) {
        debug_assert!(k > 0 && self.shell[v as usize] == 0);
        let head = self.list_mut(k).head;
        if head == NIL {
            self.push_back(k, v);
            return;
        }
        let h = self.label[head as usize];
        if h > GAP {
            self.link_only(k, v, NIL, head);
            self.label[v as usize] = h - GAP;
        } else if h >= 2 {
            self.link_only(k, v, NIL, head);
            self.label[v as usize] = h / 2;
        } else {
            self.respread(k);
            self.push_front(k, v);
        }
    }

    /// Prepends `block` to shell `k`, keeping the block's order.
    pub fn prepend_block(&mut self, k: u32, block: &[Vertex]) {
        for &v in block.iter().rev() {
            self.push_front(k, v);
        }
    }

    /// Inserts `v` right after `anchor` in `anchor`'s shell.
    pub fn insert_after(&mut self, v: Vertex, anchor: Vertex) {
        let k = self.shell[anchor as usize];
        debug_assert!(k > 0 && self.shell[v as usize] == 0);
        let succ = self.next[anchor as usize];
        let lo = self.label[anchor as usize];
        let hi = if succ == NIL {
            u64::MAX
        } else {
            self.label[succ as usize]
        };
        if hi - lo >= 2 {
            self.link_only(k, v, anchor, succ);
            self.label[v as usize] = lo + ((hi - lo) / 2).min(GAP);
            return;
        }
        self.relabel_around(anchor);
        self.insert_after(v, anchor);
    }

    pub fn remove(&mut self, v: Vertex) {
        let vi = v as usize;
        let k = self.shell[vi];
        debug_assert!(k > 0, "vertex {v} is not in a shell");
        let (p, nx) = (self.prev[vi], self.next[vi]);
        if p == NIL {
            self.lists[k as usize].head = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx == NIL {
            self.lists[k as usize].tail = p;
        } else {
            self.prev[nx as usize] = p;
        }
        self.lists[k as usize].len -= 1;
        self.prev[vi] = NIL;
        self.next[vi] = NIL;
        self.shell[vi] = 0;
    }

    fn link_only(&mut self, k: u32, v: Vertex, p: Vertex, nx: Vertex) {
        let vi = v as usize;
        self.prev[vi] = p;
        self.next[vi] = nx;
        self.shell[vi] = k;
        let list = self.list_mut(k);
        list.len += 1;
        if p == NIL {
            list.head = v;
        }
        if nx == NIL {
            list.tail = v;
        }
        if p != NIL {
            self.next[p as usize] = v;
        }
        if nx != NIL {
            self.prev[nx as usize] = v;
        }
    }

    /// Spreads the labels of the window around `v` evenly, doubling the
    /// window until the average gap is at least as large as its size.
    fn relabel_around(&mut self, v: Vertex) {
        let k = self.shell[v as usize];
        let (mut first, mut last, mut count) = (v, v, 1usize);
        loop {
            let lo = self.prev(first).map_or(0, |p| self.label[p as usize]);
            let hi = self.next(last).map_or(u64::MAX, |s| self.label[s as usize]);
            let room = (hi - lo) / (count as u64 + 1);
            if room >= (count as u64).max(2) {
                let mut cur = first;
                for i in 1..=count as u64 {
                    self.label[cur as usize] = lo + i * room;
                    if cur == last {
                        break;
                    }
                    cur = self.next[cur as usize];
                }
                return;
            }
            if count >= self.lists[k as usize].len {
                self.respread(k);
                return;
            }
            let target = count * 2;
            while count < target {
                if let Some(p) = self.prev(first) {
                    first = p;
                    count += 1;
                }
                if count < target {
                    if let Some(s) = self.next(last) {
                        last = s;
                        count += 1;
                    }
                }
                if self.prev(first).is_none() && self.next(last).is_none() {
                    break;
                }
            }
        }
    }

    /// Evenly spreads every label of shell `k` over the full range.
    fn respread(&mut self, k: u32) {
        let len = self.lists[k as usize].len as u64;
        let step = (u64::MAX / (len + 2)).min(GAP);
        let base = if step == GAP {
            START.min(u64::MAX - (len + 1) * GAP)
        } else {
            0
        };
        let mut cur = self.lists[k as usize].head;
        let mut i = 1;
        while cur != NIL {
            self.label[cur as usize] = base + i * step;
            cur = self.next[cur as usize];
            i += 1;
        }
    }
}

pub struct ShellIter<'a> {
    order: &'a ShellOrder,
    cur: Vertex,
}

impl Iterator for ShellIter<'_> {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.cur == NIL {
            return None;
        }
        let v = self.cur;
        self.cur = self.order.next[v as usize];
        Some(v)
    }
}
