//! Evolving-graph data model.
//!
//! A [`Snapshot`] is an undirected simple graph over the dense vertex universe
//! `0..n`. An [`EvolvingGraph`] is a base snapshot plus an ordered list of
//! [`EdgeDelta`]s; every delta inserts its `E+` edges first and then removes
//! its `E-` edges.

mod io;
mod series;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use io::{
    load_delta, load_series, load_snapshot, parse_delta, parse_snapshot, save_series,
    write_delta, write_snapshot,
};
pub use series::{generate_series, Churn, SeriesParams};

/// Dense vertex id in `0..n`.
pub type Vertex = u32;

/// Undirected edge with endpoints stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Normalizes the endpoint order. Self-loops are representable here and
    /// rejected when the edge is applied to a graph.
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    pub fn is_loop(self) -> bool {
        self.0 == self.1
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((u, v): (Vertex, Vertex)) -> Self {
        Edge::new(u, v)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop on vertex {vertex}{}", at_line(*.line))]
    SelfLoop { vertex: Vertex, line: Option<usize> },
    #[error("duplicate edge {edge}{}", at_line(*.line))]
    DuplicateEdge { edge: Edge, line: Option<usize> },
    #[error("vertex {vertex} out of range for n={n}{}", at_line(*.line))]
    VertexOutOfRange {
        vertex: Vertex,
        n: usize,
        line: Option<usize>,
    },
    #[error("edge {0} appears in both the insert and delete lists")]
    InsertDeleteOverlap(Edge),
    #[error("cannot insert {0}: edge already present")]
    InsertExisting(Edge),
    #[error("cannot delete {0}: edge not present")]
    DeleteMissing(Edge),
    #[error("delta {step} (producing snapshot {}): {source}", .step + 1)]
    Delta {
        step: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error("infeasible churn: {0}")]
    InfeasibleChurn(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: Box<GraphError>,
    },
}

fn at_line(line: Option<usize>) -> String {
    match line {
        Some(l) => format!(" at line {l}"),
        None => String::new(),
    }
}

/// One graph snapshot: sorted adjacency lists over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Snapshot {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Snapshot {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a snapshot, rejecting self-loops, duplicates and ids `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator,
        I::Item: Into<Edge>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for e in edges {
            let e: Edge = e.into();
            check_edge(e, n, None)?;
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge {
                    edge: e,
                    line: None,
                });
            }
            adj[e.0 as usize].push(e.1);
            adj[e.1 as usize].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Snapshot { adj, m: seen.len() })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.adj.len() as Vertex
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (u, v) = (u as usize, v as usize);
        u < self.adj.len() && v < self.adj.len() && self.adj[u].binary_search(&(v as Vertex)).is_ok()
    }

    /// Edges in ascending `(lo, hi)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().filter(move |&&v| v > u).map(move |&v| Edge(u, v))
        })
    }

    /// `self ⊕ edges`. Every edge must be absent.
    pub fn with_inserted(&self, edges: &[Edge]) -> Result<Snapshot, GraphError> {
        let mut out = self.clone();
        let mut seen = HashSet::new();
        for &e in edges {
            check_edge(e, self.n(), None)?;
            if out.has_edge(e.0, e.1) || !seen.insert(e) {
                return Err(GraphError::InsertExisting(e));
            }
            insert_sorted(&mut out.adj[e.0 as usize], e.1);
            insert_sorted(&mut out.adj[e.1 as usize], e.0);
        }
        out.m += edges.len();
        Ok(out)
    }

    /// `self ⊖ edges`. Every edge must be present.
    pub fn with_removed(&self, edges: &[Edge]) -> Result<Snapshot, GraphError> {
        let mut out = self.clone();
        for &e in edges {
            check_edge(e, self.n(), None)?;
            if !remove_sorted(&mut out.adj[e.0 as usize], e.1) {
                return Err(GraphError::DeleteMissing(e));
            }
            remove_sorted(&mut out.adj[e.1 as usize], e.0);
        }
        out.m -= edges.len();
        Ok(out)
    }

    /// Applies `d`: inserts first, then deletes.
    pub fn apply_delta(&self, d: &EdgeDelta) -> Result<Snapshot, GraphError> {
        self.with_inserted(&d.inserts)?.with_removed(&d.deletes)
    }
}

fn check_edge(e: Edge, n: usize, line: Option<usize>) -> Result<(), GraphError> {
    if e.1 as usize >= n {
        return Err(GraphError::VertexOutOfRange {
            vertex: e.1,
            n,
            line,
        });
    }
    if e.is_loop() {
        return Err(GraphError::SelfLoop { vertex: e.0, line });
    }
    Ok(())
}

fn insert_sorted(list: &mut Vec<Vertex>, v: Vertex) {
    let at = list.binary_search(&v).unwrap_or_else(|i| i);
    list.insert(at, v);
}

fn remove_sorted(list: &mut Vec<Vertex>, v: Vertex) -> bool {
    match list.binary_search(&v) {
        Ok(i) => {
            list.remove(i);
            true
        }
        Err(_) => false,
    }
}

/// Free-function form of [`Snapshot::apply_delta`].
pub fn apply_delta(s: &Snapshot, d: &EdgeDelta) -> Result<Snapshot, GraphError> {
    s.apply_delta(d)
}

/// Edge changes between two consecutive snapshots.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeDelta {
    pub inserts: Vec<Edge>,
    pub deletes: Vec<Edge>,
}

impl EdgeDelta {
    /// Validates the list invariants (no repeats, disjoint lists, endpoints
    /// distinct and in range).
    pub fn new(inserts: Vec<Edge>, deletes: Vec<Edge>, n: usize) -> Result<Self, GraphError> {
        let d = EdgeDelta { inserts, deletes };
        d.validate(n)?;
        Ok(d)
    }

    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        let mut ins = HashSet::new();
        for &e in &self.inserts {
            check_edge(e, n, None)?;
            if !ins.insert(e) {
                return Err(GraphError::DuplicateEdge {
                    edge: e,
                    line: None,
                });
            }
        }
        let mut del = HashSet::new();
        for &e in &self.deletes {
            check_edge(e, n, None)?;
            if !del.insert(e) {
                return Err(GraphError::DuplicateEdge {
                    edge: e,
                    line: None,
                });
            }
            if ins.contains(&e) {
                return Err(GraphError::InsertDeleteOverlap(e));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.inserts.is_empty() && self.deletes.is_empty()
    }
}

/// Base snapshot `G1` plus deltas producing `G2..GT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolvingGraph {
    base: Snapshot,
    deltas: Vec<EdgeDelta>,
}

impl EvolvingGraph {
    /// Replays every delta once to check that the series is consistent.
    pub fn new(base: Snapshot, deltas: Vec<EdgeDelta>) -> Result<Self, GraphError> {
        let mut cur = base.clone();
        for (step, d) in deltas.iter().enumerate() {
            let wrap = |e| GraphError::Delta {
                step,
                source: Box::new(e),
            };
            d.validate(base.n()).map_err(wrap)?;
            cur = cur.apply_delta(d).map_err(wrap)?;
        }
        Ok(EvolvingGraph { base, deltas })
    }

    pub fn base(&self) -> &Snapshot {
        &self.base
    }

    pub fn deltas(&self) -> &[EdgeDelta] {
        &self.deltas
    }

    /// Number of snapshots `T`.
    pub fn len(&self) -> usize {
        self.deltas.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Materializes `G1..GT` in order.
    pub fn snapshots(&self) -> Vec<Snapshot> {
        let mut out = Vec::with_capacity(self.len());
        out.push(self.base.clone());
        for d in &self.deltas {
            let next = out
                .last()
                .unwrap()
                .apply_delta(d)
                .expect("deltas validated at construction");
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_vertex() -> Snapshot {
        Snapshot::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn degrees_match_hand_count() {
        let s = five_vertex();
        assert_eq!(s.degrees(), vec![3, 2, 2, 2, 1]);
        assert_eq!(s.m() * 2, s.degrees().iter().sum::<usize>());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(
            Snapshot::from_edges(3, [(2, 2)]),
            Err(GraphError::SelfLoop { vertex: 2, .. })
        ));
        assert!(matches!(
            Snapshot::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Snapshot::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn apply_delta_insert_invalid_id() {
        let tri = Snapshot::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let d = EdgeDelta {
            inserts: vec![Edge::new(0, 3)],
            deletes: vec![],
        };
        assert!(matches!(
            tri.apply_delta(&d),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn apply_delta_identity_and_delete() {
        let s = five_vertex();
        assert_eq!(s.apply_delta(&EdgeDelta::default()).unwrap(), s);
        let d = EdgeDelta {
            inserts: vec![],
            deletes: vec![Edge::new(3, 4)],
        };
        let t = s.apply_delta(&d).unwrap();
        assert_eq!(t.degrees(), vec![3, 2, 2, 1, 0]);
        assert_eq!(t.m(), 4);
    }

    #[test]
    fn apply_delta_errors() {
        let s = five_vertex();
        let ins = EdgeDelta {
            inserts: vec![Edge::new(0, 1)],
            deletes: vec![],
        };
        assert!(matches!(s.apply_delta(&ins), Err(GraphError::InsertExisting(_))));
        let del = EdgeDelta {
            inserts: vec![],
            deletes: vec![Edge::new(1, 4)],
        };
        assert!(matches!(s.apply_delta(&del), Err(GraphError::DeleteMissing(_))));
    }

    #[test]
    fn inserts_apply_before_deletes() {
        // Deleting an edge that only exists after this delta's inserts is legal.
        let s = Snapshot::empty(3);
        let d = EdgeDelta {
            inserts: vec![Edge::new(0, 1), Edge::new(1, 2)],
            deletes: vec![],
        };
        let s1 = s.apply_delta(&d).unwrap();
        assert_eq!(s1.m(), 2);
        let overlap = EdgeDelta::new(vec![Edge::new(0, 1)], vec![Edge::new(0, 1)], 3);
        assert!(matches!(overlap, Err(GraphError::InsertDeleteOverlap(_))));
    }

    #[test]
    fn evolving_graph_reports_bad_step() {
        let s = five_vertex();
        let good = EdgeDelta {
            inserts: vec![Edge::new(1, 4)],
            deletes: vec![],
        };
        let bad = EdgeDelta {
            inserts: vec![Edge::new(1, 4)],
            deletes: vec![],
        };
        let err = EvolvingGraph::new(s, vec![good, bad]).unwrap_err();
        assert!(matches!(err, GraphError::Delta { step: 1, .. }));
    }
}
