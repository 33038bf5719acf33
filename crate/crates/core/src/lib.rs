//! Anchored vertex tracking over evolving graphs.
//!
//! Per snapshot, choose at most `l` anchor vertices that maximize the number
//! of followers: vertices that join the k-core once the anchors are exempt
//! from the degree constraint. Core numbers and the peeling order are kept
//! up to date across snapshots so the incremental solver only probes
//! vertices close to what changed.

pub mod anchor;
pub mod cli;
pub mod graph;
pub mod maintain;
pub mod oracle;
pub mod peel;
