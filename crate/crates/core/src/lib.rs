//! Enumeration of Eulerian trails in directed graphs and multigraphs.
//!
//! The engine keeps the remaining graph compressed while it walks a
//! depth-first search over trail prefixes, so `z` trails come out as a
//! trie of size `O(m + z)` built in `O(m + z)` time. Exact counting via the
//! BEST theorem and brute-force oracles are included for cross-checking.
//!
//! ```
//! use eulertrail::{enumerate, parse_edge_list, EnumerateOptions, Mode};
//!
//! let g = parse_edge_list("a b\nb c\nc a\na d\nd e\ne a", Mode::Simple).unwrap();
//! let run = enumerate(&g, Mode::Simple, &EnumerateOptions::default()).unwrap();
//! let trails = run.trail_names(&g);
//! assert_eq!(trails, ["a b c a d e a", "a d e a b c a"]);
//! ```

pub mod cli;
pub mod compressed;
pub mod count;
pub mod error;
pub mod explore;
pub mod graph;
pub mod label;
pub mod scc;
pub mod testkit;
pub mod tree;

pub use compressed::{Checkpoint, CompressedGraph, CompressionMode, JournalEntry};
pub use count::{
    bareiss_determinant, brute_force_arborescences, brute_force_trails, count_arborescences,
    count_best, count_edge_distinct, BigCount,
};
pub use error::{Error, Result};
pub use explore::{
    enumerate, hierholzer_complete, mark_crossings, EnumerateOptions, Enumeration, StepCounters,
    WalkResult,
};
pub use graph::{
    check_eulerian, compact_multiplicities, parse_edge_list, subdivide, weakly_connected,
    write_edge_list, EdgeId, EulerInfo, Multigraph, NodeId, TrailKind,
};
pub use label::{LabelArena, LabelId};
pub use scc::{crossings_static, tarjan_scc, SccPartition};
pub use tree::{StateTree, TrieFormat};

/// How trails are told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Input must be simple; trails are edge sequences.
    Simple,
    /// Parallel copies are distinguishable; trails are edge-copy sequences.
    EdgeDistinct,
    /// Trails are node sequences.
    NodeDistinct,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simple => "simple",
            Mode::EdgeDistinct => "edge-distinct",
            Mode::NodeDistinct => "node-distinct",
        }
    }
}
