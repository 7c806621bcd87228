//! Input model: directed multigraphs with compacted multiplicities, the
//! edge-list text format, Euler feasibility, and the two multigraph
//! transforms (subdivision and multiplicity compaction).

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One `(tail, head)` pair together with the number of parallel copies it
/// stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRecord {
    pub tail: NodeId,
    pub head: NodeId,
    pub multiplicity: u32,
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Immutable directed multigraph.
///
/// Node ids are dense and assigned in order of first appearance. Every
/// `(tail, head)` pair is stored once with its multiplicity; the individual
/// copies of a record are numbered consecutively (see [`Multigraph::copies`]),
/// so copy ids coincide with edge ids on graphs without multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<EdgeRecord>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    copy_offset: Vec<u32>,
    m_total: u64,
}

/// Accumulates nodes and edges, merging repeated `(tail, head)` pairs.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<EdgeRecord>,
    pair: HashMap<(NodeId, NodeId), EdgeId>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NodeId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Returns the id of an existing record for the same pair, if any.
    pub fn existing(&self, tail: NodeId, head: NodeId) -> Option<EdgeId> {
        self.pair.get(&(tail, head)).copied()
    }

    pub fn edge(&mut self, tail: NodeId, head: NodeId, multiplicity: u32) -> EdgeId {
        assert!(multiplicity >= 1, "multiplicity must be positive");
        if let Some(&id) = self.pair.get(&(tail, head)) {
            self.edges[id.index()].multiplicity += multiplicity;
            return id;
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(EdgeRecord {
            tail,
            head,
            multiplicity,
        });
        self.pair.insert((tail, head), id);
        id
    }

    pub fn edge_by_name(&mut self, tail: &str, head: &str, multiplicity: u32) -> EdgeId {
        let t = self.node(tail);
        let h = self.node(head);
        self.edge(t, h, multiplicity)
    }

    pub fn build(self) -> Multigraph {
        Multigraph::from_parts(self.names, self.index, self.edges)
    }
}

impl Multigraph {
    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, NodeId>,
        edges: Vec<EdgeRecord>,
    ) -> Self {
        let n = names.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut copy_offset = Vec::with_capacity(edges.len() + 1);
        let mut m_total = 0u64;
        for (i, e) in edges.iter().enumerate() {
            out_adj[e.tail.index()].push(EdgeId(i as u32));
            in_adj[e.head.index()].push(EdgeId(i as u32));
            copy_offset.push(m_total as u32);
            m_total += u64::from(e.multiplicity);
        }
        copy_offset.push(m_total as u32);
        Self {
            names,
            index,
            edges,
            out_adj,
            in_adj,
            copy_offset,
            m_total,
        }
    }

    /// Builds a graph from `(tail, head, multiplicity)` triples over named nodes.
    pub fn from_named_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str, u32)>) -> Self {
        let mut b = GraphBuilder::new();
        for (t, h, k) in edges {
            b.edge_by_name(t, h, k);
        }
        b.build()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of multiplicities.
    pub fn m_total(&self) -> u64 {
        self.m_total
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.index()]
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_adj[v.index()]
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_adj[v.index()]
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len() as u32).map(NodeId)
    }

    /// Multiplicity-weighted out-degree.
    pub fn out_degree(&self, v: NodeId) -> u64 {
        self.out_adj[v.index()]
            .iter()
            .map(|&e| u64::from(self.edges[e.index()].multiplicity))
            .sum()
    }

    /// Multiplicity-weighted in-degree.
    pub fn in_degree(&self, v: NodeId) -> u64 {
        self.in_adj[v.index()]
            .iter()
            .map(|&e| u64::from(self.edges[e.index()].multiplicity))
            .sum()
    }

    pub fn is_isolated(&self, v: NodeId) -> bool {
        self.out_adj[v.index()].is_empty() && self.in_adj[v.index()].is_empty()
    }

    /// No self-loops and every multiplicity is one.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.multiplicity == 1 && !e.is_loop())
    }

    /// Copy ids belonging to record `e`.
    pub fn copies(&self, e: EdgeId) -> std::ops::Range<u32> {
        self.copy_offset[e.index()]..self.copy_offset[e.index() + 1]
    }

    /// The record a copy id belongs to.
    pub fn copy_owner(&self, copy: u32) -> EdgeId {
        let i = self.copy_offset.partition_point(|&o| o <= copy) - 1;
        EdgeId(i as u32)
    }
}

/// Builds a graph from an edge list that may contain duplicates, merging
/// identical `(tail, head)` pairs into one record whose multiplicity counts
/// them.
pub fn compact_multiplicities(names: &[&str], pairs: &[(usize, usize)]) -> Multigraph {
    let mut b = GraphBuilder::new();
    let ids: Vec<NodeId> = names.iter().map(|n| b.node(n)).collect();
    for &(t, h) in pairs {
        b.edge(ids[t], ids[h], 1);
    }
    b.build()
}

/// Parses the edge-list text format.
///
/// One edge per line, `<tail> <head> [multiplicity]`; `#` starts a comment.
/// Repeated pairs accumulate. In [`Mode::Simple`] self-loops and parallel
/// edges (repeats or multiplicity above one) are rejected.
pub fn parse_edge_list(text: &str, mode: Mode) -> Result<Multigraph> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Malformed {
                line,
                msg: format!("expected `<tail> <head> [multiplicity]`, got {} tokens", tokens.len()),
            });
        }
        let multiplicity = match tokens.get(2) {
            Some(tok) => tok.parse::<u32>().map_err(|_| Error::Malformed {
                line,
                msg: format!("invalid multiplicity `{tok}`"),
            })?,
            None => 1,
        };
        if multiplicity == 0 {
            return Err(Error::ZeroMultiplicity { line });
        }
        let t = b.node(tokens[0]);
        let h = b.node(tokens[1]);
        if mode == Mode::Simple {
            if t == h {
                return Err(Error::SelfLoop { line });
            }
            if multiplicity > 1 || b.existing(t, h).is_some() {
                return Err(Error::ParallelEdge { line });
            }
        }
        b.edge(t, h, multiplicity);
    }
    Ok(b.build())
}

/// Writes `g` in the edge-list format, one record per line in edge-id order.
pub fn write_edge_list(g: &Multigraph) -> String {
    let mut out = String::new();
    for e in &g.edges {
        let (t, h) = (g.name(e.tail), g.name(e.head));
        if e.multiplicity > 1 {
            let _ = writeln!(out, "{t} {h} {}", e.multiplicity);
        } else {
            let _ = writeln!(out, "{t} {h}");
        }
    }
    out
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_edge_list(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrailKind {
    Circuit,
    OpenTrail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerInfo {
    pub feasible: bool,
    pub kind: TrailKind,
    pub source: NodeId,
    /// Equals `source` for circuits.
    pub target: NodeId,
    pub reason: Option<String>,
}

impl EulerInfo {
    fn infeasible(reason: String) -> Self {
        Self {
            feasible: false,
            kind: TrailKind::Circuit,
            source: NodeId(0),
            target: NodeId(0),
            reason: Some(reason),
        }
    }

    /// Returns `self` if feasible, otherwise the diagnostic as an error.
    pub fn require(self) -> Result<Self> {
        if self.feasible {
            Ok(self)
        } else {
            Err(Error::Infeasible(self.reason.unwrap_or_default()))
        }
    }
}

/// Decides whether `g` has an Eulerian trail and picks its endpoints.
///
/// Degrees are multiplicity-weighted. For circuits the start defaults to the
/// lowest-id node with an incident edge; for open trails it is forced to the
/// node with out-surplus, and a different `requested_start` is an error.
pub fn check_eulerian(g: &Multigraph, requested_start: Option<NodeId>) -> Result<EulerInfo> {
    if g.m_total() == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(s) = requested_start {
        if s.index() >= g.node_count() {
            return Err(Error::UnknownNode(format!("#{}", s.0)));
        }
        if g.is_isolated(s) {
            return Err(Error::StartIsolated(g.name(s).to_owned()));
        }
    }
    let mut source = None;
    let mut target = None;
    for v in g.nodes() {
        let diff = g.out_degree(v) as i64 - g.in_degree(v) as i64;
        match diff {
            0 => {}
            1 if source.is_none() => source = Some(v),
            -1 if target.is_none() => target = Some(v),
            1 => {
                return Ok(EulerInfo::infeasible(format!(
                    "two nodes with out-surplus ({} and {})",
                    g.name(source.unwrap()),
                    g.name(v)
                )))
            }
            -1 => {
                return Ok(EulerInfo::infeasible(format!(
                    "two nodes with in-surplus ({} and {})",
                    g.name(target.unwrap()),
                    g.name(v)
                )))
            }
            d if d > 0 => {
                return Ok(EulerInfo::infeasible(format!(
                    "node {} has out-surplus {d}",
                    g.name(v)
                )))
            }
            d => {
                return Ok(EulerInfo::infeasible(format!(
                    "node {} has in-surplus {}",
                    g.name(v),
                    -d
                )))
            }
        }
    }
    if !weakly_connected(g) {
        return Ok(EulerInfo::infeasible(
            "graph is not weakly connected".to_owned(),
        ));
    }
    match (source, target) {
        (Some(s), Some(t)) => {
            if let Some(r) = requested_start {
                if r != s {
                    return Err(Error::StartConflict {
                        requested: g.name(r).to_owned(),
                        forced: g.name(s).to_owned(),
                    });
                }
            }
            Ok(EulerInfo {
                feasible: true,
                kind: TrailKind::OpenTrail,
                source: s,
                target: t,
                reason: None,
            })
        }
        (None, None) => {
            let s = requested_start
                .or_else(|| g.nodes().find(|&v| !g.is_isolated(v)))
                .expect("nonempty graph has a non-isolated node");
            Ok(EulerInfo {
                feasible: true,
                kind: TrailKind::Circuit,
                source: s,
                target: s,
                reason: None,
            })
        }
        // A single unbalanced node is impossible: surpluses sum to zero.
        _ => unreachable!("degree surpluses must cancel"),
    }
}

/// True iff the non-isolated nodes form one component of the underlying
/// undirected graph.
pub fn weakly_connected(g: &Multigraph) -> bool {
    let n = g.node_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = p;
        }
        x
    }
    for e in g.edges() {
        let a = find(&mut parent, e.tail.0);
        let b = find(&mut parent, e.head.0);
        if a != b {
            parent[a as usize] = b;
        }
    }
    let mut root = None;
    for v in g.nodes() {
        if g.is_isolated(v) {
            continue;
        }
        let r = find(&mut parent, v.0);
        match root {
            None => root = Some(r),
            Some(r0) if r0 != r => return false,
            _ => {}
        }
    }
    true
}

/// Result of [`subdivide`].
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: Multigraph,
    /// For every edge of `graph`, the copy id in the original graph it
    /// stands for. Copy `c` becomes edges `2c` (into the midpoint) and
    /// `2c + 1` (out of it).
    pub back_map: Vec<u32>,
}

/// Replaces every copy `u -> v` by `u -> x -> v` with a fresh midpoint `x`.
///
/// Original nodes keep their ids; the result is simple.
pub fn subdivide(g: &Multigraph) -> Subdivision {
    let mut b = GraphBuilder::new();
    for v in g.nodes() {
        b.node(g.name(v));
    }
    let mut back_map = Vec::with_capacity(2 * g.m_total() as usize);
    for (i, e) in g.edges().iter().enumerate() {
        for copy in g.copies(EdgeId(i as u32)) {
            // Midpoint names cannot clash with edge-list tokens: they contain whitespace.
            let x = b.node(&format!("{} {} #{copy}", g.name(e.tail), g.name(e.head)));
            b.edge(e.tail, x, 1);
            b.edge(x, e.head, 1);
            back_map.push(copy);
            back_map.push(copy);
        }
    }
    Subdivision {
        graph: b.build(),
        back_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(g: &Multigraph) -> Vec<&str> {
        g.names().iter().map(String::as_str).collect()
    }

    #[test]
    fn parses_triangle() {
        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().iter().all(|e| e.multiplicity == 1));
        assert_eq!(names(&g), ["a", "b", "c"]);
    }

    #[test]
    fn parses_explicit_multiplicity() {
        let g = parse_edge_list("a b 2\nb a 1", Mode::NodeDistinct).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(
            g.edges(),
            &[
                EdgeRecord { tail: NodeId(0), head: NodeId(1), multiplicity: 2 },
                EdgeRecord { tail: NodeId(1), head: NodeId(0), multiplicity: 1 },
            ]
        );
        assert_eq!(g.m_total(), 3);
        assert_eq!(g.copies(EdgeId(0)), 0..2);
        assert_eq!(g.copy_owner(2), EdgeId(1));
    }

    #[test]
    fn repeated_lines_accumulate() {
        let g = parse_edge_list("a b\na b\n", Mode::EdgeDistinct).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].multiplicity, 2);
    }

    #[test]
    fn simple_mode_rejects_parallel_edge() {
        let err = parse_edge_list("a b\na b", Mode::Simple).unwrap_err();
        assert_eq!(err.to_string(), "parallel edge at line 2");
        let err = parse_edge_list("a a", Mode::Simple).unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 1 }));
        let err = parse_edge_list("a b 3", Mode::Simple).unwrap_err();
        assert!(matches!(err, Error::ParallelEdge { line: 1 }));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_edge_list("a b\n\n# note\nc\n", Mode::Simple).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 4, .. }));
        let err = parse_edge_list("a b x", Mode::Simple).unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 1, .. }));
        let err = parse_edge_list("a b 0", Mode::NodeDistinct).unwrap_err();
        assert!(matches!(err, Error::ZeroMultiplicity { line: 1 }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\na b # trailing\n  b a\n", Mode::Simple).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn writer_round_trip() {
        let text = "a b 2\nb a\nb c\nc b\n";
        let g = parse_edge_list(text, Mode::NodeDistinct).unwrap();
        assert_eq!(write_edge_list(&g), text);
        let again = parse_edge_list(&write_edge_list(&g), Mode::NodeDistinct).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn euler_circuit_and_open_trail() {
        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        assert!(info.feasible);
        assert_eq!(info.kind, TrailKind::Circuit);
        assert_eq!(info.source, NodeId(0));

        let g = parse_edge_list("a b\nb c", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        assert_eq!(info.kind, TrailKind::OpenTrail);
        assert_eq!((g.name(info.source), g.name(info.target)), ("a", "c"));

        let g = parse_edge_list("a b\na c", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        assert!(!info.feasible);
        assert!(info.reason.is_some());
    }

    #[test]
    fn euler_start_errors() {
        let g = parse_edge_list("a b\nb c", Mode::Simple).unwrap();
        let err = check_eulerian(&g, Some(NodeId(1))).unwrap_err();
        assert!(matches!(err, Error::StartConflict { .. }));

        let empty = GraphBuilder::new().build();
        assert!(matches!(check_eulerian(&empty, None), Err(Error::EmptyGraph)));

        let mut b = GraphBuilder::new();
        b.edge_by_name("a", "b", 1);
        b.edge_by_name("b", "a", 1);
        let lonely = b.node("z");
        let g = b.build();
        assert!(matches!(
            check_eulerian(&g, Some(lonely)),
            Err(Error::StartIsolated(_))
        ));
        // Isolated nodes are otherwise ignored.
        assert!(check_eulerian(&g, None).unwrap().feasible);
    }

    #[test]
    fn requested_start_on_circuit() {
        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, Some(NodeId(2))).unwrap();
        assert_eq!((info.source, info.target), (NodeId(2), NodeId(2)));
    }

    #[test]
    fn weak_connectivity() {
        let tri = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        assert!(weakly_connected(&tri));
        let two = parse_edge_list("a b\nb a\nc d\nd c", Mode::Simple).unwrap();
        assert!(!weakly_connected(&two));
        assert!(!check_eulerian(&two, None).unwrap().feasible);
        let one = parse_edge_list("a b", Mode::Simple).unwrap();
        assert!(weakly_connected(&one));
    }

    #[test]
    fn subdivide_parallel_copies() {
        let g = parse_edge_list("a b 2\nb a", Mode::EdgeDistinct).unwrap();
        let s = subdivide(&g);
        assert_eq!(s.graph.node_count(), 5);
        assert_eq!(s.graph.edge_count(), 6);
        assert!(s.graph.is_simple());
        assert_eq!(s.back_map, [0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn subdivide_small_cases() {
        let g = parse_edge_list("a b", Mode::Simple).unwrap();
        let s = subdivide(&g);
        let e: Vec<_> = s.graph.edges().iter().map(|e| (e.tail.0, e.head.0)).collect();
        assert_eq!(e, [(0, 2), (2, 1)]);

        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        let s = subdivide(&g);
        assert_eq!((s.graph.node_count(), s.graph.edge_count()), (6, 6));
        assert!(check_eulerian(&s.graph, None).unwrap().feasible);
    }

    #[test]
    fn compaction() {
        let g = compact_multiplicities(&["a", "b"], &[(0, 1), (0, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges()[0].multiplicity, 2);
        assert_eq!(g.edges()[1].multiplicity, 1);

        let g = compact_multiplicities(&["a", "b"], &[(0, 1)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].multiplicity, 1);

        let g = compact_multiplicities(&["a"], &[(0, 0), (0, 0), (0, 0)]);
        assert_eq!(g.edge_count(), 1);
        assert!(g.edges()[0].is_loop());
        assert_eq!(g.edges()[0].multiplicity, 3);
    }
}
