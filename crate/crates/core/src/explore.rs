//! Depth-first construction of the compressed state tree.
//!
//! Each round takes a pending branching state, rewinds the remaining graph to
//! it, completes a trail with Hierholzer's algorithm starting with an
//! unexplored alternative, and then replays that trail through
//! [`CompressedGraph::take_edge`] to find the branching states it passes.
//! Forced runs between two branching states become one transition.

use crate::compressed::{Checkpoint, CompressedGraph, CompressionMode, GraphSnapshot, NIL};
use crate::error::{Error, Result};
use crate::graph::{check_eulerian, subdivide, EulerInfo, Multigraph, NodeId};
use crate::label::LabelId;
use crate::tree::{LeafMap, StateTree, TreeBuilder};
use crate::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkStep {
    /// Edge object of the compressed graph the walk was computed on.
    pub edge: u32,
    pub tail: NodeId,
    pub head: NodeId,
    pub label: LabelId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkResult {
    pub steps: Vec<WalkStep>,
    pub start: NodeId,
    pub end: NodeId,
    pub is_closed: bool,
}

impl WalkResult {
    fn tails(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.tail.0).collect()
    }
}

/// Per-step crossing flags for a walk given by its tails and end node.
///
/// Step `i` is flagged iff it is a crossing of the graph formed by steps
/// `i..`: the last departure from its tail, unless that tail is the end node
/// (the walk comes back to it, so the edge stays inside one component).
pub fn crossing_flags(tails: &[u32], end: u32) -> Vec<bool> {
    let k = tails.len();
    let mut flags = vec![false; k];
    let mut seen = std::collections::HashSet::new();
    for i in (0..k).rev() {
        let v = tails[i];
        if seen.insert(v) && v != end {
            flags[i] = true;
        }
    }
    flags
}

pub fn mark_crossings(r: &WalkResult) -> Vec<bool> {
    crossing_flags(&r.tails(), r.end.0)
}

/// For every position `i`, the position of the out-edge of `tails[i]` that
/// is a crossing of the graph formed by steps `i..`, if there is one.
///
/// Only the last departure `j` from `v = tails[i]` can be such a crossing.
/// It is one iff `v` is not the end node and the rest of the walk after `j`
/// avoids every node on the closed walk `i..=j`; equivalently no node at a
/// position in `i..=j` occurs again after `j`. With `f(p)` the last
/// occurrence of `tails[p]`, that is: no `p` in `i+1..=f(i)` has
/// `f(p) > f(i)`, a next-greater-element query.
pub fn crossings_ahead(tails: &[u32], end: u32) -> Vec<Option<usize>> {
    let k = tails.len();
    let mut last = std::collections::HashMap::new();
    for (p, &v) in tails.iter().enumerate() {
        last.insert(v, p);
    }
    last.insert(end, k);
    let f: Vec<usize> = tails.iter().map(|v| last[v]).collect();
    crossing_positions(tails, end, &f)
}

fn crossing_positions(tails: &[u32], end: u32, f: &[usize]) -> Vec<Option<usize>> {
    let k = tails.len();
    let mut out = vec![None; k];
    let mut stack: Vec<usize> = Vec::new();
    for p in (0..k).rev() {
        while stack.last().is_some_and(|&q| f[q] <= f[p]) {
            stack.pop();
        }
        let nge = stack.last().copied().unwrap_or(usize::MAX);
        if tails[p] != end && nge > f[p] {
            out[p] = Some(f[p]);
        }
        stack.push(p);
    }
    out
}

/// Reusable Hierholzer state. Remaining multiplicities and adjacency cursors
/// are epoch-stamped so a walk never mutates the compressed graph and never
/// pays for clearing.
#[derive(Debug, Default)]
struct Walker {
    epoch: u32,
    edge_stamp: Vec<u32>,
    remaining: Vec<u32>,
    node_stamp: Vec<u32>,
    cursor: Vec<u32>,
    stack: Vec<(u32, u32)>,
    edges: Vec<u32>,
}

impl Walker {
    fn new(cg: &CompressedGraph) -> Self {
        Self {
            epoch: 0,
            edge_stamp: vec![0; cg.edge_slots()],
            remaining: vec![0; cg.edge_slots()],
            node_stamp: vec![0; cg.node_count()],
            cursor: vec![NIL; cg.node_count()],
            stack: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn rem(&mut self, cg: &CompressedGraph, e: u32) -> &mut u32 {
        let i = e as usize;
        if self.edge_stamp[i] != self.epoch {
            self.edge_stamp[i] = self.epoch;
            self.remaining[i] = cg.mult_raw(e);
        }
        &mut self.remaining[i]
    }

    fn next_unused(&mut self, cg: &CompressedGraph, v: u32) -> Option<u32> {
        let i = v as usize;
        if self.node_stamp[i] != self.epoch {
            self.node_stamp[i] = self.epoch;
            self.cursor[i] = cg.out_first_raw(v);
        }
        loop {
            let e = self.cursor[i];
            if e == NIL {
                return None;
            }
            if *self.rem(cg, e) > 0 {
                return Some(e);
            }
            self.cursor[i] = cg.out_next_raw(e);
        }
    }

    /// Eulerian trail of `cg` from its current node as edge objects, one
    /// entry per unit. The first edge taken from the start stays first.
    fn walk(&mut self, cg: &CompressedGraph, forced_first: Option<u32>) -> &[u32] {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.edge_stamp.fill(0);
            self.node_stamp.fill(0);
            self.epoch = 1;
        }
        self.stack.clear();
        self.edges.clear();
        let start = cg.current().0;
        self.stack.push((start, NIL));
        if let Some(e) = forced_first {
            let r = self.rem(cg, e);
            assert!(*r > 0, "forced edge {e} is not present");
            *r -= 1;
            self.stack.push((cg.head_raw(e), e));
        }
        while let Some(&(v, via)) = self.stack.last() {
            match self.next_unused(cg, v) {
                Some(e) => {
                    *self.rem(cg, e) -= 1;
                    self.stack.push((cg.head_raw(e), e));
                }
                None => {
                    self.stack.pop();
                    if via != NIL {
                        self.edges.push(via);
                    }
                }
            }
        }
        self.edges.reverse();
        assert_eq!(
            self.edges.len() as u64,
            cg.total_units(),
            "remaining graph has no Eulerian trail from the current node"
        );
        if let Some(f) = forced_first {
            assert_eq!(self.edges[0], f, "forced edge {f} is a crossing");
        }
        &self.edges
    }
}

/// Computes an Eulerian trail of the remaining graph from its current node,
/// starting with `forced_first` when given. `cg` is not modified.
pub fn hierholzer_complete(cg: &CompressedGraph, forced_first: Option<u32>) -> WalkResult {
    let mut w = Walker::new(cg);
    let edges = w.walk(cg, forced_first).to_vec();
    let start = cg.current();
    let mut tail = start;
    let steps: Vec<WalkStep> = edges
        .iter()
        .map(|&e| {
            let v = cg.edge(e);
            let s = WalkStep {
                edge: e,
                tail,
                head: v.head,
                label: v.label,
            };
            tail = v.head;
            s
        })
        .collect();
    let end = steps.last().map_or(start, |s| s.head);
    WalkResult {
        steps,
        start,
        end,
        is_closed: end == start,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepCounters {
    /// Edge units pushed by Hierholzer plus edges taken during replay.
    pub walker_steps: u64,
    pub journal_entries: u64,
    pub transitions: u64,
    pub leaves: u64,
    pub max_entries_per_take: u64,
}

impl StepCounters {
    pub fn work(&self) -> u64 {
        self.walker_steps + self.journal_entries
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    /// Stop after this many trails.
    pub max_trails: Option<u64>,
    pub start: Option<NodeId>,
    /// Checks compressed-graph invariants after every step (slow).
    pub validate: bool,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub tree: StateTree,
    pub info: EulerInfo,
    pub counters: StepCounters,
    /// The leaf cap stopped the search while alternatives were pending.
    pub cap_reached: bool,
    /// After the final rewind the graph equals its post-build state.
    pub restored: bool,
}

impl Enumeration {
    pub fn leaf_count(&self) -> u64 {
        self.tree.leaf_count()
    }

    /// Decoded trails: copy ids, or node ids in node-distinct mode.
    pub fn trails(&self, g: &Multigraph) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        self.tree.visit_trails(g, |t| out.push(t.to_vec()));
        out
    }

    /// Decoded trails as space-separated node names.
    pub fn trail_names(&self, g: &Multigraph) -> Vec<String> {
        let mut out = Vec::new();
        self.tree.visit_trails(g, |t| out.push(self.tree.node_names(g, t)));
        out
    }
}

struct BranchRecord {
    state: u32,
    checkpoint: Checkpoint,
    taken: u32,
    crossing: u32,
    /// Next out-list entry to consider as an alternative.
    cursor: u32,
}

struct Explorer {
    cg: CompressedGraph,
    walker: Walker,
    tree: TreeBuilder,
    records: Vec<BranchRecord>,
    validate: bool,
    walker_steps: u64,
    // Per-walk scratch.
    tails: Vec<u32>,
    starts: Vec<u64>,
    last_seen: Vec<usize>,
    last_occ: Vec<usize>,
    segment: Vec<LabelId>,
}

impl Explorer {
    /// Runs one walk from the current state. `parent` is the branching
    /// state the walk leaves through `first`, or `None` for the first walk.
    fn walk(&mut self, parent: Option<(u32, u32)>) {
        let edges = self.walker.walk(&self.cg, parent.map(|p| p.1)).to_vec();
        let k = edges.len();
        self.walker_steps += k as u64;

        self.tails.clear();
        self.starts.clear();
        let start = self.cg.current().0;
        let mut v = start;
        let mut offset = 0u64;
        for &e in &edges {
            self.tails.push(v);
            v = self.cg.head_raw(e);
            self.starts.push(offset);
            offset += self.cg.labels().len(self.cg.label_raw(e));
        }
        let end = v;
        for (p, &t) in self.tails.iter().enumerate() {
            self.last_seen[t as usize] = p;
        }
        self.last_seen[end as usize] = k;
        self.last_occ.clear();
        self.last_occ
            .extend(self.tails.iter().map(|&t| self.last_seen[t as usize]));
        let ahead = crossing_positions(&self.tails, end, &self.last_occ);

        let mut current_state = parent.map(|p| p.0);
        let mut choice = NIL;
        self.segment.clear();
        let mut pos = 0u64;
        let mut j = 0usize;
        while j < k {
            let c = self.cg.current().0;
            debug_assert_eq!(c, self.tails[j]);
            let mut o = edges[j];
            while self.cg.mult_raw(o) == 0 {
                o = self.cg.merged_into(o);
            }
            debug_assert_eq!(
                self.cg.labels().first(self.cg.label_raw(o)),
                self.cg.labels().first(self.cg.label_raw(edges[j])),
            );
            let at_parent = j == 0 && parent.is_some();
            if !at_parent {
                let objs = self.cg.out_objs_raw(c);
                let crossing = ahead[j].map(|q| edges[q]);
                let free = objs - u32::from(crossing.is_some());
                if free >= 2 {
                    let state = self.tree.add_state(false);
                    self.close_segment(&mut current_state, state, choice);
                    self.records.push(BranchRecord {
                        state,
                        checkpoint: self.cg.checkpoint(),
                        taken: o,
                        crossing: crossing.unwrap_or(NIL),
                        cursor: self.cg.out_first_raw(c),
                    });
                    choice = NIL;
                }
            }
            if choice == NIL {
                choice = o;
            }
            let (_, label) = self.cg.take_edge(o);
            self.walker_steps += 1;
            if self.validate {
                self.cg.assert_invariants();
            }
            self.segment.push(label);
            pos += self.cg.labels().len(label);
            while j < k && self.starts[j] < pos {
                j += 1;
            }
            assert!(j == k || self.starts[j] == pos, "replay left the computed trail");
        }
        let leaf = self.tree.add_state(true);
        if current_state.is_none() {
            // No branching anywhere: a single root-to-leaf transition.
            let root = self.tree.add_state(false);
            self.tree.set_root(root, None);
            current_state = Some(root);
        }
        self.close_segment(&mut current_state, leaf, choice);
    }

    /// Ends the running segment at `state`.
    fn close_segment(&mut self, current: &mut Option<u32>, state: u32, choice: u32) {
        let label = self.cg.labels_mut().concat_all(self.segment.drain(..));
        match *current {
            None => self.tree.set_root(state, label),
            Some(parent) => {
                let label = label.expect("transition with an empty label");
                self.tree.add_transition(parent, state, choice, label);
            }
        }
        *current = Some(state);
    }

    /// Picks the next alternative of the top record, rewinding first.
    fn next_alternative(&mut self) -> Option<(u32, u32)> {
        let rec = self.records.last_mut()?;
        let cp = rec.checkpoint;
        self.cg.rewind_to(cp);
        let rec = self.records.last_mut().unwrap();
        let skip = |e: u32| e == rec.taken || e == rec.crossing;
        while rec.cursor != NIL && skip(rec.cursor) {
            rec.cursor = self.cg.out_next_raw(rec.cursor);
        }
        let alt = rec.cursor;
        assert!(alt != NIL, "branching state without an alternative");
        rec.cursor = self.cg.out_next_raw(alt);
        while rec.cursor != NIL && skip(rec.cursor) {
            rec.cursor = self.cg.out_next_raw(rec.cursor);
        }
        let state = rec.state;
        if rec.cursor == NIL {
            self.records.pop();
        }
        Some((state, alt))
    }
}

/// Builds the compressed state tree of up to `max_trails` Eulerian trails.
///
/// `g` is the input as parsed: in [`Mode::Simple`] it must be simple; in
/// [`Mode::EdgeDistinct`] it is subdivided first; in
/// [`Mode::NodeDistinct`] its records are used with their multiplicities.
pub fn enumerate(g: &Multigraph, mode: Mode, opts: &EnumerateOptions) -> Result<Enumeration> {
    if opts.max_trails == Some(0) {
        return Err(Error::ZeroTrails);
    }
    let info = check_eulerian(g, opts.start)?.require()?;
    let (cg, leaf_map) = match mode {
        Mode::Simple => {
            if !g.is_simple() {
                return Err(Error::NotSimple);
            }
            let cg = CompressedGraph::build(g, &info, CompressionMode::Simple);
            (cg, LeafMap::Identity)
        }
        Mode::EdgeDistinct => {
            let sub = subdivide(g);
            let sinfo = check_eulerian(&sub.graph, Some(info.source))?.require()?;
            let cg = CompressedGraph::build(&sub.graph, &sinfo, CompressionMode::Simple);
            (cg, LeafMap::Halves(sub.back_map))
        }
        Mode::NodeDistinct => {
            let cg = CompressedGraph::build(g, &info, CompressionMode::NodeDistinct);
            (cg, LeafMap::Records)
        }
    };
    let record_heads = if mode == Mode::NodeDistinct {
        g.edges().iter().map(|e| e.head.0).collect()
    } else {
        Vec::new()
    };
    Ok(run(cg, mode, leaf_map, record_heads, info, opts))
}

fn run(
    cg: CompressedGraph,
    mode: Mode,
    leaf_map: LeafMap,
    record_heads: Vec<u32>,
    info: EulerInfo,
    opts: &EnumerateOptions,
) -> Enumeration {
    let build_mark = cg.checkpoint();
    let built: GraphSnapshot = cg.snapshot();
    let n = cg.node_count();
    let mut ex = Explorer {
        walker: Walker::new(&cg),
        cg,
        tree: TreeBuilder::new(),
        records: Vec::new(),
        validate: opts.validate,
        walker_steps: 0,
        tails: Vec::new(),
        starts: Vec::new(),
        last_seen: vec![0; n],
        last_occ: Vec::new(),
        segment: Vec::new(),
    };
    let cap = opts.max_trails.unwrap_or(u64::MAX);
    ex.walk(None);
    let mut leaves = 1u64;
    while leaves < cap {
        let Some(parent) = ex.next_alternative() else {
            break;
        };
        ex.walk(Some(parent));
        leaves += 1;
    }
    let cap_reached = !ex.records.is_empty();
    ex.cg.rewind_to(build_mark);
    let restored = ex.cg.snapshot() == built;
    let counters = StepCounters {
        walker_steps: ex.walker_steps,
        journal_entries: ex.cg.entries_pushed(),
        transitions: ex.tree.transition_count() as u64,
        leaves,
        max_entries_per_take: ex.cg.max_entries_per_take() as u64,
    };
    let labels = ex.cg.into_labels();
    let tree = ex.tree.finish(mode, info.source, leaf_map, labels, record_heads);
    Enumeration {
        tree,
        info,
        counters,
        cap_reached,
        restored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn run_all(text: &str, mode: Mode) -> (Multigraph, Enumeration) {
        let pm = if mode == Mode::Simple { Mode::Simple } else { Mode::NodeDistinct };
        let g = parse_edge_list(text, pm).unwrap();
        let e = enumerate(&g, mode, &EnumerateOptions { validate: true, ..Default::default() }).unwrap();
        (g, e)
    }

    #[test]
    fn flags_follow_last_departures() {
        // path a -> b -> c
        assert_eq!(crossing_flags(&[0, 1], 2), [true, true]);
        // 3-cycle: the end node is exempt
        assert_eq!(crossing_flags(&[0, 1, 2], 0), [false, true, true]);
        // two triangles at a
        assert_eq!(
            crossing_flags(&[0, 1, 2, 0, 3, 4], 0),
            [false, true, true, false, true, true]
        );
    }

    #[test]
    fn last_departure_is_not_always_a_crossing_earlier() {
        // c a c y a t: c -> y is flagged when taken but not at position 0.
        let tails = [0, 1, 0, 2, 1];
        assert_eq!(
            crossings_ahead(&tails, 3),
            [None, Some(4), Some(2), Some(3), Some(4)]
        );
    }

    #[test]
    fn hierholzer_on_compressed_triangle() {
        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let cg = CompressedGraph::build(&g, &info, CompressionMode::Simple);
        let r = hierholzer_complete(&cg, None);
        assert_eq!(r.steps.len(), 1);
        assert_eq!(cg.labels().len(r.steps[0].label), 3);
        assert!(r.is_closed);
    }

    #[test]
    fn hierholzer_respects_forced_first() {
        let g = parse_edge_list("a b\nb c\nc a\na d\nd e\ne a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let cg = CompressedGraph::build(&g, &info, CompressionMode::Simple);
        let second = cg.out_edges(NodeId(0)).nth(1).unwrap();
        let r = hierholzer_complete(&cg, Some(second));
        assert_eq!(r.steps.len(), 2);
        let seq: Vec<u32> = r.steps.iter().flat_map(|s| cg.labels().expand(s.label)).collect();
        assert_eq!(seq, [3, 4, 5, 0, 1, 2]);
    }

    #[test]
    fn path_walk_is_open() {
        let g = parse_edge_list("a b\nb c", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let cg = CompressedGraph::build(&g, &info, CompressionMode::Simple);
        let r = hierholzer_complete(&cg, None);
        assert_eq!(r.steps.len(), 1);
        assert!(!r.is_closed);
    }

    #[test]
    fn two_triangles() {
        let (g, e) = run_all("a b\nb c\nc a\na d\nd e\ne a", Mode::Simple);
        assert_eq!(e.trails(&g), [vec![0, 1, 2, 3, 4, 5], vec![3, 4, 5, 0, 1, 2]]);
        assert!(e.restored);
        assert!(!e.cap_reached);
    }

    #[test]
    fn missed_branch_counterexample() {
        let (g, e) = run_all("c a\na c\nc y\ny a\na t", Mode::Simple);
        assert_eq!(e.trails(&g), [vec![0, 1, 2, 3, 4], vec![2, 3, 1, 0, 4]]);
    }

    #[test]
    fn parallel_copy_modes() {
        let (g, e) = run_all("a b 2\nb a 1", Mode::EdgeDistinct);
        assert_eq!(e.leaf_count(), 2);
        assert_eq!(e.trails(&g), [vec![0, 2, 1], vec![1, 2, 0]]);
        let (g, e) = run_all("a b 2\nb a 1", Mode::NodeDistinct);
        assert_eq!(e.trail_names(&g), ["a b a b"]);
    }

    #[test]
    fn cap_limits_leaves() {
        let g = parse_edge_list("a b\nb c\nc a\na d\nd e\ne a", Mode::Simple).unwrap();
        let opts = EnumerateOptions { max_trails: Some(1), ..Default::default() };
        let e = enumerate(&g, Mode::Simple, &opts).unwrap();
        assert_eq!(e.leaf_count(), 1);
        assert!(e.cap_reached);
        let opts = EnumerateOptions { max_trails: Some(5), ..Default::default() };
        let g = parse_edge_list("a b\nb c\nc a", Mode::Simple).unwrap();
        let e = enumerate(&g, Mode::Simple, &opts).unwrap();
        assert_eq!(e.leaf_count(), 1);
        assert!(!e.cap_reached);
        assert!(matches!(
            enumerate(&g, Mode::Simple, &EnumerateOptions { max_trails: Some(0), ..Default::default() }),
            Err(Error::ZeroTrails)
        ));
    }

    #[test]
    fn simple_mode_rejects_multigraph() {
        let g = parse_edge_list("a b 2\nb a 2", Mode::NodeDistinct).unwrap();
        assert!(matches!(
            enumerate(&g, Mode::Simple, &EnumerateOptions::default()),
            Err(Error::NotSimple)
        ));
    }
}
