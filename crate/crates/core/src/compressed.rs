//! The compressed remaining graph.
//!
//! Holds the part of the input not yet used by the current trail prefix,
//! kept exhaustively compressed under two rules:
//!
//! * contraction: a node other than the current node and the target whose
//!   only out-edge object is a non-loop edge of multiplicity one is merged
//!   into that edge's head; its single in-edge absorbs the out-edge label;
//! * loop removal: a node with exactly one self-loop, exactly one other
//!   out-edge and exactly one other in-edge (no other in-edge if it is the
//!   current node), all of multiplicity one, drops the loop and prefixes the
//!   loop's label to the remaining out-edge.
//!
//! Every mutation is recorded in a journal so that DFS backtracking can
//! restore any earlier state exactly, including adjacency order.

use std::collections::VecDeque;

use crate::graph::{EulerInfo, Multigraph, NodeId};
use crate::label::{LabelArena, LabelId};

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressionMode {
    /// Every edge object has multiplicity one.
    Simple,
    /// Multiplicities are kept on edge objects; parallel objects are never merged.
    NodeDistinct,
}

/// Journal length marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Checkpoint(pub(crate) usize);

impl Checkpoint {
    pub fn position(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JournalEntry {
    /// One unit of a multi-edge was used; the object stays.
    MultiplicityDecrement { edge: u32, prev_current: u32 },
    /// The last unit of an edge object was used and the object unlinked.
    /// Its list neighbours are kept in the object itself.
    EdgeUnlinked { edge: u32, prev_current: u32 },
    /// `v` merged into `w`: `in_edge` now ends at `w` and carries
    /// `prev_label ++ label(out_edge)`; `out_edge` is gone.
    Contracted {
        v: u32,
        w: u32,
        in_edge: u32,
        out_edge: u32,
        prev_label: LabelId,
        formed_loop: bool,
    },
    /// The loop at `node` was removed and prefixed to `out_edge`.
    SelfLoopRemoved {
        node: u32,
        self_loop: u32,
        out_edge: u32,
        prev_label: LabelId,
    },
}

/// A rule application reported by [`CompressedGraph::fire_next`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFiring {
    Contracted { v: NodeId, into: NodeId },
    SelfLoopRemoved { at: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct EdgeObj {
    tail: u32,
    head: u32,
    label: LabelId,
    mult: u32,
    out_prev: u32,
    out_next: u32,
    in_prev: u32,
    in_next: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct NodeCounts {
    out_first: u32,
    in_first: u32,
    out_objs: u32,
    in_objs: u32,
    loops: u32,
    out_units: u64,
    in_units: u64,
}

/// Read-only view of one edge object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeView {
    pub id: u32,
    pub tail: NodeId,
    pub head: NodeId,
    pub label: LabelId,
    pub multiplicity: u32,
}

/// Complete observable state, for equality checks in tests and validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSnapshot {
    edges: Vec<EdgeObj>,
    nodes: Vec<NodeCounts>,
    current: u32,
    target: u32,
    journal_len: usize,
}

#[derive(Debug, Clone)]
pub struct CompressedGraph {
    mode: CompressionMode,
    edges: Vec<EdgeObj>,
    nodes: Vec<NodeCounts>,
    current: u32,
    target: u32,
    total_units: u64,
    labels: LabelArena,
    journal: Vec<JournalEntry>,
    merged_into: Vec<u32>,
    worklist: VecDeque<u32>,
    entries_pushed: u64,
    max_entries_per_take: usize,
}

impl CompressedGraph {
    /// Builds the remaining graph for the empty prefix without compressing.
    ///
    /// Edge object `i` is record `i` of `g`, labelled `Leaf(i)`.
    pub fn uncompressed(g: &Multigraph, info: &EulerInfo, mode: CompressionMode) -> Self {
        assert!(info.feasible, "compressed graph requires a feasible instance");
        if mode == CompressionMode::Simple {
            assert!(g.is_simple(), "simple mode requires a simple graph");
        }
        let n = g.node_count();
        let mut labels = LabelArena::new();
        let mut nodes = vec![
            NodeCounts {
                out_first: NIL,
                in_first: NIL,
                ..NodeCounts::default()
            };
            n
        ];
        let mut edges: Vec<EdgeObj> = Vec::with_capacity(g.edge_count());
        for (i, rec) in g.edges().iter().enumerate() {
            edges.push(EdgeObj {
                tail: rec.tail.0,
                head: rec.head.0,
                label: labels.leaf(i as u32),
                mult: rec.multiplicity,
                out_prev: NIL,
                out_next: NIL,
                in_prev: NIL,
                in_next: NIL,
            });
        }
        // Link in reverse so each list ends up in ascending id order.
        for i in (0..edges.len()).rev() {
            let e = edges[i];
            let id = i as u32;
            let t = &mut nodes[e.tail as usize];
            edges[i].out_next = t.out_first;
            if t.out_first != NIL {
                let f = t.out_first as usize;
                edges[f].out_prev = id;
            }
            t.out_first = id;
            t.out_objs += 1;
            t.out_units += u64::from(e.mult);
            if e.tail == e.head {
                t.loops += 1;
            }
            let h = &mut nodes[e.head as usize];
            edges[i].in_next = h.in_first;
            if h.in_first != NIL {
                let f = h.in_first as usize;
                edges[f].in_prev = id;
            }
            h.in_first = id;
            h.in_objs += 1;
            h.in_units += u64::from(e.mult);
        }
        let total_units = g.m_total();
        Self {
            mode,
            merged_into: vec![NIL; edges.len()],
            edges,
            nodes,
            current: info.source.0,
            target: info.target.0,
            total_units,
            labels,
            journal: Vec::new(),
            worklist: VecDeque::new(),
            entries_pushed: 0,
            max_entries_per_take: 0,
        }
    }

    /// Builds and exhaustively compresses. All firings are journaled.
    pub fn build(g: &Multigraph, info: &EulerInfo, mode: CompressionMode) -> Self {
        let mut cg = Self::uncompressed(g, info, mode);
        cg.compress_all();
        cg
    }

    /// Schedules every node for a rule check.
    pub fn schedule_all(&mut self) {
        self.worklist.extend(0..self.nodes.len() as u32);
    }

    pub fn compress_all(&mut self) {
        self.schedule_all();
        while self.fire_next().is_some() {}
    }

    pub fn mode(&self) -> CompressionMode {
        self.mode
    }

    pub fn current(&self) -> NodeId {
        NodeId(self.current)
    }

    pub fn target(&self) -> NodeId {
        NodeId(self.target)
    }

    /// Edge units (sum of object multiplicities) still present.
    pub fn total_units(&self) -> u64 {
        self.total_units
    }

    pub fn labels(&self) -> &LabelArena {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut LabelArena {
        &mut self.labels
    }

    pub fn into_labels(self) -> LabelArena {
        self.labels
    }

    pub fn journal(&self) -> &[JournalEntry] {
        &self.journal
    }

    pub fn entries_pushed(&self) -> u64 {
        self.entries_pushed
    }

    pub fn max_entries_per_take(&self) -> usize {
        self.max_entries_per_take
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn is_present(&self, e: u32) -> bool {
        self.edges[e as usize].mult > 0
    }

    pub fn edge(&self, e: u32) -> EdgeView {
        let o = &self.edges[e as usize];
        EdgeView {
            id: e,
            tail: NodeId(o.tail),
            head: NodeId(o.head),
            label: o.label,
            multiplicity: o.mult,
        }
    }

    pub(crate) fn head_raw(&self, e: u32) -> u32 {
        self.edges[e as usize].head
    }

    pub(crate) fn mult_raw(&self, e: u32) -> u32 {
        self.edges[e as usize].mult
    }

    pub(crate) fn label_raw(&self, e: u32) -> LabelId {
        self.edges[e as usize].label
    }

    pub(crate) fn out_first_raw(&self, v: u32) -> u32 {
        self.nodes[v as usize].out_first
    }

    pub(crate) fn out_next_raw(&self, e: u32) -> u32 {
        self.edges[e as usize].out_next
    }

    pub(crate) fn out_objs_raw(&self, v: u32) -> u32 {
        self.nodes[v as usize].out_objs
    }

    /// The object that absorbed `e` when `e` was removed by a rule.
    pub(crate) fn merged_into(&self, e: u32) -> u32 {
        self.merged_into[e as usize]
    }

    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = u32> + '_ {
        let mut cur = self.nodes[v.index()].out_first;
        std::iter::from_fn(move || {
            (cur != NIL).then(|| {
                let e = cur;
                cur = self.edges[e as usize].out_next;
                e
            })
        })
    }

    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = u32> + '_ {
        let mut cur = self.nodes[v.index()].in_first;
        std::iter::from_fn(move || {
            (cur != NIL).then(|| {
                let e = cur;
                cur = self.edges[e as usize].in_next;
                e
            })
        })
    }

    /// All present edge objects, in id order.
    pub fn present_edges(&self) -> impl Iterator<Item = EdgeView> + '_ {
        (0..self.edges.len() as u32)
            .filter(|&e| self.is_present(e))
            .map(|e| self.edge(e))
    }

    pub fn out_object_count(&self, v: NodeId) -> u32 {
        self.nodes[v.index()].out_objs
    }

    pub fn in_object_count(&self, v: NodeId) -> u32 {
        self.nodes[v.index()].in_objs
    }

    pub fn out_units(&self, v: NodeId) -> u64 {
        self.nodes[v.index()].out_units
    }

    pub fn in_units(&self, v: NodeId) -> u64 {
        self.nodes[v.index()].in_units
    }

    pub fn loop_count(&self, v: NodeId) -> u32 {
        self.nodes[v.index()].loops
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.journal.len())
    }

    pub fn snapshot(&self) -> GraphSnapshot {
        GraphSnapshot {
            edges: self.edges.clone(),
            nodes: self.nodes.clone(),
            current: self.current,
            target: self.target,
            journal_len: self.journal.len(),
        }
    }

    fn push(&mut self, entry: JournalEntry) {
        self.journal.push(entry);
        self.entries_pushed += 1;
    }

    // --- intrusive list primitives -------------------------------------
    //
    // Unlinking keeps the object's own prev/next, so undoing in LIFO order
    // can relink it in place.

    fn unlink_out(&mut self, e: u32) {
        let EdgeObj {
            tail,
            out_prev,
            out_next,
            ..
        } = self.edges[e as usize];
        if out_prev != NIL {
            self.edges[out_prev as usize].out_next = out_next;
        } else {
            self.nodes[tail as usize].out_first = out_next;
        }
        if out_next != NIL {
            self.edges[out_next as usize].out_prev = out_prev;
        }
    }

    fn relink_out(&mut self, e: u32) {
        let EdgeObj {
            tail,
            out_prev,
            out_next,
            ..
        } = self.edges[e as usize];
        if out_prev != NIL {
            self.edges[out_prev as usize].out_next = e;
        } else {
            self.nodes[tail as usize].out_first = e;
        }
        if out_next != NIL {
            self.edges[out_next as usize].out_prev = e;
        }
    }

    fn unlink_in(&mut self, e: u32) {
        let EdgeObj {
            head,
            in_prev,
            in_next,
            ..
        } = self.edges[e as usize];
        if in_prev != NIL {
            self.edges[in_prev as usize].in_next = in_next;
        } else {
            self.nodes[head as usize].in_first = in_next;
        }
        if in_next != NIL {
            self.edges[in_next as usize].in_prev = in_prev;
        }
    }

    fn relink_in(&mut self, e: u32) {
        let EdgeObj {
            head,
            in_prev,
            in_next,
            ..
        } = self.edges[e as usize];
        if in_prev != NIL {
            self.edges[in_prev as usize].in_next = e;
        } else {
            self.nodes[head as usize].in_first = e;
        }
        if in_next != NIL {
            self.edges[in_next as usize].in_prev = e;
        }
    }

    /// Makes `new` occupy `old`'s slot in the in-list of `old`'s head.
    fn replace_in_slot(&mut self, old: u32, new: u32) {
        let EdgeObj {
            head,
            in_prev,
            in_next,
            ..
        } = self.edges[old as usize];
        {
            let n = &mut self.edges[new as usize];
            n.in_prev = in_prev;
            n.in_next = in_next;
        }
        if in_prev != NIL {
            self.edges[in_prev as usize].in_next = new;
        } else {
            self.nodes[head as usize].in_first = new;
        }
        if in_next != NIL {
            self.edges[in_next as usize].in_prev = new;
        }
    }

    fn detach_counts(&mut self, e: u32) {
        let EdgeObj {
            tail, head, mult, ..
        } = self.edges[e as usize];
        let t = &mut self.nodes[tail as usize];
        t.out_objs -= 1;
        t.out_units -= u64::from(mult);
        if tail == head {
            t.loops -= 1;
        }
        let h = &mut self.nodes[head as usize];
        h.in_objs -= 1;
        h.in_units -= u64::from(mult);
        self.total_units -= u64::from(mult);
    }

    fn attach_counts(&mut self, e: u32) {
        let EdgeObj {
            tail, head, mult, ..
        } = self.edges[e as usize];
        let t = &mut self.nodes[tail as usize];
        t.out_objs += 1;
        t.out_units += u64::from(mult);
        if tail == head {
            t.loops += 1;
        }
        let h = &mut self.nodes[head as usize];
        h.in_objs += 1;
        h.in_units += u64::from(mult);
        self.total_units += u64::from(mult);
    }

    // --- edge removal ---------------------------------------------------

    /// Uses one unit of `e`, which must leave the current node, and moves
    /// the current node to its head. No compression is performed; the
    /// endpoints are scheduled for [`fire_next`](Self::fire_next).
    pub fn remove_unit(&mut self, e: u32) -> LabelId {
        let obj = self.edges[e as usize];
        assert!(obj.mult > 0, "edge object {e} is not present");
        assert_eq!(obj.tail, self.current, "edge {e} does not leave the current node");
        let prev_current = self.current;
        if obj.mult > 1 {
            self.edges[e as usize].mult -= 1;
            self.nodes[obj.tail as usize].out_units -= 1;
            self.nodes[obj.head as usize].in_units -= 1;
            self.total_units -= 1;
            self.push(JournalEntry::MultiplicityDecrement {
                edge: e,
                prev_current,
            });
        } else {
            self.unlink_out(e);
            self.unlink_in(e);
            self.detach_counts(e);
            self.edges[e as usize].mult = 0;
            self.push(JournalEntry::EdgeUnlinked {
                edge: e,
                prev_current,
            });
        }
        self.current = obj.head;
        self.worklist.push_back(obj.tail);
        self.worklist.push_back(obj.head);
        obj.label
    }

    /// Removes one unit of `e` and restores exhaustive compression.
    /// Returns the checkpoint preceding the removal and the used label.
    pub fn take_edge(&mut self, e: u32) -> (Checkpoint, LabelId) {
        let cp = self.checkpoint();
        let label = self.remove_unit(e);
        while self.fire_next().is_some() {}
        let entries = self.journal.len() - cp.0;
        self.max_entries_per_take = self.max_entries_per_take.max(entries);
        (cp, label)
    }

    /// Applies the next applicable rule among scheduled nodes, if any.
    pub fn fire_next(&mut self) -> Option<RuleFiring> {
        while let Some(v) = self.worklist.pop_front() {
            if let Some(w) = self.try_contract(v) {
                self.worklist.push_back(w);
                return Some(RuleFiring::Contracted {
                    v: NodeId(v),
                    into: NodeId(w),
                });
            }
            if self.try_remove_loop(v) {
                self.worklist.push_back(v);
                return Some(RuleFiring::SelfLoopRemoved { at: NodeId(v) });
            }
        }
        None
    }

    pub fn has_pending(&self) -> bool {
        !self.worklist.is_empty()
    }

    // --- contraction ----------------------------------------------------

    /// The single out-edge of `v` if contraction applies at `v`.
    pub fn contraction_applicable(&self, v: NodeId) -> Option<u32> {
        let v = v.0;
        if v == self.current || v == self.target {
            return None;
        }
        let n = &self.nodes[v as usize];
        if n.out_objs != 1 {
            return None;
        }
        let e = n.out_first;
        let obj = &self.edges[e as usize];
        (obj.head != v && obj.mult == 1).then_some(e)
    }

    fn try_contract(&mut self, v: u32) -> Option<u32> {
        let e = self.contraction_applicable(NodeId(v))?;
        let w = self.edges[e as usize].head;
        // v is balanced and has one out-unit, so exactly one in-unit.
        let node = self.nodes[v as usize];
        assert!(
            node.in_objs == 1 && node.in_units == 1,
            "contraction at node {v} with {} in-edge objects",
            node.in_objs
        );
        let f = node.in_first;
        let prev_label = self.edges[f as usize].label;
        let formed_loop = self.edges[f as usize].tail == w;

        self.unlink_out(e);
        self.replace_in_slot(e, f);
        {
            let nv = &mut self.nodes[v as usize];
            nv.in_first = NIL;
            nv.out_objs = 0;
            nv.in_objs = 0;
            nv.out_units = 0;
            nv.in_units = 0;
        }
        let e_label = self.edges[e as usize].label;
        let merged = self.labels.concat(prev_label, e_label);
        {
            let fo = &mut self.edges[f as usize];
            fo.head = w;
            fo.label = merged;
        }
        self.edges[e as usize].mult = 0;
        self.total_units -= 1;
        if formed_loop {
            self.nodes[w as usize].loops += 1;
        }
        self.merged_into[e as usize] = f;
        self.push(JournalEntry::Contracted {
            v,
            w,
            in_edge: f,
            out_edge: e,
            prev_label,
            formed_loop,
        });
        Some(w)
    }

    /// Public form of a single contraction at `v`.
    pub fn rule1_fire(&mut self, v: NodeId) -> Option<JournalEntry> {
        self.try_contract(v.0).map(|_| *self.journal.last().unwrap())
    }

    // --- self-loop removal ----------------------------------------------

    /// `(loop, other out-edge)` if loop removal applies at `v`.
    pub fn loop_removal_applicable(&self, v: NodeId) -> Option<(u32, u32)> {
        let vi = v.0;
        let n = &self.nodes[v.index()];
        if n.loops != 1 || n.out_objs != 2 {
            return None;
        }
        let is_current = vi == self.current;
        if !is_current && vi == self.target {
            return None;
        }
        let wanted_in = if is_current { 1 } else { 2 };
        if n.in_objs != wanted_in {
            return None;
        }
        let a = n.out_first;
        let b = self.edges[a as usize].out_next;
        let (lp, other) = if self.edges[a as usize].head == vi {
            (a, b)
        } else {
            (b, a)
        };
        if self.edges[lp as usize].mult != 1 || self.edges[other as usize].mult != 1 {
            return None;
        }
        if !is_current {
            let other_in = self
                .in_edges(v)
                .find(|&e| e != lp)
                .expect("non-current node has another in-edge");
            if self.edges[other_in as usize].mult != 1 {
                return None;
            }
        }
        Some((lp, other))
    }

    fn try_remove_loop(&mut self, v: u32) -> bool {
        let Some((lp, o)) = self.loop_removal_applicable(NodeId(v)) else {
            return false;
        };
        self.unlink_out(lp);
        self.unlink_in(lp);
        self.detach_counts(lp);
        self.edges[lp as usize].mult = 0;
        let prev_label = self.edges[o as usize].label;
        let loop_label = self.edges[lp as usize].label;
        self.edges[o as usize].label = self.labels.concat(loop_label, prev_label);
        self.merged_into[lp as usize] = o;
        self.push(JournalEntry::SelfLoopRemoved {
            node: v,
            self_loop: lp,
            out_edge: o,
            prev_label,
        });
        true
    }

    /// Public form of a single loop removal at `v`.
    pub fn rule2_fire(&mut self, v: NodeId) -> Option<JournalEntry> {
        self.try_remove_loop(v.0)
            .then(|| *self.journal.last().unwrap())
    }

    // --- undo -----------------------------------------------------------

    /// Undoes journal entries until the journal is back at `cp`.
    pub fn rewind_to(&mut self, cp: Checkpoint) {
        assert!(
            cp.0 <= self.journal.len(),
            "stale checkpoint {} (journal length {})",
            cp.0,
            self.journal.len()
        );
        self.worklist.clear();
        while self.journal.len() > cp.0 {
            let entry = self.journal.pop().unwrap();
            self.undo(entry);
        }
    }

    fn undo(&mut self, entry: JournalEntry) {
        match entry {
            JournalEntry::MultiplicityDecrement { edge, prev_current } => {
                let EdgeObj { tail, head, .. } = self.edges[edge as usize];
                self.edges[edge as usize].mult += 1;
                self.nodes[tail as usize].out_units += 1;
                self.nodes[head as usize].in_units += 1;
                self.total_units += 1;
                self.current = prev_current;
            }
            JournalEntry::EdgeUnlinked { edge, prev_current } => {
                self.edges[edge as usize].mult = 1;
                self.attach_counts(edge);
                self.relink_in(edge);
                self.relink_out(edge);
                self.current = prev_current;
            }
            JournalEntry::Contracted {
                v,
                w,
                in_edge: f,
                out_edge: e,
                prev_label,
                formed_loop,
            } => {
                if formed_loop {
                    self.nodes[w as usize].loops -= 1;
                }
                self.total_units += 1;
                self.edges[e as usize].mult = 1;
                // Put e back into f's slot in w's in-list; e kept its pointers.
                self.relink_in(e);
                {
                    let fo = &mut self.edges[f as usize];
                    fo.head = v;
                    fo.label = prev_label;
                    fo.in_prev = NIL;
                    fo.in_next = NIL;
                }
                self.relink_out(e);
                let nv = &mut self.nodes[v as usize];
                nv.in_first = f;
                nv.out_objs = 1;
                nv.in_objs = 1;
                nv.out_units = 1;
                nv.in_units = 1;
            }
            JournalEntry::SelfLoopRemoved {
                self_loop,
                out_edge,
                prev_label,
                ..
            } => {
                self.edges[out_edge as usize].label = prev_label;
                self.edges[self_loop as usize].mult = 1;
                self.attach_counts(self_loop);
                self.relink_in(self_loop);
                self.relink_out(self_loop);
            }
        }
    }

    /// Checks list/counter consistency, degree balance, and that no rule is
    /// applicable once the worklist is drained. Panics on the first violation.
    pub fn assert_invariants(&self) {
        self.assert_consistent();
        if !self.has_pending() {
            for v in 0..self.nodes.len() as u32 {
                assert!(
                    self.contraction_applicable(NodeId(v)).is_none(),
                    "contraction still applicable at {v}"
                );
                assert!(
                    self.loop_removal_applicable(NodeId(v)).is_none(),
                    "loop removal still applicable at {v}"
                );
            }
        }
    }

    /// Checks list/counter consistency and degree balance only.
    pub fn assert_consistent(&self) {
        let mut total = 0u64;
        for v in 0..self.nodes.len() as u32 {
            let n = &self.nodes[v as usize];
            let (out_objs, out_units, loops) = self.out_edges(NodeId(v)).fold((0, 0, 0), |acc, e| {
                let o = &self.edges[e as usize];
                assert_eq!(o.tail, v, "edge {e} in wrong out-list");
                (acc.0 + 1, acc.1 + u64::from(o.mult), acc.2 + u32::from(o.head == v))
            });
            let (in_objs, in_units) = self.in_edges(NodeId(v)).fold((0, 0), |acc, e| {
                let o = &self.edges[e as usize];
                assert_eq!(o.head, v, "edge {e} in wrong in-list");
                (acc.0 + 1, acc.1 + u64::from(o.mult))
            });
            assert_eq!(
                (n.out_objs, n.out_units, n.loops, n.in_objs, n.in_units),
                (out_objs, out_units, loops, in_objs, in_units),
                "counters out of sync at node {v}"
            );
            total += out_units;
            let surplus = out_units as i64 - in_units as i64;
            let expected = match (v == self.current, v == self.target) {
                (true, true) | (false, false) => 0,
                (true, false) => 1,
                (false, true) => -1,
            };
            if out_units + in_units > 0 || v == self.current {
                assert_eq!(surplus, expected, "degree imbalance at node {v}");
            }
        }
        assert_eq!(total, self.total_units, "unit total out of sync");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_eulerian, parse_edge_list};
    use crate::Mode;

    fn build(text: &str, mode: CompressionMode) -> (Multigraph, CompressedGraph) {
        let pm = match mode {
            CompressionMode::Simple => Mode::Simple,
            CompressionMode::NodeDistinct => Mode::NodeDistinct,
        };
        let g = parse_edge_list(text, pm).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let cg = CompressedGraph::build(&g, &info, mode);
        (g, cg)
    }

    fn loops_at(cg: &CompressedGraph, v: u32) -> Vec<Vec<u32>> {
        cg.out_edges(NodeId(v))
            .filter(|&e| cg.edge(e).head == NodeId(v))
            .map(|e| cg.labels().expand(cg.edge(e).label))
            .collect()
    }

    #[test]
    fn triangle_collapses_to_one_loop() {
        let (_, cg) = build("a b\nb c\nc a", CompressionMode::Simple);
        cg.assert_invariants();
        assert_eq!(cg.present_edges().count(), 1);
        assert_eq!(loops_at(&cg, 0), vec![vec![0, 1, 2]]);
        assert_eq!(cg.journal().len(), 2);
    }

    #[test]
    fn two_triangles_give_two_loops() {
        let (_, cg) = build("a b\nb c\nc a\na d\nd e\ne a", CompressionMode::Simple);
        cg.assert_invariants();
        assert_eq!(loops_at(&cg, 0), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn high_out_degree_graph_is_unchanged() {
        // Complete digraph on three nodes: every out-degree is two.
        let (_, cg) = build("a b\nb a\nb c\nc b\na c\nc a", CompressionMode::Simple);
        assert!(cg.journal().is_empty());
        assert_eq!(cg.present_edges().count(), 6);
    }

    #[test]
    fn contraction_of_chain_node() {
        // b has one out-edge; a is current and keeps its out-edge.
        let g = parse_edge_list("a b\nb c\nc a\nc d\nd c", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::Simple);
        let before = cg.snapshot();
        let entry = cg.rule1_fire(NodeId(1)).unwrap();
        assert!(matches!(entry, JournalEntry::Contracted { v: 1, w: 2, .. }));
        let ac = cg.edge(0);
        assert_eq!((ac.tail, ac.head), (NodeId(0), NodeId(2)));
        assert_eq!(cg.labels().expand(ac.label), [0, 1]);
        cg.rewind_to(Checkpoint(0));
        assert_eq!(cg.snapshot(), before);
    }

    #[test]
    fn contraction_forms_loop_when_both_directions_exist() {
        let g = parse_edge_list("a b\nb a\na c\nc a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::Simple);
        let before = cg.snapshot();
        cg.rule1_fire(NodeId(1)).unwrap();
        assert_eq!(loops_at(&cg, 0), vec![vec![0, 1]]);
        assert_eq!(cg.loop_count(NodeId(0)), 1);
        cg.rewind_to(Checkpoint(0));
        assert_eq!(cg.snapshot(), before);
    }

    #[test]
    fn loop_removal_prefixes_out_edge() {
        // u -> v, v -> v, v -> w, w -> u. v has one loop, one other out and in.
        let g = parse_edge_list("u v\nv v\nv w\nw u", Mode::NodeDistinct).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::NodeDistinct);
        let before = cg.snapshot();
        let entry = cg.rule2_fire(NodeId(1)).unwrap();
        assert!(matches!(entry, JournalEntry::SelfLoopRemoved { node: 1, self_loop: 1, out_edge: 2, .. }));
        assert_eq!(cg.labels().expand(cg.edge(2).label), [1, 2]);
        cg.rewind_to(Checkpoint(0));
        assert_eq!(cg.snapshot(), before);
    }

    #[test]
    fn loop_removal_at_current_needs_no_in_edge() {
        // Open trail from v: loop then v -> w.
        let g = parse_edge_list("v v\nv w", Mode::NodeDistinct).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::NodeDistinct);
        assert!(cg.rule2_fire(NodeId(0)).is_some());
        assert_eq!(cg.labels().expand(cg.edge(1).label), [0, 1]);
    }

    #[test]
    fn two_loops_block_loop_removal() {
        let g = parse_edge_list("u v\nv v 2\nv w\nw u", Mode::NodeDistinct).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::NodeDistinct);
        assert!(cg.rule2_fire(NodeId(1)).is_none());
        let g = parse_edge_list("u v\nv x\nx v\nv v\nv w\nw u", Mode::NodeDistinct).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::NodeDistinct);
        // x -> v makes a second other in-edge.
        assert!(cg.rule2_fire(NodeId(1)).is_none());
    }

    #[test]
    fn take_and_rewind_restores_exactly() {
        let (_, mut cg) = build(
            "a b\nb a\nb c\nc b\na c\nc a\nc d\nd a\na d\nd c",
            CompressionMode::Simple,
        );
        let start = cg.snapshot();
        let mut cps = Vec::new();
        let mut states = Vec::new();
        for _ in 0..4 {
            let cur = cg.current();
            let e = cg.out_edges(cur).next().unwrap();
            states.push(cg.snapshot());
            let (cp, _) = cg.take_edge(e);
            cg.assert_invariants();
            cps.push(cp);
        }
        while let Some(cp) = cps.pop() {
            cg.rewind_to(cp);
            assert_eq!(cg.snapshot(), states.pop().unwrap());
        }
        assert_eq!(cg.snapshot(), start);
        let cp = cg.checkpoint();
        cg.rewind_to(cp);
        assert_eq!(cg.snapshot(), start);
    }

    #[test]
    fn multiplicity_decrement_keeps_object() {
        let (_, mut cg) = build("a b 2\nb a 2\na c\nc a", CompressionMode::NodeDistinct);
        let before = cg.snapshot();
        let ab = cg.out_edges(NodeId(0)).find(|&e| cg.edge(e).head == NodeId(1)).unwrap();
        let (cp, label) = cg.take_edge(ab);
        assert_eq!(cg.labels().expand(label), [0]);
        assert!(cg.is_present(ab));
        assert_eq!(cg.edge(ab).multiplicity, 1);
        cg.assert_invariants();
        cg.rewind_to(cp);
        assert_eq!(cg.snapshot(), before);
    }

    #[test]
    #[should_panic(expected = "stale checkpoint")]
    fn stale_checkpoint_panics() {
        let (_, mut cg) = build("a b\nb a\na c\nc a", CompressionMode::Simple);
        cg.rewind_to(Checkpoint(cg.journal().len() + 1));
    }

    #[test]
    #[should_panic(expected = "does not leave the current node")]
    fn taking_foreign_edge_panics() {
        let g = parse_edge_list("a b\nb c\nc a\na c\nc b\nb a", Mode::Simple).unwrap();
        let info = check_eulerian(&g, None).unwrap();
        let mut cg = CompressedGraph::build(&g, &info, CompressionMode::Simple);
        let foreign = cg
            .present_edges()
            .find(|e| e.tail != cg.current())
            .unwrap()
            .id;
        cg.take_edge(foreign);
    }
}
