//! The compressed state tree and its decoders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{self, Write};

use crate::compressed::NIL;
use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::label::{LabelArena, LabelId, LabelKind};
use crate::Mode;

/// How label leaves translate back to the input graph.
#[derive(Debug, Clone)]
pub(crate) enum LeafMap {
    /// Leaves are edge ids of a simple graph (equal to copy ids).
    Identity,
    /// Leaves are edges of the subdivided graph; `back_map[k]` is the copy.
    Halves(Vec<u32>),
    /// Leaves are record ids of a multigraph.
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrieFormat {
    /// One transition per line with its expanded edge list.
    Expanded,
    /// Label table plus transitions referencing it; size `O(m + z)`.
    Shared,
    Dot,
}

#[derive(Debug, Clone)]
struct State {
    children: Vec<u32>,
    leaf: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub parent: u32,
    pub child: u32,
    /// Compressed edge object chosen at `parent`.
    pub choice: u32,
    pub label: LabelId,
}

#[derive(Debug, Default)]
pub(crate) struct TreeBuilder {
    states: Vec<State>,
    transitions: Vec<Transition>,
    root: Option<u32>,
    preamble: Option<LabelId>,
}

impl TreeBuilder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add_state(&mut self, leaf: bool) -> u32 {
        self.states.push(State {
            children: Vec::new(),
            leaf,
        });
        (self.states.len() - 1) as u32
    }

    pub(crate) fn set_root(&mut self, state: u32, preamble: Option<LabelId>) {
        assert!(self.root.is_none(), "root set twice");
        self.root = Some(state);
        self.preamble = preamble;
    }

    pub(crate) fn add_transition(&mut self, parent: u32, child: u32, choice: u32, label: LabelId) {
        let id = self.transitions.len() as u32;
        self.transitions.push(Transition {
            parent,
            child,
            choice,
            label,
        });
        self.states[parent as usize].children.push(id);
    }

    pub(crate) fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub(crate) fn finish(
        self,
        mode: Mode,
        start: NodeId,
        leaf_map: LeafMap,
        labels: LabelArena,
        record_heads: Vec<u32>,
    ) -> StateTree {
        let mut tree = StateTree {
            mode,
            start,
            root: self.root.expect("tree without root"),
            preamble: self.preamble,
            states: self.states,
            transitions: self.transitions,
            labels,
            leaf_map,
            record_heads,
        };
        tree.sort_children();
        tree
    }
}

/// Compressed trie of Eulerian trails from a fixed start node.
///
/// Internal states are branching states; each transition carries the label
/// of the whole forced run up to the next branching state or leaf. The
/// optional preamble is the forced prefix shared by every trail.
#[derive(Debug, Clone)]
pub struct StateTree {
    mode: Mode,
    start: NodeId,
    root: u32,
    preamble: Option<LabelId>,
    states: Vec<State>,
    transitions: Vec<Transition>,
    labels: LabelArena,
    leaf_map: LeafMap,
    /// Node-distinct mode: head node of every record, for ordering.
    record_heads: Vec<u32>,
}

impl StateTree {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn preamble(&self) -> Option<LabelId> {
        self.preamble
    }

    pub fn labels(&self) -> &LabelArena {
        &self.labels
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_leaf(&self, state: u32) -> bool {
        self.states[state as usize].leaf
    }

    /// Outgoing transition ids of `state`, in canonical order.
    pub fn children(&self, state: u32) -> &[u32] {
        &self.states[state as usize].children
    }

    pub fn leaf_count(&self) -> u64 {
        self.states.iter().filter(|s| s.leaf).count() as u64
    }

    /// Every non-leaf state has at least two children. The root of a tree
    /// holding a single trail is the one allowed exception.
    pub fn internal_states_branch(&self) -> bool {
        let single = self.leaf_count() == 1 && self.transitions.len() == 1;
        self.states.iter().enumerate().all(|(i, s)| {
            s.leaf || s.children.len() >= 2 || (single && i as u32 == self.root)
        })
    }

    /// Leaf id translated to an emitted id, or `None` for the second half of
    /// a subdivided copy.
    fn map_leaf(&self, k: u32) -> Option<u32> {
        match &self.leaf_map {
            LeafMap::Identity | LeafMap::Records => Some(k),
            LeafMap::Halves(back) => (k % 2 == 0).then(|| back[k as usize]),
        }
    }

    /// Id printed in the shared label table.
    fn table_leaf(&self, k: u32) -> u32 {
        match &self.leaf_map {
            LeafMap::Identity | LeafMap::Records => k,
            LeafMap::Halves(back) => back[k as usize],
        }
    }

    fn push_label(&self, l: LabelId, buf: &mut Vec<u32>) {
        buf.extend(self.labels.leaves(l).filter_map(|k| self.map_leaf(k)));
    }

    fn sort_children(&mut self) {
        let mut states = std::mem::take(&mut self.states);
        for s in &mut states {
            if s.children.len() > 1 {
                s.children.sort_by(|&a, &b| self.compare(a, b));
            }
        }
        self.states = states;
    }

    fn compare(&self, a: u32, b: u32) -> Ordering {
        let (la, lb) = (
            self.transitions[a as usize].label,
            self.transitions[b as usize].label,
        );
        let key = |l: LabelId| self.table_leaf(self.labels.min(l));
        key(la).cmp(&key(lb)).then_with(|| match self.leaf_map {
            LeafMap::Records => {
                let heads = |l| self.labels.leaves(l).map(|r| self.record_heads[r as usize]);
                heads(la).cmp(heads(lb))
            }
            _ => self
                .labels
                .leaves(la)
                .filter_map(|k| self.map_leaf(k))
                .cmp(self.labels.leaves(lb).filter_map(|k| self.map_leaf(k))),
        })
    }

    /// Calls `f` with every trail in canonical depth-first order. Trails are
    /// copy ids, or node ids (start first) in node-distinct mode. Each trail
    /// is checked to be an Eulerian trail of `g` from the start node.
    pub fn visit_trails(&self, g: &Multigraph, mut f: impl FnMut(&[u32])) {
        let checker = TrailChecker::new(g, self.mode);
        let mut buf = Vec::new();
        let mut out = Vec::new();
        if let Some(p) = self.preamble {
            self.push_label(p, &mut buf);
        }
        let mut stack: Vec<(u32, usize, usize)> = vec![(self.root, 0, buf.len())];
        while let Some(top) = stack.last_mut() {
            let (state, next, len) = *top;
            let s = &self.states[state as usize];
            if s.leaf {
                let trail: &[u32] = if self.mode == Mode::NodeDistinct {
                    out.clear();
                    out.push(self.start.0);
                    out.extend(buf.iter().map(|&r| g.edge(EdgeId(r)).head.0));
                    &out
                } else {
                    &buf
                };
                checker.check(self.start, trail);
                f(trail);
                stack.pop();
                continue;
            }
            if next == s.children.len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let t = self.transitions[s.children[next] as usize];
            buf.truncate(len);
            self.push_label(t.label, &mut buf);
            stack.push((t.child, 0, buf.len()));
        }
    }

    pub fn trails(&self, g: &Multigraph) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        self.visit_trails(g, |t| out.push(t.to_vec()));
        out
    }

    /// Space-separated node names of a decoded trail.
    pub fn node_names(&self, g: &Multigraph, trail: &[u32]) -> String {
        let nodes: Vec<NodeId> = if self.mode == Mode::NodeDistinct {
            trail.iter().map(|&v| NodeId(v)).collect()
        } else {
            std::iter::once(self.start)
                .chain(trail.iter().map(|&c| g.edge(g.copy_owner(c)).head))
                .collect()
        };
        let names: Vec<&str> = nodes.iter().map(|&v| g.name(v)).collect();
        names.join(" ")
    }

    /// Space-separated `e<id>` tokens of a decoded trail. In node-distinct
    /// mode the ids are record ids.
    pub fn edge_tokens(&self, g: &Multigraph, trail: &[u32]) -> String {
        let ids: Vec<u32> = if self.mode == Mode::NodeDistinct {
            trail
                .windows(2)
                .map(|w| {
                    g.out_edges(NodeId(w[0]))
                        .iter()
                        .find(|&&e| g.edge(e).head == NodeId(w[1]))
                        .expect("consecutive nodes joined by a record")
                        .0
                })
                .collect()
        } else {
            trail.to_vec()
        };
        join_ids(&ids)
    }

    /// Canonical pre-order of states: `(state, depth, incoming transition)`.
    fn preorder(&self) -> Vec<(u32, usize, u32)> {
        let mut out = Vec::with_capacity(self.states.len());
        let mut stack = vec![(self.root, 0usize, NIL)];
        while let Some((s, d, via)) = stack.pop() {
            out.push((s, d, via));
            for &t in self.states[s as usize].children.iter().rev() {
                stack.push((self.transitions[t as usize].child, d + 1, t));
            }
        }
        out
    }

    fn expand_tokens(&self, l: LabelId) -> String {
        let mut buf = Vec::new();
        self.push_label(l, &mut buf);
        join_ids(&buf)
    }

    /// Label table for the shared format: reachable labels, children first.
    fn label_table(&self) -> (Vec<LabelId>, HashMap<LabelId, usize>) {
        let mut order = Vec::new();
        let mut index = HashMap::new();
        let roots = self
            .preamble
            .into_iter()
            .chain(self.transitions.iter().map(|t| t.label));
        for r in roots {
            // Post-order with an explicit stack; `true` marks a finished node.
            let mut stack = vec![(r, false)];
            while let Some((l, done)) = stack.pop() {
                if index.contains_key(&l) {
                    continue;
                }
                match (self.labels.kind(l), done) {
                    (LabelKind::Concat(a, b), false) => {
                        stack.push((l, true));
                        stack.push((b, false));
                        stack.push((a, false));
                    }
                    _ => {
                        index.insert(l, order.len());
                        order.push(l);
                    }
                }
            }
        }
        (order, index)
    }

    /// Number of lines the shared format emits.
    pub fn shared_entry_count(&self) -> usize {
        self.label_table().0.len() + self.transitions.len() + usize::from(self.preamble.is_some())
    }

    pub fn emit(&self, format: TrieFormat, w: &mut impl Write) -> io::Result<()> {
        match format {
            TrieFormat::Expanded => self.emit_expanded(w),
            TrieFormat::Shared => self.emit_shared(w),
            TrieFormat::Dot => self.emit_dot(w),
        }
    }

    pub fn emit_to_string(&self, format: TrieFormat) -> String {
        let mut out = Vec::new();
        self.emit(format, &mut out).expect("writing to memory");
        String::from_utf8(out).expect("emitted text is ASCII")
    }

    fn emit_expanded(&self, w: &mut impl Write) -> io::Result<()> {
        if let Some(p) = self.preamble {
            writeln!(w, "preamble [{}]", self.expand_tokens(p))?;
        }
        for (_, depth, via) in self.preorder().into_iter().skip(1) {
            let t = self.transitions[via as usize];
            writeln!(
                w,
                "{:indent$}-> [{}]",
                "",
                self.expand_tokens(t.label),
                indent = 2 * (depth - 1)
            )?;
        }
        Ok(())
    }

    fn emit_shared(&self, w: &mut impl Write) -> io::Result<()> {
        let (order, index) = self.label_table();
        for (k, &l) in order.iter().enumerate() {
            match self.labels.kind(l) {
                LabelKind::Leaf(e) => writeln!(w, "L {k} {}", self.table_leaf(e))?,
                LabelKind::Concat(a, b) => writeln!(w, "C {k} {} {}", index[&a], index[&b])?,
            }
        }
        if let Some(p) = self.preamble {
            writeln!(w, "P {}", index[&p])?;
        }
        let pre = self.preorder();
        let mut number = vec![0u32; self.states.len()];
        for (i, &(s, _, _)) in pre.iter().enumerate() {
            number[s as usize] = i as u32;
        }
        for &(s, _, via) in pre.iter().skip(1) {
            let t = self.transitions[via as usize];
            let leaf = if self.is_leaf(s) { " leaf" } else { "" };
            writeln!(
                w,
                "T {} {} {}{leaf}",
                number[t.parent as usize],
                number[s as usize],
                index[&t.label]
            )?;
        }
        Ok(())
    }

    fn emit_dot(&self, w: &mut impl Write) -> io::Result<()> {
        const SHOWN: usize = 8;
        writeln!(w, "digraph trie {{")?;
        writeln!(w, "  rankdir=LR;")?;
        let pre = self.preorder();
        let mut number = vec![0u32; self.states.len()];
        for (i, &(s, _, _)) in pre.iter().enumerate() {
            number[s as usize] = i as u32;
        }
        for &(s, _, via) in &pre {
            let shape = if self.is_leaf(s) { "doublecircle" } else { "circle" };
            writeln!(w, "  s{} [shape={shape}, label=\"\"];", number[s as usize])?;
            if via == NIL {
                continue;
            }
            let t = self.transitions[via as usize];
            let mut ids = Vec::new();
            self.push_label(t.label, &mut ids);
            let mut text = join_ids(&ids[..ids.len().min(SHOWN)]);
            if ids.len() > SHOWN {
                text.push_str(&format!(" ... ({} edges)", ids.len()));
            }
            writeln!(
                w,
                "  s{} -> s{} [label=\"{text}\"];",
                number[t.parent as usize],
                number[s as usize]
            )?;
        }
        writeln!(w, "}}")
    }
}

fn join_ids(ids: &[u32]) -> String {
    let mut s = String::with_capacity(ids.len() * 4);
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push('e');
        s.push_str(&id.to_string());
    }
    s
}

/// Checks decoded trails against the input graph.
struct TrailChecker<'a> {
    g: &'a Multigraph,
    mode: Mode,
    pairs: HashMap<(u32, u32), u32>,
}

impl<'a> TrailChecker<'a> {
    fn new(g: &'a Multigraph, mode: Mode) -> Self {
        let pairs = if mode == Mode::NodeDistinct {
            g.edges()
                .iter()
                .enumerate()
                .map(|(i, e)| ((e.tail.0, e.head.0), i as u32))
                .collect()
        } else {
            HashMap::new()
        };
        Self { g, mode, pairs }
    }

    fn check(&self, start: NodeId, trail: &[u32]) {
        let g = self.g;
        let m = g.m_total() as usize;
        if self.mode == Mode::NodeDistinct {
            assert_eq!(trail.len(), m + 1, "trail has wrong length");
            assert_eq!(trail[0], start.0, "trail does not start at the start node");
            let mut used = vec![0u32; g.edge_count()];
            for w in trail.windows(2) {
                let r = *self
                    .pairs
                    .get(&(w[0], w[1]))
                    .unwrap_or_else(|| panic!("no edge {} -> {}", w[0], w[1]));
                used[r as usize] += 1;
            }
            for (r, e) in g.edges().iter().enumerate() {
                assert_eq!(used[r], e.multiplicity, "record {r} used wrongly");
            }
        } else {
            assert_eq!(trail.len(), m, "trail has wrong length");
            let mut seen = vec![false; m];
            let mut at = start;
            for &c in trail {
                assert!(!std::mem::replace(&mut seen[c as usize], true), "copy {c} used twice");
                let e = g.edge(g.copy_owner(c));
                assert_eq!(e.tail, at, "trail is not contiguous at copy {c}");
                at = e.head;
            }
        }
    }
}
