//! Concatenation trees over edge ids.
//!
//! A label is an index into a [`LabelArena`]. Nodes are never mutated after
//! creation, so labels can be shared freely between compressed edges and
//! state-tree transitions; concatenation is O(1).

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Leaf(u32),
    Concat(LabelId, LabelId),
}

#[derive(Debug, Clone, Copy)]
struct LabelNode {
    kind: LabelKind,
    len: u64,
    first: u32,
    min: u32,
}

#[derive(Debug, Clone, Default)]
pub struct LabelArena {
    nodes: Vec<LabelNode>,
}

impl LabelArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, edge: u32) -> LabelId {
        self.push(LabelNode {
            kind: LabelKind::Leaf(edge),
            len: 1,
            first: edge,
            min: edge,
        })
    }

    pub fn concat(&mut self, left: LabelId, right: LabelId) -> LabelId {
        let (l, r) = (self.node(left), self.node(right));
        let node = LabelNode {
            kind: LabelKind::Concat(left, right),
            len: l.len + r.len,
            first: l.first,
            min: l.min.min(r.min),
        };
        self.push(node)
    }

    /// Left fold of `concat` over a nonempty sequence.
    pub fn concat_all(&mut self, labels: impl IntoIterator<Item = LabelId>) -> Option<LabelId> {
        let mut iter = labels.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, |acc, l| self.concat(acc, l)))
    }

    fn push(&mut self, node: LabelNode) -> LabelId {
        let id = LabelId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    fn node(&self, id: LabelId) -> &LabelNode {
        &self.nodes[id.0 as usize]
    }

    pub fn kind(&self, id: LabelId) -> LabelKind {
        self.node(id).kind
    }

    /// Number of edge ids in the expansion.
    pub fn len(&self, id: LabelId) -> u64 {
        self.node(id).len
    }

    pub fn first(&self, id: LabelId) -> u32 {
        self.node(id).first
    }

    pub fn min(&self, id: LabelId) -> u32 {
        self.node(id).min
    }

    /// Total nodes ever allocated.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self, id: LabelId) -> Leaves<'_> {
        Leaves {
            arena: self,
            stack: vec![id],
        }
    }

    pub fn expand(&self, id: LabelId) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len(id) as usize);
        self.expand_into(id, &mut out);
        out
    }

    pub fn expand_into(&self, id: LabelId, out: &mut Vec<u32>) {
        out.extend(self.leaves(id));
    }
}

/// Left-to-right leaf iterator; uses an explicit stack so deep left- or
/// right-leaning trees do not recurse.
#[derive(Debug, Clone)]
pub struct Leaves<'a> {
    arena: &'a LabelArena,
    stack: Vec<LabelId>,
}

impl Iterator for Leaves<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while let Some(id) = self.stack.pop() {
            match self.arena.kind(id) {
                LabelKind::Leaf(e) => return Some(e),
                LabelKind::Concat(l, r) => {
                    self.stack.push(r);
                    self.stack.push(l);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_expands_to_itself() {
        let mut a = LabelArena::new();
        let l = a.leaf(7);
        assert_eq!(a.expand(l), [7]);
        assert_eq!(a.len(l), 1);
    }

    #[test]
    fn nested_concat() {
        let mut a = LabelArena::new();
        let (e1, e2, e3) = (a.leaf(1), a.leaf(2), a.leaf(3));
        let right = a.concat(e2, e3);
        let all = a.concat(e1, right);
        assert_eq!(a.expand(all), [1, 2, 3]);
        assert_eq!(a.len(all), 3);
        assert_eq!(a.first(all), 1);
        assert_eq!(a.min(right), 2);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let mut a = LabelArena::new();
        let leaves: Vec<_> = (0..200_000).map(|i| a.leaf(i)).collect();
        let l = a.concat_all(leaves).unwrap();
        let e = a.expand(l);
        assert_eq!(e.len(), 200_000);
        assert!(e.iter().copied().eq(0..200_000));
    }

    #[test]
    fn sharing_is_structural() {
        let mut a = LabelArena::new();
        let x = a.leaf(4);
        let y = a.leaf(5);
        let xy = a.concat(x, y);
        let twice = a.concat(xy, xy);
        assert_eq!(a.expand(twice), [4, 5, 4, 5]);
        assert_eq!(a.node_count(), 4);
    }
}
