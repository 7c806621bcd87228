//! Strongly connected components and crossings. Used only as a validation
//! oracle; the enumeration engine never computes SCCs.

use crate::graph::{EdgeId, Multigraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub component_of: Vec<u32>,
    pub component_count: u32,
}

impl SccPartition {
    pub fn same(&self, a: NodeId, b: NodeId) -> bool {
        self.component_of[a.index()] == self.component_of[b.index()]
    }
}

/// Iterative Tarjan over `n` nodes and the given directed edges.
pub fn scc_of_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> SccPartition {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (t, h) in edges {
        adj[t as usize].push(h);
    }
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut count = 0u32;
    let mut next_index = 0u32;
    // (node, position in its adjacency list)
    let mut call: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&(v, pos)) = call.last() {
            let vi = v as usize;
            if pos < adj[vi].len() {
                let w = adj[vi][pos];
                call.last_mut().unwrap().1 += 1;
                let wi = w as usize;
                if index[wi] == UNSEEN {
                    index[wi] = next_index;
                    low[wi] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[wi] = true;
                    call.push((w, 0));
                } else if on_stack[wi] {
                    low[vi] = low[vi].min(index[wi]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let pi = parent as usize;
                low[pi] = low[pi].min(low[vi]);
            }
            if low[vi] == index[vi] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    component_of[w as usize] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    SccPartition {
        component_of,
        component_count: count,
    }
}

pub fn tarjan_scc(g: &Multigraph) -> SccPartition {
    scc_of_edges(
        g.node_count(),
        g.edges().iter().map(|e| (e.tail.0, e.head.0)),
    )
}

/// Edges whose endpoints lie in different SCCs, in id order.
pub fn crossings_static(g: &Multigraph) -> Vec<EdgeId> {
    let scc = tarjan_scc(g);
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !scc.same(e.tail, e.head))
        .map(|(i, _)| EdgeId(i as u32))
        .collect()
}
