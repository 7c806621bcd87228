//! Instance generators and oracle harnesses.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compressed::{CompressedGraph, CompressionMode};
use crate::count::brute_force_trails;
use crate::error::{Error, Result};
use crate::explore::{crossing_flags, crossings_ahead};
use crate::graph::{check_eulerian, weakly_connected, EdgeId, GraphBuilder, Multigraph, NodeId, TrailKind};
use crate::scc::scc_of_edges;
use crate::Mode;

/// Parameters of the cycle-superposition generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub cycles: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub multiplicity_cap: u32,
    pub seed: u64,
    /// No self-loops, no parallel edges.
    pub simple: bool,
    /// Keep adding cycles until exactly this many edge units exist;
    /// `cycles` is then ignored.
    pub total: Option<usize>,
}

impl GenSpec {
    pub fn simple(n: usize, cycles: usize, seed: u64) -> Self {
        Self {
            n,
            cycles,
            min_len: 2,
            max_len: n.max(2),
            multiplicity_cap: 1,
            seed,
            simple: true,
            total: None,
        }
    }

    pub fn multigraph(n: usize, cycles: usize, multiplicity_cap: u32, seed: u64) -> Self {
        Self {
            n,
            cycles,
            min_len: 1,
            max_len: n.max(1),
            multiplicity_cap,
            seed,
            simple: false,
            total: None,
        }
    }

    pub fn lengths(mut self, min_len: usize, max_len: usize) -> Self {
        self.min_len = min_len;
        self.max_len = max_len;
        self
    }

    pub fn total(mut self, m: usize) -> Self {
        self.total = Some(m);
        self
    }
}

/// Random Eulerian circuit instance: a union of random closed walks, each
/// after the first starting at a node already used, so the result is
/// balanced and weakly connected. Nodes are named `v<i>`.
pub fn gen_random_eulerian(spec: &GenSpec) -> Result<Multigraph> {
    if spec.n < 2 || (spec.cycles == 0 && spec.total.is_none()) || spec.min_len == 0 || spec.min_len > spec.max_len {
        return Err(Error::Usage(format!("unusable generator spec {spec:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n as u32;
    let mut mult: HashMap<(u32, u32), u32> = HashMap::new();
    let mut order: Vec<(u32, u32)> = Vec::new();
    let mut touched: Vec<u32> = Vec::new();
    let mut is_touched = vec![false; spec.n];
    if spec.total.is_some_and(|m| m < spec.min_len) {
        return Err(Error::Usage(format!("unusable generator spec {spec:?}")));
    }
    let rounds = spec.total.map_or(spec.cycles, |m| m / spec.min_len + 1);
    let budget = 100 + 50 * rounds;
    let mut attempts = 0;
    let mut made = 0;
    let mut units = 0;
    let mut pending: Vec<(u32, u32)> = Vec::new();
    let mut pending_count: HashMap<(u32, u32), u32> = HashMap::new();
    while spec.total.map_or(made < spec.cycles, |m| units < m) {
        attempts += 1;
        if attempts > budget {
            return Err(Error::GenerationFailed(attempts - 1));
        }
        let mut len = rng.gen_range(spec.min_len..=spec.max_len);
        if let Some(m) = spec.total {
            // never leave a remainder shorter than the shortest cycle
            let left = m - units;
            if len >= left || left - len < spec.min_len {
                len = left;
            }
        }
        let anchor = if touched.is_empty() {
            rng.gen_range(0..n)
        } else {
            touched[rng.gen_range(0..touched.len())]
        };
        pending.clear();
        pending_count.clear();
        let free = |pair: (u32, u32), pc: &HashMap<(u32, u32), u32>| {
            if spec.simple && pair.0 == pair.1 {
                return false;
            }
            let have = mult.get(&pair).copied().unwrap_or(0) + pc.get(&pair).copied().unwrap_or(0);
            have < spec.multiplicity_cap
        };
        let mut cur = anchor;
        let mut ok = true;
        for _ in 1..len {
            let next = (0..32)
                .map(|_| rng.gen_range(0..n))
                .find(|&x| free((cur, x), &pending_count));
            match next {
                Some(x) => {
                    pending.push((cur, x));
                    *pending_count.entry((cur, x)).or_default() += 1;
                    cur = x;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !free((cur, anchor), &pending_count) {
            continue;
        }
        pending.push((cur, anchor));
        units += pending.len();
        for &(t, h) in &pending {
            let c = mult.entry((t, h)).or_default();
            if *c == 0 {
                order.push((t, h));
            }
            *c += 1;
            for v in [t, h] {
                if !is_touched[v as usize] {
                    is_touched[v as usize] = true;
                    touched.push(v);
                }
            }
        }
        made += 1;
    }
    let mut b = GraphBuilder::new();
    for (t, h) in order {
        let (tn, hn) = (b.node(&format!("v{t}")), b.node(&format!("v{h}")));
        b.edge(tn, hn, mult[&(t, h)]);
    }
    Ok(b.build())
}

/// Like [`gen_random_eulerian`], then removes one edge unit so that an open
/// trail remains.
pub fn gen_random_open(spec: &GenSpec) -> Result<Multigraph> {
    let g = gen_random_eulerian(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut ids: Vec<usize> = (0..g.edge_count()).collect();
    ids.shuffle(&mut rng);
    for i in ids {
        let e = g.edges()[i];
        if e.is_loop() {
            continue;
        }
        let h = remove_unit(&g, i);
        if h.m_total() == 0 || !weakly_connected(&h) {
            continue;
        }
        if let Ok(info) = check_eulerian(&h, None) {
            if info.feasible && info.kind == TrailKind::OpenTrail {
                return Ok(h);
            }
        }
    }
    Err(Error::GenerationFailed(g.edge_count()))
}

fn remove_unit(g: &Multigraph, idx: usize) -> Multigraph {
    let mut b = GraphBuilder::new();
    for v in g.nodes() {
        b.node(g.name(v));
    }
    for (i, e) in g.edges().iter().enumerate() {
        let m = e.multiplicity - u32::from(i == idx);
        if m > 0 {
            b.edge(e.tail, e.head, m);
        }
    }
    b.build()
}

/// Order-`k` de Bruijn multigraph of `text`: nodes are its `(k-1)`-mers and
/// every `k`-mer occurrence adds one edge copy.
pub fn gen_debruijn(text: &str, k: usize) -> Result<Multigraph> {
    let chars: Vec<char> = text.chars().collect();
    if k < 2 || chars.len() < k {
        return Err(Error::Degenerate(format!(
            "need k >= 2 and a text of at least k characters (k = {k}, length {})",
            chars.len()
        )));
    }
    if chars.iter().any(|c| c.is_whitespace() || *c == '#') {
        return Err(Error::Degenerate("text contains whitespace or '#'".into()));
    }
    let mut b = GraphBuilder::new();
    for w in chars.windows(k) {
        let tail: String = w[..k - 1].iter().collect();
        let head: String = w[1..].iter().collect();
        b.edge_by_name(&tail, &head, 1);
    }
    Ok(b.build())
}

/// Every simple digraph on `n` labelled nodes with at most `max_m` edges
/// that has an Eulerian trail. Nodes without edges are left out.
pub fn all_feasible_simple_digraphs(n: usize, max_m: usize, circuits_only: bool) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|t| (0..n).filter(move |&h| h != t).map(move |h| (t, h)))
        .collect();
    assert!(pairs.len() < 32, "too many node pairs");
    let mut out = Vec::new();
    for mask in 1u32..(1 << pairs.len()) {
        if mask.count_ones() as usize > max_m {
            continue;
        }
        let mut surplus = vec![0i32; n];
        for (i, &(t, h)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                surplus[t] += 1;
                surplus[h] -= 1;
            }
        }
        let pos: i32 = surplus.iter().filter(|&&d| d > 0).sum();
        if pos > 1 || (circuits_only && pos != 0) || surplus.iter().any(|&d| d.abs() > 1) {
            continue;
        }
        let mut b = GraphBuilder::new();
        for (i, &(t, h)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                b.edge_by_name(&format!("v{t}"), &format!("v{h}"), 1);
            }
        }
        let g = b.build();
        if check_eulerian(&g, None).is_ok_and(|i| i.feasible) {
            out.push(g);
        }
    }
    out
}

/// A uniformly shuffled Hierholzer trail from `start`, one record per unit.
pub fn random_eulerian_trail(g: &Multigraph, start: NodeId, rng: &mut impl Rng) -> Vec<EdgeId> {
    let mut adj: Vec<Vec<EdgeId>> = g
        .nodes()
        .map(|v| {
            let mut a: Vec<EdgeId> = g
                .out_edges(v)
                .iter()
                .flat_map(|&e| std::iter::repeat(e).take(g.edge(e).multiplicity as usize))
                .collect();
            a.shuffle(rng);
            a
        })
        .collect();
    let mut stack: Vec<(NodeId, Option<EdgeId>)> = vec![(start, None)];
    let mut out = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        match adj[v.index()].pop() {
            Some(e) => stack.push((g.edge(e).head, Some(e))),
            None => {
                stack.pop();
                out.extend(via);
            }
        }
    }
    out.reverse();
    assert_eq!(out.len() as u64, g.m_total(), "graph has no Eulerian trail from {start:?}");
    out
}

fn walk_tails(g: &Multigraph, walk: &[EdgeId]) -> (Vec<u32>, u32) {
    let tails = walk.iter().map(|&e| g.edge(e).tail.0).collect();
    let end = walk.last().map_or(0, |&e| g.edge(e).head.0);
    (tails, end)
}

/// Components of the graph formed by `walk[i..]`.
fn suffix_scc(g: &Multigraph, walk: &[EdgeId], i: usize) -> crate::scc::SccPartition {
    scc_of_edges(
        g.node_count(),
        walk[i..].iter().map(|&e| (g.edge(e).tail.0, g.edge(e).head.0)),
    )
}

/// Compares the linear-time crossing flags of an Eulerian trail `walk` with
/// a fresh SCC computation after every prefix deletion.
pub fn oracle_crossings_check(g: &Multigraph, walk: &[EdgeId]) -> bool {
    let (tails, end) = walk_tails(g, walk);
    let flags = crossing_flags(&tails, end);
    (0..walk.len()).all(|i| {
        let scc = suffix_scc(g, walk, i);
        let e = g.edge(walk[i]);
        flags[i] == !scc.same(e.tail, e.head)
    })
}

/// Compares [`crossings_ahead`] with the out-edge units of the current node
/// that are crossings of the remaining graph, after every prefix deletion.
pub fn oracle_crossings_ahead_check(g: &Multigraph, walk: &[EdgeId]) -> bool {
    let (tails, end) = walk_tails(g, walk);
    let ahead = crossings_ahead(&tails, end);
    (0..walk.len()).all(|i| {
        let scc = suffix_scc(g, walk, i);
        let crossing: Vec<usize> = (i..walk.len())
            .filter(|&q| {
                let e = g.edge(walk[q]);
                e.tail.0 == tails[i] && !scc.same(e.tail, e.head)
            })
            .collect();
        crossing.len() <= 1 && crossing.first().copied() == ahead[i]
    })
}

/// The remaining graph a compressed graph stands for: every record with the
/// number of units found across all labels. Node ids match `g`.
pub fn decompress(cg: &CompressedGraph, g: &Multigraph) -> Multigraph {
    let mut count = vec![0u32; g.edge_count()];
    for e in cg.present_edges() {
        for r in cg.labels().leaves(e.label) {
            count[r as usize] += e.multiplicity;
        }
    }
    let mut b = GraphBuilder::new();
    for v in g.nodes() {
        b.node(g.name(v));
    }
    for (r, rec) in g.edges().iter().enumerate() {
        if count[r] > 0 {
            b.edge(rec.tail, rec.head, count[r]);
        }
    }
    b.build()
}

/// Trails of the compressed graph from its current node, counted over edge
/// objects (objects with multiplicity are interchangeable units).
pub fn count_compressed_trails(cg: &CompressedGraph) -> u64 {
    let mut left: Vec<u32> = (0..cg.edge_slots() as u32)
        .map(|e| if cg.is_present(e) { cg.edge(e).multiplicity } else { 0 })
        .collect();
    fn dfs(cg: &CompressedGraph, v: NodeId, rest: u64, left: &mut [u32]) -> u64 {
        if rest == 0 {
            return 1;
        }
        let outs: Vec<u32> = cg.out_edges(v).collect();
        let mut total = 0;
        for e in outs {
            if left[e as usize] == 0 {
                continue;
            }
            left[e as usize] -= 1;
            total += dfs(cg, cg.edge(e).head, rest - 1, left);
            left[e as usize] += 1;
        }
        total
    }
    dfs(cg, cg.current(), cg.total_units(), &mut left)
}

fn oracle_count(cg: &CompressedGraph, g: &Multigraph) -> Result<u64> {
    let mode = match cg.mode() {
        CompressionMode::Simple => Mode::Simple,
        CompressionMode::NodeDistinct => Mode::NodeDistinct,
    };
    let d = decompress(cg, g);
    if d.m_total() == 0 {
        return Ok(1);
    }
    Ok(brute_force_trails(&d, cg.current(), mode, u64::MAX)?.len() as u64)
}

/// Checks that the trail count of the compressed graph matches the
/// brute-force count of its decompression: before compression, after every
/// single rule firing of the initial compression, and after every edge
/// removal and firing along one random trail. Returns the number of states
/// checked.
pub fn check_compression_soundness(g: &Multigraph, mode: CompressionMode, seed: u64) -> std::result::Result<usize, String> {
    let info = check_eulerian(g, None).map_err(|e| e.to_string())?;
    if !info.feasible {
        return Err("instance is infeasible".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cg = CompressedGraph::uncompressed(g, &info, mode);
    let start = cg.snapshot();
    let mut checked = 0;
    let mut check = |cg: &CompressedGraph, what: &str| -> std::result::Result<(), String> {
        cg_check(cg)?;
        let got = count_compressed_trails(cg);
        let want = oracle_count(cg, g).map_err(|e| e.to_string())?;
        checked += 1;
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: compressed graph has {got} trails, decompressed graph {want}"))
        }
    };
    check(&cg, "uncompressed")?;
    cg.schedule_all();
    while let Some(f) = cg.fire_next() {
        check(&cg, &format!("build firing {f:?}"))?;
    }
    while cg.total_units() > 0 {
        let outs: Vec<u32> = cg.out_edges(cg.current()).collect();
        // Keep only moves after which a trail remains.
        let mut viable = Vec::new();
        for &e in &outs {
            let cp = cg.checkpoint();
            cg.remove_unit(e);
            if count_compressed_trails(&cg) > 0 {
                viable.push(e);
            }
            cg.rewind_to(cp);
        }
        let e = *viable.choose(&mut rng).ok_or("no viable move")?;
        cg.remove_unit(e);
        check(&cg, &format!("removal of object {e}"))?;
        while let Some(f) = cg.fire_next() {
            check(&cg, &format!("firing {f:?}"))?;
        }
    }
    cg.rewind_to(crate::compressed::Checkpoint(0));
    if cg.snapshot() != start {
        return Err("rewind did not restore the initial graph".into());
    }
    Ok(checked)
}

fn cg_check(cg: &CompressedGraph) -> std::result::Result<(), String> {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| cg.assert_consistent()))
        .map_err(|p| {
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "invariant violated".into())
        })
}
