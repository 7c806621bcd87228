//! Exact counting with the BEST theorem, and brute-force oracles.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{subdivide, EdgeId, EulerInfo, Multigraph, NodeId};
use crate::Mode;

pub type BigCount = BigUint;

/// Largest `m_total` the trail oracle accepts unless told otherwise.
pub const DEFAULT_BRUTE_CAP: u64 = 14;
/// Largest node count the arborescence oracle accepts.
pub const ARBORESCENCE_ORACLE_MAX_NODES: usize = 8;
const MAX_ORACLE_TRAILS: usize = 5_000_000;

/// Determinant by fraction-free elimination with row pivoting.
pub fn bareiss_determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n), "matrix is not square");
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = mat.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

pub fn bareiss_i64(mat: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss_determinant(&big)
}

/// In-degree Laplacian restricted to `nodes`, minus the row and column of
/// `root`. Self-loops do not contribute.
fn laplacian_minor(g: &Multigraph, nodes: &[NodeId], root: NodeId) -> Vec<Vec<BigInt>> {
    let mut pos = vec![usize::MAX; g.node_count()];
    let mut k = 0;
    for &v in nodes {
        if v != root {
            pos[v.index()] = k;
            k += 1;
        }
    }
    let mut m = vec![vec![BigInt::zero(); k]; k];
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        let (t, h) = (pos[e.tail.index()], pos[e.head.index()]);
        let w = BigInt::from(e.multiplicity);
        if h != usize::MAX {
            m[h][h] += &w;
            if t != usize::MAX {
                m[t][h] -= &w;
            }
        }
    }
    m
}

fn to_count(d: BigInt) -> BigCount {
    assert!(!d.is_negative(), "arborescence count came out negative");
    d.to_biguint().expect("nonnegative")
}

/// Number of spanning out-arborescences of `g` rooted at `root`,
/// multiplicities counting as distinct parallel edges.
pub fn count_arborescences(g: &Multigraph, root: NodeId) -> BigCount {
    let nodes: Vec<NodeId> = g.nodes().collect();
    to_count(bareiss_determinant(&laplacian_minor(g, &nodes, root)))
}

fn factorial(n: u64) -> BigCount {
    (2..=n).fold(BigCount::one(), |acc, k| acc * k)
}

/// Number of Eulerian trails from the source, by the BEST theorem:
/// arborescences rooted at the source times `prod (r_u - 1)!` with
/// `r_u` the out-degree, plus one at the target.
pub fn count_best(g: &Multigraph, info: &EulerInfo) -> Result<BigCount> {
    if !info.feasible {
        return Err(Error::Infeasible(info.reason.clone().unwrap_or_default()));
    }
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(best_formula(g, info))
}

fn best_formula(g: &Multigraph, info: &EulerInfo) -> BigCount {
    let nodes: Vec<NodeId> = g.nodes().filter(|&v| !g.is_isolated(v)).collect();
    let za = to_count(bareiss_determinant(&laplacian_minor(g, &nodes, info.source)));
    nodes.iter().fold(za, |acc, &v| {
        let r = g.out_degree(v) + u64::from(v == info.target);
        acc * factorial(r - 1)
    })
}

/// Edge-distinct count for any feasible multigraph: subdivides first when
/// the graph is not simple, so the formula only ever sees simple graphs.
pub fn count_edge_distinct(g: &Multigraph, info: &EulerInfo) -> Result<BigCount> {
    if g.is_simple() {
        return count_best(g, info);
    }
    let sub = subdivide(g);
    let sinfo = crate::graph::check_eulerian(&sub.graph, Some(info.source))?;
    count_best(&sub.graph, &sinfo)
}

/// All Eulerian trails from `v0` by exhaustive backtracking, sorted.
///
/// Simple and edge-distinct modes return copy-id sequences; node-distinct
/// mode returns node-id sequences (start included), each once.
pub fn brute_force_trails(g: &Multigraph, v0: NodeId, mode: Mode, cap: u64) -> Result<Vec<Vec<u32>>> {
    if g.m_total() > cap {
        return Err(Error::CapExceeded {
            what: "m_total",
            actual: g.m_total(),
            cap,
        });
    }
    let m = g.m_total() as usize;
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(m + 1);
    match mode {
        Mode::Simple | Mode::EdgeDistinct => {
            let mut used = vec![false; m];
            copies_dfs(g, v0, m, &mut used, &mut path, &mut out)?;
        }
        Mode::NodeDistinct => {
            let mut left: Vec<u32> = g.edges().iter().map(|e| e.multiplicity).collect();
            path.push(v0.0);
            records_dfs(g, v0, m + 1, &mut left, &mut path, &mut out)?;
        }
    }
    out.sort();
    Ok(out)
}

fn guard(out: &[Vec<u32>]) -> Result<()> {
    if out.len() >= MAX_ORACLE_TRAILS {
        return Err(Error::CapExceeded {
            what: "trail count",
            actual: out.len() as u64,
            cap: MAX_ORACLE_TRAILS as u64,
        });
    }
    Ok(())
}

fn copies_dfs(
    g: &Multigraph,
    v: NodeId,
    m: usize,
    used: &mut [bool],
    path: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if path.len() == m {
        guard(out)?;
        out.push(path.clone());
        return Ok(());
    }
    for &e in g.out_edges(v) {
        for c in g.copies(e) {
            if used[c as usize] {
                continue;
            }
            used[c as usize] = true;
            path.push(c);
            copies_dfs(g, g.edge(e).head, m, used, path, out)?;
            path.pop();
            used[c as usize] = false;
        }
    }
    Ok(())
}

fn records_dfs(
    g: &Multigraph,
    v: NodeId,
    len: usize,
    left: &mut [u32],
    path: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if path.len() == len {
        guard(out)?;
        out.push(path.clone());
        return Ok(());
    }
    for &e in g.out_edges(v) {
        if left[e.index()] == 0 {
            continue;
        }
        left[e.index()] -= 1;
        let h = g.edge(e).head;
        path.push(h.0);
        records_dfs(g, h, len, left, path, out)?;
        path.pop();
        left[e.index()] += 1;
    }
    Ok(())
}

/// Out-arborescences rooted at `root` by exhaustive search: every non-root
/// node picks one incoming edge, and the choice is kept when following the
/// picks from any node leads to `root`. Multiplicities weight the choices.
pub fn brute_force_arborescences(g: &Multigraph, root: NodeId) -> Result<BigCount> {
    let n = g.node_count();
    if n > ARBORESCENCE_ORACLE_MAX_NODES {
        return Err(Error::CapExceeded {
            what: "node count",
            actual: n as u64,
            cap: ARBORESCENCE_ORACLE_MAX_NODES as u64,
        });
    }
    let others: Vec<NodeId> = g.nodes().filter(|&v| v != root).collect();
    let choices: Vec<Vec<EdgeId>> = others
        .iter()
        .map(|&v| {
            g.in_edges(v)
                .iter()
                .copied()
                .filter(|&e| !g.edge(e).is_loop())
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(BigCount::zero());
    }
    let mut total = BigCount::zero();
    let mut pick = vec![0usize; others.len()];
    let mut parent = vec![u32::MAX; n];
    loop {
        for (i, &v) in others.iter().enumerate() {
            parent[v.index()] = g.edge(choices[i][pick[i]]).tail.0;
        }
        let reaches_root = others.iter().all(|&v| {
            let mut x = v.0;
            for _ in 0..n {
                if x == root.0 {
                    return true;
                }
                x = parent[x as usize];
            }
            x == root.0
        });
        if reaches_root {
            let w = pick
                .iter()
                .enumerate()
                .fold(BigCount::one(), |acc, (i, &p)| acc * g.edge(choices[i][p]).multiplicity);
            total += w;
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(total);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_eulerian, parse_edge_list};
    use proptest::prelude::*;

    fn graph(text: &str) -> Multigraph {
        parse_edge_list(text, Mode::NodeDistinct).unwrap()
    }

    fn cofactor(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), BigInt::from(1));
        assert_eq!(bareiss_i64(&[vec![2, 0], vec![0, 3]]), BigInt::from(6));
        assert_eq!(bareiss_i64(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(bareiss_i64(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
    }

    #[test]
    fn arborescence_examples() {
        let tri = graph("a b\nb c\nc a");
        assert_eq!(count_arborescences(&tri, NodeId(0)), BigCount::from(1u32));
        let edge = graph("a b");
        assert_eq!(count_arborescences(&edge, NodeId(0)), BigCount::from(1u32));
        assert_eq!(count_arborescences(&edge, NodeId(1)), BigCount::from(0u32));
        assert_eq!(brute_force_arborescences(&edge, NodeId(1)).unwrap(), BigCount::from(0u32));
        let two = graph("a b\nb c\nc a\na d\nd e\ne a");
        assert_eq!(brute_force_arborescences(&two, NodeId(0)).unwrap(), BigCount::from(1u32));
        assert_eq!(count_arborescences(&two, NodeId(0)), BigCount::from(1u32));
        let k3 = graph("a b\nb a\nb c\nc b\na c\nc a");
        assert_eq!(count_arborescences(&k3, NodeId(0)), brute_force_arborescences(&k3, NodeId(0)).unwrap());
        assert_eq!(count_arborescences(&k3, NodeId(0)), BigCount::from(3u32));
    }

    #[test]
    fn best_examples() {
        for (text, want) in [
            ("a b\nb c\nc a", 1u32),
            ("a b\nb c\nc a\na d\nd e\ne a", 2),
            ("a b\nb c", 1),
            ("a b\nb a\nb c\nc b\na c\nc a", 6),
        ] {
            let g = graph(text);
            let info = check_eulerian(&g, None).unwrap();
            assert_eq!(count_best(&g, &info).unwrap(), BigCount::from(want), "{text}");
        }
        let two_copies = graph("a b 2\nb a 1");
        let info = check_eulerian(&two_copies, None).unwrap();
        assert!(matches!(count_best(&two_copies, &info), Err(Error::NotSimple)));
        assert_eq!(count_edge_distinct(&two_copies, &info).unwrap(), BigCount::from(2u32));
    }

    #[test]
    fn brute_force_examples() {
        let two_copies = graph("a b 2\nb a 1");
        assert_eq!(
            brute_force_trails(&two_copies, NodeId(0), Mode::EdgeDistinct, 14).unwrap(),
            [vec![0, 2, 1], vec![1, 2, 0]]
        );
        assert_eq!(
            brute_force_trails(&two_copies, NodeId(0), Mode::NodeDistinct, 14).unwrap(),
            [vec![0, 1, 0, 1]]
        );
        assert_eq!(brute_force_trails(&graph("a b\nb c"), NodeId(0), Mode::Simple, 14).unwrap().len(), 1);
        assert!(brute_force_trails(&graph("a b\na c"), NodeId(0), Mode::Simple, 14).unwrap().is_empty());
        assert!(matches!(
            brute_force_trails(&graph("a a 20"), NodeId(0), Mode::Simple, 14),
            Err(Error::CapExceeded { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn bareiss_matches_cofactor(n in 0usize..=5, raw in proptest::collection::vec(-3i64..=3, 25)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| raw[i * 5..i * 5 + n].to_vec()).collect();
            prop_assert_eq!(bareiss_i64(&m), BigInt::from(cofactor(&m)));
        }
    }
}
