// Reconstructing a string from its k-mers: each Eulerian trail in the
// de Bruijn multigraph spells a candidate, in node-distinct mode.

use eulertrail::testkit::gen_debruijn;
use eulertrail::{check_eulerian, count_edge_distinct, enumerate, EnumerateOptions, Mode, Result};

pub fn run() -> Result<Vec<String>> {
    let text = "CAGTCAGACAGTTC";
    let k = 3;
    let g = gen_debruijn(text, k)?;
    let info = check_eulerian(&g, None)?.require()?;
    let run = enumerate(&g, Mode::NodeDistinct, &EnumerateOptions::default())?;
    let mut spelled = Vec::new();
    run.tree.visit_trails(&g, |t| {
        let mut s = g.name(eulertrail::NodeId(t[0])).to_string();
        for &v in &t[1..] {
            s.push_str(&g.name(eulertrail::NodeId(v))[k - 2..]);
        }
        spelled.push(s);
    });
    println!(
        "{} distinct (k-1)-mers, {} k-mers, {} edge-distinct trails, {} distinct spellings",
        g.node_count(),
        g.m_total(),
        count_edge_distinct(&g, &info)?,
        spelled.len()
    );
    for s in &spelled {
        let mark = if s == text { "  <- original" } else { "" };
        println!("  {s}{mark}");
    }
    assert!(spelled.iter().any(|s| s == text));
    Ok(spelled)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
