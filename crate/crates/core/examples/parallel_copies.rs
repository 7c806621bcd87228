// Two parallel copies of a->b and one b->a: trails differ by mode.

use eulertrail::{enumerate, parse_edge_list, EnumerateOptions, Mode, Result};

pub fn run() -> Result<Vec<(Mode, u64)>> {
    let text = "a b 2\nb a 1\n";
    let mut counts = Vec::new();
    for mode in [Mode::EdgeDistinct, Mode::NodeDistinct] {
        let g = parse_edge_list(text, mode)?;
        let run = enumerate(&g, mode, &EnumerateOptions::default())?;
        println!("{}: {} trail(s)", mode.name(), run.leaf_count());
        run.tree.visit_trails(&g, |t| {
            let line = match mode {
                Mode::NodeDistinct => run.tree.node_names(&g, t),
                _ => run.tree.edge_tokens(&g, t),
            };
            println!("  {line}");
        });
        counts.push((mode, run.leaf_count()));
    }
    // simple mode refuses parallel edges outright
    assert!(parse_edge_list(text, Mode::Simple).is_err());
    Ok(counts)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
