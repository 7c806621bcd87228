// Rule firings and the undo journal, step by step.

use eulertrail::{check_eulerian, parse_edge_list, CompressedGraph, CompressionMode, Mode, Result};

fn show(cg: &CompressedGraph, g: &eulertrail::Multigraph) {
    for e in cg.present_edges() {
        let ids: Vec<String> = cg.labels().expand(e.label).iter().map(|i| i.to_string()).collect();
        println!(
            "    {} -> {} x{} [{}]",
            g.name(e.tail),
            g.name(e.head),
            e.multiplicity,
            ids.join(" ")
        );
    }
}

pub fn run() -> Result<usize> {
    let g = parse_edge_list("a b\nb c\nc a\na d\nd a\nc d\nd c\n", Mode::Simple)?;
    let info = check_eulerian(&g, None)?.require()?;
    let mut cg = CompressedGraph::uncompressed(&g, &info, CompressionMode::Simple);
    println!("uncompressed:");
    show(&cg, &g);
    cg.schedule_all();
    while let Some(f) = cg.fire_next() {
        println!("  fired {f:?}");
    }
    println!("compressed ({} journal entries):", cg.journal().len());
    show(&cg, &g);

    let before = cg.snapshot();
    let first = cg.out_edges(cg.current()).next().expect("current node has an out-edge");
    let (cp, label) = cg.take_edge(first);
    println!("took object {first}, emitted {:?}", cg.labels().expand(label));
    for entry in &cg.journal()[cp.position()..] {
        println!("  journal {entry:?}");
    }
    show(&cg, &g);
    cg.rewind_to(cp);
    assert!(cg.snapshot() == before);
    println!("rewound: graph identical to before the take");
    Ok(cg.journal().len())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
