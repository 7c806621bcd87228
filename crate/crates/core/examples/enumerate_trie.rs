// The trie in all three output formats.

use eulertrail::{enumerate, parse_edge_list, EnumerateOptions, Mode, Result, TrieFormat};

pub fn run() -> Result<String> {
    let g = parse_edge_list("a b\nb a\na c\nc a\na d\nd a\n", Mode::Simple)?;
    let run = enumerate(&g, Mode::Simple, &EnumerateOptions::default())?;
    println!("{} trails, {} states", run.leaf_count(), run.tree.state_count());
    for name in run.trail_names(&g) {
        println!("  {name}");
    }
    let expanded = run.tree.emit_to_string(TrieFormat::Expanded);
    print!("\n{expanded}");
    print!("\n{}", run.tree.emit_to_string(TrieFormat::Shared));
    print!("\n{}", run.tree.emit_to_string(TrieFormat::Dot));
    Ok(expanded)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
