// Every example runs and produces what its output claims.

mod parallel {
    include!("../examples/parallel_copies.rs");
}
mod best {
    include!("../examples/best_count.rs");
}
mod trie {
    include!("../examples/enumerate_trie.rs");
}
mod debruijn {
    include!("../examples/debruijn_assembly.rs");
}
mod journal {
    include!("../examples/compression_journal.rs");
}
mod crossing {
    include!("../examples/crossing_oracle.rs");
}
mod linear {
    include!("../examples/linearity_bench.rs");
}

use eulertrail::Mode;

#[test]
fn parallel_copy_counts() {
    let counts = parallel::run().unwrap();
    assert_eq!(counts, vec![(Mode::EdgeDistinct, 2), (Mode::NodeDistinct, 1)]);
}

#[test]
fn best_agrees() {
    best::run().unwrap();
}

#[test]
fn trie_lists_six() {
    let expanded = trie::run().unwrap();
    assert_eq!(expanded.lines().filter(|l| l.starts_with("->")).count(), 3);
    assert_eq!(expanded.lines().filter(|l| l.starts_with("  ->")).count(), 6);
}

#[test]
fn debruijn_spellings() {
    let s = debruijn::run().unwrap();
    assert_eq!(s.len(), 4);
    assert!(s.iter().all(|x| x.len() == 14));
}

#[test]
fn journal_rewinds() {
    assert_eq!(journal::run().unwrap(), 1);
}

#[test]
fn crossing_oracle_agrees() {
    assert_eq!(crossing::run().unwrap(), 4);
}

#[test]
fn linearity_small() {
    let r = linear::run_sized(300, 300, &[1, 500]).unwrap();
    assert!(r.iter().all(|&x| x <= 50.0), "{r:?}");
}
