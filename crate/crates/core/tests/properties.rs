use eulertrail::testkit::{
    gen_random_eulerian, gen_random_open, oracle_crossings_ahead_check, oracle_crossings_check,
    random_eulerian_trail, GenSpec,
};
use eulertrail::{
    check_eulerian, count_edge_distinct, enumerate, parse_edge_list, write_edge_list,
    EnumerateOptions, Mode, Multigraph, TrieFormat,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, cycles: usize, seed: u64, open: bool) -> Option<Multigraph> {
    let spec = GenSpec::multigraph(n, cycles, 3, seed).lengths(1, n);
    if open { gen_random_open(&spec) } else { gen_random_eulerian(&spec) }.ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn crossing_rules_match_scc_oracle(n in 2usize..9, cycles in 1usize..6, seed: u64, open: bool, walk_seed: u64) {
        let Some(g) = instance(n, cycles, seed, open) else { return Ok(()) };
        let info = check_eulerian(&g, None).unwrap();
        let walk = random_eulerian_trail(&g, info.source, &mut ChaCha8Rng::seed_from_u64(walk_seed));
        prop_assert!(oracle_crossings_check(&g, &walk));
        prop_assert!(oracle_crossings_ahead_check(&g, &walk));
    }

    #[test]
    fn edge_distinct_leaves_match_closed_form(n in 2usize..6, cycles in 1usize..4, seed: u64, open: bool) {
        let Some(g) = instance(n, cycles, seed, open) else { return Ok(()) };
        prop_assume!(g.m_total() <= 14);
        let info = check_eulerian(&g, None).unwrap();
        let run = enumerate(&g, Mode::EdgeDistinct, &EnumerateOptions::default()).unwrap();
        prop_assert_eq!(count_edge_distinct(&g, &info).unwrap(), run.leaf_count().into());
        prop_assert!(run.restored);
    }

    #[test]
    fn output_is_deterministic_and_survives_round_trip(n in 2usize..7, cycles in 1usize..4, seed: u64) {
        let Some(g) = instance(n, cycles, seed, false) else { return Ok(()) };
        prop_assume!(g.m_total() <= 14);
        let h = parse_edge_list(&write_edge_list(&g), Mode::NodeDistinct).unwrap();
        let opts = EnumerateOptions { max_trails: Some(50), ..Default::default() };
        let a = enumerate(&g, Mode::NodeDistinct, &opts).unwrap();
        let b = enumerate(&h, Mode::NodeDistinct, &opts).unwrap();
        prop_assert_eq!(a.trail_names(&g), b.trail_names(&h));
        prop_assert_eq!(a.tree.emit_to_string(TrieFormat::Shared), b.tree.emit_to_string(TrieFormat::Shared));
    }

    #[test]
    fn node_distinct_never_exceeds_edge_distinct(n in 2usize..6, cycles in 1usize..4, seed: u64) {
        let Some(g) = instance(n, cycles, seed, false) else { return Ok(()) };
        prop_assume!(g.m_total() <= 12);
        let nd = enumerate(&g, Mode::NodeDistinct, &EnumerateOptions::default()).unwrap();
        let ed = enumerate(&g, Mode::EdgeDistinct, &EnumerateOptions::default()).unwrap();
        prop_assert!(nd.leaf_count() <= ed.leaf_count());
        prop_assert!(nd.leaf_count() >= 1);
    }
}
