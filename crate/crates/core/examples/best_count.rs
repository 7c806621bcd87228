// Closed-form counting next to enumeration and brute force.

use eulertrail::count::DEFAULT_BRUTE_CAP;
use eulertrail::testkit::{gen_random_eulerian, GenSpec};
use eulertrail::{
    brute_force_trails, check_eulerian, count_arborescences, count_best, enumerate,
    EnumerateOptions, Mode, Result,
};

pub fn run() -> Result<()> {
    for seed in 0..5 {
        let g = gen_random_eulerian(&GenSpec::simple(6, 3, seed))?;
        let info = check_eulerian(&g, None)?.require()?;
        let arbs = count_arborescences(&g, info.source);
        let best = count_best(&g, &info)?;
        let listed = enumerate(&g, Mode::Simple, &EnumerateOptions::default())?.leaf_count();
        let brute = brute_force_trails(&g, info.source, Mode::Simple, DEFAULT_BRUTE_CAP)
            .map(|t| t.len().to_string())
            .unwrap_or_else(|_| "-".into());
        println!(
            "seed {seed}: m={:2} arborescences={arbs} best={best} enumerated={listed} brute={brute}",
            g.m_total()
        );
        assert_eq!(best, listed.into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
