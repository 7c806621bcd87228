// Work per output stays flat as the number of trails grows.

use std::time::Instant;

use eulertrail::testkit::{gen_random_eulerian, GenSpec};
use eulertrail::{enumerate, EnumerateOptions, Mode, Result};

pub fn run_sized(n: usize, cycles: usize, caps: &[u64]) -> Result<Vec<f64>> {
    let g = gen_random_eulerian(&GenSpec::simple(n, cycles, 11).lengths(3, 30))?;
    let m = g.m_total();
    println!("n={} m={m}", g.node_count());
    let mut ratios = Vec::new();
    for &z in caps {
        let opts = EnumerateOptions { max_trails: Some(z), ..Default::default() };
        let t = Instant::now();
        let run = enumerate(&g, Mode::Simple, &opts)?;
        let c = run.counters;
        let ratio = c.work() as f64 / (m + c.leaves) as f64;
        println!(
            "  z<={z:>6}: leaves={:>6} work={:>9} work/(m+z)={ratio:.2} time={:.1} ms",
            c.leaves,
            c.work(),
            t.elapsed().as_secs_f64() * 1e3
        );
        ratios.push(ratio);
    }
    Ok(ratios)
}

pub fn run() -> Result<Vec<f64>> {
    run_sized(2000, 2500, &[1, 100, 1000, 10_000])
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
