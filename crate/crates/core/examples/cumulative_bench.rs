// Cumulative-time comparison of the automaton and the inverted index on
// the interleaved insert / browse / reconfigure workload.
//
// Usage: cargo run --release -p tagnav --example cumulative_bench -- [N] [SEED] [OUT.csv]

use std::env;

use tagnav::bench::{emit_csv, run, BenchRecord, WorkloadSpec};

pub fn run_example(resources: usize, seed: u64, csv: Option<&str>) -> tagnav::Result<(f64, f64)> {
    let spec = WorkloadSpec::synthetic(resources, seed);
    let automaton = run(&spec, "automaton")?;
    let inverted = run(&spec, "inverted")?;
    let last = |r: &[BenchRecord]| r.last().map_or(0.0, |r| r.cumulative_seconds);
    let (a, i) = (last(&automaton), last(&inverted));
    println!("n = {resources}, seed = {seed}, {} operations", automaton.len());
    for step in [4, 2, 1] {
        let k = automaton.len() / step;
        if k == 0 {
            continue;
        }
        println!(
            "  after op {:>6}: automaton {:>9.4}s  inverted {:>9.4}s",
            k - 1,
            automaton[k - 1].cumulative_seconds,
            inverted[k - 1].cumulative_seconds
        );
    }
    if let Some(path) = csv {
        let mut all = automaton;
        all.extend(inverted);
        emit_csv(&all, path)?;
        println!("  wrote {path}");
    }
    Ok((a, i))
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(5000);
    let seed = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(42);
    let (a, i) = run_example(n, seed, args.get(2).map(String::as_str))?;
    println!("automaton / inverted = {:.3}", a / i);
    Ok(())
}
