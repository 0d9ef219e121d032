//! Lets the assistant play a map on its own many times and summarises the
//! spread of scores against the best achievable score.
//!
//! ```bash
//! cargo run --release -p treasure-hunter --example self_play -- test-03 200
//! ```

use std::collections::BTreeMap;

use treasure_hunter::pipeline::{optimal_score, self_play_runs, write_runs_csv};
use treasure_hunter::world::MapSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "test-01".to_string());
    let runs: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/maps");
    let map = MapSpec::load(dir.join(format!("{id}.json")))?;

    let records = self_play_runs(&id, &map, runs, 7);
    let mut hist: BTreeMap<i32, usize> = BTreeMap::new();
    for r in &records {
        *hist.entry(r.score).or_default() += 1;
    }
    for (score, n) in &hist {
        println!("{score:>6} {n:>4} {}", "#".repeat((60 * n).div_ceil(runs)));
    }
    let mean = records.iter().map(|r| r.score as f64).sum::<f64>() / runs as f64;
    let best = optimal_score(&map)?;
    println!(
        "mean {mean:.1}, optimal {best}, ratio {:.3}",
        mean / best as f64
    );

    let mut out = Vec::new();
    write_runs_csv(&records[..records.len().min(3)], &mut out)?;
    print!("\nfirst rows of the CSV:\n{}", String::from_utf8(out)?);
    Ok(())
}
