//! Runs the map-selection pipeline: 100 random maps, 20 assistant-only games
//! each, rank by score spread, pick 10 balanced low-variance test maps and 5
//! training maps.
//!
//! ```bash
//! cargo run --release -p treasure-hunter --example map_pipeline -- 42 /tmp/maps
//! ```

use std::path::PathBuf;

use treasure_hunter::pipeline::{quadrant, run_pipeline, write_fixtures, SelectionCriteria};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    let out: Option<PathBuf> = args.next().map(PathBuf::from);

    let criteria = SelectionCriteria::default();
    let report = run_pipeline(seed, &criteria)?;

    println!(
        "pool of {} maps ranked by std dev (first 25):",
        report.ranked.len()
    );
    for s in report.ranked.iter().take(25) {
        println!(
            "  #{:<3} gold {} pits {:<2} mean {:>7.1}  sd {:>6.2}  optimal {}",
            s.pool_index,
            s.map.gold(),
            s.map.pits().len(),
            s.mean,
            s.std_dev,
            s.optimal
        );
    }
    let within = report
        .ranked
        .iter()
        .filter(|s| s.std_dev <= criteria.max_std_dev)
        .count();
    println!("{within} maps within sd <= {}", criteria.max_std_dev);

    println!("\nselected test maps:");
    for (i, s) in report.tests.iter().enumerate() {
        println!(
            "  test-{:02}  gold {} (quadrant {})  {:>6.1} ± {:<4.1}  optimal {}  ratio {:.1}%",
            i + 1,
            s.map.gold(),
            quadrant(s.map.gold()),
            s.mean,
            s.std_err,
            s.optimal,
            100.0 * s.ratio.unwrap_or(f64::NAN)
        );
    }
    println!(
        "mean agent/optimal ratio: {:.3}",
        report.mean_ratio().unwrap_or(f64::NAN)
    );

    println!("\ntraining maps:");
    for (i, s) in report.training.iter().enumerate() {
        println!("  training-{}  {}", i + 1, serde_json::to_string(&s.map)?);
    }

    if let Some(dir) = out {
        write_fixtures(&report, &dir)?;
        println!("\nwrote fixtures to {}", dir.display());
    }
    Ok(())
}
