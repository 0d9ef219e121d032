//! Computes the best possible score for a map given full knowledge of it.
//!
//! ```bash
//! cargo run -p treasure-hunter --example optimal_score -- crates/core/fixtures/maps/test-01.json
//! ```

use treasure_hunter::pipeline::optimal_score;
use treasure_hunter::world::{MapSpec, Position};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let maps = match std::env::args().nth(1) {
        Some(path) => vec![MapSpec::load(path)?],
        None => {
            let p = |s: &str| s.parse::<Position>().unwrap();
            vec![
                MapSpec::new(p("A1"), p("C2"), p("D4"), [p("A4")])?,
                MapSpec::new(p("A1"), p("A3"), p("C1"), [p("A2")])?,
                MapSpec::new(p("A1"), p("B2"), p("A2"), [p("B1")])?,
            ]
        }
    };
    for map in maps {
        println!(
            "{}  ->  {}",
            serde_json::to_string(&map)?,
            optimal_score(&map)?
        );
    }
    Ok(())
}
