//! Shows the recommendation and the option table a participant sees in the
//! display-present condition, for the opening position of a fixture map.
//!
//! ```bash
//! cargo run -p treasure-hunter --example rationale_display -- training-5
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treasure_hunter::advisor::{build_rationale, format_2dp, rationale_wire, recommend};
use treasure_hunter::play::Game;
use treasure_hunter::world::MapSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "test-01".to_string());
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/maps")
        .join(format!("{id}.json"));
    let mut game = Game::new(MapSpec::load(path)?);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    while !game.state().status().is_terminal() {
        let options = game.options();
        let rec = recommend(&options, &mut rng)?;
        let rows = build_rationale(&options, rec)?;
        println!("score {}  recommended {rec}", game.state().score());
        for row in &rows {
            let cells: Vec<String> = row.positions.iter().map(|c| c.to_string()).collect();
            println!(
                "  {} {:<12} W {:<5} P {:<5} G {:<5} N {:<5} E {:>8}",
                if row.starred { '*' } else { ' ' },
                cells.join(","),
                row.probs.wumpus.to_string(),
                row.probs.pit.to_string(),
                row.probs.gold.to_string(),
                row.probs.nothing.to_string(),
                format_2dp(row.expected_score)
            );
        }
        if game.state().steps().is_empty() {
            println!(
                "  wire form: {}",
                serde_json::to_string(&rationale_wire(&rows))?
            );
        }
        game = game.advance(rec)?;
    }
    println!("{:?} with {}", game.state().status(), game.state().score());
    Ok(())
}
