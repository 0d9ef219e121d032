//! Plays a fixed route on a hand-made map and prints what the participant
//! sees after every move: percepts, score change and running total.
//!
//! ```bash
//! cargo run -p treasure-hunter --example percepts_and_scoring
//! ```

use treasure_hunter::world::{replay, GameState, MapSpec, Position};

fn p(s: &str) -> Position {
    s.parse().unwrap()
}

fn board(map: &MapSpec, state: &GameState) {
    for row in (0..4).rev() {
        let line: String = (0..4)
            .map(|col| {
                let c = Position::new(col, row).unwrap();
                if !state.visited().contains(&c) {
                    return " ?? ".to_string();
                }
                let pc = map.percept_at(c);
                let mark = if c == state.location() { '*' } else { ' ' };
                format!(
                    "{mark}{}{} ",
                    if pc.breeze { 'B' } else { '.' },
                    if pc.stench { 'S' } else { '.' }
                )
            })
            .collect();
        println!("  {} |{line}", row + 1);
    }
    println!("     +----------------\n       A   B   C   D");
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = MapSpec::new(p("A1"), p("C3"), p("A3"), [p("C1")])?;
    println!("map: {}\n", map.to_json());

    let mut state = GameState::new(&map);
    board(&map, &state);
    for cell in ["B1", "C1", "B2", "C2", "C3"] {
        state = state.apply_move(&map, p(cell))?;
        let step = state.steps().last().unwrap();
        println!(
            "\nenter {cell}: {:?}, delta {:+}, score {}, status {:?}",
            step.event,
            step.delta,
            state.score(),
            state.status()
        );
        board(&map, &state);
    }

    let route: Vec<Position> = state.steps().iter().map(|s| s.pos).collect();
    let again = replay(&map, &route)?;
    println!(
        "\nreplayed score {}; closed form {}",
        again.score(),
        again.closed_form_score()
    );
    if let Err(e) = state.apply_move(&map, p("D1")) {
        println!("moving after the game ended: {e}");
    }
    Ok(())
}
