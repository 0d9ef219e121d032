//! Walks the knowledge base through a short game and prints which hazard
//! literals become entailed, checked against the exhaustive oracle.
//!
//! ```bash
//! cargo run -p treasure-hunter --example entailment
//! ```

use treasure_hunter::logic::oracle::brute_force_consequences;
use treasure_hunter::logic::Literal;
use treasure_hunter::play::Game;
use treasure_hunter::world::{MapSpec, Position};

fn p(s: &str) -> Position {
    s.parse().unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = MapSpec::new(p("A1"), p("D4"), p("C1"), [p("A3")])?;
    let mut game = Game::new(map);
    for cell in ["", "A2", "B2", "B1"] {
        if !cell.is_empty() {
            game = game.advance(p(cell))?;
        }
        let kb = game.kb();
        let visited = game.state().visited();
        let fast = kb.consequences()?;
        let slow = brute_force_consequences(kb)?;
        let learned: Vec<String> = Literal::all()
            .filter(|l| !visited.contains(&l.pos) && fast.entails(*l))
            .map(|l| l.to_string())
            .collect();
        let agree = Literal::all().all(|l| fast.entails(l) == slow.entails(l));
        let here = game.state().location();
        println!(
            "at {here} percept {:?}\n  entailed about unvisited cells: {}\n  oracle agrees: {agree}",
            game.map().percept_at(here),
            learned.join(" ")
        );
        for c in game.state().legal_moves() {
            let j = kb.judge(c)?;
            println!("  frontier {c}: pit {:?}, wumpus {:?}", j.pit(), j.wumpus());
        }
    }
    Ok(())
}
