//! Exhaustive entailment oracle.
//!
//! Enumerates every wumpus cell and every pit subset of the unvisited cells,
//! checks each world against every axiom cell by cell, and reports which
//! literals survive in all consistent worlds. It shares no code with the fast
//! path beyond the grid geometry and is only meant for verification.

use super::{Consequences, Event, KnowledgeBase, Literal, LiteralKind, LogicError};
use crate::world::{Position, CELL_COUNT};

struct Constraint {
    neighbors: Vec<usize>,
    breeze: bool,
    stench: bool,
}

/// Literal-by-literal truth table over all consistent worlds.
pub fn brute_force_consequences(kb: &KnowledgeBase) -> Result<Consequences, LogicError> {
    let mut known_pit: [Option<bool>; CELL_COUNT] = [None; CELL_COUNT];
    let mut known_wumpus: [Option<bool>; CELL_COUNT] = [None; CELL_COUNT];
    known_pit[kb.start().index()] = Some(false);
    known_wumpus[kb.start().index()] = Some(false);
    let mut constraints = Vec::new();
    for (pos, obs) in kb.observations() {
        known_pit[pos.index()] = Some(obs.event == Event::Pit);
        known_wumpus[pos.index()] = Some(obs.event == Event::Wumpus);
        constraints.push(Constraint {
            neighbors: pos.neighbors().map(Position::index).collect(),
            breeze: obs.percept.breeze,
            stench: obs.percept.stench,
        });
    }
    let unknown: Vec<usize> = (0..CELL_COUNT)
        .filter(|&i| known_pit[i].is_none())
        .collect();

    // holds_everywhere[cell][kind]
    let mut holds_everywhere = [[true; 4]; CELL_COUNT];
    let mut satisfiable = false;
    let mut pit = [false; CELL_COUNT];
    let mut wumpus = [false; CELL_COUNT];

    for wumpus_cell in 0..CELL_COUNT {
        for subset in 0u32..(1 << unknown.len()) {
            for i in 0..CELL_COUNT {
                pit[i] = known_pit[i].unwrap_or(false);
                wumpus[i] = i == wumpus_cell;
            }
            for (bit, &cell) in unknown.iter().enumerate() {
                pit[cell] = subset & (1 << bit) != 0;
            }

            let facts_hold = (0..CELL_COUNT).all(|i| {
                known_pit[i].is_none_or(|v| v == pit[i])
                    && known_wumpus[i].is_none_or(|v| v == wumpus[i])
            });
            let exclusive = (0..CELL_COUNT).all(|i| !(pit[i] && wumpus[i]));
            let one_wumpus = wumpus.iter().filter(|&&w| w).count() == 1;
            let percepts_hold = constraints.iter().all(|c| {
                c.breeze == c.neighbors.iter().any(|&n| pit[n])
                    && c.stench == c.neighbors.iter().any(|&n| wumpus[n])
            });
            if !(facts_hold && exclusive && one_wumpus && percepts_hold) {
                continue;
            }

            satisfiable = true;
            for (i, row) in holds_everywhere.iter_mut().enumerate() {
                for (k, kind) in LiteralKind::ALL.into_iter().enumerate() {
                    let literal = Literal::new(kind, Position::from_index(i).unwrap());
                    row[k] &= literal.holds(pit[i], wumpus[i]);
                }
            }
        }
    }

    if !satisfiable {
        return Err(LogicError::Unsatisfiable);
    }
    let mut out = Consequences::default();
    for (i, row) in holds_everywhere.iter().enumerate() {
        let bit = 1u16 << i;
        // A literal that does not hold everywhere has a counter-world.
        if !row[0] {
            out.clear_of_pit_possible |= bit;
        }
        if !row[1] {
            out.pit_possible |= bit;
        }
        if !row[2] {
            out.clear_of_wumpus_possible |= bit;
        }
        if !row[3] {
            out.wumpus_possible |= bit;
        }
    }
    Ok(out)
}

/// Same contract as [`KnowledgeBase::entails`], decided by full enumeration.
pub fn brute_force_entails(kb: &KnowledgeBase, literal: Literal) -> Result<bool, LogicError> {
    Ok(brute_force_consequences(kb)?.entails(literal))
}
