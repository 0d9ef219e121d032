//! Fast entailment by enumerating only the cells some observation constrains.
//!
//! A cell that is neither known nor adjacent to an observed cell appears in
//! no axiom except the wumpus axioms, so its pit value is free in every
//! world apart from pit/wumpus exclusion. Those cells are summarised
//! analytically instead of being enumerated.

use super::{Consequences, KnowledgeBase, LogicError};
use crate::world::{Position, CELL_COUNT};

const ALL_CELLS: u16 = u16::MAX;

pub fn consequences(kb: &KnowledgeBase) -> Result<Consequences, LogicError> {
    let facts = kb.facts();
    let observed: Vec<(u16, bool, bool)> = kb
        .observations()
        .iter()
        .map(|(pos, obs)| (pos.neighbor_mask(), obs.percept.breeze, obs.percept.stench))
        .collect();

    let constrained = observed.iter().fold(0u16, |m, &(n, _, _)| m | n) & !facts.known;
    let free = ALL_CELLS & !facts.known & !constrained;
    let cells: Vec<u16> = (0..CELL_COUNT)
        .map(|i| 1u16 << i)
        .filter(|bit| constrained & bit != 0)
        .collect();

    let pit_worlds: Vec<u16> = (0u32..1 << cells.len())
        .map(|assignment| {
            cells
                .iter()
                .enumerate()
                .filter(|(i, _)| assignment & (1 << i) != 0)
                .fold(facts.pits, |m, (_, &bit)| m | bit)
        })
        .filter(|&pits| {
            observed
                .iter()
                .all(|&(nbrs, breeze, _)| breeze == (pits & nbrs != 0))
        })
        .collect();

    let wumpus_cells = Position::all().map(Position::bit).filter(|&w| {
        let placed = if facts.wumpus != 0 {
            w == facts.wumpus
        } else {
            w & facts.known == 0
        };
        placed
            && observed
                .iter()
                .all(|&(nbrs, _, stench)| stench == (w & nbrs != 0))
    });

    let mut out = Consequences::default();
    let mut satisfiable = false;
    for w in wumpus_cells {
        for &pits in pit_worlds.iter().filter(|&&pits| pits & w == 0) {
            satisfiable = true;
            out.record_world(pits, w);
            out.pit_possible |= free & !w;
        }
    }
    if satisfiable {
        Ok(out)
    } else {
        Err(LogicError::Unsatisfiable)
    }
}
