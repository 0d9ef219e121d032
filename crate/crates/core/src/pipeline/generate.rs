use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::world::{MapSpec, Position, CELL_COUNT};

/// Inclusive range of pit counts for generated maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PitRange {
    pub min: usize,
    pub max: usize,
}

impl PitRange {
    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    pub fn as_range(self) -> RangeInclusive<usize> {
        self.min..=self.max
    }
}

impl Default for PitRange {
    fn default() -> Self {
        Self::new(1, 3)
    }
}

/// Random map with the start at A1 and gold, wumpus and pits on distinct
/// non-start cells chosen uniformly.
pub fn generate_map<R: Rng + ?Sized>(
    rng: &mut R,
    pits: PitRange,
) -> Result<MapSpec, PipelineError> {
    let start = Position::new(0, 0).expect("A1 is on the grid");
    // start, gold and wumpus are always placed
    let free = CELL_COUNT - 3;
    if pits.min > pits.max || pits.max > free {
        return Err(PipelineError::InfeasiblePitCount {
            pits: pits.max,
            free,
        });
    }
    let mut cells: Vec<Position> = Position::all().filter(|&p| p != start).collect();
    cells.shuffle(rng);
    let pit_count = rng.random_range(pits.min as u32..=pits.max as u32) as usize;
    let map = MapSpec::new(
        start,
        cells[0],
        cells[1],
        cells[2..2 + pit_count].iter().copied(),
    )?;
    Ok(map)
}
