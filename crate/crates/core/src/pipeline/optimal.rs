use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::PipelineError;
use crate::world::{MapSpec, Position, CELL_COUNT, GOLD_REWARD, PIT_PENALTY, UNCOVER_PENALTY};

/// Best score an agent that knows the map could reach: gold reward minus
/// the cheapest path from the start, where every entered cell costs the
/// uncovering penalty, a pit cell additionally the pit penalty, and the
/// wumpus cell is never entered.
pub fn optimal_score(map: &MapSpec) -> Result<i32, PipelineError> {
    let enter_cost = |pos: Position| {
        let pit = if map.is_pit(pos) { -PIT_PENALTY } else { 0 };
        -UNCOVER_PENALTY + pit
    };
    let mut best = [i32::MAX; CELL_COUNT];
    let mut queue = BinaryHeap::new();
    best[map.start().index()] = 0;
    queue.push(Reverse((0, map.start())));
    while let Some(Reverse((cost, pos))) = queue.pop() {
        if cost > best[pos.index()] {
            continue;
        }
        if pos == map.gold() {
            return Ok(GOLD_REWARD - cost);
        }
        for next in pos.neighbors().filter(|&n| n != map.wumpus()) {
            let total = cost + enter_cost(next);
            if total < best[next.index()] {
                best[next.index()] = total;
                queue.push(Reverse((total, next)));
            }
        }
    }
    Err(PipelineError::GoldUnreachable(map.gold()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn hazard_free_distance_three() {
        let map = MapSpec::new(p("A1"), p("A4"), p("D1"), [p("C3")]).unwrap();
        assert_eq!(optimal_score(&map).unwrap(), 470);
    }

    #[test]
    fn gold_next_to_start() {
        let map = MapSpec::new(p("A1"), p("B1"), p("D4"), []).unwrap();
        assert_eq!(optimal_score(&map).unwrap(), 490);
    }

    #[test]
    fn detours_around_the_wumpus() {
        // A2 is the wumpus; the cheapest route to A3 goes B1, B2, B3, A3.
        let map = MapSpec::new(p("A1"), p("A3"), p("A2"), []).unwrap();
        assert_eq!(optimal_score(&map).unwrap(), 500 - 40);
    }

    #[test]
    fn corridor_through_a_pit() {
        // Wumpus on B1 and pit on A2 leave only a pit-first route to A3.
        let map = MapSpec::new(p("A1"), p("A3"), p("B1"), [p("A2")]).unwrap();
        assert_eq!(optimal_score(&map).unwrap(), 500 - 10 - 110);
    }

    #[test]
    fn pit_detour_when_cheaper() {
        // Going around the pit on B1 costs 30 + 10, through it 120.
        let map = MapSpec::new(p("A1"), p("C1"), p("D4"), [p("B1")]).unwrap();
        assert_eq!(optimal_score(&map).unwrap(), 500 - 40);
    }
}
