//! Test-only oracles and generators, written without the library's search code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use treasure_hunter::world::{GameState, MapSpec, Position, Status};

pub fn p(s: &str) -> Position {
    s.parse().unwrap()
}

/// Any map with start A1 and up to `max_pits` pits, drawn directly from `rng`.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, max_pits: usize) -> MapSpec {
    let start = p("A1");
    let mut cells: Vec<Position> = Position::all().filter(|&c| c != start).collect();
    let mut take = |rng: &mut R| {
        let i = rng.random_range(0..cells.len());
        cells.swap_remove(i)
    };
    let gold = take(rng);
    let wumpus = take(rng);
    let n = rng.random_range(0..=max_pits);
    let pits: Vec<Position> = (0..n).map(|_| take(rng)).collect();
    MapSpec::new(start, gold, wumpus, pits).unwrap()
}

/// Best score over every simple path from start to gold that avoids the
/// wumpus. A connected uncovered region containing both ends always contains
/// such a path, so no cheaper play exists.
pub fn exhaustive_optimal(map: &MapSpec) -> Option<i32> {
    fn cost(map: &MapSpec, c: Position) -> i32 {
        if map.pits().contains(&c) {
            110
        } else {
            10
        }
    }
    fn dfs(
        map: &MapSpec,
        at: Position,
        seen: &mut BTreeSet<Position>,
        spent: i32,
        best: &mut Option<i32>,
    ) {
        if at == map.gold() {
            *best = Some(best.map_or(spent, |b: i32| b.min(spent)));
            return;
        }
        for n in at.neighbors() {
            if n == map.wumpus() || seen.contains(&n) {
                continue;
            }
            seen.insert(n);
            dfs(map, n, seen, spent + cost(map, n), best);
            seen.remove(&n);
        }
    }
    let mut best = None;
    let mut seen = BTreeSet::from([map.start()]);
    dfs(map, map.start(), &mut seen, 0, &mut best);
    best.map(|c| 500 - c)
}

/// Score recomputed from the visible outcome of a game.
pub fn identity_score(state: &GameState) -> i32 {
    let won = (state.status() == Status::Won) as i32;
    let dead = (state.status() == Status::Dead) as i32;
    -10 * (state.visited().len() as i32 - 1) + 500 * won
        - 1000 * dead
        - 100 * state.fallen_pits().len() as i32
}

/// Uniformly random legal moves until the game ends.
pub fn random_playout<R: Rng + ?Sized>(map: &MapSpec, rng: &mut R) -> GameState {
    let mut state = GameState::new(map);
    while let Some(&&next) = state.legal_moves().iter().collect::<Vec<_>>().choose(rng) {
        state = state.apply_move(map, next).unwrap();
    }
    state
}

/// Pearson chi-square p-value for counts against a uniform expectation.
pub fn chi_square_uniform_p(counts: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Is the set 4-connected?
pub fn connected(cells: &BTreeSet<Position>) -> bool {
    let Some(&first) = cells.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(c) = stack.pop() {
        for n in c.neighbors() {
            if cells.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == cells.len()
}

/// A different map that no visited cell can tell apart from `map`: gold moved
/// among unvisited cells, pits toggled and the wumpus moved where no visited
/// cell borders them. Returns `None` when nothing could change.
pub fn indistinguishable_variant<R: Rng + ?Sized>(
    map: &MapSpec,
    visited: &BTreeSet<Position>,
    rng: &mut R,
) -> Option<MapSpec> {
    let near: BTreeSet<Position> = visited
        .iter()
        .flat_map(|c| c.neighbors().chain([*c]))
        .collect();
    let hidden: Vec<Position> = Position::all().filter(|c| !near.contains(c)).collect();
    let mut pits: BTreeSet<Position> = map.pits().clone();
    for &c in &hidden {
        if rng.random_bool(0.5) {
            if pits.contains(&c) {
                pits.remove(&c);
            } else {
                pits.insert(c);
            }
        }
    }
    let mut wumpus = map.wumpus();
    if hidden.contains(&wumpus) {
        wumpus = *hidden.choose(rng).unwrap();
    }
    pits.remove(&wumpus);
    let mut gold = map.gold();
    if !visited.contains(&gold) {
        let spots: Vec<Position> = Position::all()
            .filter(|c| !visited.contains(c) && *c != wumpus && !pits.contains(c))
            .collect();
        gold = *spots.choose(rng)?;
    }
    pits.remove(&gold);
    let variant = MapSpec::new(map.start(), gold, wumpus, pits).ok()?;
    (variant != *map).then_some(variant)
}
