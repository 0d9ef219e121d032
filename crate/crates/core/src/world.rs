//! Game engine: grid positions, maps, percepts, move application and scoring.
//!
//! Everything here is a pure value. `GameState::apply_move` returns a new
//! state and leaves the receiver untouched, so live play and `replay` go
//! through exactly the same code path.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Side length of the square grid.
pub const GRID_SIZE: u8 = 4;

/// Number of cells on the grid.
pub const CELL_COUNT: usize = (GRID_SIZE as usize) * (GRID_SIZE as usize);

/// Points for finding the gold bar.
pub const GOLD_REWARD: i32 = 500;
/// Points lost when meeting the wumpus.
pub const WUMPUS_PENALTY: i32 = -1000;
/// Points lost the first time the hunter falls into a given pit.
pub const PIT_PENALTY: i32 = -100;
/// Points lost for uncovering any new cell.
pub const UNCOVER_PENALTY: i32 = -10;

/// A cell on the grid. Columns display as letters `A..`, rows as numbers `1..`.
///
/// Ordering is column-major (`A1 < A2 < .. < B1`), which is also the order
/// used for bitmask indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    col: u8,
    row: u8,
}

impl Position {
    pub fn new(col: u8, row: u8) -> Option<Self> {
        (col < GRID_SIZE && row < GRID_SIZE).then_some(Self { col, row })
    }

    pub fn col(self) -> u8 {
        self.col
    }

    pub fn row(self) -> u8 {
        self.row
    }

    /// Dense index in `0..CELL_COUNT`, consistent with `Ord`.
    pub fn index(self) -> usize {
        self.col as usize * GRID_SIZE as usize + self.row as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index >= CELL_COUNT {
            return None;
        }
        let size = GRID_SIZE as usize;
        Some(Self {
            col: (index / size) as u8,
            row: (index % size) as u8,
        })
    }

    pub(crate) fn bit(self) -> u16 {
        1 << self.index()
    }

    /// Every cell on the grid in `Ord` order.
    pub fn all() -> impl Iterator<Item = Position> {
        (0..CELL_COUNT).filter_map(Position::from_index)
    }

    /// Orthogonal neighbours that lie on the grid.
    pub fn neighbors(self) -> impl Iterator<Item = Position> {
        const STEPS: [(i8, i8); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
        STEPS.into_iter().filter_map(move |(dc, dr)| {
            let col = self.col.checked_add_signed(dc)?;
            let row = self.row.checked_add_signed(dr)?;
            Position::new(col, row)
        })
    }

    pub(crate) fn neighbor_mask(self) -> u16 {
        self.neighbors().fold(0, |mask, p| mask | p.bit())
    }

    pub fn is_adjacent(self, other: Position) -> bool {
        self.col.abs_diff(other.col) + self.row.abs_diff(other.row) == 1
    }

    pub fn manhattan(self, other: Position) -> u8 {
        self.col.abs_diff(other.col) + self.row.abs_diff(other.row)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'A' + self.col) as char, self.row + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid cell {0:?}: expected a column letter A-D followed by a row number 1-4")]
pub struct ParsePositionError(pub String);

impl FromStr for Position {
    type Err = ParsePositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePositionError(s.to_owned());
        let mut chars = s.trim().chars();
        let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
        let number: u8 = chars.as_str().parse().map_err(|_| err())?;
        if !letter.is_ascii_uppercase() || number == 0 {
            return Err(err());
        }
        Position::new(letter as u8 - b'A', number - 1).ok_or_else(err)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("{what} and {other} share cell {pos}")]
    Overlap {
        what: &'static str,
        other: &'static str,
        pos: Position,
    },
    #[error("map file is not valid: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot access map file: {0}")]
    Io(#[from] std::io::Error),
}

/// Ground truth for one map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct MapSpec {
    start: Position,
    gold: Position,
    wumpus: Position,
    pits: BTreeSet<Position>,
}

#[derive(Deserialize)]
struct RawMap {
    start: Position,
    gold: Position,
    wumpus: Position,
    #[serde(default)]
    pits: Vec<Position>,
}

impl TryFrom<RawMap> for MapSpec {
    type Error = MapError;

    fn try_from(raw: RawMap) -> Result<Self, Self::Error> {
        let mut pits = BTreeSet::new();
        for pit in raw.pits {
            if !pits.insert(pit) {
                return Err(MapError::Overlap {
                    what: "pit",
                    other: "pit",
                    pos: pit,
                });
            }
        }
        MapSpec::new(raw.start, raw.gold, raw.wumpus, pits)
    }
}

impl MapSpec {
    /// Builds a map, rejecting any two elements on the same cell.
    pub fn new(
        start: Position,
        gold: Position,
        wumpus: Position,
        pits: impl IntoIterator<Item = Position>,
    ) -> Result<Self, MapError> {
        let pits: BTreeSet<Position> = pits.into_iter().collect();
        let overlap = |what, other, pos| Err(MapError::Overlap { what, other, pos });
        if gold == start {
            return overlap("gold", "start", gold);
        }
        if wumpus == start {
            return overlap("wumpus", "start", wumpus);
        }
        if gold == wumpus {
            return overlap("gold", "wumpus", gold);
        }
        for &(what, pos) in &[("start", start), ("gold", gold), ("wumpus", wumpus)] {
            if pits.contains(&pos) {
                return overlap("pit", what, pos);
            }
        }
        Ok(Self {
            start,
            gold,
            wumpus,
            pits,
        })
    }

    pub fn start(&self) -> Position {
        self.start
    }

    pub fn gold(&self) -> Position {
        self.gold
    }

    pub fn wumpus(&self) -> Position {
        self.wumpus
    }

    pub fn pits(&self) -> &BTreeSet<Position> {
        &self.pits
    }

    pub fn is_pit(&self, pos: Position) -> bool {
        self.pits.contains(&pos)
    }

    /// What entering `pos` means, ignoring whether the pit was already visited.
    pub fn content(&self, pos: Position) -> Event {
        if pos == self.gold {
            Event::Gold
        } else if pos == self.wumpus {
            Event::Wumpus
        } else if self.is_pit(pos) {
            Event::Pit
        } else {
            Event::Nothing
        }
    }

    pub fn percept_at(&self, pos: Position) -> Percept {
        percept_at(self, pos)
    }

    pub fn from_json(text: &str) -> Result<Self, MapError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        // Serialization of plain strings and sets cannot fail.
        serde_json::to_string_pretty(self).expect("map serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MapError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MapError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Sensor reading at a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Percept {
    pub breeze: bool,
    pub stench: bool,
}

/// Breeze iff an orthogonal neighbour holds a pit, stench iff one holds the wumpus.
pub fn percept_at(map: &MapSpec, pos: Position) -> Percept {
    let mut percept = Percept::default();
    for n in pos.neighbors() {
        percept.breeze |= map.is_pit(n);
        percept.stench |= n == map.wumpus;
    }
    percept
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    InProgress,
    Won,
    Dead,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::InProgress
    }
}

/// What happened when the hunter entered a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Event {
    Nothing,
    Pit,
    Gold,
    Wumpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub pos: Position,
    pub delta: i32,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("illegal move to {pos}: not on the frontier")]
    NotFrontier { pos: Position },
    #[error("illegal move to {pos}: the game is already over")]
    GameOver { pos: Position },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("choice #{index} is illegal: {source}")]
pub struct ReplayError {
    pub index: usize,
    #[source]
    pub source: MoveError,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    start: Position,
    visited: BTreeSet<Position>,
    fallen_pits: BTreeSet<Position>,
    score: i32,
    status: Status,
    steps: Vec<Step>,
}

impl GameState {
    /// Fresh game on `map`: only the start cell is uncovered, score 0.
    pub fn new(map: &MapSpec) -> Self {
        Self {
            start: map.start,
            visited: BTreeSet::from([map.start]),
            fallen_pits: BTreeSet::new(),
            score: 0,
            status: Status::InProgress,
            steps: Vec::new(),
        }
    }

    pub fn start(&self) -> Position {
        self.start
    }

    pub fn visited(&self) -> &BTreeSet<Position> {
        &self.visited
    }

    pub fn fallen_pits(&self) -> &BTreeSet<Position> {
        &self.fallen_pits
    }

    pub fn score(&self) -> i32 {
        self.score
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The cell the hunter last entered. Cosmetic only.
    pub fn location(&self) -> Position {
        self.steps.last().map_or(self.start, |s| s.pos)
    }

    /// Unvisited cells orthogonally adjacent to the visited region.
    /// Empty once the game is over.
    pub fn legal_moves(&self) -> BTreeSet<Position> {
        if self.status.is_terminal() {
            return BTreeSet::new();
        }
        self.visited
            .iter()
            .flat_map(|p| p.neighbors())
            .filter(|p| !self.visited.contains(p))
            .collect()
    }

    pub fn is_legal(&self, pos: Position) -> bool {
        !self.status.is_terminal()
            && !self.visited.contains(&pos)
            && pos.neighbors().any(|n| self.visited.contains(&n))
    }

    /// Uncovers `pos` and returns the resulting state.
    pub fn apply_move(&self, map: &MapSpec, pos: Position) -> Result<GameState, MoveError> {
        if self.status.is_terminal() {
            return Err(MoveError::GameOver { pos });
        }
        if !self.is_legal(pos) {
            return Err(MoveError::NotFrontier { pos });
        }
        let mut next = self.clone();
        let event = map.content(pos);
        let mut delta = UNCOVER_PENALTY;
        match event {
            Event::Gold => {
                delta += GOLD_REWARD;
                next.status = Status::Won;
            }
            Event::Wumpus => {
                delta += WUMPUS_PENALTY;
                next.status = Status::Dead;
            }
            Event::Pit => {
                if next.fallen_pits.insert(pos) {
                    delta += PIT_PENALTY;
                }
            }
            Event::Nothing => {}
        }
        next.visited.insert(pos);
        next.score += delta;
        next.steps.push(Step { pos, delta, event });
        Ok(next)
    }

    /// Score recomputed from the visited set, fallen pits and status.
    pub fn closed_form_score(&self) -> i32 {
        let uncovered = self.visited.len() as i32 - 1;
        let terminal = match self.status {
            Status::Won => GOLD_REWARD,
            Status::Dead => WUMPUS_PENALTY,
            Status::InProgress => 0,
        };
        UNCOVER_PENALTY * uncovered + terminal + PIT_PENALTY * self.fallen_pits.len() as i32
    }
}

/// Folds `apply_move` over `choices` from the initial state.
pub fn replay(map: &MapSpec, choices: &[Position]) -> Result<GameState, ReplayError> {
    choices
        .iter()
        .enumerate()
        .try_fold(GameState::new(map), |state, (index, &pos)| {
            state
                .apply_move(map, pos)
                .map_err(|source| ReplayError { index, source })
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Position {
        s.parse().unwrap()
    }

    fn fig2a() -> MapSpec {
        MapSpec::new(p("A1"), p("C3"), p("B3"), [p("C1")]).unwrap()
    }

    #[test]
    fn position_display_and_parse() {
        assert_eq!(Position::new(1, 2).unwrap().to_string(), "B3");
        assert_eq!(p("b3"), Position::new(1, 2).unwrap());
        assert_eq!(p(" d4 "), Position::new(3, 3).unwrap());
        for bad in ["", "E1", "A0", "A5", "1A", "AA", "A-1"] {
            assert!(bad.parse::<Position>().is_err(), "{bad}");
        }
        for pos in Position::all() {
            assert_eq!(Position::from_index(pos.index()), Some(pos));
        }
        assert!(p("A2") < p("B1"));
    }

    #[test]
    fn neighbors_stay_on_grid() {
        let corner: BTreeSet<_> = p("A1").neighbors().collect();
        assert_eq!(corner, BTreeSet::from([p("A2"), p("B1")]));
        assert_eq!(p("B2").neighbors().count(), 4);
        assert_eq!(p("D3").neighbors().count(), 3);
    }

    #[test]
    fn fig2a_percepts() {
        let map = fig2a();
        for cell in ["B1", "C2", "D1"] {
            assert!(map.percept_at(p(cell)).breeze, "{cell}");
        }
        for cell in ["B2", "A3", "C3", "B4"] {
            assert!(map.percept_at(p(cell)).stench, "{cell}");
        }
        assert_eq!(
            map.percept_at(p("B1")),
            Percept {
                breeze: true,
                stench: false
            }
        );
        assert_eq!(
            map.percept_at(p("B2")),
            Percept {
                breeze: false,
                stench: true
            }
        );
        let quiet = MapSpec::new(p("A1"), p("B2"), p("D4"), []).unwrap();
        assert_eq!(quiet.percept_at(p("A1")), Percept::default());
    }

    #[test]
    fn map_rejects_overlaps() {
        assert!(MapSpec::new(p("A1"), p("A1"), p("B3"), []).is_err());
        assert!(MapSpec::new(p("A1"), p("C3"), p("A1"), []).is_err());
        assert!(MapSpec::new(p("A1"), p("C3"), p("C3"), []).is_err());
        assert!(MapSpec::new(p("A1"), p("C3"), p("B3"), [p("A1")]).is_err());
        assert!(MapSpec::new(p("A1"), p("C3"), p("B3"), [p("C3")]).is_err());
        assert!(MapSpec::new(p("A1"), p("C3"), p("B3"), []).is_ok());
    }

    #[test]
    fn map_json_format() {
        let map = fig2a();
        let json = map.to_json();
        assert!(json.contains("\"start\": \"A1\""));
        assert!(json.contains("\"C1\""));
        let lower = r#"{"start":"a1","gold":"c3","wumpus":"b3","pits":["c1"]}"#;
        assert_eq!(MapSpec::from_json(lower).unwrap(), map);
        let dup = r#"{"start":"A1","gold":"C3","wumpus":"B3","pits":["C1","c1"]}"#;
        assert!(MapSpec::from_json(dup).is_err());
        let clash = r#"{"start":"A1","gold":"C3","wumpus":"C3","pits":[]}"#;
        assert!(MapSpec::from_json(clash).is_err());
    }

    #[test]
    fn frontier_examples() {
        let map = fig2a();
        let s0 = GameState::new(&map);
        assert_eq!(s0.legal_moves(), BTreeSet::from([p("A2"), p("B1")]));
        let s1 = s0.apply_move(&map, p("A2")).unwrap();
        assert_eq!(
            s1.legal_moves(),
            BTreeSet::from([p("B1"), p("A3"), p("B2")])
        );
    }

    #[test]
    fn full_board_has_no_frontier() {
        // Wumpus and gold tucked at the far end so the sweep stays alive.
        let map = MapSpec::new(p("A1"), p("D4"), p("D3"), []).unwrap();
        let order: Vec<Position> = Position::all()
            .filter(|&c| c != p("A1") && c != p("D3") && c != p("D4"))
            .collect();
        let state = replay(&map, &order).unwrap();
        assert_eq!(state.visited().len(), 14);
        assert_eq!(state.legal_moves(), BTreeSet::from([p("D3"), p("D4")]));
        let won = state.apply_move(&map, p("D4")).unwrap();
        assert!(won.legal_moves().is_empty());
    }

    #[test]
    fn scoring_deltas() {
        let map = MapSpec::new(p("A1"), p("A4"), p("C1"), [p("B1")]).unwrap();
        let s = GameState::new(&map);
        let plain = s.apply_move(&map, p("A2")).unwrap();
        assert_eq!(plain.steps()[0].delta, -10);
        let pit = plain.apply_move(&map, p("B1")).unwrap();
        assert_eq!(pit.steps()[1].delta, -110);
        assert_eq!(pit.status(), Status::InProgress);
        assert_eq!(pit.fallen_pits().len(), 1);
        let won = pit
            .apply_move(&map, p("A3"))
            .unwrap()
            .apply_move(&map, p("A4"))
            .unwrap();
        assert_eq!(won.steps().last().unwrap().delta, 490);
        assert_eq!(won.status(), Status::Won);
        assert_eq!(won.score(), won.closed_form_score());

        let dead = pit.apply_move(&map, p("C1")).unwrap();
        assert_eq!(dead.steps().last().unwrap().delta, -1010);
        assert_eq!(dead.score(), -10 - 110 - 1010);
        assert_eq!(dead.score(), dead.closed_form_score());
    }

    #[test]
    fn gold_three_moves_out_scores_470() {
        let map = MapSpec::new(p("A1"), p("A4"), p("D4"), [p("C2")]).unwrap();
        let state = replay(&map, &[p("A2"), p("A3"), p("A4")]).unwrap();
        assert_eq!(state.score(), 470);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let map = fig2a();
        let s = GameState::new(&map);
        assert_eq!(
            s.apply_move(&map, p("C3")),
            Err(MoveError::NotFrontier { pos: p("C3") })
        );
        assert_eq!(
            s.apply_move(&map, p("A1")),
            Err(MoveError::NotFrontier { pos: p("A1") })
        );
        let dead = replay(&map, &[p("A2"), p("A3"), p("B3")]).unwrap();
        assert_eq!(dead.status(), Status::Dead);
        assert_eq!(
            dead.apply_move(&map, p("A4")),
            Err(MoveError::GameOver { pos: p("A4") })
        );
        assert!(dead.legal_moves().is_empty());
    }

    #[test]
    fn replay_reports_first_bad_index() {
        let map = fig2a();
        assert_eq!(replay(&map, &[]).unwrap(), GameState::new(&map));
        let err = replay(&map, &[p("A2"), p("D4"), p("A3")]).unwrap_err();
        assert_eq!(err.index, 1);
        let dead = replay(&map, &[p("A2"), p("B2"), p("B3")]).unwrap();
        assert_eq!(dead.score(), -10 * 3 - 1000);
        assert_eq!(dead.status(), Status::Dead);
    }

    #[test]
    fn frontier_jumps_are_allowed() {
        let map = fig2a();
        let s = replay(&map, &[p("A2"), p("A3")]).unwrap();
        assert_eq!(s.location(), p("A3"));
        // B1 borders A1, not the current location
        assert!(s.apply_move(&map, p("B1")).is_ok());
    }
}
