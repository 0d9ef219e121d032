//! Propositional knowledge base over pit and wumpus literals.
//!
//! The axioms are fixed:
//!
//! - every observed cell: `B ⇔ ∨ P(neighbours)` and `S ⇔ ∨ W(neighbours)`
//! - exactly one wumpus on the grid
//! - no cell holds both a pit and the wumpus
//! - a visited cell holds no pit and no wumpus, unless the hunter fell into a
//!   pit there (then `P` is a fact) or met the wumpus there (then `W` is)
//!
//! Gold is not modelled. Queries are answered by model enumeration; see
//! [`enumerate`] for the fast path and [`oracle`] for the exhaustive check.

mod enumerate;
pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{Event, Percept, Position};

pub use enumerate::consequences;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("knowledge base is unsatisfiable")]
    Unsatisfiable,
    #[error("cell {0} was already observed")]
    DuplicateObservation(Position),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LiteralKind {
    Pit,
    NoPit,
    Wumpus,
    NoWumpus,
}

impl LiteralKind {
    pub const ALL: [LiteralKind; 4] = [
        LiteralKind::Pit,
        LiteralKind::NoPit,
        LiteralKind::Wumpus,
        LiteralKind::NoWumpus,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub kind: LiteralKind,
    pub pos: Position,
}

impl Literal {
    pub fn new(kind: LiteralKind, pos: Position) -> Self {
        Self { kind, pos }
    }

    /// All four literals for every cell, cell-major.
    pub fn all() -> impl Iterator<Item = Literal> {
        Position::all().flat_map(|pos| LiteralKind::ALL.map(|kind| Literal { kind, pos }))
    }

    /// Whether the literal holds in a concrete world.
    pub fn holds(self, pit: bool, wumpus: bool) -> bool {
        match self.kind {
            LiteralKind::Pit => pit,
            LiteralKind::NoPit => !pit,
            LiteralKind::Wumpus => wumpus,
            LiteralKind::NoWumpus => !wumpus,
        }
    }
}

/// `P(B,1)`, `¬W(C,3)` and so on.
impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, sym) = match self.kind {
            LiteralKind::Pit => ("", 'P'),
            LiteralKind::NoPit => ("¬", 'P'),
            LiteralKind::Wumpus => ("", 'W'),
            LiteralKind::NoWumpus => ("¬", 'W'),
        };
        let cell = self.pos.to_string();
        let (col, row) = cell.split_at(1);
        write!(f, "{neg}{sym}({col},{row})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observation {
    pub percept: Percept,
    pub event: Event,
}

/// Immutable snapshot of everything the assistant has been told.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    start: Position,
    observations: BTreeMap<Position, Observation>,
}

impl KnowledgeBase {
    /// Empty knowledge base. The start cell is known hazard-free before its
    /// percept arrives.
    pub fn new(start: Position) -> Self {
        Self {
            start,
            observations: BTreeMap::new(),
        }
    }

    pub fn start(&self) -> Position {
        self.start
    }

    pub fn observations(&self) -> &BTreeMap<Position, Observation> {
        &self.observations
    }

    /// Records the percept at a newly entered cell and what happened there.
    pub fn tell(&self, pos: Position, percept: Percept, event: Event) -> Result<Self, LogicError> {
        if self.observations.contains_key(&pos) {
            return Err(LogicError::DuplicateObservation(pos));
        }
        let mut next = self.clone();
        next.observations
            .insert(pos, Observation { percept, event });
        Ok(next)
    }

    pub(crate) fn facts(&self) -> Facts {
        let mut facts = Facts {
            known: self.start.bit(),
            ..Facts::default()
        };
        for (pos, obs) in &self.observations {
            facts.known |= pos.bit();
            match obs.event {
                Event::Pit => facts.pits |= pos.bit(),
                Event::Wumpus => facts.wumpus |= pos.bit(),
                Event::Nothing | Event::Gold => {}
            }
        }
        facts
    }

    /// Which literals hold in every consistent world.
    pub fn consequences(&self) -> Result<Consequences, LogicError> {
        enumerate::consequences(self)
    }

    pub fn entails(&self, literal: Literal) -> Result<bool, LogicError> {
        Ok(self.consequences()?.entails(literal))
    }

    pub fn judge(&self, pos: Position) -> Result<HazardJudgment, LogicError> {
        Ok(self.consequences()?.judge(pos))
    }

    /// Every entailed literal in display notation, cell-major.
    pub fn dump(&self) -> Result<Vec<String>, LogicError> {
        let c = self.consequences()?;
        Ok(Literal::all()
            .filter(|&l| c.entails(l))
            .map(|l| l.to_string())
            .collect())
    }
}

/// Cells with a fixed truth value, as bitmasks.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Facts {
    /// Visited cells plus the start.
    pub known: u16,
    /// Known cells holding a pit.
    pub pits: u16,
    /// Known cells holding the wumpus.
    pub wumpus: u16,
}

/// Per-cell summary of which truth values occur across all consistent worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Consequences {
    pub(crate) pit_possible: u16,
    pub(crate) clear_of_pit_possible: u16,
    pub(crate) wumpus_possible: u16,
    pub(crate) clear_of_wumpus_possible: u16,
}

impl Consequences {
    pub(crate) fn record_world(&mut self, pits: u16, wumpus: u16) {
        self.pit_possible |= pits;
        self.clear_of_pit_possible |= !pits;
        self.wumpus_possible |= wumpus;
        self.clear_of_wumpus_possible |= !wumpus;
    }

    pub fn entails(&self, literal: Literal) -> bool {
        let bit = literal.pos.bit();
        let possible = match literal.kind {
            // P is entailed when no world leaves the cell without a pit.
            LiteralKind::Pit => self.clear_of_pit_possible,
            LiteralKind::NoPit => self.pit_possible,
            LiteralKind::Wumpus => self.clear_of_wumpus_possible,
            LiteralKind::NoWumpus => self.wumpus_possible,
        };
        possible & bit == 0
    }

    pub fn judge(&self, pos: Position) -> HazardJudgment {
        let truth = |yes, no| {
            if self.entails(Literal::new(yes, pos)) {
                Truth::Yes
            } else if self.entails(Literal::new(no, pos)) {
                Truth::No
            } else {
                Truth::Unknown
            }
        };
        HazardJudgment {
            pit: truth(LiteralKind::Pit, LiteralKind::NoPit),
            wumpus: truth(LiteralKind::Wumpus, LiteralKind::NoWumpus),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

/// The assistant's verdict on one cell.
///
/// A `Yes` on one hazard always comes with a `No` on the other, so only six
/// of the nine combinations exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HazardJudgment {
    pit: Truth,
    wumpus: Truth,
}

impl HazardJudgment {
    pub fn new(pit: Truth, wumpus: Truth) -> Option<Self> {
        use Truth::*;
        match (pit, wumpus) {
            (Yes, Yes) | (Yes, Unknown) | (Unknown, Yes) => None,
            _ => Some(Self { pit, wumpus }),
        }
    }

    pub fn pit(self) -> Truth {
        self.pit
    }

    pub fn wumpus(self) -> Truth {
        self.wumpus
    }
}
