//! A game in progress together with the assistant's knowledge of it.

use crate::advisor::{assess_with, OptionAssessment};
use crate::logic::KnowledgeBase;
use crate::world::{GameState, MapSpec, MoveError, Position};

/// Ground-truth map, engine state and knowledge base, advanced in lockstep.
#[derive(Debug, Clone)]
pub struct Game {
    map: MapSpec,
    state: GameState,
    kb: KnowledgeBase,
}

impl Game {
    pub fn new(map: MapSpec) -> Self {
        let start = map.start();
        let kb = KnowledgeBase::new(start)
            .tell(start, map.percept_at(start), map.content(start))
            .expect("fresh knowledge base accepts the start cell");
        Self {
            state: GameState::new(&map),
            map,
            kb,
        }
    }

    pub fn map(&self) -> &MapSpec {
        &self.map
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    /// Assessed frontier, empty once the game is over.
    pub fn options(&self) -> Vec<OptionAssessment> {
        let frontier = self.state.legal_moves();
        if frontier.is_empty() {
            return Vec::new();
        }
        // The true map is always a model of what it produced.
        let consequences = self
            .kb
            .consequences()
            .expect("knowledge base built from a real map is satisfiable");
        assess_with(&consequences, &frontier)
    }

    /// Moves to `pos` and tells the knowledge base what was sensed there.
    pub fn advance(&self, pos: Position) -> Result<Game, MoveError> {
        let state = self.state.apply_move(&self.map, pos)?;
        let event = state.steps().last().expect("move recorded").event;
        let kb = self
            .kb
            .tell(pos, self.map.percept_at(pos), event)
            .expect("a legal move enters an unobserved cell");
        Ok(Game {
            map: self.map.clone(),
            state,
            kb,
        })
    }
}
