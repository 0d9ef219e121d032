use serde::{Deserialize, Serialize};

use crate::advisor::{rationale_wire, OptionAssessment, RationaleRow, RationaleRowWire};
use crate::harness::{Condition, Phase, PlannedTrial};
use crate::logic::KnowledgeBase;
use crate::world::{Event, GameState, Position, Status};

/// The open decision: what the assistant thinks of each frontier cell and
/// which one it stars. Fixed from the moment the step opens until a move is made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingStep {
    pub options: Vec<OptionAssessment>,
    pub recommended: Position,
    pub rationale: Vec<RationaleRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellView {
    pub cell: Position,
    pub breeze: bool,
    pub stench: bool,
    pub event: Event,
}

/// Everything a participant may see at one moment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewState {
    pub trial_index: usize,
    pub trial_count: usize,
    pub map_id: String,
    pub phase: Phase,
    pub condition: Condition,
    pub assisted: bool,
    pub cells: Vec<CellView>,
    pub frontier: Vec<Position>,
    pub hunter: Position,
    pub score: i32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recommendation: Option<Position>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rationale: Option<Vec<RationaleRowWire>>,
    pub questionnaire_required: bool,
    pub session_complete: bool,
}

impl ViewState {
    /// Builds the view from what the participant has already uncovered. The
    /// ground-truth map is deliberately not an input.
    pub fn build(
        trial: &PlannedTrial,
        trial_count: usize,
        state: &GameState,
        kb: &KnowledgeBase,
        pending: Option<&PendingStep>,
        questionnaire_required: bool,
        session_complete: bool,
    ) -> Self {
        let cells = kb
            .observations()
            .iter()
            .map(|(&cell, obs)| CellView {
                cell,
                breeze: obs.percept.breeze,
                stench: obs.percept.stench,
                event: obs.event,
            })
            .collect();
        let pending = pending.filter(|_| trial.assisted && !state.status().is_terminal());
        ViewState {
            trial_index: trial.index,
            trial_count,
            map_id: trial.map_id.clone(),
            phase: trial.phase,
            condition: trial.condition,
            assisted: trial.assisted,
            cells,
            frontier: state.legal_moves().into_iter().collect(),
            hunter: state.location(),
            score: state.score(),
            status: state.status(),
            recommendation: pending.map(|p| p.recommended),
            rationale: pending
                .filter(|_| trial.condition.rationale_display)
                .map(|p| rationale_wire(&p.rationale)),
            questionnaire_required,
            session_complete,
        }
    }
}
