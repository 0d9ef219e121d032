use serde::{Deserialize, Serialize};

use super::{HarnessError, PlannedTrial};
use crate::advisor::{OptionAssessment, Rational};
use crate::world::{Position, Status};

/// A questionnaire answer on the 1-9 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct Rating(u8);

impl Rating {
    pub fn new(value: i64) -> Result<Self, HarnessError> {
        if (1..=9).contains(&value) {
            Ok(Rating(value as u8))
        } else {
            Err(HarnessError::RatingOutOfRange(value))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<i64> for Rating {
    type Error = HarnessError;
    fn try_from(value: i64) -> Result<Self, Self::Error> {
        Rating::new(value)
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r.0
    }
}

/// One decision: what was on offer, what was advised, what was picked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepRecord {
    pub step_index: usize,
    pub options: Vec<OptionAssessment>,
    pub recommended: Position,
    pub chosen: Position,
    pub accepted: bool,
    pub score_delta: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub plan: PlannedTrial,
    pub steps: Vec<StepRecord>,
    /// Accepted steps over all steps; `None` before the first move.
    pub acceptance_rate: Option<Rational>,
    pub final_score: Option<i32>,
    pub outcome: Option<Status>,
    pub trust: Option<Rating>,
    pub self_confidence: Option<Rating>,
}

impl TrialRecord {
    pub fn new(plan: PlannedTrial) -> Self {
        Self {
            plan,
            steps: Vec::new(),
            acceptance_rate: None,
            final_score: None,
            outcome: None,
            trust: None,
            self_confidence: None,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn sealed(&self) -> bool {
        self.trust.is_some()
    }

    /// Acceptance rate from scratch, for checking the running value.
    pub fn recompute_acceptance_rate(&self) -> Option<Rational> {
        if self.steps.is_empty() {
            return None;
        }
        let accepted = self
            .steps
            .iter()
            .filter(|s| s.chosen == s.recommended)
            .count();
        Some(Rational::new(accepted as i64, self.steps.len() as i64))
    }

    pub fn record_step(
        &mut self,
        options: Vec<OptionAssessment>,
        recommended: Position,
        chosen: Position,
        score_delta: i32,
    ) -> Result<&StepRecord, HarnessError> {
        if self.sealed() {
            return Err(HarnessError::TrialSealed(self.plan.index));
        }
        if self.is_finished() {
            return Err(HarnessError::TrialOver(self.plan.index));
        }
        if !options.iter().any(|o| o.pos == recommended) {
            return Err(HarnessError::RecommendationNotOffered(recommended));
        }
        if !options.iter().any(|o| o.pos == chosen) {
            return Err(HarnessError::ChoiceNotOffered(chosen));
        }
        self.steps.push(StepRecord {
            step_index: self.steps.len(),
            options,
            recommended,
            chosen,
            accepted: chosen == recommended,
            score_delta,
        });
        self.acceptance_rate = self.recompute_acceptance_rate();
        Ok(self.steps.last().expect("just pushed"))
    }

    pub fn finish(&mut self, final_score: i32, outcome: Status) -> Result<(), HarnessError> {
        if self.is_finished() {
            return Err(HarnessError::TrialOver(self.plan.index));
        }
        self.final_score = Some(final_score);
        self.outcome = Some(outcome);
        Ok(())
    }

    pub fn submit_questionnaire(
        &mut self,
        trust: Rating,
        self_confidence: Rating,
    ) -> Result<(), HarnessError> {
        if self.sealed() {
            return Err(HarnessError::TrialSealed(self.plan.index));
        }
        if !self.is_finished() {
            return Err(HarnessError::TrialNotOver(self.plan.index));
        }
        self.trust = Some(trust);
        self.self_confidence = Some(self_confidence);
        Ok(())
    }
}
