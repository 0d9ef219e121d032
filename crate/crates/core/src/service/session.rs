use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::view::{PendingStep, ViewState};
use super::ServiceError;
use crate::advisor::{build_rationale, recommend};
use crate::harness::{
    export_session, FixtureSet, LogRecord, Phase, PlannedTrial, Rating, SessionLog, SessionPlan,
    TrialRecord,
};
use crate::play::Game;
use crate::world::{Position, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialScore {
    pub trial_index: usize,
    pub map_id: String,
    pub phase: Phase,
    pub condition: crate::harness::Condition,
    pub final_score: i32,
    pub outcome: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletionSummary {
    pub participant_id: String,
    pub total_score: i32,
    pub trials: Vec<TrialScore>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuestionnaireOutcome {
    Next(ViewState),
    Complete(CompletionSummary),
}

/// One participant's run through the plan.
#[derive(Debug)]
pub struct Session {
    plan: SessionPlan,
    trials: Vec<PlannedTrial>,
    fixtures: Arc<FixtureSet>,
    records: Vec<TrialRecord>,
    game: Game,
    pending: Option<PendingStep>,
    advice_rng: ChaCha8Rng,
    log: SessionLog,
    complete: bool,
    abandoned: bool,
    last_active: Instant,
}

impl Session {
    /// Starts the first trial. The log receives the header, plan and first map.
    pub fn start(
        plan: SessionPlan,
        fixtures: Arc<FixtureSet>,
        advice_seed: u64,
        mut log: SessionLog,
        created_unix: u64,
        now: Instant,
    ) -> Result<Self, ServiceError> {
        let trials = plan.trials();
        let first = trials.first().ok_or(ServiceError::EmptyPlan)?.clone();
        let map = fixtures
            .map(&first.map_id)
            .ok_or_else(|| ServiceError::UnknownMap(first.map_id.clone()))?
            .clone();
        log.append(LogRecord::header(&plan.participant_id, created_unix))?;
        log.append(LogRecord::Plan { plan: plan.clone() })?;
        log.append(LogRecord::Trial {
            trial: first.clone(),
            map: map.clone(),
        })?;
        let mut session = Session {
            records: vec![TrialRecord::new(first)],
            plan,
            trials,
            fixtures,
            game: Game::new(map),
            pending: None,
            advice_rng: ChaCha8Rng::seed_from_u64(advice_seed),
            log,
            complete: false,
            abandoned: false,
            last_active: now,
        };
        session.pending = session.open_step(&session.game.clone());
        Ok(session)
    }

    pub fn plan(&self) -> &SessionPlan {
        &self.plan
    }

    pub fn records(&self) -> &[TrialRecord] {
        &self.records
    }

    pub fn log(&self) -> &SessionLog {
        &self.log
    }

    /// The open decision, including advice not shown on unassisted maps.
    pub fn pending(&self) -> Option<&PendingStep> {
        self.pending.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_abandoned(&self) -> bool {
        self.abandoned
    }

    pub fn last_active(&self) -> Instant {
        self.last_active
    }

    pub fn touch(&mut self, now: Instant) {
        self.last_active = now;
    }

    fn current(&self) -> &TrialRecord {
        self.records.last().expect("a session always has a trial")
    }

    /// Draws the recommendation for the next decision, if there is one.
    fn open_step(&mut self, game: &Game) -> Option<PendingStep> {
        let options = game.options();
        if options.is_empty() {
            return None;
        }
        let recommended = recommend(&options, &mut self.advice_rng).expect("options are nonempty");
        let rationale =
            build_rationale(&options, recommended).expect("recommendation is an option");
        Some(PendingStep {
            options,
            recommended,
            rationale,
        })
    }

    fn check_live(&self) -> Result<(), ServiceError> {
        if self.abandoned {
            Err(ServiceError::Abandoned)
        } else {
            Ok(())
        }
    }

    pub fn view(&self) -> ViewState {
        let trial = &self.current().plan;
        ViewState::build(
            trial,
            self.trials.len(),
            self.game.state(),
            self.game.kb(),
            self.pending.as_ref(),
            self.game.state().status().is_terminal() && !self.current().sealed(),
            self.complete,
        )
    }

    /// Moves the hunter. Either the move, its step record and its log lines all
    /// land, or none of them do.
    pub fn post_move(&mut self, cell: Position) -> Result<ViewState, ServiceError> {
        self.check_live()?;
        if self.complete {
            return Err(ServiceError::SessionComplete);
        }
        let state = self.game.state();
        if state.status().is_terminal() {
            return Err(ServiceError::QuestionnaireRequired);
        }
        if !state.is_legal(cell) {
            return Err(ServiceError::IllegalMove {
                cell,
                frontier: state.legal_moves().into_iter().collect(),
            });
        }
        let pending = self
            .pending
            .as_ref()
            .expect("an open game has a pending step");
        let next = self.game.advance(cell).expect("legality checked");
        let delta = next.state().score() - state.score();

        let mut record = self.current().clone();
        let step = record
            .record_step(pending.options.clone(), pending.recommended, cell, delta)?
            .clone();
        let trial = record.plan.index;
        let mut lines = vec![LogRecord::Step { trial, step }];
        if next.state().status().is_terminal() {
            record.finish(next.state().score(), next.state().status())?;
            lines.push(LogRecord::TrialEnd {
                trial,
                final_score: next.state().score(),
                outcome: next.state().status(),
            });
        }
        let rng_before = self.advice_rng.clone();
        let pending = self.open_step(&next);
        if let Err(e) = self.log.append_all(lines) {
            self.advice_rng = rng_before;
            return Err(e.into());
        }
        *self.records.last_mut().expect("current trial") = record;
        self.game = next;
        self.pending = pending;
        Ok(self.view())
    }

    pub fn post_questionnaire(
        &mut self,
        trust: i64,
        self_confidence: i64,
    ) -> Result<QuestionnaireOutcome, ServiceError> {
        self.check_live()?;
        if self.complete {
            return Err(ServiceError::SessionComplete);
        }
        let trust = Rating::new(trust)?;
        let self_confidence = Rating::new(self_confidence)?;
        let mut record = self.current().clone();
        record.submit_questionnaire(trust, self_confidence)?;
        let trial = record.plan.index;
        let mut lines = vec![
            LogRecord::Questionnaire {
                trial,
                trust,
                self_confidence,
            },
            LogRecord::Seal {
                trial,
                acceptance_rate: record.acceptance_rate,
                final_score: record.final_score.expect("sealed trials are finished"),
            },
        ];
        let next_plan = self.trials.get(trial + 1).cloned();
        let next_game = match &next_plan {
            Some(p) => {
                let map = self
                    .fixtures
                    .map(&p.map_id)
                    .ok_or_else(|| ServiceError::UnknownMap(p.map_id.clone()))?
                    .clone();
                lines.push(LogRecord::Trial {
                    trial: p.clone(),
                    map: map.clone(),
                });
                Some(Game::new(map))
            }
            None => {
                let mut scores: Vec<i32> = self.records[..trial]
                    .iter()
                    .filter_map(|r| r.final_score)
                    .collect();
                scores.extend(record.final_score);
                lines.push(LogRecord::Complete { scores });
                None
            }
        };
        let rng_before = self.advice_rng.clone();
        let pending = next_game.as_ref().and_then(|g| self.open_step(g));
        if let Err(e) = self.log.append_all(lines) {
            self.advice_rng = rng_before;
            return Err(e.into());
        }
        *self.records.last_mut().expect("current trial") = record;
        match (next_plan, next_game) {
            (Some(p), Some(game)) => {
                self.records.push(TrialRecord::new(p));
                self.game = game;
                self.pending = pending;
                Ok(QuestionnaireOutcome::Next(self.view()))
            }
            _ => {
                self.complete = true;
                self.pending = None;
                Ok(QuestionnaireOutcome::Complete(self.summary()))
            }
        }
    }

    pub fn summary(&self) -> CompletionSummary {
        let trials: Vec<TrialScore> = self
            .records
            .iter()
            .filter_map(|r| {
                Some(TrialScore {
                    trial_index: r.plan.index,
                    map_id: r.plan.map_id.clone(),
                    phase: r.plan.phase,
                    condition: r.plan.condition,
                    final_score: r.final_score?,
                    outcome: r.outcome?,
                })
            })
            .collect();
        CompletionSummary {
            participant_id: self.plan.participant_id.clone(),
            total_score: trials.iter().map(|t| t.final_score).sum(),
            trials,
        }
    }

    /// CSV of the test trials, available once every map is done.
    pub fn export_csv(&self) -> Result<String, ServiceError> {
        if !self.complete {
            return Err(ServiceError::NotComplete);
        }
        let mut buf = Vec::new();
        export_session(&self.plan, &self.records, &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv writer emits utf-8"))
    }

    /// Seals the log as abandoned. Later requests are refused.
    pub fn abandon(&mut self, idle_secs: u64) -> Result<(), ServiceError> {
        if self.abandoned || self.complete {
            return Ok(());
        }
        self.abandoned = true;
        self.log.append(LogRecord::Abandoned {
            trial: Some(self.current().plan.index),
            idle_secs,
        })?;
        Ok(())
    }
}
