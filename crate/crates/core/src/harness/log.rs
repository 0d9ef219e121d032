//! Append-only NDJSON session log, flushed after every record.

use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{HarnessError, PlannedTrial, Rating, SessionPlan, StepRecord, TrialRecord};
use crate::advisor::Rational;
use crate::play::Game;
use crate::world::{MapSpec, Status};

pub const LOG_SCHEMA: &str = "treasure-hunter-session";
pub const LOG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "type",
    rename_all = "kebab-case",
    rename_all_fields = "camelCase"
)]
pub enum LogRecord {
    Header {
        schema: String,
        version: u32,
        participant_id: String,
        created_unix: u64,
    },
    Plan {
        plan: SessionPlan,
    },
    /// A map was loaded. The full map is kept so the log replays on its own.
    Trial {
        trial: PlannedTrial,
        map: MapSpec,
    },
    Step {
        trial: usize,
        step: StepRecord,
    },
    TrialEnd {
        trial: usize,
        final_score: i32,
        outcome: Status,
    },
    Questionnaire {
        trial: usize,
        trust: Rating,
        self_confidence: Rating,
    },
    Seal {
        trial: usize,
        acceptance_rate: Option<Rational>,
        final_score: i32,
    },
    Abandoned {
        trial: Option<usize>,
        idle_secs: u64,
    },
    Complete {
        scores: Vec<i32>,
    },
}

impl LogRecord {
    pub fn header(participant_id: &str, created_unix: u64) -> Self {
        LogRecord::Header {
            schema: LOG_SCHEMA.to_owned(),
            version: LOG_SCHEMA_VERSION,
            participant_id: participant_id.to_owned(),
            created_unix,
        }
    }
}

#[derive(Debug)]
enum Sink {
    File { path: PathBuf, out: BufWriter<File> },
    Memory,
}

/// Records written so far, plus an optional file they are mirrored to.
#[derive(Debug)]
pub struct SessionLog {
    sink: Sink,
    records: Vec<LogRecord>,
}

impl SessionLog {
    pub fn in_memory() -> Self {
        Self {
            sink: Sink::Memory,
            records: Vec::new(),
        }
    }

    /// Creates `{participant_id}-{created_unix}.ndjson` in `dir`.
    pub fn create(
        dir: impl AsRef<Path>,
        participant_id: &str,
        created_unix: u64,
    ) -> Result<Self, HarnessError> {
        let safe: String = participant_id
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        std::fs::create_dir_all(dir.as_ref())?;
        let path = dir.as_ref().join(format!("{safe}-{created_unix}.ndjson"));
        let file = File::options().create_new(true).write(true).open(&path)?;
        Ok(Self {
            sink: Sink::File {
                path,
                out: BufWriter::new(file),
            },
            records: Vec::new(),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        match &self.sink {
            Sink::File { path, .. } => Some(path),
            Sink::Memory => None,
        }
    }

    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn append(&mut self, record: LogRecord) -> Result<(), HarnessError> {
        self.append_all(vec![record])
    }

    /// Writes the records with a single write and flush, so a failure leaves
    /// none of them in memory.
    pub fn append_all(&mut self, records: Vec<LogRecord>) -> Result<(), HarnessError> {
        if let Sink::File { out, .. } = &mut self.sink {
            let mut buf = Vec::new();
            for record in &records {
                serde_json::to_writer(&mut buf, record)?;
                buf.push(b'\n');
            }
            out.write_all(&buf)?;
            out.flush()?;
        }
        self.records.extend(records);
        Ok(())
    }
}

pub fn read_log(path: impl AsRef<Path>) -> Result<Vec<LogRecord>, HarnessError> {
    let file = std::io::BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    for line in file.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(records)
}

/// Rebuilds the plan and trial records, re-deriving acceptance rates from steps.
pub fn trials_from_log(
    records: &[LogRecord],
) -> Result<(SessionPlan, Vec<TrialRecord>), HarnessError> {
    let bad = |m: String| HarnessError::BadLog(m);
    match records.first() {
        Some(LogRecord::Header {
            schema, version, ..
        }) if schema == LOG_SCHEMA && *version == LOG_SCHEMA_VERSION => {}
        other => {
            return Err(bad(format!(
                "expected a version {LOG_SCHEMA_VERSION} header, got {other:?}"
            )))
        }
    }
    let mut plan = None;
    let mut trials: Vec<TrialRecord> = Vec::new();
    for record in &records[1..] {
        let current = |trials: &mut Vec<TrialRecord>, idx: usize| -> Result<usize, HarnessError> {
            match trials.last() {
                Some(t) if t.plan.index == idx => Ok(trials.len() - 1),
                _ => Err(HarnessError::BadLog(format!(
                    "record for trial {idx} out of order"
                ))),
            }
        };
        match record {
            LogRecord::Header { .. } => return Err(bad("second header".into())),
            LogRecord::Plan { plan: p } => plan = Some(p.clone()),
            LogRecord::Trial { trial, .. } => trials.push(TrialRecord::new(trial.clone())),
            LogRecord::Step { trial, step } => {
                let i = current(&mut trials, *trial)?;
                let t = &mut trials[i];
                if step.step_index != t.steps.len()
                    || step.accepted != (step.chosen == step.recommended)
                {
                    return Err(bad(format!(
                        "inconsistent step {} in trial {trial}",
                        step.step_index
                    )));
                }
                t.record_step(
                    step.options.clone(),
                    step.recommended,
                    step.chosen,
                    step.score_delta,
                )?;
            }
            LogRecord::TrialEnd {
                trial,
                final_score,
                outcome,
            } => {
                let i = current(&mut trials, *trial)?;
                trials[i].finish(*final_score, *outcome)?;
            }
            LogRecord::Questionnaire {
                trial,
                trust,
                self_confidence,
            } => {
                let i = current(&mut trials, *trial)?;
                trials[i].submit_questionnaire(*trust, *self_confidence)?;
            }
            LogRecord::Seal {
                trial,
                acceptance_rate,
                ..
            } => {
                let i = current(&mut trials, *trial)?;
                if trials[i].acceptance_rate != *acceptance_rate {
                    return Err(bad(format!(
                        "sealed acceptance rate of trial {trial} disagrees with its steps"
                    )));
                }
            }
            LogRecord::Abandoned { .. } | LogRecord::Complete { .. } => {}
        }
    }
    let plan = plan.ok_or_else(|| bad("no plan record".into()))?;
    Ok((plan, trials))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayedTrial {
    pub index: usize,
    pub map_id: String,
    pub logged_score: Option<i32>,
    pub replayed_score: i32,
    pub replayed_status: Status,
}

/// Replays every trial's choices on its logged map. Fails on any illegal
/// choice, any option list or score delta that differs from the log, or a
/// final score that disagrees.
pub fn replay_log(records: &[LogRecord]) -> Result<Vec<ReplayedTrial>, HarnessError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String, Game)> = None;
    let finish =
        |cur: Option<(usize, String, Game)>, logged: Option<i32>, out: &mut Vec<ReplayedTrial>| {
            if let Some((index, map_id, game)) = cur {
                out.push(ReplayedTrial {
                    index,
                    map_id,
                    logged_score: logged,
                    replayed_score: game.state().score(),
                    replayed_status: game.state().status(),
                });
            }
        };
    let mismatch = |trial, detail: String| HarnessError::ReplayMismatch { trial, detail };
    for record in records {
        match record {
            LogRecord::Trial { trial, map } => {
                let prev = current.take();
                finish(prev, None, &mut out);
                current = Some((trial.index, trial.map_id.clone(), Game::new(map.clone())));
            }
            LogRecord::Step { trial, step } => {
                let Some((index, _, game)) = current.as_mut() else {
                    return Err(mismatch(*trial, "step before any trial".into()));
                };
                if *index != *trial {
                    return Err(mismatch(
                        *trial,
                        "step logged against the wrong trial".into(),
                    ));
                }
                if game.options() != step.options {
                    return Err(mismatch(
                        *trial,
                        format!("options differ at step {}", step.step_index),
                    ));
                }
                let next = game
                    .advance(step.chosen)
                    .map_err(|e| mismatch(*trial, e.to_string()))?;
                let delta = next.state().score() - game.state().score();
                if delta != step.score_delta {
                    return Err(mismatch(
                        *trial,
                        format!(
                            "step {} delta {} but logged {}",
                            step.step_index, delta, step.score_delta
                        ),
                    ));
                }
                *game = next;
            }
            LogRecord::TrialEnd {
                trial,
                final_score,
                outcome,
            } => {
                let Some((index, _, game)) = current.as_ref() else {
                    return Err(mismatch(*trial, "trial end before any trial".into()));
                };
                let state = game.state();
                if *index != *trial || state.score() != *final_score || state.status() != *outcome {
                    return Err(mismatch(
                        *trial,
                        format!(
                            "replayed {} ({:?}) but logged {} ({:?})",
                            state.score(),
                            state.status(),
                            final_score,
                            outcome
                        ),
                    ));
                }
                finish(current.take(), Some(*final_score), &mut out);
            }
            _ => {}
        }
    }
    finish(current.take(), None, &mut out);
    Ok(out)
}
