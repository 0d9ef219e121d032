//! Within-subjects experiment harness.
//!
//! A participant plays five training maps in a fixed order, then ten test
//! maps in random order: five with the rationale display and five without,
//! the order of the two blocks alternating between participants. After every
//! map they rate their trust in the assistant and their confidence without it.

mod export;
mod log;
mod trial;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{MapError, MapSpec};

pub use export::{export_rows, export_session, read_export, ExportRow, EXPORT_HEADER};
pub use log::{
    read_log, replay_log, trials_from_log, LogRecord, ReplayedTrial, SessionLog, LOG_SCHEMA,
    LOG_SCHEMA_VERSION,
};
pub use trial::{Rating, StepRecord, TrialRecord};

pub const TEST_MAP_COUNT: usize = 10;
pub const TRAINING_MAP_COUNT: usize = 5;
pub const MAPS_PER_CONDITION: usize = TEST_MAP_COUNT / 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("fixtures need {needed} {kind} maps, found {found}")]
    MissingFixtures {
        kind: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("unknown map id {0}")]
    UnknownMap(String),
    #[error("chosen cell {0} is not one of the offered options")]
    ChoiceNotOffered(crate::world::Position),
    #[error("recommended cell {0} is not one of the offered options")]
    RecommendationNotOffered(crate::world::Position),
    #[error("trial {0} has already ended")]
    TrialOver(usize),
    #[error("trial {0} is sealed")]
    TrialSealed(usize),
    #[error("trial {0} has not ended yet; finish the map before the questionnaire")]
    TrialNotOver(usize),
    #[error("rating {0} is outside the 1-9 scale")]
    RatingOutOfRange(i64),
    #[error("trials not sealed: {0:?}")]
    Unsealed(Vec<usize>),
    #[error("log is malformed: {0}")]
    BadLog(String),
    #[error("replay of trial {trial} diverged: {detail}")]
    ReplayMismatch { trial: usize, detail: String },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Whether the option-centric rationale display is shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Condition {
    pub rationale_display: bool,
}

impl Condition {
    pub const DISPLAY_PRESENT: Condition = Condition {
        rationale_display: true,
    };
    pub const DISPLAY_ABSENT: Condition = Condition {
        rationale_display: false,
    };

    fn as_str(self) -> &'static str {
        if self.rationale_display {
            "display-present"
        } else {
            "display-absent"
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Condition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "display-present" => Ok(Condition::DISPLAY_PRESENT),
            "display-absent" => Ok(Condition::DISPLAY_ABSENT),
            other => Err(serde::de::Error::custom(format!(
                "unknown condition {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Training,
    Test,
}

/// Named maps for training and testing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureSet {
    pub tests: BTreeMap<String, MapSpec>,
    pub training: BTreeMap<String, MapSpec>,
}

impl FixtureSet {
    /// Reads `test-*.json` and `training-*.json` from `dir`; the file stem is the map id.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let mut set = FixtureSet::default();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            if stem.starts_with("test-") {
                set.tests.insert(stem.to_owned(), MapSpec::load(&path)?);
            } else if stem.starts_with("training-") {
                set.training.insert(stem.to_owned(), MapSpec::load(&path)?);
            }
        }
        Ok(set)
    }

    pub fn map(&self, id: &str) -> Option<&MapSpec> {
        self.tests.get(id).or_else(|| self.training.get(id))
    }

    fn check_complete(&self) -> Result<(), HarnessError> {
        let check = |kind, needed, found| {
            if found < needed {
                Err(HarnessError::MissingFixtures {
                    kind,
                    needed,
                    found,
                })
            } else {
                Ok(())
            }
        };
        check("test", TEST_MAP_COUNT, self.tests.len())?;
        check("training", TRAINING_MAP_COUNT, self.training.len())
    }
}

/// One map in a participant's sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlannedTrial {
    /// Position in the full 15-map sequence, from 0.
    pub index: usize,
    pub map_id: String,
    pub phase: Phase,
    pub condition: Condition,
    /// False only for the first training map, which is played without advice.
    pub assisted: bool,
    /// 1-based position within the condition block, test maps only.
    pub index_in_condition: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionPlan {
    pub participant_id: String,
    pub participant_index: usize,
    pub condition_order: [Condition; 2],
    /// Shuffled test map ids; the first half belongs to `condition_order[0]`.
    pub test_maps: Vec<String>,
    pub training_maps: Vec<String>,
}

impl SessionPlan {
    /// Training maps in their fixed order, then the two test blocks.
    pub fn trials(&self) -> Vec<PlannedTrial> {
        let training = self
            .training_maps
            .iter()
            .enumerate()
            .map(|(i, id)| PlannedTrial {
                index: i,
                map_id: id.clone(),
                phase: Phase::Training,
                condition: if i == 0 {
                    Condition::DISPLAY_ABSENT
                } else {
                    Condition::DISPLAY_PRESENT
                },
                assisted: i != 0,
                index_in_condition: None,
            });
        let offset = self.training_maps.len();
        let tests = self
            .test_maps
            .iter()
            .enumerate()
            .map(move |(i, id)| PlannedTrial {
                index: offset + i,
                map_id: id.clone(),
                phase: Phase::Test,
                condition: self.condition_order[i / MAPS_PER_CONDITION],
                assisted: true,
                index_in_condition: Some(i % MAPS_PER_CONDITION + 1),
            });
        training.chain(tests).collect()
    }
}

/// Display-present first for even participants, display-absent first for odd.
pub fn condition_order(participant_index: usize) -> [Condition; 2] {
    if participant_index % 2 == 0 {
        [Condition::DISPLAY_PRESENT, Condition::DISPLAY_ABSENT]
    } else {
        [Condition::DISPLAY_ABSENT, Condition::DISPLAY_PRESENT]
    }
}

pub fn plan_session<R: Rng + ?Sized>(
    participant_index: usize,
    participant_id: &str,
    fixtures: &FixtureSet,
    rng: &mut R,
) -> Result<SessionPlan, HarnessError> {
    fixtures.check_complete()?;
    let mut test_maps: Vec<String> = fixtures
        .tests
        .keys()
        .take(TEST_MAP_COUNT)
        .cloned()
        .collect();
    test_maps.shuffle(rng);
    Ok(SessionPlan {
        participant_id: participant_id.to_owned(),
        participant_index,
        condition_order: condition_order(participant_index),
        test_maps,
        training_maps: fixtures
            .training
            .keys()
            .take(TRAINING_MAP_COUNT)
            .cloned()
            .collect(),
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn counterbalanced_by_parity() {
        let fixtures = testing::fixtures();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let even = plan_session(0, "p0", &fixtures, &mut rng).unwrap();
        let odd = plan_session(1, "p1", &fixtures, &mut rng).unwrap();
        assert_eq!(even.condition_order[0], odd.condition_order[1]);
        assert_eq!(even.condition_order[1], odd.condition_order[0]);
        assert_ne!(even.condition_order[0], even.condition_order[1]);
    }

    #[test]
    fn every_test_map_once() {
        let fixtures = testing::fixtures();
        let plan = plan_session(4, "p", &fixtures, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let ids: BTreeSet<_> = plan.test_maps.iter().collect();
        assert_eq!(ids.len(), TEST_MAP_COUNT);
        assert!(ids.iter().all(|id| fixtures.tests.contains_key(*id)));
        let trials = plan.trials();
        assert_eq!(trials.len(), 15);
        let present = trials
            .iter()
            .filter(|t| t.phase == Phase::Test && t.condition.rationale_display)
            .count();
        assert_eq!(present, MAPS_PER_CONDITION);
        assert_eq!(
            plan.training_maps,
            [
                "training-1",
                "training-2",
                "training-3",
                "training-4",
                "training-5"
            ]
        );
        assert!(!trials[0].assisted);
        assert!(trials[1..].iter().all(|t| t.assisted));
    }

    #[test]
    fn deterministic_for_same_seed() {
        let fixtures = testing::fixtures();
        let a = plan_session(3, "p", &fixtures, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        let b = plan_session(3, "p", &fixtures, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_fixtures() {
        let mut fixtures = testing::fixtures();
        fixtures.training.remove("training-3");
        let err = plan_session(0, "p", &fixtures, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert!(matches!(
            err,
            HarnessError::MissingFixtures {
                kind: "training",
                ..
            }
        ));
    }

    #[test]
    fn condition_strings() {
        assert_eq!(
            serde_json::to_string(&Condition::DISPLAY_ABSENT).unwrap(),
            "\"display-absent\""
        );
        let back: Condition = serde_json::from_str("\"display-present\"").unwrap();
        assert_eq!(back, Condition::DISPLAY_PRESENT);
        assert!(serde_json::from_str::<Condition>("\"maybe\"").is_err());
    }
}
