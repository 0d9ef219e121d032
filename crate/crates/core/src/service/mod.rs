//! Participant sessions behind opaque tokens.
//!
//! The HTTP layer is a thin shell over [`SessionManager`]. Each session sits
//! behind its own lock, so requests for different participants never wait on
//! each other.

mod session;
mod view;

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::{plan_session, Condition, FixtureSet, HarnessError, PlannedTrial, SessionLog};
use crate::pipeline::{derive_seed, streams};
use crate::world::Position;

pub use session::{CompletionSummary, QuestionnaireOutcome, Session, TrialScore};
pub use view::{CellView, PendingStep, ViewState};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("participant id must not be empty")]
    EmptyParticipant,
    #[error("participant {0} already has a session")]
    Conflict(String),
    #[error("no session for this token")]
    NotFound,
    #[error("session was abandoned after inactivity")]
    Abandoned,
    #[error("{cell} is not on the frontier")]
    IllegalMove {
        cell: Position,
        frontier: Vec<Position>,
    },
    #[error("this map is over; submit the questionnaire to continue")]
    QuestionnaireRequired,
    #[error("all maps are done")]
    SessionComplete,
    #[error("export is available once the session is complete")]
    NotComplete,
    #[error("session plan has no trials")]
    EmptyPlan,
    #[error("fixture set has no map {0}")]
    UnknownMap(String),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub master_seed: u64,
    /// Where session logs go; `None` keeps them in memory.
    pub log_dir: Option<PathBuf>,
    pub idle_timeout: Duration,
}

/// What `POST /sessions` returns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionCreated {
    pub token: String,
    pub participant_id: String,
    pub participant_index: usize,
    pub condition_order: [Condition; 2],
    pub trials: Vec<PlannedTrial>,
    pub state: ViewState,
}

#[derive(Default)]
struct Registry {
    sessions: HashMap<String, Arc<Mutex<Session>>>,
    participants: HashSet<String>,
    created: usize,
}

pub struct SessionManager {
    fixtures: Arc<FixtureSet>,
    config: ServiceConfig,
    registry: Mutex<Registry>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl SessionManager {
    pub fn new(fixtures: FixtureSet, config: ServiceConfig) -> Self {
        Self {
            fixtures: Arc::new(fixtures),
            config,
            registry: Mutex::new(Registry::default()),
        }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn create_session(&self, participant_id: &str) -> Result<SessionCreated, ServiceError> {
        let participant_id = participant_id.trim();
        if participant_id.is_empty() {
            return Err(ServiceError::EmptyParticipant);
        }
        let mut registry = lock(&self.registry);
        if registry.participants.contains(participant_id) {
            return Err(ServiceError::Conflict(participant_id.to_owned()));
        }
        let index = registry.created;
        let master = self.config.master_seed;
        let mut plan_rng =
            ChaCha8Rng::seed_from_u64(derive_seed(master, streams::SESSION_PLAN, index as u64));
        let plan = plan_session(index, participant_id, &self.fixtures, &mut plan_rng)?;
        let created_unix = unix_now();
        let log = match &self.config.log_dir {
            Some(dir) => SessionLog::create(dir, participant_id, created_unix)?,
            None => SessionLog::in_memory(),
        };
        let session = Session::start(
            plan,
            Arc::clone(&self.fixtures),
            derive_seed(master, streams::SESSION_ADVICE, index as u64),
            log,
            created_unix,
            Instant::now(),
        )?;
        let token = uuid::Uuid::new_v4().simple().to_string();
        let created = SessionCreated {
            token: token.clone(),
            participant_id: participant_id.to_owned(),
            participant_index: index,
            condition_order: session.plan().condition_order,
            trials: session.plan().trials(),
            state: session.view(),
        };
        registry.created += 1;
        registry.participants.insert(participant_id.to_owned());
        registry
            .sessions
            .insert(token, Arc::new(Mutex::new(session)));
        Ok(created)
    }

    fn session(&self, token: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        lock(&self.registry)
            .sessions
            .get(token)
            .cloned()
            .ok_or(ServiceError::NotFound)
    }

    /// Runs `f` with the session locked and marks it active.
    pub fn with_session<T>(
        &self,
        token: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ServiceError>,
    ) -> Result<T, ServiceError> {
        let session = self.session(token)?;
        let mut guard = lock(&session);
        if guard.is_abandoned() {
            return Err(ServiceError::Abandoned);
        }
        guard.touch(Instant::now());
        f(&mut guard)
    }

    pub fn state(&self, token: &str) -> Result<ViewState, ServiceError> {
        self.with_session(token, |s| Ok(s.view()))
    }

    pub fn post_move(&self, token: &str, cell: Position) -> Result<ViewState, ServiceError> {
        self.with_session(token, |s| s.post_move(cell))
    }

    pub fn post_questionnaire(
        &self,
        token: &str,
        trust: i64,
        self_confidence: i64,
    ) -> Result<QuestionnaireOutcome, ServiceError> {
        self.with_session(token, |s| s.post_questionnaire(trust, self_confidence))
    }

    pub fn export(&self, token: &str) -> Result<String, ServiceError> {
        self.with_session(token, |s| s.export_csv())
    }

    /// Drops sessions idle longer than the timeout, sealing unfinished ones as
    /// abandoned. Returns each dropped token with the outcome of sealing its log.
    pub fn expire_idle(&self, now: Instant) -> Vec<(String, Result<(), ServiceError>)> {
        let timeout = self.config.idle_timeout;
        let mut registry = lock(&self.registry);
        let mut expired = Vec::new();
        registry.sessions.retain(|token, session| {
            let mut s = lock(session);
            let idle = now.saturating_duration_since(s.last_active());
            if idle < timeout {
                return true;
            }
            expired.push((token.clone(), s.abandon(idle.as_secs())));
            false
        });
        expired
    }

    pub fn session_count(&self) -> usize {
        lock(&self.registry).sessions.len()
    }
}
