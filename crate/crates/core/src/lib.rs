//! Treasure Hunter: a Wumpus-world variant with a propositional-logic
//! assistant, an option-centric rationale display, a map-selection pipeline
//! and a within-subjects experiment harness.
//!
//! The crate is organised bottom-up:
//!
//! - [`world`]: grid, maps, percepts, moves and scoring
//! - [`logic`]: knowledge base and entailment
//! - [`advisor`]: six-case outcome table, expected score, recommendation, rationale
//! - [`pipeline`]: map generation, self-play, optimal score, test-map selection
//! - [`harness`]: session plans, trial records, event logs and CSV export
//! - [`service`]: session manager and participant-facing view state
//!
//! Runnable walkthroughs for each area live in `examples/`.

pub mod advisor;
pub mod harness;
pub mod logic;
pub mod pipeline;
pub mod play;
pub mod service;
pub mod world;

pub use advisor::{CaseId, OptionAssessment, OutcomeProbs, RationaleRow};
pub use logic::{HazardJudgment, KnowledgeBase, Literal, LiteralKind};
pub use world::{GameState, MapSpec, Percept, Position, Status};
