//! Map generation, autonomous evaluation and test-map selection.
//!
//! The pipeline generates a pool of random maps, lets the assistant play
//! each one alone a fixed number of times, ranks the pool by the spread of
//! those scores and picks a balanced set of low-variance maps. Every random
//! draw derives from one master seed, so a run is reproducible end to end.

mod fixtures;
mod generate;
mod optimal;
mod select;
mod selfplay;

use thiserror::Error;

use crate::world::MapError;

pub use fixtures::{write_fixtures, FixtureManifest, ManifestEntry};
pub use generate::{generate_map, PitRange};
pub use optimal::optimal_score;
pub use select::{
    evaluate_map, evaluate_pool, quadrant, run_pipeline, select_test_maps, select_training_maps,
    MapStats, PipelineReport, SelectionCriteria, SelectionError,
};
pub use selfplay::{
    self_play, self_play_runs, self_play_traced, write_runs_csv, RunRecord, SelfPlayTrace,
    TraceStep,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot place {pits} pits: only {free} cells remain after start, gold and wumpus")]
    InfeasiblePitCount { pits: usize, free: usize },
    #[error("gold at {0} cannot be reached without entering the wumpus cell")]
    GoldUnreachable(crate::world::Position),
    #[error("selection failed: {0}")]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("cannot write pipeline output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot encode manifest: {0}")]
    Json(#[from] serde_json::Error),
}

/// SplitMix64 finaliser over (master, stream, index); distinct inputs give
/// well-spread, platform-independent seeds.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed streams used by the pipeline and the harness.
pub mod streams {
    pub const POOL: u64 = 1;
    pub const SELF_PLAY: u64 = 2;
    pub const SESSION_PLAN: u64 = 3;
    pub const SESSION_ADVICE: u64 = 4;
}
