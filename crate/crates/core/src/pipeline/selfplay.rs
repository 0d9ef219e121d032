use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{derive_seed, streams, PipelineError};
use crate::advisor::{recommend, OptionAssessment};
use crate::play::Game;
use crate::world::{GameState, MapSpec, Position, Status};

/// What the assistant saw and chose at one step of a self-play game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub options: Vec<OptionAssessment>,
    pub recommended: Position,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfPlayTrace {
    pub steps: Vec<TraceStep>,
    pub state: GameState,
}

impl SelfPlayTrace {
    pub fn choices(&self) -> Vec<Position> {
        self.steps.iter().map(|s| s.recommended).collect()
    }
}

/// Plays `map` to the end, always following the recommendation.
pub fn self_play_traced<R: Rng + ?Sized>(map: &MapSpec, rng: &mut R) -> SelfPlayTrace {
    let mut game = Game::new(map.clone());
    let mut steps = Vec::new();
    // Each move uncovers a new cell, so this loop runs at most CELL_COUNT times.
    while !game.state().status().is_terminal() {
        let options = game.options();
        let recommended = recommend(&options, rng).expect("frontier is never empty mid-game");
        game = game
            .advance(recommended)
            .expect("recommendation is a legal move");
        steps.push(TraceStep {
            options,
            recommended,
        });
    }
    SelfPlayTrace {
        steps,
        state: game.state().clone(),
    }
}

pub fn self_play<R: Rng + ?Sized>(map: &MapSpec, rng: &mut R) -> GameState {
    self_play_traced(map, rng).state
}

/// One row of the self-play CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunRecord {
    pub map_id: String,
    pub run: usize,
    pub seed: u64,
    pub score: i32,
    pub steps: usize,
    pub outcome: Status,
}

/// `runs` self-play games on one map, each with its own derived seed.
pub fn self_play_runs(
    map_id: &str,
    map: &MapSpec,
    runs: usize,
    master_seed: u64,
) -> Vec<RunRecord> {
    (0..runs)
        .map(|run| {
            let seed = derive_seed(master_seed, streams::SELF_PLAY, run as u64);
            let state = self_play(map, &mut ChaCha8Rng::seed_from_u64(seed));
            RunRecord {
                map_id: map_id.to_owned(),
                run,
                seed,
                score: state.score(),
                steps: state.steps().len(),
                outcome: state.status(),
            }
        })
        .collect()
}

/// CSV with columns `mapId,run,seed,score,steps,outcome`.
pub fn write_runs_csv<W: std::io::Write>(
    records: &[RunRecord],
    out: W,
) -> Result<(), PipelineError> {
    let mut writer = csv::Writer::from_writer(out);
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}
