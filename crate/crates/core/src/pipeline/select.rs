use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    derive_seed, generate_map, optimal_score, self_play_runs, streams, PipelineError, PitRange,
};
use crate::world::{MapSpec, Position};

/// Knobs for pool evaluation and test-map selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionCriteria {
    pub pool_size: usize,
    pub runs_per_map: usize,
    pub select_count: usize,
    /// Largest per-map standard deviation of self-play scores a test map may have.
    pub max_std_dev: f64,
    pub gold_not_adjacent_to_start: bool,
    pub balance_quadrants: bool,
    pub pit_count: PitRange,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        Self {
            pool_size: 100,
            runs_per_map: 20,
            select_count: 10,
            max_std_dev: 30.0,
            gold_not_adjacent_to_start: true,
            balance_quadrants: true,
            pit_count: PitRange::default(),
        }
    }
}

impl SelectionCriteria {
    /// Allowed per-quadrant gold counts: within one of an even split.
    pub fn quadrant_bounds(&self) -> (usize, usize) {
        let target = self.select_count as f64 / 4.0;
        (
            (target - 1.0).ceil().max(0.0) as usize,
            (target + 1.0).floor() as usize,
        )
    }
}

/// Self-play statistics for one map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MapStats {
    pub pool_index: usize,
    pub map: MapSpec,
    pub scores: Vec<i32>,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std_dev: f64,
    pub std_err: f64,
    pub optimal: i32,
    /// `mean / optimal`, present only when the optimum is positive.
    pub ratio: Option<f64>,
}

impl MapStats {
    pub fn from_scores(
        pool_index: usize,
        map: MapSpec,
        scores: Vec<i32>,
    ) -> Result<Self, PipelineError> {
        let optimal = optimal_score(&map)?;
        let n = scores.len() as f64;
        let mean = scores.iter().map(|&s| f64::from(s)).sum::<f64>() / n;
        let std_dev = if scores.len() > 1 {
            let ss: f64 = scores.iter().map(|&s| (f64::from(s) - mean).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            pool_index,
            map,
            scores,
            mean,
            std_dev,
            std_err: std_dev / n.sqrt(),
            optimal,
            ratio: (optimal > 0).then(|| mean / f64::from(optimal)),
        })
    }
}

/// Quadrant of the 4x4 grid a cell falls in: 2x2 blocks numbered
/// row-block-major from the A1 corner.
pub fn quadrant(pos: Position) -> usize {
    usize::from(pos.row() / 2) * 2 + usize::from(pos.col() / 2)
}

pub fn evaluate_map(
    pool_index: usize,
    map: &MapSpec,
    runs: usize,
    master_seed: u64,
) -> Result<MapStats, PipelineError> {
    let map_seed = derive_seed(master_seed, streams::SELF_PLAY, pool_index as u64);
    let scores = self_play_runs("", map, runs, map_seed)
        .into_iter()
        .map(|r| r.score)
        .collect();
    MapStats::from_scores(pool_index, map.clone(), scores)
}

/// Self-plays every map and returns the stats sorted by standard deviation,
/// lowest first. Ties keep pool order.
pub fn evaluate_pool(
    pool: &[MapSpec],
    criteria: &SelectionCriteria,
    master_seed: u64,
) -> Result<Vec<MapStats>, PipelineError> {
    let mut stats = pool
        .par_iter()
        .enumerate()
        .map(|(i, map)| evaluate_map(i, map, criteria.runs_per_map, master_seed))
        .collect::<Result<Vec<_>, _>>()?;
    stats.sort_by(|a, b| a.std_dev.total_cmp(&b.std_dev));
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("low standard deviation: only {available} maps within the threshold, {needed} needed")]
    LowVariance { available: usize, needed: usize },
    #[error(
        "gold not adjacent to start: only {available} low-variance maps qualify, {needed} needed"
    )]
    GoldAdjacency { available: usize, needed: usize },
    #[error(
        "quadrant balance: could only fill {chosen} of {needed} slots, quadrant counts {counts:?}"
    )]
    QuadrantBalance {
        chosen: usize,
        needed: usize,
        counts: [usize; 4],
    },
    #[error("training maps: {0}")]
    Training(String),
}

fn gold_beside_start(map: &MapSpec) -> bool {
    map.gold().is_adjacent(map.start())
}

/// Scans `ranked` in order and keeps maps that satisfy every enabled criterion.
pub fn select_test_maps(
    ranked: &[MapStats],
    criteria: &SelectionCriteria,
) -> Result<Vec<MapStats>, SelectionError> {
    let needed = criteria.select_count;
    let low_variance: Vec<&MapStats> = ranked
        .iter()
        .filter(|s| s.std_dev <= criteria.max_std_dev)
        .collect();
    if low_variance.len() < needed {
        return Err(SelectionError::LowVariance {
            available: low_variance.len(),
            needed,
        });
    }
    let eligible: Vec<&MapStats> = low_variance
        .into_iter()
        .filter(|s| !criteria.gold_not_adjacent_to_start || !gold_beside_start(&s.map))
        .collect();
    if eligible.len() < needed {
        return Err(SelectionError::GoldAdjacency {
            available: eligible.len(),
            needed,
        });
    }
    if !criteria.balance_quadrants {
        return Ok(eligible.into_iter().take(needed).cloned().collect());
    }

    let (low, high) = criteria.quadrant_bounds();
    let mut counts = [0usize; 4];
    let mut chosen = Vec::with_capacity(needed);
    for stats in eligible {
        if chosen.len() == needed {
            break;
        }
        let q = quadrant(stats.map.gold());
        if counts[q] + 1 > high {
            continue;
        }
        let mut after = counts;
        after[q] += 1;
        // Keep enough free slots to lift every quadrant to the minimum.
        let deficit: usize = after.iter().map(|&c| low.saturating_sub(c)).sum();
        if deficit > needed - chosen.len() - 1 {
            continue;
        }
        counts = after;
        chosen.push(stats.clone());
    }
    if chosen.len() < needed {
        return Err(SelectionError::QuadrantBalance {
            chosen: chosen.len(),
            needed,
            counts,
        });
    }
    Ok(chosen)
}

/// Five training maps from the maps not used for testing, in presentation
/// order: slots 1, 2 and 4 are low-variance maps like the test maps; slots
/// 3 and 5 have a pit next to the start.
pub fn select_training_maps(
    ranked: &[MapStats],
    tests: &[MapStats],
    criteria: &SelectionCriteria,
) -> Result<Vec<MapStats>, SelectionError> {
    let unused = || {
        ranked
            .iter()
            .filter(|s| tests.iter().all(|t| t.pool_index != s.pool_index))
    };
    let pit_beside_start = |s: &MapStats| s.map.pits().iter().any(|p| p.is_adjacent(s.map.start()));
    let similar: Vec<&MapStats> = unused()
        .filter(|s| {
            s.std_dev <= criteria.max_std_dev && !gold_beside_start(&s.map) && !pit_beside_start(s)
        })
        .take(3)
        .collect();
    let pit_maps: Vec<&MapStats> = unused().filter(|s| pit_beside_start(s)).take(2).collect();
    if similar.len() < 3 {
        return Err(SelectionError::Training(format!(
            "only {} unused low-variance maps",
            similar.len()
        )));
    }
    if pit_maps.len() < 2 {
        return Err(SelectionError::Training(format!(
            "only {} unused maps with a pit next to the start",
            pit_maps.len()
        )));
    }
    Ok(
        [similar[0], similar[1], pit_maps[0], similar[2], pit_maps[1]]
            .into_iter()
            .cloned()
            .collect(),
    )
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineReport {
    pub seed: u64,
    pub criteria: SelectionCriteria,
    pub ranked: Vec<MapStats>,
    pub tests: Vec<MapStats>,
    pub training: Vec<MapStats>,
}

impl PipelineReport {
    /// Mean of `mean / optimal` across the selected test maps.
    pub fn mean_ratio(&self) -> Option<f64> {
        let ratios: Vec<f64> = self.tests.iter().filter_map(|s| s.ratio).collect();
        (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
    }
}

/// Generate, evaluate, rank and select from a single master seed.
pub fn run_pipeline(
    master_seed: u64,
    criteria: &SelectionCriteria,
) -> Result<PipelineReport, PipelineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, streams::POOL, 0));
    let pool = (0..criteria.pool_size)
        .map(|_| generate_map(&mut rng, criteria.pit_count))
        .collect::<Result<Vec<_>, _>>()?;
    let ranked = evaluate_pool(&pool, criteria, master_seed)?;
    let tests = select_test_maps(&ranked, criteria)?;
    let training = select_training_maps(&ranked, &tests, criteria)?;
    Ok(PipelineReport {
        seed: master_seed,
        criteria: criteria.clone(),
        ranked,
        tests,
        training,
    })
}
