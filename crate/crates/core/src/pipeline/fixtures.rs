use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MapStats, PipelineError, PipelineReport, SelectionCriteria};

/// Summary written next to the map files so a fixture set can be traced
/// back to the seed and criteria that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureManifest {
    pub seed: u64,
    pub criteria: SelectionCriteria,
    pub mean_ratio: Option<f64>,
    pub tests: Vec<ManifestEntry>,
    pub training: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub id: String,
    pub pool_index: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub optimal: i32,
    pub ratio: Option<f64>,
}

impl ManifestEntry {
    fn new(id: String, s: &MapStats) -> Self {
        Self {
            id,
            pool_index: s.pool_index,
            mean: s.mean,
            std_dev: s.std_dev,
            std_err: s.std_err,
            optimal: s.optimal,
            ratio: s.ratio,
        }
    }
}

/// Writes `test-01.json ..`, `training-1.json ..` and `manifest.json` into `dir`.
pub fn write_fixtures(
    report: &PipelineReport,
    dir: &Path,
) -> Result<FixtureManifest, PipelineError> {
    fs::create_dir_all(dir)?;
    let mut tests = Vec::new();
    for (i, s) in report.tests.iter().enumerate() {
        let id = format!("test-{:02}", i + 1);
        s.map.save(dir.join(format!("{id}.json")))?;
        tests.push(ManifestEntry::new(id, s));
    }
    let mut training = Vec::new();
    for (i, s) in report.training.iter().enumerate() {
        let id = format!("training-{}", i + 1);
        s.map.save(dir.join(format!("{id}.json")))?;
        training.push(ManifestEntry::new(id, s));
    }
    let manifest = FixtureManifest {
        seed: report.seed,
        criteria: report.criteria.clone(),
        mean_ratio: report.mean_ratio(),
        tests,
        training,
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(manifest)
}
