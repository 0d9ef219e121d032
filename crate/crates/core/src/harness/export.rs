//! One CSV row per test trial, ready for mixed-effects modelling.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Condition, HarnessError, Phase, SessionPlan, TrialRecord};
use crate::advisor::Rational;

pub const EXPORT_HEADER: &str =
    "participantId,condition,trialIndex,mapId,trust,selfConfidence,acceptanceRate,finalScore";

/// `acceptance_rate` is written as an exact fraction (`2/3`, `1`, `0`), empty
/// when the trial had no steps. `trial_index` counts from 1 within the condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExportRow {
    pub participant_id: String,
    pub condition: Condition,
    pub trial_index: usize,
    pub map_id: String,
    pub trust: u8,
    pub self_confidence: u8,
    #[serde(with = "rational_field")]
    pub acceptance_rate: Option<Rational>,
    pub final_score: i32,
}

mod rational_field {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_str(""),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() {
            return Ok(None);
        }
        text.parse::<Rational>()
            .map(Some)
            .map_err(|e| serde::de::Error::custom(format!("bad rational {text:?}: {e}")))
    }
}

/// Rows for the test trials, in play order.
pub fn export_rows(
    plan: &SessionPlan,
    trials: &[TrialRecord],
) -> Result<Vec<ExportRow>, HarnessError> {
    let tests: Vec<&TrialRecord> = trials
        .iter()
        .filter(|t| t.plan.phase == Phase::Test)
        .collect();
    let unsealed: Vec<usize> = tests
        .iter()
        .filter(|t| !t.sealed())
        .map(|t| t.plan.index)
        .collect();
    if !unsealed.is_empty() {
        return Err(HarnessError::Unsealed(unsealed));
    }
    Ok(tests
        .into_iter()
        .map(|t| ExportRow {
            participant_id: plan.participant_id.clone(),
            condition: t.plan.condition,
            trial_index: t.plan.index_in_condition.unwrap_or(0),
            map_id: t.plan.map_id.clone(),
            trust: t.trust.expect("sealed").get(),
            self_confidence: t.self_confidence.expect("sealed").get(),
            acceptance_rate: t.acceptance_rate,
            final_score: t.final_score.expect("sealed trials are finished"),
        })
        .collect())
}

pub fn export_session<W: Write>(
    plan: &SessionPlan,
    trials: &[TrialRecord],
    out: W,
) -> Result<Vec<ExportRow>, HarnessError> {
    let rows = export_rows(plan, trials)?;
    let mut writer = csv::Writer::from_writer(out);
    if rows.is_empty() {
        writer.write_record(EXPORT_HEADER.split(','))?;
    }
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(rows)
}

pub fn read_export<R: Read>(input: R) -> Result<Vec<ExportRow>, HarnessError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != EXPORT_HEADER {
        return Err(HarnessError::BadLog(format!(
            "unexpected export header {header:?}"
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(HarnessError::from))
        .collect()
}
