//! One-step expected-value advisor and the option-centric rationale it emits.
//!
//! Each frontier cell is judged by the knowledge base, mapped to one of six
//! cases, and given a fixed outcome distribution over wumpus / pit / gold /
//! nothing. All arithmetic is exact; rounding only happens on the wire.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Consequences, HazardJudgment, KnowledgeBase, LogicError, Truth};
use crate::world::{Position, GOLD_REWARD, PIT_PENALTY, WUMPUS_PENALTY};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error)]
pub enum AdvisorError {
    #[error("no options to choose from")]
    NoOptions,
    #[error("recommended cell {0} is not among the options")]
    UnknownRecommendation(Position),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// One of the six constructible hazard judgments, numbered 1 to 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub struct CaseId(u8);

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId(1),
        CaseId(2),
        CaseId(3),
        CaseId(4),
        CaseId(5),
        CaseId(6),
    ];

    pub fn new(id: u8) -> Option<Self> {
        (1..=6).contains(&id).then_some(Self(id))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Outcome distribution for this case.
    pub fn probs(self) -> OutcomeProbs {
        case_probs(self)
    }
}

impl From<CaseId> for u8 {
    fn from(c: CaseId) -> u8 {
        c.0
    }
}

impl TryFrom<u8> for CaseId {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        CaseId::new(id).ok_or_else(|| format!("case id {id} outside 1..=6"))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn classify(judgment: HazardJudgment) -> CaseId {
    use Truth::*;
    let id = match (judgment.pit(), judgment.wumpus()) {
        (No, Yes) => 1,
        (Yes, No) => 2,
        (No, No) => 3,
        (Unknown, No) => 4,
        (No, Unknown) => 5,
        (Unknown, Unknown) => 6,
        // HazardJudgment::new refuses the remaining three combinations.
        (Yes, Yes) | (Yes, Unknown) | (Unknown, Yes) => unreachable!("impossible judgment"),
    };
    CaseId(id)
}

/// Probabilities of meeting the wumpus, falling into a pit, finding gold, or
/// nothing happening. Always sums to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeProbs {
    pub wumpus: Rational,
    pub pit: Rational,
    pub gold: Rational,
    pub nothing: Rational,
}

impl OutcomeProbs {
    fn from_parts(parts: [(i64, i64); 4]) -> Self {
        let [w, p, g, n] = parts.map(|(num, den)| Rational::new(num, den));
        Self {
            wumpus: w,
            pit: p,
            gold: g,
            nothing: n,
        }
    }

    pub fn as_array(&self) -> [Rational; 4] {
        [self.wumpus, self.pit, self.gold, self.nothing]
    }

    pub fn total(&self) -> Rational {
        self.as_array().into_iter().sum()
    }
}

pub fn case_probs(case: CaseId) -> OutcomeProbs {
    let parts = match case.0 {
        1 => [(1, 1), (0, 1), (0, 1), (0, 1)],
        2 => [(0, 1), (1, 1), (0, 1), (0, 1)],
        3 => [(0, 1), (0, 1), (1, 2), (1, 2)],
        4 => [(0, 1), (1, 3), (1, 3), (1, 3)],
        5 => [(1, 3), (0, 1), (1, 3), (1, 3)],
        _ => [(1, 4), (1, 4), (1, 4), (1, 4)],
    };
    OutcomeProbs::from_parts(parts)
}

/// Event-weighted sum of the outcome probabilities. The uncovering penalty
/// is the same for every option and is left out.
pub fn expected_score(probs: &OutcomeProbs) -> Rational {
    probs.wumpus * i64::from(WUMPUS_PENALTY)
        + probs.pit * i64::from(PIT_PENALTY)
        + probs.gold * i64::from(GOLD_REWARD)
}

/// Renders a rational with two decimals, rounding halves away from zero.
pub fn format_2dp(value: Rational) -> String {
    let scaled = value * 100;
    let magnitude = scaled.abs();
    let mut hundredths = magnitude.trunc().to_integer();
    if magnitude.fract() * 2 >= Rational::from_integer(1) {
        hundredths += 1;
    }
    let sign = if value.is_negative() && hundredths != 0 {
        "-"
    } else {
        ""
    };
    format!("{sign}{}.{:02}", hundredths / 100, hundredths % 100)
}

/// Assessment of one candidate cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptionAssessment {
    pub pos: Position,
    pub case_id: CaseId,
    pub probs: OutcomeProbs,
    pub expected_score: Rational,
}

impl OptionAssessment {
    pub fn for_case(pos: Position, case_id: CaseId) -> Self {
        let probs = case_probs(case_id);
        Self {
            pos,
            case_id,
            probs,
            expected_score: expected_score(&probs),
        }
    }
}

/// Assessments for `frontier` from precomputed consequences, in cell order.
pub fn assess_with(
    consequences: &Consequences,
    frontier: &BTreeSet<Position>,
) -> Vec<OptionAssessment> {
    frontier
        .iter()
        .map(|&pos| OptionAssessment::for_case(pos, classify(consequences.judge(pos))))
        .collect()
}

pub fn assess_options(
    kb: &KnowledgeBase,
    frontier: &BTreeSet<Position>,
) -> Result<Vec<OptionAssessment>, AdvisorError> {
    Ok(assess_with(&kb.consequences()?, frontier))
}

/// Cells sharing the highest expected score, in the order given.
pub fn best_options(assessments: &[OptionAssessment]) -> Vec<Position> {
    let Some(best) = assessments.iter().map(|a| a.expected_score).max() else {
        return Vec::new();
    };
    assessments
        .iter()
        .filter(|a| a.expected_score == best)
        .map(|a| a.pos)
        .collect()
}

/// Picks uniformly among the best options.
pub fn recommend<R: Rng + ?Sized>(
    assessments: &[OptionAssessment],
    rng: &mut R,
) -> Result<Position, AdvisorError> {
    let best = best_options(assessments);
    match best.len() {
        0 => Err(AdvisorError::NoOptions),
        1 => Ok(best[0]),
        // u32 keeps the draw identical across pointer widths.
        n => Ok(best[rng.random_range(0..n as u32) as usize]),
    }
}

/// One line of the rationale display: every option sharing a distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationaleRow {
    pub positions: Vec<Position>,
    pub probs: OutcomeProbs,
    pub expected_score: Rational,
    pub starred: bool,
}

/// Groups options by distribution, best first, and stars the row holding the
/// recommendation.
pub fn build_rationale(
    assessments: &[OptionAssessment],
    recommended: Position,
) -> Result<Vec<RationaleRow>, AdvisorError> {
    if !assessments.iter().any(|a| a.pos == recommended) {
        return Err(AdvisorError::UnknownRecommendation(recommended));
    }
    let mut rows: Vec<RationaleRow> = Vec::new();
    for a in assessments {
        match rows.iter_mut().find(|r| r.probs == a.probs) {
            Some(row) => row.positions.push(a.pos),
            None => rows.push(RationaleRow {
                positions: vec![a.pos],
                probs: a.probs,
                expected_score: a.expected_score,
                starred: false,
            }),
        }
    }
    for row in &mut rows {
        row.positions.sort();
        row.starred = row.positions.contains(&recommended);
    }
    rows.sort_by(|a, b| {
        b.expected_score
            .cmp(&a.expected_score)
            .then_with(|| a.positions[0].cmp(&b.positions[0]))
    });
    Ok(rows)
}

/// Rationale row as served to the browser: probabilities and score as
/// two-decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RationaleRowWire {
    pub cells: Vec<Position>,
    pub p_wumpus: String,
    pub p_pit: String,
    pub p_gold: String,
    pub p_nothing: String,
    pub expected_score: String,
    pub starred: bool,
}

impl From<&RationaleRow> for RationaleRowWire {
    fn from(row: &RationaleRow) -> Self {
        Self {
            cells: row.positions.clone(),
            p_wumpus: format_2dp(row.probs.wumpus),
            p_pit: format_2dp(row.probs.pit),
            p_gold: format_2dp(row.probs.gold),
            p_nothing: format_2dp(row.probs.nothing),
            expected_score: format_2dp(row.expected_score),
            starred: row.starred,
        }
    }
}

pub fn rationale_wire(rows: &[RationaleRow]) -> Vec<RationaleRowWire> {
    rows.iter().map(RationaleRowWire::from).collect()
}
