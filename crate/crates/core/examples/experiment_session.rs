//! Runs one simulated participant through a full session (5 training and 10
//! test maps) using the session manager, then prints the CSV export and
//! replays the event log.
//!
//! ```bash
//! cargo run -p treasure-hunter --example experiment_session -- /tmp/th-logs
//! ```

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treasure_hunter::harness::{read_log, replay_log, FixtureSet};
use treasure_hunter::service::{QuestionnaireOutcome, ServiceConfig, SessionManager};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log_dir = std::env::args().nth(1).map(std::path::PathBuf::from);
    let fixtures =
        FixtureSet::load(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/maps"))?;
    let manager = SessionManager::new(
        fixtures,
        ServiceConfig {
            master_seed: 11,
            log_dir: log_dir.clone(),
            idle_timeout: Duration::from_secs(600),
        },
    );
    let created = manager.create_session("demo-participant")?;
    let token = created.token;
    println!(
        "conditions in order: {} then {}",
        created.condition_order[0], created.condition_order[1]
    );

    // Follows advice four times out of five.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut view = created.state;
    loop {
        if view.questionnaire_required {
            println!(
                "trial {:>2} {:<11} {:<16} score {:>5}",
                view.trial_index,
                view.map_id,
                view.condition.to_string(),
                view.score
            );
            match manager.post_questionnaire(
                &token,
                rng.random_range(4..=8),
                rng.random_range(3..=7),
            )? {
                QuestionnaireOutcome::Next(next) => view = next,
                QuestionnaireOutcome::Complete(summary) => {
                    println!("total score {}", summary.total_score);
                    break;
                }
            }
            continue;
        }
        let cell = match view.recommendation {
            Some(rec) if rng.random_bool(0.8) => rec,
            _ => view.frontier[rng.random_range(0..view.frontier.len())],
        };
        view = manager.post_move(&token, cell)?;
    }

    println!("\n{}", manager.export(&token)?);

    let records =
        match manager.with_session(&token, |s| Ok(s.log().path().map(|p| p.to_path_buf())))? {
            Some(path) => {
                println!("log written to {}", path.display());
                read_log(&path)?
            }
            None => manager.with_session(&token, |s| Ok(s.log().records().to_vec()))?,
        };
    let replayed = replay_log(&records)?;
    let ok = replayed
        .iter()
        .all(|t| t.logged_score == Some(t.replayed_score));
    println!(
        "{} log records; replay reproduces all {} scores: {ok}",
        records.len(),
        replayed.len()
    );
    Ok(())
}
