mod common;

use common::{indistinguishable_variant, random_map};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treasure_hunter::advisor::{build_rationale, recommend};
use treasure_hunter::harness::{Condition, Phase, PlannedTrial};
use treasure_hunter::pipeline::self_play_traced;
use treasure_hunter::play::Game;
use treasure_hunter::service::{PendingStep, ViewState};
use treasure_hunter::world::{MapSpec, Position};

fn trial(display: bool) -> PlannedTrial {
    PlannedTrial {
        index: 7,
        map_id: "test-03".into(),
        phase: Phase::Test,
        condition: if display {
            Condition::DISPLAY_PRESENT
        } else {
            Condition::DISPLAY_ABSENT
        },
        assisted: true,
        index_in_condition: Some(2),
    }
}

fn view_after(map: &MapSpec, choices: &[Position], seed: u64, display: bool) -> String {
    let mut game = Game::new(map.clone());
    for &c in choices {
        game = game.advance(c).unwrap();
    }
    let options = game.options();
    let pending = (!options.is_empty()).then(|| {
        let recommended = recommend(&options, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        PendingStep {
            rationale: build_rationale(&options, recommended).unwrap(),
            options,
            recommended,
        }
    });
    let view = ViewState::build(
        &trial(display),
        15,
        game.state(),
        game.kb(),
        pending.as_ref(),
        game.state().status().is_terminal(),
        false,
    );
    serde_json::to_string(&view).unwrap()
}

#[test]
fn payload_ignores_hidden_ground_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut compared = 0;
    for i in 0..400u64 {
        let map = random_map(&mut rng, 3);
        let trace = self_play_traced(&map, &mut ChaCha8Rng::seed_from_u64(i));
        let choices = trace.choices();
        let cut = rng.random_range(0..=choices.len());
        let mid = treasure_hunter::world::replay(&map, &choices[..cut]).unwrap();
        let Some(variant) = indistinguishable_variant(&map, mid.visited(), &mut rng) else {
            continue;
        };
        let display = i % 2 == 0;
        assert_eq!(
            view_after(&map, &choices[..cut], i, display),
            view_after(&variant, &choices[..cut], i, display),
            "map {map:?} vs {variant:?} after {:?}",
            &choices[..cut]
        );
        compared += 1;
    }
    assert!(compared > 300, "only {compared} comparisons");
}

#[test]
fn absent_display_still_stars() {
    let map = random_map(&mut ChaCha8Rng::seed_from_u64(3), 2);
    let v: serde_json::Value = serde_json::from_str(&view_after(&map, &[], 0, false)).unwrap();
    assert!(v["recommendation"].is_string());
    assert!(v.get("rationale").is_none());
    let v: serde_json::Value = serde_json::from_str(&view_after(&map, &[], 0, true)).unwrap();
    assert_eq!(v["rationale"][0]["starred"], true);
    assert_eq!(v["rationale"][0]["expectedScore"], "250.00");
}
