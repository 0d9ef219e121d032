use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use treasure_hunter::harness::{read_export, read_log, replay_log, FixtureSet, EXPORT_HEADER};
use treasure_hunter::service::{ServiceConfig, SessionManager};
use treasure_hunter_server::http::router;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/maps")
}

fn app(log_dir: Option<PathBuf>) -> Router {
    let fixtures = FixtureSet::load(fixture_dir()).unwrap();
    router(Arc::new(SessionManager::new(
        fixtures,
        ServiceConfig {
            master_seed: 2024,
            log_dir,
            idle_timeout: Duration::from_secs(600),
        },
    )))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let builder = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(v) => builder
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(v.to_string())),
        None => builder.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, bytes)
}

async fn call_json(
    app: &Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let (status, bytes) = call(app, method, uri, body).await;
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

async fn create(app: &Router, id: &str) -> String {
    let (status, body) = call_json(
        app,
        "POST",
        "/sessions",
        Some(json!({ "participantId": id })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["token"].as_str().unwrap().to_owned()
}

/// Plays every map to the end, following the star when shown. Returns the
/// per-map final scores from the completion summary.
async fn play_session(app: &Router, token: &str) -> Vec<i64> {
    loop {
        let (_, view) = call_json(app, "GET", &format!("/sessions/{token}/state"), None).await;
        if view["questionnaireRequired"] == json!(true) {
            let (status, out) = call_json(
                app,
                "POST",
                &format!("/sessions/{token}/questionnaire"),
                Some(json!({ "trust": 6, "selfConfidence": 4 })),
            )
            .await;
            assert_eq!(status, StatusCode::OK, "{out}");
            if out["kind"] == "complete" {
                return out["trials"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| t["finalScore"].as_i64().unwrap())
                    .collect();
            }
            continue;
        }
        let visited: Vec<Value> = view["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["cell"].clone())
            .collect();
        let cell = if view["recommendation"].is_string() {
            view["recommendation"].clone()
        } else {
            view["frontier"][0].clone()
        };
        let (status, next) = call_json(
            app,
            "POST",
            &format!("/sessions/{token}/move"),
            Some(json!({ "cell": cell })),
        )
        .await;
        assert_eq!(status, StatusCode::OK, "{next}");
        let after: Vec<Value> = next["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["cell"].clone())
            .collect();
        assert_eq!(after.len(), visited.len() + 1);
        assert!(after.contains(&cell));
    }
}

#[tokio::test]
async fn create_then_conflict() {
    let app = app(None);
    let (status, body) = call_json(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "participantId": "p1" })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["trials"].as_array().unwrap().len(), 15);
    assert_eq!(body["state"]["score"], 0);
    assert_eq!(body["state"]["cells"][0]["cell"], "A1");
    let (status, body) = call_json(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "participantId": "p1" })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "participant-exists");
    let (status, _) = call_json(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "participantId": "" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_token_is_404() {
    let app = app(None);
    let (status, body) = call_json(&app, "GET", "/sessions/deadbeef/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "unknown-session");
}

#[tokio::test]
async fn state_polls_are_identical() {
    let app = app(None);
    let token = create(&app, "poll").await;
    let uri = format!("/sessions/{token}/state");
    let (_, first) = call(&app, "GET", &uri, None).await;
    for _ in 0..3 {
        assert_eq!(call(&app, "GET", &uri, None).await.1, first);
    }
}

#[tokio::test]
async fn illegal_move_lists_frontier() {
    let app = app(None);
    let token = create(&app, "ill").await;
    let (status, body) = call_json(
        &app,
        "POST",
        &format!("/sessions/{token}/move"),
        Some(json!({ "cell": "D4" })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "illegal-move");
    assert_eq!(body["frontier"], json!(["A2", "B1"]));
    let (status, _) = call_json(
        &app,
        "POST",
        &format!("/sessions/{token}/move"),
        Some(json!({ "cell": "Z9" })),
    )
    .await;
    assert!(status.is_client_error());
}

#[tokio::test]
async fn legal_move_costs_ten() {
    let app = app(None);
    let token = create(&app, "mv").await;
    let (status, body) = call_json(
        &app,
        "POST",
        &format!("/sessions/{token}/move"),
        Some(json!({ "cell": "b1" })),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let event = body["cells"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["cell"] == "B1")
        .unwrap()["event"]
        .clone();
    let expected = match event.as_str().unwrap() {
        "nothing" => -10,
        "pit" => -110,
        "gold" => 490,
        "wumpus" => -1010,
        other => panic!("unexpected event {other}"),
    };
    assert_eq!(body["score"], expected);
}

#[tokio::test]
async fn questionnaire_order_and_range() {
    let app = app(None);
    let token = create(&app, "q").await;
    let uri = format!("/sessions/{token}/questionnaire");
    let (status, body) = call_json(
        &app,
        "POST",
        &uri,
        Some(json!({ "trust": 5, "selfConfidence": 5 })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "map-not-finished");
    let (status, _) = call_json(&app, "GET", &format!("/sessions/{token}/export"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    loop {
        let (_, view) = call_json(&app, "GET", &format!("/sessions/{token}/state"), None).await;
        if view["questionnaireRequired"] == json!(true) {
            break;
        }
        let cell = view["frontier"][0].clone();
        call_json(
            &app,
            "POST",
            &format!("/sessions/{token}/move"),
            Some(json!({ "cell": cell })),
        )
        .await;
    }
    let (status, body) = call_json(
        &app,
        "POST",
        &format!("/sessions/{token}/move"),
        Some(json!({ "cell": "A1" })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "questionnaire-required");
    let (status, body) = call_json(
        &app,
        "POST",
        &uri,
        Some(json!({ "trust": 10, "selfConfidence": 5 })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "rating-out-of-range");
    let (status, body) = call_json(
        &app,
        "POST",
        &uri,
        Some(json!({ "trust": 9, "selfConfidence": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["kind"], "next");
    assert_eq!(body["trialIndex"], 1);
}

#[tokio::test]
async fn full_session_export_and_log_replay() {
    let logs = tempfile::tempdir().unwrap();
    let app = app(Some(logs.path().to_owned()));
    let token = create(&app, "full-1").await;
    let scores = play_session(&app, &token).await;
    assert_eq!(scores.len(), 15);

    let (status, csv) = call(&app, "GET", &format!("/sessions/{token}/export"), None).await;
    assert_eq!(status, StatusCode::OK);
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), EXPORT_HEADER);
    let rows = read_export(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows
        .iter()
        .all(|r| r.participant_id == "full-1" && r.trust == 6));

    let files: Vec<_> = std::fs::read_dir(logs.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let name = files[0].file_name().unwrap().to_str().unwrap().to_owned();
    assert!(name.starts_with("full-1-") && name.ends_with(".ndjson"));
    let records = read_log(&files[0]).unwrap();
    let replayed: Vec<i64> = replay_log(&records)
        .unwrap()
        .iter()
        .map(|r| r.replayed_score as i64)
        .collect();
    assert_eq!(replayed, scores);
}

#[tokio::test]
async fn logged_choices_replay_through_the_endpoint() {
    let logs = tempfile::tempdir().unwrap();
    let first = app(Some(logs.path().to_owned()));
    let token = create(&first, "orig").await;
    let scores = play_session(&first, &token).await;
    let path = std::fs::read_dir(logs.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let records = read_log(path).unwrap();

    // Same master seed and participant index, so the plan matches; feed the
    // logged choices back through HTTP.
    let second = app(None);
    let token = create(&second, "again").await;
    let mut final_scores = Vec::new();
    for record in &records {
        match record {
            treasure_hunter::harness::LogRecord::Step { step, .. } => {
                let (status, body) = call_json(
                    &second,
                    "POST",
                    &format!("/sessions/{token}/move"),
                    Some(json!({ "cell": step.chosen })),
                )
                .await;
                assert_eq!(status, StatusCode::OK, "{body}");
            }
            treasure_hunter::harness::LogRecord::TrialEnd { .. } => {
                let (_, view) =
                    call_json(&second, "GET", &format!("/sessions/{token}/state"), None).await;
                final_scores.push(view["score"].as_i64().unwrap());
                call_json(
                    &second,
                    "POST",
                    &format!("/sessions/{token}/questionnaire"),
                    Some(json!({ "trust": 5, "selfConfidence": 5 })),
                )
                .await;
            }
            _ => {}
        }
    }
    assert_eq!(final_scores, scores);
}

#[tokio::test]
async fn payload_only_names_visited_cells() {
    let app = app(None);
    let token = create(&app, "hide").await;
    let mut visited = vec![json!("A1")];
    loop {
        let (_, view) = call_json(&app, "GET", &format!("/sessions/{token}/state"), None).await;
        let cells: Vec<Value> = view["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["cell"].clone())
            .collect();
        assert_eq!(cells.len(), visited.len());
        assert!(cells.iter().all(|c| visited.contains(c)));
        for key in view.as_object().unwrap().keys() {
            assert!(
                !["map", "gold", "wumpus", "pits"].contains(&key.as_str()),
                "payload exposes {key}"
            );
        }
        if view["questionnaireRequired"] == json!(true) {
            break;
        }
        let cell = view["frontier"][0].clone();
        visited.push(cell.clone());
        call_json(
            &app,
            "POST",
            &format!("/sessions/{token}/move"),
            Some(json!({ "cell": cell })),
        )
        .await;
    }
}
