//! Drives the HTTP routes in-process and prints each request and response,
//! including the error bodies a client should expect.
//!
//! ```bash
//! cargo run -p treasure-hunter-server --example http_walkthrough
//! ```

use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Request};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use treasure_hunter::harness::FixtureSet;
use treasure_hunter::service::{ServiceConfig, SessionManager};
use treasure_hunter_server::http::router;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>, show: bool) -> Value {
    let builder = Request::builder().method(method).uri(uri);
    let req = match &body {
        Some(v) => builder
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(v.to_string())),
        None => builder.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8_lossy(&bytes).into_owned();
    if show {
        let sent = body.map(|b| format!(" {b}")).unwrap_or_default();
        let shown: String = text.chars().take(400).collect();
        println!("{method} {uri}{sent}\n  -> {status}\n  {shown}\n");
    }
    serde_json::from_str(&text).unwrap_or(Value::String(text))
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = FixtureSet::load(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/maps"),
    )?;
    let app = router(Arc::new(SessionManager::new(
        fixtures,
        ServiceConfig {
            master_seed: 3,
            log_dir: None,
            idle_timeout: Duration::from_secs(600),
        },
    )));

    let created = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"participantId": "walk"})),
        true,
    )
    .await;
    let token = created["token"].as_str().unwrap().to_owned();
    call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"participantId": "walk"})),
        true,
    )
    .await;
    call(
        &app,
        "POST",
        &format!("/sessions/{token}/move"),
        Some(json!({"cell": "D4"})),
        true,
    )
    .await;
    call(
        &app,
        "GET",
        &format!("/sessions/{token}/export"),
        None,
        true,
    )
    .await;

    // Plays the whole session quietly, showing only the first assisted move.
    let mut shown = false;
    loop {
        let state = call(
            &app,
            "GET",
            &format!("/sessions/{token}/state"),
            None,
            false,
        )
        .await;
        if state["questionnaireRequired"] == true {
            let out = call(
                &app,
                "POST",
                &format!("/sessions/{token}/questionnaire"),
                Some(json!({"trust": 6, "selfConfidence": 5})),
                false,
            )
            .await;
            if out["kind"] == "complete" {
                println!("session complete, total score {}\n", out["totalScore"]);
                break;
            }
            continue;
        }
        let cell = state["recommendation"]
            .as_str()
            .or_else(|| state["frontier"][0].as_str())
            .unwrap()
            .to_owned();
        let show = !shown && state["assisted"] == true;
        shown |= show;
        call(
            &app,
            "POST",
            &format!("/sessions/{token}/move"),
            Some(json!({"cell": cell})),
            show,
        )
        .await;
    }
    call(
        &app,
        "GET",
        &format!("/sessions/{token}/export"),
        None,
        true,
    )
    .await;
    Ok(())
}
