use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use nsim_cli::service::router;
use nsim_core::preset::{build_preset, PresetName};
use nsim_core::{best_moves, position_to_json, Position, SolveOptions};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: impl Into<Body>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn doc(p: &Position) -> Value {
    serde_json::from_str(&position_to_json(p)).unwrap()
}

fn preset(name: PresetName) -> Value {
    doc(&build_preset(name).unwrap())
}

#[tokio::test]
async fn presets_listing() {
    let app = router();
    let (status, v) = call(&app, "GET", "/presets", Body::empty()).await;
    assert_eq!(status, StatusCode::OK);
    let list = v.as_array().unwrap();
    assert!(list.len() >= 8);
    let k5 = list.iter().find(|e| e["name"] == "drawn-k5" && e["params"]["n"] == 5).unwrap();
    assert_eq!(k5["position"], preset(PresetName::DrawnK5 { n: 5 }));
    assert!(list.iter().any(|e| e["name"] == "thm3" && e["params"]["n"] == 6));

    let (_, ev) = call(&app, "POST", "/evaluate", json!({ "position": k5["position"] }).to_string()).await;
    assert_eq!(ev["status"]["state"], "Draw");
    assert_eq!(ev["value"], "Draw");
    assert_eq!(ev["moves"], json!([]));
}

#[tokio::test]
async fn evaluate_values() {
    let app = router();
    let (status, v) = call(&app, "POST", "/evaluate", json!({ "position": preset(PresetName::Thm2 { n: 6 }) }).to_string()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["value"], "RedWins");
    assert_eq!(v["to_move"], "red");
    assert_eq!(v["status"]["state"], "Live");

    let (_, v) = call(&app, "POST", "/evaluate", json!({ "position": { "n": 3, "green": [], "red": [] } }).to_string()).await;
    assert_eq!(v["value"], "Draw");
    assert_eq!(v["moves"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn evaluate_matches_in_process_and_is_repeatable() {
    let app = router();
    let p = build_preset(PresetName::Thm2 { n: 7 }).unwrap();
    let body = json!({ "position": doc(&p) }).to_string();
    let (_, first) = call(&app, "POST", "/evaluate", body.clone()).await;
    let (_, second) = call(&app, "POST", "/evaluate", body).await;
    assert_eq!(first, second);
    let expected: Vec<Value> = best_moves(&p, SolveOptions::default())
        .unwrap()
        .into_iter()
        .map(|(e, v)| {
            let (a, b) = p.tables().endpoints[e.index()];
            json!({ "edge": [a, b], "value": v })
        })
        .collect();
    assert_eq!(first["moves"], Value::Array(expected));
}

#[tokio::test]
async fn evaluate_errors() {
    let app = router();
    let (status, _) = call(&app, "POST", "/evaluate", "garbage").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/evaluate", json!({ "position": { "n": 4, "green": [[0, 1]], "red": [[0, 1]] } }).to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/evaluate", json!({ "position": { "n": 11, "green": [], "red": [] } }).to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let dead = json!({ "n": 4, "green": [[0, 1], [0, 2], [1, 2]], "red": [[0, 3], [1, 3]] });
    let (status, _) = call(&app, "POST", "/evaluate", json!({ "position": dead }).to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = json!({ "position": preset(PresetName::Thm3 { n: 7 }), "budget": { "max_nodes": 5 } });
    let (status, v) = call(&app, "POST", "/evaluate", body.to_string()).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    assert!(v["error"].as_str().unwrap().contains("budget"));
}

#[tokio::test]
async fn move_with_engine_reply() {
    let app = router();
    let body = json!({ "position": preset(PresetName::PropT { n: 7 }), "edge": [5, 6], "engine_replies": true });
    let (status, v) = call(&app, "POST", "/move", body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let reply = v["engine_move"].as_array().expect("engine replied").clone();
    let pos = &v["position"];
    assert!(pos["green"].as_array().unwrap().contains(&json!([5, 6])));
    assert!(pos["red"].as_array().unwrap().contains(&Value::Array(reply.clone())));

    // deterministic across calls and instances
    let (_, again) = call(&router(), "POST", "/move", body.to_string()).await;
    assert_eq!(again["engine_move"], Value::Array(reply));
}

#[tokio::test]
async fn move_closing_own_triangle_finishes() {
    let app = router();
    let position = json!({ "n": 5, "green": [[0, 1], [1, 2]], "red": [[3, 4], [2, 4]] });
    let body = json!({ "position": position, "edge": [0, 2], "engine_replies": true });
    let (status, v) = call(&app, "POST", "/move", body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], json!({ "state": "Finished", "loser": "green" }));
    assert!(v.get("engine_move").is_none());
}

#[tokio::test]
async fn move_errors() {
    let app = router();
    let thm2 = preset(PresetName::Thm2 { n: 6 });
    let (status, _) = call(&app, "POST", "/move", json!({ "position": thm2, "edge": [0, 1] }).to_string()).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let k5 = preset(PresetName::DrawnK5 { n: 6 });
    let finished = json!({ "n": 4, "green": [[0, 1], [0, 2], [1, 2]], "red": [[0, 3], [1, 3]] });
    let (status, _) = call(&app, "POST", "/move", json!({ "position": finished, "edge": [2, 3] }).to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let drawn = preset(PresetName::DrawnK5 { n: 5 });
    let (status, _) = call(&app, "POST", "/move", json!({ "position": drawn, "edge": [0, 1] }).to_string()).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, v) = call(&app, "POST", "/move", json!({ "position": k5, "edge": [0, 5] }).to_string()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"]["state"], "Live");
    let (status, _) = call(&app, "POST", "/move", json!({ "position": thm2, "edge": [0, 9] }).to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/move", "[]").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn move_then_evaluate_agrees_with_library() {
    let app = router();
    let p = build_preset(PresetName::Thm2 { n: 6 }).unwrap();
    let body = json!({ "position": doc(&p), "edge": [0, 2], "engine_replies": false });
    let (_, v) = call(&app, "POST", "/move", body.to_string()).await;
    let e = nsim_core::edge_index(0, 2, 6).unwrap();
    let next = p.apply_move(e).unwrap();
    assert_eq!(v["position"], doc(&next));
    let (_, ev) = call(&app, "POST", "/evaluate", json!({ "position": v["position"] }).to_string()).await;
    let value = nsim_core::solve(&next, SolveOptions::default()).unwrap().value;
    assert_eq!(ev["value"], serde_json::to_value(value).unwrap());
}

#[tokio::test]
async fn concurrent_requests_agree() {
    let app = router();
    let body = json!({ "position": preset(PresetName::Thm3 { n: 6 }) }).to_string();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            let body = body.clone();
            tokio::spawn(async move { call(&app, "POST", "/evaluate", body).await })
        })
        .collect();
    let mut results = Vec::new();
    for h in handles {
        results.push(h.await.unwrap());
    }
    assert!(results.iter().all(|r| r == &results[0]));
    assert_eq!(results[0].1["value"], "RedWins");
}
