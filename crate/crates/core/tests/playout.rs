mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use gr1kit::pipeline;
use gr1kit::playout::{server::router, Service, LEGAL_MOVES_CAP, SCHEMA};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn app() -> axum::Router {
    router(Arc::new(Service::new()))
}

const TOY: &str = "SPEC toy\nVARENV req : boolean;\nVAR grant : boolean;\nGAR G (req -> next(grant));\nGAR G F (grant);\n";

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app();
    let (status, body) = call(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"]["code"], "not_found");
    let (status, _) = call(&app, "POST", "/sessions/nope/step", Some(json!({"assignment": {}}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn human_env_session_from_text() {
    let app = app();
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({"spec": TOY, "mode": "human-env"}))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    assert_eq!(v["schema"], SCHEMA);
    let id = v["id"].as_str().unwrap().to_string();
    assert_eq!(v["legal_total"], 2);

    let step = format!("/sessions/{id}/step");
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"req": "true"}}))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"req": "false"}}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["state"]["grant"], "true");
    let kind = v["last"]["annotation"]["kind"].as_str().unwrap();
    assert!(kind == "GoalSatisfied" || kind == "ApproachGoal", "{kind}");

    // system variables are not the human's to choose
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"req": "true", "grant": "true"}}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "bad_assignment");

    let (_, t) = call(&app, "GET", &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(t["schema"], SCHEMA);
    assert_eq!(t["steps"].as_array().unwrap().len(), 2);
    let (_, l) = call(&app, "GET", "/sessions", None).await;
    assert_eq!(l["sessions"][0]["steps"], 2);
}

#[tokio::test]
async fn illegal_env_move_is_rejected() {
    let spec = "SPEC t\nVARENV a : boolean;\nVAR b : boolean;\nASM !a;\nASM G (a -> !next(a));\nGAR G F (b);\n";
    let app = app();
    let (_, v) = call(&app, "POST", "/sessions", Some(json!({"spec": spec, "mode": "human-env"}))).await;
    let id = v["id"].as_str().unwrap().to_string();
    let step = format!("/sessions/{id}/step");
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"a": "true"}}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "illegal_move");
    call(&app, "POST", &step, Some(json!({"assignment": {"a": "false"}}))).await;
    call(&app, "POST", &step, Some(json!({"assignment": {"a": "true"}}))).await;
    let (_, v) = call(&app, "POST", &step, Some(json!({"assignment": {"a": "true"}}))).await;
    assert_eq!(v["error"]["code"], "illegal_move");
}

#[tokio::test]
async fn free_play_flags_illegal_moves() {
    let app = app();
    let (_, v) = call(&app, "POST", "/sessions", Some(json!({"spec": TOY, "mode": "FreePlay"}))).await;
    let id = v["id"].as_str().unwrap().to_string();
    let step = format!("/sessions/{id}/step");
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"req": "true", "grant": "false"}}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["last"]["illegal"], false);
    let (status, v) = call(&app, "POST", &step, Some(json!({"assignment": {"req": "false", "grant": "false"}}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["last"]["illegal"], true);
    assert_eq!(v["last"]["violations"][0]["side"], "guarantee");
}

#[tokio::test]
async fn mode_must_match_the_strategy() {
    let app = app();
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({"spec": TOY, "mode": "human-sys"}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["error"]["code"], "mode_unavailable");
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({"spec": "SPEC x\nVAR b : boolean;\nGAR G (b &", "mode": "human-env"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "spec_error");
}

#[tokio::test]
async fn legal_moves_are_capped() {
    let spec = "SPEC wide\nVARENV a : {A0,A1,A2,A3,A4,A5,A6,A7,A8,A9}; b : {B0,B1,B2,B3,B4,B5,B6,B7,B8,B9};\nVAR c : boolean;\nGAR G F (c);\n";
    let app = app();
    let (_, v) = call(&app, "POST", "/sessions", Some(json!({"spec": spec, "mode": "human-env"}))).await;
    assert_eq!(v["legal_moves"].as_array().unwrap().len(), LEGAL_MOVES_CAP);
    assert_eq!(v["legal_total"], 100);
    let (_, v) = call(&app, "POST", "/sessions", Some(json!({"spec": spec, "mode": "free-play"}))).await;
    assert_eq!(v["legal_moves"].as_array().unwrap().len(), LEGAL_MOVES_CAP);
    assert_eq!(v["legal_total"], 200);
}

#[tokio::test]
async fn artifact_graph_is_paginated() {
    let app = app();
    let (_, v) = call(&app, "GET", "/artifacts", None).await;
    assert!(v["artifacts"].as_array().unwrap().iter().any(|a| a["name"] == "v1"));
    let (status, p) = call(&app, "GET", "/artifacts/v1/graph?offset=10&limit=5", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(p["schema"], SCHEMA);
    assert_eq!(p["kind"], "controller");
    assert_eq!(p["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(p["nodes"][0]["id"], 10);
    assert!(p["total"].as_u64().unwrap() > 100);
    let edges = p["edges"].as_array().unwrap();
    assert!(edges.iter().all(|e| (10..15).contains(&e["from"].as_u64().unwrap())));
    let (status, _) = call(&app, "GET", "/artifacts/nope/graph", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

fn double_ack_script() -> Vec<BTreeMap<String, String>> {
    let (s, strategy) = pipeline::run("v2_c3_bad_ack").unwrap();
    let cs = strategy.counter().expect("C3 is unrealizable");
    common::consecutive_script(cs, &s.game.problem, "liftAck", 1)
}

#[tokio::test]
async fn c3_counter_strategy_acknowledges_twice() {
    let script = tokio::task::spawn_blocking(double_ack_script).await.unwrap();
    let app = app();
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({"artifact": "v2_c3_bad_ack", "mode": "human-sys"}))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    let id = v["id"].as_str().unwrap().to_string();
    for m in &script {
        let (status, v) = call(&app, "POST", &format!("/sessions/{id}/step"), Some(json!({ "assignment": m }))).await;
        assert_eq!(status, StatusCode::OK, "{v}");
    }
    let (_, t) = call(&app, "GET", &format!("/sessions/{id}/trace"), None).await;
    let steps = t["steps"].as_array().unwrap();
    let ack: Vec<bool> = steps.iter().map(|s| s["assignment"]["liftAck"] == "true").collect();
    let loaded: Vec<bool> = steps.iter().map(|s| s["assignment"]["spec_loaded"] == "true").collect();
    let k = (1..steps.len()).find(|&k| ack[k - 1] && ack[k]).expect("two acknowledgments in a row");
    // each acknowledgment toggles spec_loaded one step later
    assert_ne!(loaded[k], loaded[k - 1]);
    assert_ne!(loaded[k + 1], loaded[k]);
}
