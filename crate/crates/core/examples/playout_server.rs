//! Drive the HTTP API in-process. `gr1 playout serve --port 8080` serves the
//! same router on a socket.

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use gr1kit::playout::{server::router, Service};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: Value) -> Value {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let resp = app.clone().oneshot(req.body(Body::from(body.to_string())).unwrap()).await.unwrap();
    println!("{method} {uri} -> {}", resp.status());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main]
async fn main() {
    let app = router(Arc::new(Service::new()));
    let v = call(&app, "POST", "/sessions", json!({"artifact": "v1", "mode": "human-env"})).await;
    let id = v["id"].as_str().unwrap().to_string();
    println!("  {} legal environment moves, showing {}", v["legal_total"], v["legal_moves"].as_array().unwrap().len());
    let input = json!({"station": "true", "emgOff": "false", "distSense": "CLEAR", "cargoSense": "BLOCKED"});
    let v = call(&app, "POST", &format!("/sessions/{id}/step"), json!({ "assignment": input })).await;
    println!("  state: {}", v["state"]);
    let v = call(&app, "POST", &format!("/sessions/{id}/step"), json!({"assignment": {"station": "maybe"}})).await;
    println!("  {}", v["error"]);
    let v = call(&app, "GET", "/artifacts/v1/graph?offset=0&limit=2", Value::Null).await;
    println!("  page of {} nodes out of {}", v["nodes"].as_array().unwrap().len(), v["total"]);
}
