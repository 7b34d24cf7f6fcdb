//! Stateless HTTP facade used by the browser explorer.
//!
//! Every request carries the full position document. Evaluations are cached
//! process-wide by `(n, green, red)`; the cache only ever holds exact values,
//! so concurrent requests can share it freely.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use nsim_core::preset::{build_preset, preset_grid};
use nsim_core::{
    edge_index, BoardError, Budget, Color, EdgeId, FormatError, GameStatus, GameValue, Position, PositionDoc, SolveError,
    SolveOptions, Solver,
};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PORT: u16 = 8080;

type CacheKey = (usize, u64, u64);

#[derive(Clone, Default)]
pub struct AppState {
    cache: Arc<RwLock<HashMap<CacheKey, Evaluation>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Evaluation {
    value: GameValue,
    moves: Vec<(EdgeId, GameValue)>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError { status, message: message.into() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

impl From<FormatError> for ApiError {
    fn from(e: FormatError) -> Self {
        let status = match e {
            FormatError::Board(BoardError::DeadPosition(..)) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<SolveError> for ApiError {
    fn from(e: SolveError) -> Self {
        let status = match e {
            SolveError::BudgetExceeded(_) => StatusCode::SERVICE_UNAVAILABLE,
            SolveError::GameOver(_) => StatusCode::CONFLICT,
            SolveError::Board(_) => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetDoc {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<u64>,
}

impl BudgetDoc {
    fn options(self) -> SolveOptions {
        let d = Budget::default();
        SolveOptions {
            budget: Budget {
                max_nodes: self.max_nodes.or(d.max_nodes),
                max_time: self.max_seconds.map(Duration::from_secs).or(d.max_time),
            },
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateRequest {
    pub position: PositionDoc,
    #[serde(default)]
    pub budget: Option<BudgetDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveValue {
    pub edge: [usize; 2],
    pub value: GameValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub value: GameValue,
    pub to_move: Color,
    pub moves: Vec<MoveValue>,
    pub status: GameStatus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub position: PositionDoc,
    pub edge: [usize; 2],
    #[serde(default)]
    pub engine_replies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveResponse {
    pub position: PositionDoc,
    pub status: GameStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_move: Option<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresetEntry {
    pub name: String,
    pub params: serde_json::Value,
    pub position: PositionDoc,
}

pub fn router() -> Router {
    router_with_state(AppState::default())
}

pub fn router_with_state(state: AppState) -> Router {
    Router::new()
        .route("/presets", get(presets))
        .route("/evaluate", post(evaluate))
        .route("/move", post(play_move))
        .with_state(state)
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("invalid request body: {e}")))
}

fn pair(p: &Position, e: EdgeId) -> [usize; 2] {
    let (a, b) = p.tables().endpoints[e.index()];
    [a as usize, b as usize]
}

async fn presets() -> Json<Vec<PresetEntry>> {
    let list = preset_grid()
        .into_iter()
        .map(|name| {
            let p = build_preset(name).expect("grid presets are valid");
            PresetEntry { name: name.kind().name().to_string(), params: name.params(), position: PositionDoc::from(&p) }
        })
        .collect();
    Json(list)
}

impl AppState {
    /// Exact value and per-move values of a live position, through the cache.
    async fn evaluate_live(&self, p: Position, opts: SolveOptions) -> Result<Evaluation, ApiError> {
        let key = (p.n(), p.green().0, p.red().0);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let eval = tokio::task::spawn_blocking(move || -> Result<Evaluation, SolveError> {
            let mut solver = Solver::new(opts);
            let moves = solver.best_moves(&p)?;
            let value = solver.solve(&p)?;
            Ok(Evaluation { value, moves })
        })
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
        self.cache.write().expect("cache lock").insert(key, eval.clone());
        Ok(eval)
    }
}

async fn evaluate(State(state): State<AppState>, body: Bytes) -> Result<Json<EvaluateResponse>, ApiError> {
    let req: EvaluateRequest = parse_body(&body)?;
    let p = req.position.to_position()?;
    let status = p.status().map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    let to_move = p.player_to_move();
    if let Some(value) = GameValue::from_status(status) {
        return Ok(Json(EvaluateResponse { value, to_move, moves: Vec::new(), status }));
    }
    let eval = state.evaluate_live(p, req.budget.unwrap_or_default().options()).await?;
    let moves = eval.moves.iter().map(|&(e, value)| MoveValue { edge: pair(&p, e), value }).collect();
    Ok(Json(EvaluateResponse { value: eval.value, to_move, moves, status }))
}

async fn play_move(State(state): State<AppState>, body: Bytes) -> Result<Json<MoveResponse>, ApiError> {
    let req: MoveRequest = parse_body(&body)?;
    let p = req.position.to_position()?;
    let [a, b] = req.edge;
    let e = edge_index(a.min(b), a.max(b), p.n()).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;
    let next = p.apply_move(e).map_err(|err| match err {
        BoardError::EdgeOccupied(..) | BoardError::GameOver => ApiError::new(StatusCode::CONFLICT, err.to_string()),
        other => ApiError::new(StatusCode::BAD_REQUEST, other.to_string()),
    })?;
    let status = next.status().map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    if !req.engine_replies || status != GameStatus::Live {
        return Ok(Json(MoveResponse { position: PositionDoc::from(&next), status, engine_move: None }));
    }
    let eval = state.evaluate_live(next, SolveOptions::default()).await?;
    let mover = next.player_to_move();
    let best = eval.moves.iter().map(|(_, v)| v.score_for(mover)).max().expect("live position has moves");
    let (reply, _) = *eval.moves.iter().find(|(_, v)| v.score_for(mover) == best).expect("max attained");
    let after = next.apply_move(reply).expect("engine plays an open edge");
    let status = after.status().map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(MoveResponse { position: PositionDoc::from(&after), status, engine_move: Some(pair(&next, reply)) }))
}

/// Serves until interrupted.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
