//! HTTP/JSON API over the engine.
//!
//! The service holds one scenario. Runs clone an `Arc` to it under a read
//! lock and simulate on the blocking pool, so a concurrent `PUT` never
//! exposes a partially replaced scenario.

use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use microgrid_resilience::sim::DEFAULT_ITERATIONS;
use microgrid_resilience::{
    builtin_new_england, builtin_patches, compare, parse_scenario_with, patch_from_value, run_scenario,
    serialize_patch, serialize_scenario, Aggregation, CompareError, Distribution, DocumentError, ParseOptions,
    Scenario, SimConfig, SimError, ValidationIssue,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Set to `true` on run and compare responses below the default iteration count.
pub const REDUCED_FIDELITY: HeaderName = HeaderName::from_static("x-reduced-fidelity");

#[derive(Clone)]
pub struct AppState {
    scenario: Arc<RwLock<Arc<Scenario>>>,
    options: ParseOptions,
}

impl AppState {
    pub fn new(scenario: Scenario, options: ParseOptions) -> Self {
        AppState {
            scenario: Arc::new(RwLock::new(Arc::new(scenario))),
            options,
        }
    }

    fn current(&self) -> Arc<Scenario> {
        self.scenario.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn replace(&self, s: Scenario) {
        *self.scenario.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(s);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiErrorCode {
    MalformedJson,
    InvalidDocument,
    InvalidConfig,
    PatchNotApplicable,
    EngineFailure,
    NotFound,
}

impl ApiErrorCode {
    fn status(self) -> StatusCode {
        match self {
            ApiErrorCode::MalformedJson | ApiErrorCode::InvalidDocument | ApiErrorCode::InvalidConfig => {
                StatusCode::BAD_REQUEST
            }
            ApiErrorCode::PatchNotApplicable => StatusCode::UNPROCESSABLE_ENTITY,
            ApiErrorCode::EngineFailure => StatusCode::INTERNAL_SERVER_ERROR,
            ApiErrorCode::NotFound => StatusCode::NOT_FOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiIssue {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ApiErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<ApiIssue>,
}

impl ApiError {
    fn new(code: ApiErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            path: None,
            issues: Vec::new(),
        }
    }

    fn at(mut self, path: impl Into<String>) -> Self {
        self.path = Some(path.into());
        self
    }

    fn with_issues(mut self, issues: &[ValidationIssue]) -> Self {
        self.issues = issues
            .iter()
            .map(|i| ApiIssue {
                path: i.path.clone(),
                message: i.message.clone(),
            })
            .collect();
        self
    }

    fn from_document(e: DocumentError, prefix: &str) -> Self {
        let code = match e {
            DocumentError::NotUtf8 { .. } | DocumentError::Syntax { .. } => ApiErrorCode::MalformedJson,
            _ => ApiErrorCode::InvalidDocument,
        };
        let mut err = ApiError::new(code, e.to_string());
        if let Some(path) = e.path() {
            err = err.at(format!("{prefix}{path}"));
        }
        if let DocumentError::Invalid(issues) = &e {
            err = err.with_issues(issues);
        }
        err
    }
}

impl From<SimError> for ApiError {
    fn from(e: SimError) -> Self {
        match &e {
            SimError::InvalidConfig(_) => ApiError::new(ApiErrorCode::InvalidConfig, e.to_string()),
            SimError::InvalidScenario(issues) => {
                ApiError::new(ApiErrorCode::InvalidDocument, e.to_string()).with_issues(issues)
            }
            _ => ApiError::new(ApiErrorCode::EngineFailure, e.to_string()),
        }
    }
}

impl From<CompareError> for ApiError {
    fn from(e: CompareError) -> Self {
        match e {
            CompareError::Sim(s) => s.into(),
            CompareError::Patch(p) => {
                let issues = match &p {
                    microgrid_resilience::PatchError::InvalidResult { issues, .. } => issues.clone(),
                    _ => Vec::new(),
                };
                ApiError::new(ApiErrorCode::PatchNotApplicable, p.to_string()).with_issues(&issues)
            }
            other => ApiError::new(ApiErrorCode::EngineFailure, other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), json(serde_json::to_vec(&self).unwrap_or_default())).into_response()
    }
}

fn json(body: Vec<u8>) -> impl IntoResponse {
    (
        [(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))],
        body,
    )
}

/// Config overrides accepted by `POST /api/run` and `POST /api/compare`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub iterations: Option<u64>,
    pub seed: Option<u64>,
    pub aggregation: Option<Aggregation>,
    pub distribution: Option<Distribution>,
    pub bins: Option<usize>,
}

impl Overrides {
    pub fn config(&self) -> SimConfig {
        let d = SimConfig::default();
        SimConfig {
            iterations: self.iterations.unwrap_or(d.iterations),
            seed: self.seed.unwrap_or(d.seed),
            distribution: self.distribution.unwrap_or(d.distribution),
            aggregation: self.aggregation.unwrap_or(d.aggregation),
            histogram_bins: self.bins.unwrap_or(d.histogram_bins),
        }
    }
}

fn body_object(body: &[u8]) -> Result<serde_json::Map<String, Value>, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(serde_json::Map::new());
    }
    match serde_json::from_slice(body) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(ApiError::new(
            ApiErrorCode::MalformedJson,
            "request body must be a JSON object",
        )),
        Err(e) => Err(ApiError::new(ApiErrorCode::MalformedJson, e.to_string())),
    }
}

fn overrides(map: serde_json::Map<String, Value>) -> Result<SimConfig, ApiError> {
    let o: Overrides = serde_json::from_value(Value::Object(map))
        .map_err(|e| ApiError::new(ApiErrorCode::InvalidConfig, e.to_string()))?;
    let cfg = o.config();
    cfg.validate()?;
    Ok(cfg)
}

fn fidelity_header(cfg: &SimConfig) -> [(HeaderName, HeaderValue); 1] {
    let reduced = cfg.iterations < DEFAULT_ITERATIONS;
    [(
        REDUCED_FIDELITY,
        HeaderValue::from_static(if reduced { "true" } else { "false" }),
    )]
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(ApiErrorCode::EngineFailure, e.to_string()))?
}

async fn get_scenario(State(state): State<AppState>) -> impl IntoResponse {
    json(serialize_scenario(&state.current()))
}

async fn put_scenario(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let s = parse_scenario_with(&body, state.options).map_err(|e| ApiError::from_document(e, ""))?;
    let canonical = serialize_scenario(&s);
    state.replace(s);
    Ok(json(canonical))
}

async fn get_builtin_scenario() -> impl IntoResponse {
    json(serialize_scenario(&builtin_new_england()))
}

async fn get_builtin_patches() -> Result<impl IntoResponse, ApiError> {
    let docs = builtin_patches()
        .iter()
        .map(|p| serde_json::from_slice::<Value>(&serialize_patch(p)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ApiError::new(ApiErrorCode::EngineFailure, e.to_string()))?;
    let mut body =
        serde_json::to_vec_pretty(&docs).map_err(|e| ApiError::new(ApiErrorCode::EngineFailure, e.to_string()))?;
    body.push(b'\n');
    Ok(json(body))
}

async fn post_run(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let cfg = overrides(body_object(&body)?)?;
    let scenario = state.current();
    let report = blocking(move || run_scenario(&scenario, &cfg).map_err(ApiError::from)).await?;
    let body = serde_json::to_vec(&report).map_err(|e| ApiError::new(ApiErrorCode::EngineFailure, e.to_string()))?;
    Ok((fidelity_header(&cfg), json(body)))
}

async fn post_compare(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let mut map = body_object(&body)?;
    let patch_docs = match map.remove("patches") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(docs)) => docs,
        Some(_) => return Err(ApiError::new(ApiErrorCode::InvalidDocument, "expected an array").at("patches")),
    };
    let cfg = overrides(map)?;
    let patches = patch_docs
        .iter()
        .enumerate()
        .map(|(i, doc)| {
            patch_from_value(doc, state.options).map_err(|e| ApiError::from_document(e, &format!("patches[{i}].")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scenario = state.current();
    let report = blocking(move || compare(&scenario, &patches, &cfg).map_err(ApiError::from)).await?;
    let body = serde_json::to_vec(&report).map_err(|e| ApiError::new(ApiErrorCode::EngineFailure, e.to_string()))?;
    Ok((fidelity_header(&cfg), json(body)))
}

async fn not_found() -> ApiError {
    ApiError::new(ApiErrorCode::NotFound, "no such endpoint")
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/scenario", get(get_scenario).put(put_scenario))
        .route("/api/builtin/new-england", get(get_builtin_scenario))
        .route("/api/patches/builtin", get(get_builtin_patches))
        .route("/api/run", post(post_run))
        .route("/api/compare", post(post_compare))
        .fallback(not_found)
        .with_state(state)
}
