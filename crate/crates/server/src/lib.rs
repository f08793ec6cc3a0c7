//! HTTP service over [`tagnav`] collections and browsing sessions.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/collections` | load a collection document, 201 `{collection_id}` |
//! | GET | `/collections` | list loaded collections |
//! | POST | `/collections/{id}/sessions` | open a session at the initial state |
//! | GET | `/collections/{id}/resources/{rid}` | stored metadata of one resource |
//! | POST | `/collections/{id}/resources` | add a resource (needs mutations enabled) |
//! | DELETE | `/collections/{id}/resources/{rid}` | remove a resource (needs mutations enabled) |
//! | GET | `/sessions/{sid}` | current state |
//! | POST | `/sessions/{sid}/select` | body `{tag}` |
//! | POST | `/sessions/{sid}/back` | |
//! | POST | `/sessions/{sid}/reset` | |
//!
//! Session payloads cap the cloud at [`Config::cloud_cap`] entries unless
//! the request carries `?all=true`. Errors are `{error_code, message}`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::RngCore;
use serde::{Deserialize, Serialize};
use tagnav::ingest::ResourceDocument;
use tagnav::{CollectionDocument, Error, Frontier, Library, Metadata, NdAutomaton, Session};
use tower_http::services::ServeDir;

/// Environment variable holding the address to bind, without the port.
pub const BIND_ENV: &str = "TAGNAV_BIND";
pub const DEFAULT_BIND: &str = "127.0.0.1";

#[derive(Debug, Clone)]
pub struct Config {
    pub session_ttl: Duration,
    pub cloud_cap: usize,
    pub allow_mutations: bool,
    /// Static files served under `/ui`.
    pub ui_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            session_ttl: Duration::from_secs(30 * 60),
            cloud_cap: 500,
            allow_mutations: false,
            ui_dir: None,
        }
    }
}

type Shared = Arc<RwLock<Library<NdAutomaton>>>;

struct SessionEntry {
    collection: Shared,
    /// `None` for a session on an empty collection, which sits at the
    /// initial state with nothing to select.
    session: Option<Session<Frontier>>,
    last_active: Instant,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    config: Config,
    collections: RwLock<HashMap<String, Shared>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<SessionEntry>>>>,
    next_collection: AtomicU64,
}

impl AppState {
    pub fn new(config: Config) -> Self {
        AppState {
            inner: Arc::new(Inner {
                config,
                collections: RwLock::new(HashMap::new()),
                sessions: Mutex::new(HashMap::new()),
                next_collection: AtomicU64::new(1),
            }),
        }
    }

    pub fn config(&self) -> &Config {
        &self.inner.config
    }

    /// Loads a document and returns its new collection id.
    pub fn add_collection(&self, doc: &CollectionDocument) -> tagnav::Result<String> {
        let lib = Library::from_collection(doc.to_collection()?);
        let id = format!("c{}", self.inner.next_collection.fetch_add(1, Ordering::Relaxed));
        self.inner
            .collections
            .write()
            .expect("lock poisoned")
            .insert(id.clone(), Arc::new(RwLock::new(lib)));
        Ok(id)
    }

    fn collection(&self, id: &str) -> Result<Shared, ApiError> {
        self.inner
            .collections
            .read()
            .expect("lock poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("UnknownCollection", format!("no collection {id}")))
    }

    fn session(&self, sid: &str) -> Result<Arc<Mutex<SessionEntry>>, ApiError> {
        let mut sessions = self.inner.sessions.lock().expect("lock poisoned");
        let entry = sessions
            .get(sid)
            .cloned()
            .ok_or_else(|| ApiError::not_found("UnknownSession", format!("no session {sid}")))?;
        let expired = entry.lock().expect("lock poisoned").last_active.elapsed()
            > self.inner.config.session_ttl;
        if expired {
            sessions.remove(sid);
            return Err(ApiError::new(
                StatusCode::GONE,
                "SessionExpired",
                format!("session {sid} expired"),
            ));
        }
        Ok(entry)
    }

    fn sweep(&self) {
        let ttl = self.inner.config.session_ttl;
        self.inner
            .sessions
            .lock()
            .expect("lock poisoned")
            .retain(|_, e| e.lock().map(|e| e.last_active.elapsed() <= ttl).unwrap_or(false));
    }
}

pub fn router(state: AppState) -> Router {
    let ui = state.config().ui_dir.clone();
    let app = Router::new()
        .route("/collections", post(create_collection).get(list_collections))
        .route("/collections/{id}/sessions", post(open_session))
        .route("/collections/{id}/resources", post(add_resource))
        .route(
            "/collections/{id}/resources/{rid}",
            get(get_resource).delete(remove_resource),
        )
        .route("/sessions/{sid}", get(current))
        .route("/sessions/{sid}/select", post(select))
        .route("/sessions/{sid}/back", post(back))
        .route("/sessions/{sid}/reset", post(reset))
        .with_state(state);
    match ui {
        Some(dir) => app.nest_service("/ui", ServeDir::new(dir)),
        None => app,
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorBody {
    pub error_code: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error_code: code.to_string(),
                message: message.into(),
            },
        }
    }

    fn not_found(code: &str, message: String) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InfeasibleTag(_) | Error::AtRoot | Error::DuplicateResource(_) => {
                StatusCode::CONFLICT
            }
            Error::StaleSession { .. } => StatusCode::GONE,
            Error::UnknownResource(_) => StatusCode::NOT_FOUND,
            Error::Io(_) | Error::EngineFailure(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, error_code(&e), e.to_string())
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::EmptyId => "EmptyId",
        Error::EmptyTag => "EmptyTag",
        Error::DuplicateResource(_) => "DuplicateResource",
        Error::UnknownResource(_) => "UnknownResource",
        Error::EmptyScope => "EmptyScope",
        Error::EmptyCollection => "EmptyCollection",
        Error::InfeasibleTag(_) => "InfeasibleTag",
        Error::AtRoot => "AtRoot",
        Error::StaleSession { .. } => "StaleSession",
        Error::UnknownNode(_) => "UnknownNode",
        Error::CycleError { .. } => "CycleError",
        Error::DuplicateCategoryTag(_) => "DuplicateCategoryTag",
        Error::StateLimitExceeded { .. } => "StateLimitExceeded",
        Error::UnknownCategoryTag(_) => "UnknownCategoryTag",
        Error::UnsupportedVersion(_) => "UnsupportedVersion",
        Error::Parse { .. } => "ParseError",
        Error::InvalidSpec(_) => "InvalidSpec",
        Error::EngineFailure(_) => "EngineFailure",
        Error::Io(_) => "IoError",
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq, Clone)]
pub struct CloudItem {
    pub tag: String,
    pub count: u32,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq, Clone)]
pub struct SessionPayload {
    pub session_id: String,
    pub breadcrumb: Vec<String>,
    pub resources: Vec<String>,
    /// Ordered by count descending, then label.
    pub cloud: Vec<CloudItem>,
    pub terminal: bool,
    pub truncated: bool,
}

#[derive(Debug, Default, Deserialize)]
struct ViewQuery {
    #[serde(default)]
    all: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResourcePayload {
    pub id: String,
    pub title: Option<String>,
    pub uri: Option<String>,
    pub tags: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct SelectBody {
    tag: String,
}

fn payload(
    sid: &str,
    lib: &Library<NdAutomaton>,
    session: Option<&Session<Frontier>>,
    cap: Option<usize>,
) -> ApiResult<SessionPayload> {
    let c = lib.collection();
    let Some(s) = session else {
        return Ok(SessionPayload {
            session_id: sid.to_string(),
            breadcrumb: Vec::new(),
            resources: Vec::new(),
            cloud: Vec::new(),
            terminal: true,
            truncated: false,
        });
    };
    let resources = s
        .visit_all(lib)?
        .into_iter()
        .filter_map(|d| c.resource(d).map(|r| r.id.to_string()))
        .collect();
    let mut cloud: Vec<CloudItem> = s
        .cloud()
        .ranked(c)
        .into_iter()
        .map(|(t, count)| CloudItem {
            tag: t.to_string(),
            count,
        })
        .collect();
    let truncated = cap.is_some_and(|cap| cloud.len() > cap);
    if let Some(cap) = cap {
        cloud.truncate(cap);
    }
    Ok(SessionPayload {
        session_id: sid.to_string(),
        breadcrumb: s
            .breadcrumb_labels(lib)
            .into_iter()
            .map(|t| t.to_string())
            .collect(),
        resources,
        cloud,
        terminal: s.is_terminal(),
        truncated,
    })
}

fn new_session_id() -> String {
    let mut bytes = [0u8; 16];
    rand::rng().fill_bytes(&mut bytes);
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

async fn create_collection(
    State(state): State<AppState>,
    body: String,
) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    // any defect in an uploaded document is the client's, whatever its kind
    let invalid = |e: Error| {
        let mut err = ApiError::from(e);
        err.status = StatusCode::BAD_REQUEST;
        err
    };
    let doc = CollectionDocument::parse(&body).map_err(invalid)?;
    let id = state.add_collection(&doc).map_err(invalid)?;
    Ok((
        StatusCode::CREATED,
        Json(serde_json::json!({ "collection_id": id })),
    ))
}

async fn list_collections(State(state): State<AppState>) -> Json<serde_json::Value> {
    let collections = state.inner.collections.read().expect("lock poisoned");
    let mut list: Vec<(String, usize)> = collections
        .iter()
        .map(|(id, lib)| (id.clone(), lib.read().expect("lock poisoned").collection().len()))
        .collect();
    list.sort();
    Json(serde_json::json!(list
        .into_iter()
        .map(|(id, n)| serde_json::json!({ "collection_id": id, "resources": n }))
        .collect::<Vec<_>>()))
}

async fn open_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(view): Query<ViewQuery>,
) -> ApiResult<(StatusCode, Json<SessionPayload>)> {
    let shared = state.collection(&id)?;
    state.sweep();
    let lib = shared.read().expect("lock poisoned");
    let session = match Session::open(&lib) {
        Ok(s) => Some(s),
        Err(Error::EmptyCollection) => None,
        Err(e) => return Err(e.into()),
    };
    let sid = new_session_id();
    let cap = (!view.all).then_some(state.config().cloud_cap);
    let body = payload(&sid, &lib, session.as_ref(), cap)?;
    drop(lib);
    state.inner.sessions.lock().expect("lock poisoned").insert(
        sid,
        Arc::new(Mutex::new(SessionEntry {
            collection: shared,
            session,
            last_active: Instant::now(),
        })),
    );
    Ok((StatusCode::CREATED, Json(body)))
}

/// Runs `step` on a live session under its lock and returns the new state.
fn with_session(
    state: &AppState,
    sid: &str,
    view: ViewQuery,
    step: impl FnOnce(&mut Library<NdAutomaton>, Option<&mut Session<Frontier>>) -> tagnav::Result<()>,
) -> ApiResult<Json<SessionPayload>> {
    let entry = state.session(sid)?;
    let mut entry = entry.lock().expect("lock poisoned");
    entry.last_active = Instant::now();
    let shared = entry.collection.clone();
    let mut lib = shared.write().expect("lock poisoned");
    step(&mut lib, entry.session.as_mut())?;
    let cap = (!view.all).then_some(state.config().cloud_cap);
    Ok(Json(payload(sid, &lib, entry.session.as_ref(), cap)?))
}

async fn current(
    State(state): State<AppState>,
    Path(sid): Path<String>,
    Query(view): Query<ViewQuery>,
) -> ApiResult<Json<SessionPayload>> {
    with_session(&state, &sid, view, |lib, s| match s {
        Some(s) => s.visit_all(lib).map(|_| ()),
        None => Ok(()),
    })
}

async fn select(
    State(state): State<AppState>,
    Path(sid): Path<String>,
    Query(view): Query<ViewQuery>,
    body: String,
) -> ApiResult<Json<SessionPayload>> {
    let body: SelectBody = serde_json::from_str(&body).map_err(Error::from)?;
    with_session(&state, &sid, view, |lib, s| match s {
        Some(s) => s.select(lib, &body.tag),
        None => Err(Error::InfeasibleTag(body.tag.clone())),
    })
}

async fn back(
    State(state): State<AppState>,
    Path(sid): Path<String>,
    Query(view): Query<ViewQuery>,
) -> ApiResult<Json<SessionPayload>> {
    with_session(&state, &sid, view, |lib, s| match s {
        Some(s) => s.back(lib),
        None => Err(Error::AtRoot),
    })
}

async fn reset(
    State(state): State<AppState>,
    Path(sid): Path<String>,
    Query(view): Query<ViewQuery>,
) -> ApiResult<Json<SessionPayload>> {
    with_session(&state, &sid, view, |lib, s| match s {
        Some(s) => s.reset(lib),
        None => Ok(()),
    })
}

fn resource_payload(lib: &Library<NdAutomaton>, rid: &str) -> ApiResult<ResourcePayload> {
    let c = lib.collection();
    let r = c
        .doc(rid)
        .and_then(|d| c.resource(d))
        .ok_or_else(|| ApiError::from(Error::UnknownResource(rid.to_string())))?;
    let mut tags: Vec<String> = r.tags().iter().map(|&t| c.tag(t).to_string()).collect();
    tags.sort();
    Ok(ResourcePayload {
        id: r.id.to_string(),
        title: r.title.clone(),
        uri: r.uri.clone(),
        tags,
    })
}

async fn get_resource(
    State(state): State<AppState>,
    Path((id, rid)): Path<(String, String)>,
) -> ApiResult<Json<ResourcePayload>> {
    let shared = state.collection(&id)?;
    let lib = shared.read().expect("lock poisoned");
    Ok(Json(resource_payload(&lib, &rid)?))
}

fn check_mutations(state: &AppState) -> ApiResult<()> {
    if state.config().allow_mutations {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::FORBIDDEN,
            "MutationsDisabled",
            "collection mutations are disabled on this server",
        ))
    }
}

async fn add_resource(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: String,
) -> ApiResult<(StatusCode, Json<ResourcePayload>)> {
    check_mutations(&state)?;
    let shared = state.collection(&id)?;
    let r: ResourceDocument = serde_json::from_str(&body).map_err(Error::from)?;
    let mut lib = shared.write().expect("lock poisoned");
    let meta = Metadata {
        title: r.title,
        uri: r.uri,
    };
    lib.add_resource_with(&r.id, &r.tags, meta)?;
    Ok((StatusCode::CREATED, Json(resource_payload(&lib, &r.id)?)))
}

async fn remove_resource(
    State(state): State<AppState>,
    Path((id, rid)): Path<(String, String)>,
) -> ApiResult<Json<ResourcePayload>> {
    check_mutations(&state)?;
    let shared = state.collection(&id)?;
    let mut lib = shared.write().expect("lock poisoned");
    let before = resource_payload(&lib, &rid)?;
    lib.remove_resource(&rid)?;
    Ok(Json(before))
}

/// Address to bind for `port`, honouring [`BIND_ENV`].
pub fn bind_address(port: u16) -> String {
    let host = std::env::var(BIND_ENV).unwrap_or_else(|_| DEFAULT_BIND.to_string());
    format!("{host}:{port}")
}

pub async fn serve(state: AppState, addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
