//! HTTP front end for editing sessions.
//!
//! All endpoints live under `/peng/` and exchange JSON. Each session sits
//! behind its own async mutex, so requests for one session run one at a
//! time in arrival order while different sessions proceed concurrently.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Request, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use peng::protocol::{AddWordRequest, FileRequest, Response, RetractRequest, Status, TokenRequest};
use peng::{Parser, Session, SessionError};

pub const DEFAULT_PORT: u16 = 8085;

#[derive(Debug, Clone)]
pub struct Config {
    pub port: u16,
    pub data_dir: PathBuf,
}

impl Config {
    /// Reads `PENG_PORT` and `PENG_DATA_DIR`.
    pub fn from_env() -> Result<Config, String> {
        let port = match std::env::var("PENG_PORT") {
            Ok(p) => p.parse().map_err(|_| format!("PENG_PORT is not a port number: `{p}`"))?,
            Err(_) => DEFAULT_PORT,
        };
        let data_dir = std::env::var_os("PENG_DATA_DIR").map_or_else(|| PathBuf::from("peng-data"), PathBuf::from);
        Ok(Config { port, data_dir })
    }
}

type SessionHandle = Arc<tokio::sync::Mutex<Session>>;

pub struct AppState {
    parser: Parser,
    data_dir: PathBuf,
    sessions: Mutex<HashMap<String, SessionHandle>>,
}

impl AppState {
    pub fn new(parser: Parser, data_dir: impl Into<PathBuf>) -> AppState {
        AppState { parser, data_dir: data_dir.into(), sessions: Mutex::new(HashMap::new()) }
    }

    fn session(&self, id: &str) -> Result<SessionHandle, Reply> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| Reply::error(StatusCode::NOT_FOUND, id, "no-such-session", format!("unknown session `{id}`")))
    }

    fn create(&self) -> SessionHandle {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let handle = Arc::new(tokio::sync::Mutex::new(Session::new(id.clone(), self.parser.clone())));
        self.sessions.lock().expect("session table lock").insert(id, handle.clone());
        handle
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/peng/", get(index))
        .route("/peng/session", post(create_session))
        .route("/peng/token", post(token))
        .route("/peng/retract", post(retract))
        .route("/peng/addword", post(add_word))
        .route("/peng/save", post(save))
        .route("/peng/load", post(load))
        .with_state(state)
}

/// A JSON reply with an HTTP status.
pub struct Reply(StatusCode, Box<Response>);

impl Reply {
    fn ok(r: Response) -> Reply {
        Reply(StatusCode::OK, Box::new(r))
    }

    fn error(status: StatusCode, session: &str, code: &str, detail: String) -> Reply {
        Reply(status, Box::new(Response::bare_error(session, code, detail)))
    }

    fn from_session(session: &Session, err: &SessionError) -> Reply {
        let status = match err {
            SessionError::PositionMismatch { .. }
            | SessionError::SentenceAlreadySubmitted(_)
            | SessionError::Semantics(_)
            | SessionError::ReplayFailure { .. } => StatusCode::CONFLICT,
            SessionError::FileMissing(_) => StatusCode::NOT_FOUND,
            SessionError::Io(_) | SessionError::Translation(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Reply(status, Box::new(session.error_response(err)))
    }
}

impl IntoResponse for Reply {
    fn into_response(self) -> axum::response::Response {
        (self.0, Json(*self.1)).into_response()
    }
}

/// `Json` whose rejections are reported in the protocol's error shape.
pub struct Body<T>(T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = Reply;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(e) => Err(bad_request(e)),
        }
    }
}

fn bad_request(e: JsonRejection) -> Reply {
    Reply::error(e.status(), "", "bad-request", e.body_text())
}

fn reply(session: &Session, r: Result<Response, SessionError>) -> Reply {
    match r {
        Ok(r) => Reply::ok(r),
        Err(e) => Reply::from_session(session, &e),
    }
}

const INDEX: &str = include_str!("../static/index.html");

async fn index() -> Html<&'static str> {
    Html(INDEX)
}

#[derive(Debug, Default, Deserialize)]
struct CreateRequest {}

async fn create_session(State(app): State<Arc<AppState>>, body: Option<Json<CreateRequest>>) -> Reply {
    let _ = body;
    let handle = app.create();
    let s = handle.lock().await;
    tracing::info!(session = s.id(), "session created");
    Reply::ok(s.response(Status::Ready))
}

async fn token(State(app): State<Arc<AppState>>, Body(req): Body<TokenRequest>) -> Result<Reply, Reply> {
    let handle = app.session(&req.session)?;
    let mut s = handle.lock().await;
    let r = s.handle_token(&req.token, req.pos, req.snum, req.force);
    Ok(reply(&s, r))
}

async fn retract(State(app): State<Arc<AppState>>, Body(req): Body<RetractRequest>) -> Result<Reply, Reply> {
    let handle = app.session(&req.session)?;
    let mut s = handle.lock().await;
    let r = s.handle_retract(req.topos, req.snum);
    Ok(reply(&s, r))
}

async fn add_word(State(app): State<Arc<AppState>>, Body(req): Body<AddWordRequest>) -> Result<Reply, Reply> {
    let handle = app.session(&req.session)?;
    let mut s = handle.lock().await;
    let r = s.handle_add_word(&req.form, &req.category, req.pos, req.snum);
    Ok(reply(&s, r))
}

async fn save(State(app): State<Arc<AppState>>, Body(req): Body<FileRequest>) -> Result<Reply, Reply> {
    let handle = app.session(&req.session)?;
    let s = handle.lock().await;
    let r = s.save(&app.data_dir, &req.name);
    Ok(reply(&s, r))
}

async fn load(State(app): State<Arc<AppState>>, Body(req): Body<FileRequest>) -> Result<Reply, Reply> {
    let handle = app.session(&req.session)?;
    let mut s = handle.lock().await;
    let r = s.load(&app.data_dir, &req.name);
    Ok(reply(&s, r))
}
