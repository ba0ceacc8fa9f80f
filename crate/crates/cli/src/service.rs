//! REST guidance service over a synthesized supervisor.
//!
//! A session is an operator's position in the supervisor. Starts and
//! completions are both reported through `/step`; only events the
//! supervisor enables in the current state are accepted.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::SystemTime;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use sct_core::modeling::done_event;
use sct_core::sequences::DEFAULT_MAX_LEN;
use sct_core::{
    count_sequences, enumerate_sequences, Automaton, SequenceCount, StateId, TaskKind, TaskSpec,
    Trace,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dot::{export_dot, Highlight};

pub const DEFAULT_SAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enabled {
    pub controllable: Vec<String>,
    pub uncontrollable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub state: String,
    pub enabled: Enabled,
    pub history: Trace,
    pub done_tasks: Vec<String>,
    pub completed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outlook {
    pub state: String,
    pub max_len: usize,
    /// A number, or `"infinite"`.
    pub remaining_sequence_count: Value,
    pub sample_completions: Vec<Trace>,
}

#[derive(Debug)]
struct Session {
    state: StateId,
    history: Vec<StateId>,
    trace: Trace,
    #[allow(dead_code)]
    created: SystemTime,
    updated: SystemTime,
}

struct Inner {
    supervisor: Automaton,
    tasks: Vec<TaskSpec>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

/// Shared service state; the supervisor is read-only.
#[derive(Clone)]
pub struct Guidance(Arc<Inner>);

#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

impl Guidance {
    /// `tasks` decides `done_tasks` and completion; when empty, every
    /// `X_done` in the history counts and completion is marking alone.
    pub fn new(supervisor: Automaton, tasks: Vec<TaskSpec>) -> Guidance {
        Guidance(Arc::new(Inner {
            supervisor,
            tasks,
            sessions: RwLock::new(HashMap::new()),
        }))
    }

    pub fn supervisor(&self) -> &Automaton {
        &self.0.supervisor
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.0
            .sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))
    }

    fn view(&self, id: &str, s: &Session) -> SessionView {
        let a = &self.0.supervisor;
        let mut enabled = Enabled {
            controllable: Vec::new(),
            uncontrollable: Vec::new(),
        };
        for (e, _) in a.outgoing(s.state) {
            let ev = a.event(e);
            if ev.controllable {
                enabled.controllable.push(ev.name.clone());
            } else {
                enabled.uncontrollable.push(ev.name.clone());
            }
        }
        let done = |name: &str| s.trace.events().contains(&done_event(name));
        let (done_tasks, completed) = if self.0.tasks.is_empty() {
            let mut names: Vec<String> = Vec::new();
            for e in s.trace.events() {
                if let Some(t) = e.strip_suffix("_done") {
                    if !names.iter().any(|n| n == t) {
                        names.push(t.to_string());
                    }
                }
            }
            (names, a.is_marked(s.state))
        } else {
            let names = self
                .0
                .tasks
                .iter()
                .filter(|t| done(&t.name))
                .map(|t| t.name.clone())
                .collect();
            let singles_done = self
                .0
                .tasks
                .iter()
                .filter(|t| t.kind == TaskKind::SingleExecution)
                .all(|t| done(&t.name));
            (names, a.is_marked(s.state) && singles_done)
        };
        SessionView {
            id: id.to_string(),
            state: a.state_name(s.state).to_string(),
            enabled,
            history: s.trace.clone(),
            done_tasks,
            completed,
        }
    }

    pub fn create(&self) -> SessionView {
        let id = uuid::Uuid::new_v4().to_string();
        let now = SystemTime::now();
        let s = Session {
            state: self.0.supervisor.initial(),
            history: Vec::new(),
            trace: Trace::new(),
            created: now,
            updated: now,
        };
        let view = self.view(&id, &s);
        self.0
            .sessions
            .write()
            .expect("session table poisoned")
            .insert(id, Arc::new(Mutex::new(s)));
        view
    }

    pub fn get(&self, id: &str) -> ApiResult<SessionView> {
        let s = self.session(id)?;
        let s = s.lock().expect("session poisoned");
        Ok(self.view(id, &s))
    }

    pub fn step(&self, id: &str, event: &str) -> ApiResult<SessionView> {
        let s = self.session(id)?;
        let mut s = s.lock().expect("session poisoned");
        let next = self
            .0
            .supervisor
            .successor_by_name(s.state, event)
            .ok_or_else(|| {
                ApiError(
                    StatusCode::CONFLICT,
                    format!(
                        "event `{event}` is not enabled in state `{}`",
                        self.0.supervisor.state_name(s.state)
                    ),
                )
            })?;
        let prev = s.state;
        s.history.push(prev);
        s.trace.push(event);
        s.state = next;
        s.updated = SystemTime::now();
        Ok(self.view(id, &s))
    }

    pub fn undo(&self, id: &str) -> ApiResult<SessionView> {
        let s = self.session(id)?;
        let mut s = s.lock().expect("session poisoned");
        let prev = s
            .history
            .pop()
            .ok_or_else(|| ApiError(StatusCode::CONFLICT, "history is empty".into()))?;
        s.trace.pop();
        s.state = prev;
        s.updated = SystemTime::now();
        Ok(self.view(id, &s))
    }

    pub fn outlook(&self, id: &str, max_len: usize, samples: usize) -> ApiResult<Outlook> {
        let state = {
            let s = self.session(id)?;
            let s = s.lock().expect("session poisoned");
            s.state
        };
        let rest = self.0.supervisor.with_initial(state);
        let count = match count_sequences(&rest) {
            SequenceCount::Finite(n) => {
                u64::try_from(n).map_or_else(|_| json!(n.to_string()), |n| json!(n))
            }
            SequenceCount::Infinite => json!("infinite"),
        };
        let listing = enumerate_sequences(&rest, max_len, samples.max(1));
        Ok(Outlook {
            state: self.0.supervisor.state_name(state).to_string(),
            max_len,
            remaining_sequence_count: count,
            sample_completions: if samples == 0 {
                Vec::new()
            } else {
                listing.sequences
            },
        })
    }

    pub fn model(&self) -> Value {
        let a = &self.0.supervisor;
        json!({
            "name": a.name(),
            "states": a.num_states(),
            "transitions": a.num_transitions(),
            "initial": a.state_name(a.initial()),
            "marked": a.marked_states().map(|s| a.state_name(s)).collect::<Vec<_>>(),
            "alphabet": a.alphabet(),
            "tasks": self.0.tasks,
            "dot": export_dot(a, Highlight::default()),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRequest {
    event: String,
}

#[derive(Deserialize)]
struct OutlookParams {
    max_len: Option<usize>,
    samples: Option<usize>,
}

async fn create(State(g): State<Guidance>) -> (StatusCode, Json<SessionView>) {
    (StatusCode::CREATED, Json(g.create()))
}

async fn show(State(g): State<Guidance>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    g.get(&id).map(Json)
}

async fn step(
    State(g): State<Guidance>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SessionView>> {
    g.session(&id)?;
    let req: StepRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, format!("malformed body: {e}")))?;
    g.step(&id, &req.event).map(Json)
}

async fn undo(State(g): State<Guidance>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    g.undo(&id).map(Json)
}

async fn outlook(
    State(g): State<Guidance>,
    Path(id): Path<String>,
    query: Result<Query<OutlookParams>, QueryRejection>,
) -> ApiResult<Json<Outlook>> {
    let Query(p) = query.map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.body_text()))?;
    g.outlook(
        &id,
        p.max_len.unwrap_or(DEFAULT_MAX_LEN),
        p.samples.unwrap_or(DEFAULT_SAMPLES),
    )
    .map(Json)
}

async fn model(State(g): State<Guidance>) -> Json<Value> {
    Json(g.model())
}

pub fn router(guidance: Guidance) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/outlook", get(outlook))
        .route("/model", get(model))
        .with_state(guidance)
}

/// Serves until the process is stopped.
pub async fn serve(guidance: Guidance, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(guidance)).await
}
