//! Job records, payload validation, and the worker pool.
//!
//! Submission validates payloads synchronously and rejects bad requests
//! before anything is queued; execution happens on dedicated worker threads
//! that pull job ids FIFO from a shared channel. The store is in-memory
//! only: a restarted service knows no previously issued id.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{mpsc, Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use heat_oracle::{build_grid_mesh, NodeFrame};
use qgnn::QgnnModel;
use qpe_eigen::{QpeConfig, MAX_ANCILLA};
use quasim_cli::config::InputStateSpec;
use quasim_cli::documents::{modal_document, predict_document, qpe_document};
use quasim_cli::matrixfile::{fem_from_matrix, validate_matrix_file, MatrixFile};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Submission failure: the HTTP layer maps `Malformed` to 400 and
/// `Infeasible` to 422.
#[derive(Debug, Clone, PartialEq)]
pub enum SubmitError {
    Malformed(String),
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Failed,
}

/// One submitted job and everything observed about it so far.
#[derive(Debug, Clone, Serialize)]
pub struct JobRecord {
    pub id: String,
    pub kind: String,
    pub status: JobStatus,
    /// Epoch milliseconds.
    pub submitted_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub started_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finished_ms: Option<u64>,
    /// Report document, present once done; the same document the CLI
    /// writes for this kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    payload: Value,
    #[serde(skip)]
    seed: u64,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModalPayload {
    matrix: MatrixFile,
    #[serde(default)]
    include_mode_shapes: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QpePayload {
    matrix: MatrixFile,
    #[serde(default = "QpePayload::default_n_ancilla")]
    n_ancilla: usize,
    #[serde(default = "QpePayload::default_shots")]
    shots: u64,
    #[serde(default)]
    evolution_time: Option<f64>,
    #[serde(default = "QpePayload::default_input_state")]
    input_state: InputStateSpec,
    #[serde(default)]
    min_weight: f64,
}

impl QpePayload {
    fn default_n_ancilla() -> usize {
        6
    }

    fn default_shots() -> u64 {
        4096
    }

    fn default_input_state() -> InputStateSpec {
        InputStateSpec::Uniform
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredictPayload {
    /// Serialized model document, the same schema the CLI trains to disk.
    model: Value,
    nx: usize,
    ny: usize,
    frame: Vec<f64>,
    #[serde(default = "PredictPayload::default_steps")]
    steps: usize,
}

impl PredictPayload {
    fn default_steps() -> usize {
        1
    }

    fn parse_model(&self) -> Result<QgnnModel, SubmitError> {
        let bytes = serde_json::to_vec(&self.model)
            .map_err(|e| SubmitError::Malformed(format!("model: {e}")))?;
        QgnnModel::load(bytes.as_slice())
            .map_err(|e| SubmitError::Malformed(format!("model: {e}")))
    }
}

fn malformed<E: std::fmt::Display>(e: E) -> SubmitError {
    SubmitError::Malformed(e.to_string())
}

/// Checks a payload against its kind's schema without running it. Unknown
/// kinds and schema violations are malformed; requests that parse but
/// exceed the simulator's ancilla budget are infeasible.
pub fn validate_payload(kind: &str, payload: &Value) -> Result<(), SubmitError> {
    match kind {
        "modal" => {
            let p: ModalPayload = serde_json::from_value(payload.clone()).map_err(malformed)?;
            validate_matrix_file(&p.matrix, "matrix").map_err(malformed)
        }
        "qpe" => {
            let p: QpePayload = serde_json::from_value(payload.clone()).map_err(malformed)?;
            validate_matrix_file(&p.matrix, "matrix").map_err(malformed)?;
            if p.n_ancilla < 1 || p.n_ancilla > MAX_ANCILLA {
                return Err(SubmitError::Infeasible("ancilla cap".to_string()));
            }
            Ok(())
        }
        "qgnn_predict" => {
            let p: PredictPayload = serde_json::from_value(payload.clone()).map_err(malformed)?;
            p.parse_model()?;
            if p.steps == 0 {
                return Err(SubmitError::Malformed("steps must be at least 1".to_string()));
            }
            if p.frame.len() != p.nx * p.ny {
                return Err(SubmitError::Malformed(format!(
                    "frame has {} values but the {}x{} grid has {} vertices",
                    p.frame.len(),
                    p.nx,
                    p.ny,
                    p.nx * p.ny
                )));
            }
            Ok(())
        }
        other => Err(SubmitError::Malformed(format!(
            "unknown job kind {other:?}; expected modal, qpe, or qgnn_predict"
        ))),
    }
}

/// Runs a validated job; the returned document matches the CLI output for
/// the same inputs byte for byte once serialized the same way.
pub fn execute_job(kind: &str, payload: &Value, seed: u64) -> Result<Value, String> {
    match kind {
        "modal" => {
            let p: ModalPayload =
                serde_json::from_value(payload.clone()).map_err(|e| e.to_string())?;
            let fem = fem_from_matrix(&p.matrix).map_err(|e| e.to_string())?;
            let doc =
                modal_document(&fem, p.include_mode_shapes).map_err(|e| e.to_string())?;
            serde_json::to_value(doc).map_err(|e| e.to_string())
        }
        "qpe" => {
            let p: QpePayload =
                serde_json::from_value(payload.clone()).map_err(|e| e.to_string())?;
            let fem = fem_from_matrix(&p.matrix).map_err(|e| e.to_string())?;
            let cfg = QpeConfig {
                n_ancilla: p.n_ancilla,
                evolution_time: p.evolution_time,
                shots: p.shots,
                seed,
                input_state: p.input_state.to_input_state(),
            };
            let doc = qpe_document(&fem, &cfg, p.min_weight).map_err(|e| e.to_string())?;
            serde_json::to_value(doc).map_err(|e| e.to_string())
        }
        "qgnn_predict" => {
            let p: PredictPayload =
                serde_json::from_value(payload.clone()).map_err(|e| e.to_string())?;
            let model = p.parse_model().map_err(|e| match e {
                SubmitError::Malformed(m) | SubmitError::Infeasible(m) => m,
            })?;
            let mesh = build_grid_mesh(p.nx, p.ny).map_err(|e| e.to_string())?;
            let frame = NodeFrame::new(0, p.frame.clone()).map_err(|e| e.to_string())?;
            let doc =
                predict_document(&model, &mesh, &frame, p.steps).map_err(|e| e.to_string())?;
            serde_json::to_value(doc).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown job kind {other:?}")),
    }
}

/// Shared service state: the synchronized job map plus the submission
/// channel feeding the worker threads.
pub struct ServiceState {
    jobs: Mutex<HashMap<String, JobRecord>>,
    queue: mpsc::Sender<String>,
    next_id: AtomicU64,
}

impl ServiceState {
    /// Builds the store and spawns `workers` dedicated threads pulling
    /// jobs FIFO. Worker threads exit when the state is dropped.
    pub fn start(workers: usize) -> Arc<Self> {
        let (tx, rx) = mpsc::channel::<String>();
        let state = Arc::new(ServiceState {
            jobs: Mutex::new(HashMap::new()),
            queue: tx,
            next_id: AtomicU64::new(1),
        });
        let rx = Arc::new(Mutex::new(rx));
        for _ in 0..workers.max(1) {
            let state = Arc::downgrade(&state);
            let rx = Arc::clone(&rx);
            std::thread::spawn(move || loop {
                // Hold the receiver lock only while dequeueing so the other
                // workers stay available.
                let id = match rx.lock().expect("queue lock").recv() {
                    Ok(id) => id,
                    Err(_) => return,
                };
                let Some(state) = state.upgrade() else { return };
                state.run_job(&id);
            });
        }
        state
    }

    /// Validates and enqueues one job, returning its id.
    pub fn submit(&self, kind: &str, payload: Value, seed: u64) -> Result<String, SubmitError> {
        validate_payload(kind, &payload)?;
        let id = format!("job-{}", self.next_id.fetch_add(1, Ordering::Relaxed));
        let record = JobRecord {
            id: id.clone(),
            kind: kind.to_string(),
            status: JobStatus::Queued,
            submitted_ms: now_ms(),
            started_ms: None,
            finished_ms: None,
            result: None,
            error: None,
            payload,
            seed,
        };
        self.jobs.lock().expect("job lock").insert(id.clone(), record);
        // The receiver outlives the state; a send cannot fail while any
        // worker is alive.
        let _ = self.queue.send(id.clone());
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Option<JobRecord> {
        self.jobs.lock().expect("job lock").get(id).cloned()
    }

    fn run_job(&self, id: &str) {
        let (kind, payload, seed) = {
            let mut jobs = self.jobs.lock().expect("job lock");
            let Some(job) = jobs.get_mut(id) else { return };
            job.status = JobStatus::Running;
            job.started_ms = Some(now_ms());
            (job.kind.clone(), job.payload.clone(), job.seed)
        };
        // Execution happens without the lock; a long job must not block
        // status reads or other submissions.
        let outcome = execute_job(&kind, &payload, seed);
        let mut jobs = self.jobs.lock().expect("job lock");
        let Some(job) = jobs.get_mut(id) else { return };
        job.finished_ms = Some(now_ms());
        match outcome {
            Ok(result) => {
                job.status = JobStatus::Done;
                job.result = Some(result);
            }
            Err(message) => {
                job.status = JobStatus::Failed;
                job.error = Some(message);
            }
        }
    }
}
