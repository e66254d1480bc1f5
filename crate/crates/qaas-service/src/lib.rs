//! Minimal quantum-as-a-service job API: modal analysis, phase-estimation,
//! and surrogate-prediction jobs over HTTP.
//!
//! `POST /jobs` with `{kind, payload, seed}` validates the payload against
//! the kind's schema and answers 202 with a job id (400 malformed, 422
//! infeasible). Jobs run FIFO on a configurable number of worker threads
//! through `queued -> running -> {done, failed}`; `GET /jobs/{id}` returns
//! the record, with the finished result being exactly the document the
//! command-line frontend writes for the same inputs and seed. The store is
//! in-memory: ids do not survive a restart.

pub mod http;
pub mod jobs;

pub use http::{router, spawn_service};
pub use jobs::{execute_job, validate_payload, JobRecord, JobStatus, ServiceState, SubmitError};
