//! Empowerment estimation for agents acting in text-rendered MDPs.
//!
//! The crate bundles everything needed to measure how much control an agent
//! has over its future: two deterministic text games (box-pushing gridworld
//! and Tower of Hanoi), scripted and HTTP-backed policies that generate
//! trajectory corpora, a count-based direct estimator, a Blahut-Arimoto
//! channel-capacity baseline, and a contrastive (InfoNCE) estimator trained
//! on hashed text features. The `report` module turns estimates into the
//! comparison tables and statistics used by the CLI sweeps.

pub mod agents;
pub mod capacity;
pub mod direct;
pub mod eelma;
pub mod envs;
pub mod jsonl;
pub mod nn;
pub mod report;
pub mod rng;
pub mod traj;

use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Jsonl { line: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("transport failure: {0}")]
    Transport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
