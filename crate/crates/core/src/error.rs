use std::path::PathBuf;

/// Crate-wide error type.
///
/// Variants are grouped by how callers are expected to react: validation
/// errors mean the input or configuration is wrong, I/O and parse errors
/// carry file context, solver-budget errors signal a resource limit, and
/// the remote variants distinguish transport timeouts from protocol
/// failures so retry policies can treat them differently.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),

    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse: {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("solver budget exhausted after {nodes} nodes (limit {limit})")]
    SolverBudget { nodes: u64, limit: u64 },

    #[error("remote timeout for prompt {prompt_id} after {attempts} attempts")]
    RemoteTimeout { prompt_id: String, attempts: u32 },

    #[error("remote protocol error for prompt {prompt_id}: {message}")]
    RemoteProtocol { prompt_id: String, message: String },
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
