//! Subcommand implementations.

pub mod eval;
pub mod infer;
pub mod prompts;
pub mod score;

use std::path::Path;

use spanlink_core::io::{JsonlWriter, LineDiagnostic, ManifestRecord, Record};
use spanlink_core::Result;

use crate::config::RunConfig;

/// Maps items to outputs preserving input order, optionally across a
/// bounded thread pool.
pub fn map_ordered<T, O>(
    jobs: usize,
    items: Vec<T>,
    f: impl Fn(T) -> Result<O> + Sync + Send,
) -> Result<Vec<O>>
where
    T: Send,
    O: Send,
{
    if jobs <= 1 {
        return items.into_iter().map(f).collect();
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| spanlink_core::Error::validation(format!("building thread pool: {e}")))?;
    pool.install(|| items.into_par_iter().map(f).collect())
}

/// Opens the output file and writes the manifest header.
pub fn open_output(
    path: &Path,
    config: &RunConfig,
    rho: Option<serde_json::Value>,
) -> Result<JsonlWriter> {
    let mut writer = JsonlWriter::create(path)?;
    writer.write(&Record::Manifest(ManifestRecord {
        config: config.manifest_value(),
        rho,
    }))?;
    Ok(writer)
}

/// Prints partial-load diagnostics to standard error.
pub fn report_diagnostics(path: &Path, diagnostics: &[LineDiagnostic]) {
    for diagnostic in diagnostics {
        eprintln!(
            "warning: {}:{}: {}",
            path.display(),
            diagnostic.line,
            diagnostic.message
        );
    }
}
