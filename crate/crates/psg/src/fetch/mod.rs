//! Codeforces client: problem metadata from the public API, statement text
//! from the problem pages, joined into JSONL dataset records.
//!
//! All network access goes through [`Transport`] and all waiting through
//! [`Clock`], so the tests drive the client with [`MockTransport`] and
//! [`SimClock`] and never touch the live site.

mod assemble;
mod client;
mod extract;
mod transport;

use std::path::PathBuf;

pub use assemble::{assemble_records, AssembleSummary};
pub use client::{CodeforcesClient, FetchConfig, RawProblemMeta, StatementPage, MIN_INTERVAL};
pub use extract::{extract_statement_text, strip_math};
pub use transport::{Clock, HttpResponse, MockTransport, SimClock, SystemClock, Transport, TransportError, UreqTransport};

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("invalid fetch configuration: {0}")]
    Config(String),
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String },
    #[error("request to {url} failed with HTTP {status}")]
    Http { url: String, status: u16 },
    #[error("rate limited by {url} after {attempts} attempts")]
    RateLimited { url: String, attempts: u32 },
    #[error("provider returned an error: {0}")]
    Provider(String),
    #[error("malformed response from {url}: {message}")]
    Malformed { url: String, message: String },
    #[error("cache {path}: {message}")]
    Cache { path: PathBuf, message: String },
    #[error("problem {id}: {message}")]
    Extract { id: String, message: String },
}

impl FetchError {
    /// Failures caused by the remote side or the connection.
    pub fn is_network(&self) -> bool {
        matches!(
            self,
            FetchError::Transport { .. }
                | FetchError::Http { .. }
                | FetchError::RateLimited { .. }
                | FetchError::Provider(_)
                | FetchError::Malformed { .. }
        )
    }
}

/// Lists all problems, fetches the statement of every tagged one and
/// assembles the records. Missing pages and pages without a statement
/// region are skipped; any other failure aborts the run.
pub fn collect_records<T: Transport, C: Clock>(
    client: &mut CodeforcesClient<T, C>,
) -> Result<(Vec<psg_core::ProblemRecord>, AssembleSummary), FetchError> {
    let metas = client.fetch_problem_index()?;
    let mut statements = std::collections::BTreeMap::new();
    let tagged: Vec<&RawProblemMeta> = metas.iter().filter(|m| !m.tags.is_empty()).collect();
    for (n, meta) in tagged.iter().enumerate() {
        if n % 100 == 0 {
            log::info!("statements: {n}/{}", tagged.len());
        }
        match client.fetch_statement_html(meta.contest_id, &meta.index)? {
            StatementPage::Html(html) => match extract_statement_text(&html, &meta.id()) {
                Ok(text) => {
                    statements.insert((meta.contest_id, meta.index.clone()), text);
                }
                Err(e) => log::warn!("{e}"),
            },
            StatementPage::Missing => {}
        }
    }
    Ok(assemble_records(&metas, &statements))
}
