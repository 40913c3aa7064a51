use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use fs2::FileExt;
use serde::{Deserialize, Serialize};

use super::transport::{Clock, HttpResponse, Transport};
use super::FetchError;

/// Provider courtesy limit between consecutive requests.
pub const MIN_INTERVAL: Duration = Duration::from_secs(2);

#[derive(Debug, Clone, PartialEq)]
pub struct FetchConfig {
    pub min_interval: Duration,
    pub max_retries: u32,
    pub user_agent: String,
    /// Reuse pages already in the cache instead of requesting them again.
    pub resume: bool,
    pub cache_dir: PathBuf,
    pub api_base: String,
    pub site_base: String,
}

impl FetchConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            min_interval: MIN_INTERVAL,
            max_retries: 3,
            user_agent: format!("psg/{} (research dataset builder)", env!("CARGO_PKG_VERSION")),
            resume: false,
            cache_dir: cache_dir.into(),
            api_base: "https://codeforces.com/api".to_string(),
            site_base: "https://codeforces.com".to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), FetchError> {
        if self.min_interval < MIN_INTERVAL {
            return Err(FetchError::Config(format!(
                "min_interval must be at least {}s, got {:?}",
                MIN_INTERVAL.as_secs(),
                self.min_interval
            )));
        }
        Ok(())
    }

    pub fn index_url(&self) -> String {
        format!("{}/problemset.problems", self.api_base)
    }

    pub fn statement_url(&self, contest_id: i64, index: &str) -> String {
        format!("{}/problemset/problem/{contest_id}/{index}", self.site_base)
    }
}

/// One entry of the provider's problem list. Tags keep provider spelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawProblemMeta {
    pub contest_id: i64,
    pub index: String,
    pub name: String,
    pub tags: Vec<String>,
    pub rating: Option<i64>,
}

impl RawProblemMeta {
    pub fn id(&self) -> String {
        format!("{}{}", self.contest_id, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementPage {
    Html(String),
    /// The page answered 404; the problem is skipped.
    Missing,
}

#[derive(Deserialize)]
struct ApiEnvelope {
    status: String,
    #[serde(default)]
    comment: Option<String>,
    #[serde(default)]
    result: Option<ApiResult>,
}

#[derive(Deserialize)]
struct ApiResult {
    problems: Vec<ApiProblem>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ApiProblem {
    contest_id: Option<i64>,
    index: String,
    #[serde(default)]
    name: String,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default)]
    rating: Option<i64>,
}

/// Rate-limited, retrying client with an exclusive on-disk page cache.
pub struct CodeforcesClient<T, C> {
    config: FetchConfig,
    transport: T,
    clock: C,
    last_request: Option<Duration>,
    _lock: fs::File,
}

impl<T: Transport, C: Clock> CodeforcesClient<T, C> {
    /// Validates the config and takes an exclusive lock on the cache
    /// directory for the lifetime of the client.
    pub fn new(config: FetchConfig, transport: T, clock: C) -> Result<Self, FetchError> {
        config.validate()?;
        let cache_err = |path: &Path, e: std::io::Error| FetchError::Cache { path: path.to_path_buf(), message: e.to_string() };
        fs::create_dir_all(&config.cache_dir).map_err(|e| cache_err(&config.cache_dir, e))?;
        let lock_path = config.cache_dir.join(".lock");
        let lock = fs::File::create(&lock_path).map_err(|e| cache_err(&lock_path, e))?;
        lock.try_lock_exclusive().map_err(|e| cache_err(&lock_path, e))?;
        Ok(Self { config, transport, clock, last_request: None, _lock: lock })
    }

    pub fn config(&self) -> &FetchConfig {
        &self.config
    }

    fn wait_turn(&mut self) {
        if let Some(last) = self.last_request {
            let elapsed = self.clock.now().saturating_sub(last);
            if elapsed < self.config.min_interval {
                self.clock.sleep(self.config.min_interval - elapsed);
            }
        }
        self.last_request = Some(self.clock.now());
    }

    /// GET with spacing and retries. 429, 5xx and connection failures are
    /// retried with exponential backoff; other statuses are returned as is.
    fn request(&mut self, url: &str) -> Result<HttpResponse, FetchError> {
        let mut last_failure = None;
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                self.clock.sleep(self.config.min_interval * (1 << (attempt - 1).min(6)));
            }
            self.wait_turn();
            match self.transport.get(url, &self.config.user_agent) {
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    log::warn!("{url}: HTTP {} (attempt {})", resp.status, attempt + 1);
                    last_failure = Some(Ok(resp.status));
                }
                Ok(resp) => return Ok(resp),
                Err(e) => {
                    log::warn!("{url}: {e} (attempt {})", attempt + 1);
                    last_failure = Some(Err(e.0));
                }
            }
        }
        let url = url.to_string();
        Err(match last_failure {
            Some(Ok(429)) => FetchError::RateLimited { url, attempts: self.config.max_retries + 1 },
            Some(Ok(status)) => FetchError::Http { url, status },
            Some(Err(message)) => FetchError::Transport { url, message },
            None => unreachable!("at least one attempt is made"),
        })
    }

    fn index_cache_path(&self) -> PathBuf {
        self.config.cache_dir.join("problemset.problems.json")
    }

    fn statement_cache_path(&self, contest_id: i64, index: &str) -> PathBuf {
        self.config.cache_dir.join("statements").join(contest_id.to_string()).join(format!("{index}.html"))
    }

    fn read_cache(&self, path: &Path) -> Option<String> {
        if !self.config.resume {
            return None;
        }
        fs::read_to_string(path).ok()
    }

    fn write_cache(&self, path: &Path, body: &str) -> Result<(), FetchError> {
        let err = |e: std::io::Error| FetchError::Cache { path: path.to_path_buf(), message: e.to_string() };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(err)?;
        }
        let tmp = path.with_extension("partial");
        fs::write(&tmp, body).map_err(err)?;
        fs::rename(&tmp, path).map_err(err)
    }

    /// Every listed problem with a contest id, in provider order.
    pub fn fetch_problem_index(&mut self) -> Result<Vec<RawProblemMeta>, FetchError> {
        let url = self.config.index_url();
        let cache = self.index_cache_path();
        let body = match self.read_cache(&cache) {
            Some(body) => body,
            None => {
                let resp = self.request(&url)?;
                let body = parse_index(&url, resp.status, &resp.body).map(|_| resp.body)?;
                self.write_cache(&cache, &body)?;
                body
            }
        };
        parse_index(&url, 200, &body)
    }

    pub fn fetch_statement_html(&mut self, contest_id: i64, index: &str) -> Result<StatementPage, FetchError> {
        let cache = self.statement_cache_path(contest_id, index);
        if let Some(body) = self.read_cache(&cache) {
            return Ok(StatementPage::Html(body));
        }
        let url = self.config.statement_url(contest_id, index);
        let resp = self.request(&url)?;
        match resp.status {
            200..=299 => {
                self.write_cache(&cache, &resp.body)?;
                Ok(StatementPage::Html(resp.body))
            }
            404 => {
                log::warn!("problem page missing: {contest_id}{index}");
                Ok(StatementPage::Missing)
            }
            status => Err(FetchError::Http { url, status }),
        }
    }
}

fn parse_index(url: &str, status: u16, body: &str) -> Result<Vec<RawProblemMeta>, FetchError> {
    let envelope: ApiEnvelope = match serde_json::from_str(body) {
        Ok(e) => e,
        Err(_) if !(200..300).contains(&status) => return Err(FetchError::Http { url: url.to_string(), status }),
        Err(e) => return Err(FetchError::Malformed { url: url.to_string(), message: e.to_string() }),
    };
    if envelope.status != "OK" {
        return Err(FetchError::Provider(envelope.comment.unwrap_or_else(|| envelope.status.clone())));
    }
    let result = envelope
        .result
        .ok_or_else(|| FetchError::Malformed { url: url.to_string(), message: "missing result".to_string() })?;
    let mut seen = std::collections::HashSet::new();
    let mut metas = Vec::new();
    for p in result.problems {
        let Some(contest_id) = p.contest_id.filter(|&c| c >= 1) else { continue };
        if p.index.is_empty() || !seen.insert((contest_id, p.index.clone())) {
            continue;
        }
        metas.push(RawProblemMeta { contest_id, index: p.index, name: p.name, tags: p.tags, rating: p.rating });
    }
    Ok(metas)
}
