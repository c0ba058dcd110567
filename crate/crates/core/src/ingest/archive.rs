use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use super::fixture::decode_pages;
use super::{IngestError, RawPost, API_BASE_ENV, DEFAULT_API_BASE};

/// One search request against the archive. Both time bounds are exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveQuery {
    pub q: String,
    pub subreddit: String,
    pub after: i64,
    pub before: i64,
    pub size: usize,
}

/// Anything that answers archive searches newest-first.
pub trait ArchiveSource: Sync {
    fn search(&self, query: &ArchiveQuery) -> Result<Vec<RawPost>, IngestError>;
}

impl<S: ArchiveSource + ?Sized + Send> ArchiveSource for Box<S> {
    fn search(&self, query: &ArchiveQuery) -> Result<Vec<RawPost>, IngestError> {
        (**self).search(query)
    }
}

/// In-memory archive over previously collected posts.
///
/// Serves the same query semantics as the HTTP endpoint: subreddit and time
/// filtering, newest first, truncated to `size`. The query string is not
/// re-evaluated; a fixture is assumed to already hold one event's search hits.
#[derive(Debug, Clone, Default)]
pub struct LocalArchive {
    posts: Vec<RawPost>,
}

impl LocalArchive {
    pub fn new(mut posts: Vec<RawPost>) -> Self {
        // stable: ties keep file order
        posts.sort_by_key(|p| std::cmp::Reverse(p.created_utc));
        LocalArchive { posts }
    }

    pub fn from_fixture(path: impl AsRef<std::path::Path>) -> Result<Self, IngestError> {
        Ok(Self::new(super::load_posts_fixture(path)?))
    }

    pub fn posts(&self) -> &[RawPost] {
        &self.posts
    }
}

impl ArchiveSource for LocalArchive {
    fn search(&self, query: &ArchiveQuery) -> Result<Vec<RawPost>, IngestError> {
        Ok(self
            .posts
            .iter()
            .filter(|p| p.created_utc > query.after && p.created_utc < query.before)
            .filter(|p| {
                query.subreddit.is_empty() || p.subreddit.eq_ignore_ascii_case(&query.subreddit)
            })
            .take(query.size)
            .cloned()
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            initial_backoff: Duration::from_secs(1),
        }
    }
}

impl RetryPolicy {
    /// Delay before attempt `n + 1`, doubling from the initial backoff.
    pub fn backoff(&self, failed_attempts: u32) -> Duration {
        self.initial_backoff
            .saturating_mul(1u32 << failed_attempts.saturating_sub(1).min(16))
    }
}

/// Settings for [`HttpArchive`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClientConfig {
    pub base_url: String,
    pub retry: RetryPolicy,
    /// Minimum spacing between requests across all threads.
    pub request_interval: Duration,
    pub timeout: Duration,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            base_url: std::env::var(API_BASE_ENV).unwrap_or_else(|_| DEFAULT_API_BASE.to_string()),
            retry: RetryPolicy::default(),
            request_interval: Duration::from_secs(1),
            timeout: Duration::from_secs(30),
        }
    }
}

/// Global request pacing: grants at most one request per `interval`.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next_slot: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(interval: Duration) -> Self {
        RateLimiter {
            interval,
            next_slot: Mutex::new(None),
        }
    }

    /// Blocks until the caller may issue a request.
    pub fn acquire(&self) {
        let slot = {
            let mut next = self.next_slot.lock().unwrap_or_else(|e| e.into_inner());
            let now = Instant::now();
            let slot = next.map_or(now, |n| n.max(now));
            *next = Some(slot + self.interval);
            slot
        };
        let now = Instant::now();
        if slot > now {
            std::thread::sleep(slot - now);
        }
    }
}

/// Client for a Pushshift-compatible `/reddit/search/submission/` endpoint.
#[derive(Debug, Clone)]
pub struct HttpArchive {
    config: ClientConfig,
    agent: ureq::Agent,
    limiter: Arc<RateLimiter>,
}

impl HttpArchive {
    pub fn new(config: ClientConfig) -> Self {
        let limiter = Arc::new(RateLimiter::new(config.request_interval));
        Self::with_limiter(config, limiter)
    }

    /// Shares `limiter` with other clients so pacing is global.
    pub fn with_limiter(config: ClientConfig, limiter: Arc<RateLimiter>) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        HttpArchive {
            config,
            agent,
            limiter,
        }
    }

    pub fn config(&self) -> &ClientConfig {
        &self.config
    }

    fn endpoint(&self) -> String {
        format!(
            "{}/reddit/search/submission/",
            self.config.base_url.trim_end_matches('/')
        )
    }

    fn request_once(&self, query: &ArchiveQuery) -> Result<String, Attempt> {
        self.limiter.acquire();
        let mut req = self.agent.get(self.endpoint()).query("q", &query.q);
        if !query.subreddit.is_empty() {
            req = req.query("subreddit", &query.subreddit);
        }
        let mut resp = req
            .query("after", query.after.to_string())
            .query("before", query.before.to_string())
            .query("size", query.size.to_string())
            .query("sort", "desc")
            .query("sort_type", "created_utc")
            .call()
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(Attempt::Retry(format!("http status {status}")));
        }
        if status >= 400 {
            return Err(Attempt::Fatal(format!("http status {status}")));
        }
        resp.body_mut()
            .read_to_string()
            .map_err(|e| Attempt::Retry(e.to_string()))
    }
}

enum Attempt {
    Retry(String),
    Fatal(String),
}

impl ArchiveSource for HttpArchive {
    fn search(&self, query: &ArchiveQuery) -> Result<Vec<RawPost>, IngestError> {
        let policy = self.config.retry;
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.request_once(query) {
                Ok(body) => return decode_pages(&body),
                Err(Attempt::Fatal(message)) => {
                    return Err(IngestError::Fetch { attempts, message })
                }
                Err(Attempt::Retry(message)) => {
                    if attempts >= policy.attempts.max(1) {
                        return Err(IngestError::Fetch { attempts, message });
                    }
                    let wait = policy.backoff(attempts);
                    log::warn!("archive request failed ({message}); retrying in {wait:?}");
                    std::thread::sleep(wait);
                }
            }
        }
    }
}
