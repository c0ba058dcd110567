//! Post collection for an event's pre-game window and viewership loading.
//!
//! Posts come from a Pushshift-compatible archive, either over HTTP
//! ([`HttpArchive`]) or from local fixture files ([`LocalArchive`]). Both sit
//! behind [`ArchiveSource`] so [`fetch_window`] paginates them identically.

mod archive;
mod fixture;
mod server;
mod types;
mod viewership;

use std::collections::HashSet;

use thiserror::Error;

pub use archive::{
    ArchiveQuery, ArchiveSource, ClientConfig, HttpArchive, LocalArchive, RateLimiter, RetryPolicy,
};
pub use fixture::{decode_pages, load_posts_fixture, write_posts_fixture};
pub use server::FixtureServer;
pub use types::{event_slug, EventSpec, FetchWindow, LabeledEvent, RawPost, Sport};
pub use viewership::{load_viewership_csv, read_viewership, VIEWERSHIP_HEADER};

/// Maximum number of records the archive returns per request.
pub const PAGE_SIZE: usize = 100;

/// Default length of the pre-event collection window.
pub const DEFAULT_WINDOW_HOURS: u32 = 72;

/// Environment variable overriding the archive base URL.
pub const API_BASE_ENV: &str = "BUZZCAST_API_BASE";

/// Default archive base URL.
pub const DEFAULT_API_BASE: &str = "https://api.pullpush.io";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid event spec: {0}")]
    InvalidSpec(String),
    #[error("fetch failed after {attempts} attempt(s): {message}")]
    Fetch { attempts: u32, message: String },
    #[error("decode error{}: {message}", .index.map(|i| format!(" at record {i}")).unwrap_or_default())]
    Decode {
        index: Option<usize>,
        message: String,
    },
    #[error("schema error: missing column `{column}`")]
    Schema { column: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Builds the archive search string: the quoted event title followed by each
/// quoted team abbreviation, joined with ` OR `.
pub fn build_query(spec: &EventSpec) -> Result<String, IngestError> {
    let title = spec.event_title.trim();
    if title.is_empty() {
        return Err(IngestError::InvalidSpec(format!(
            "event `{}` has an empty event title",
            spec.name
        )));
    }
    let terms: Vec<String> = std::iter::once(title)
        .chain(
            spec.teams
                .iter()
                .map(|t| t.trim())
                .filter(|t| !t.is_empty()),
        )
        .map(|t| format!("\"{t}\""))
        .collect();
    Ok(terms.join(" OR "))
}

/// Collects every post in the `window_hours` before `spec.start_time`.
///
/// Pages are requested newest-first. While a page comes back full, the
/// `before` cursor moves to one second past the oldest timestamp on that page,
/// so posts sharing the boundary timestamp are re-requested rather than lost;
/// the resulting repeats are removed by id. The result is sorted ascending by
/// `created_utc` (ties by id).
pub fn fetch_window<S>(
    source: &S,
    spec: &EventSpec,
    window_hours: u32,
) -> Result<Vec<RawPost>, IngestError>
where
    S: ArchiveSource + ?Sized,
{
    let window = FetchWindow::preceding(spec.start_time, window_hours)?;
    let q = build_query(spec)?;

    let mut before = window.before;
    let mut seen = HashSet::new();
    let mut posts = Vec::new();
    let mut pages = 0usize;
    loop {
        let query = ArchiveQuery {
            q: q.clone(),
            subreddit: spec.subreddit.clone(),
            // The archive treats both bounds as exclusive.
            after: window.after - 1,
            before,
            size: PAGE_SIZE,
        };
        let page = source.search(&query)?;
        pages += 1;
        let full = page.len() >= PAGE_SIZE;
        let oldest = page.iter().map(|p| p.created_utc).min();
        let mut fresh = 0usize;
        for post in page {
            if window.contains(post.created_utc)
                && post.subreddit.eq_ignore_ascii_case(&spec.subreddit)
                && seen.insert(post.id.clone())
            {
                posts.push(post);
                fresh += 1;
            }
        }
        let Some(oldest) = oldest else { break };
        if !full {
            break;
        }
        // A full page of repeats means more than a page of posts share one
        // timestamp; step strictly past it.
        let next = if fresh > 0 && oldest + 1 < before {
            oldest + 1
        } else {
            oldest
        };
        if next <= window.after {
            break;
        }
        before = next;
    }
    log::debug!(
        "{}: {} posts over {} page(s) in [{}, {})",
        spec.name,
        posts.len(),
        pages,
        window.after,
        window.before
    );
    posts.sort_by(|a, b| {
        a.created_utc
            .cmp(&b.created_utc)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(posts)
}
