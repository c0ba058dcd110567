//! Paginated window fetch over HTTP.
//!
//! Serves the bundled archive from a local server that fails its first two
//! requests, then fetches one event's 72-hour window through the retrying
//! client. Pass `--live` to query the public archive instead.
//!
//! ```text
//! cargo run --example fetch_archive [-- --live]
//! ```

use std::path::Path;
use std::time::Duration;

use buzzcast::ingest::{
    build_query, fetch_window, load_viewership_csv, ClientConfig, FetchWindow, FixtureServer,
    HttpArchive, RetryPolicy,
};
use buzzcast::pipeline::load_archive_dir;

fn main() -> buzzcast::Result<()> {
    env_logger::init();
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let events = load_viewership_csv(sample.join("events.csv"))?;
    let event = events
        .iter()
        .find(|e| e.spec.name == "SB XLVIII")
        .expect("sample event");
    let window = FetchWindow::preceding(event.spec.start_time, 72)?;
    println!("{}: q = {}", event.spec.name, build_query(&event.spec)?);
    println!("window [{}, {})", window.after, window.before);

    let live = std::env::args().any(|a| a == "--live");
    let _server;
    let config = if live {
        ClientConfig::default()
    } else {
        let server =
            FixtureServer::start_with_failures(load_archive_dir(&sample.join("archive"))?, 2)
                .map_err(|e| buzzcast::Error::Validation(e.to_string()))?;
        let config = ClientConfig {
            base_url: server.base_url(),
            retry: RetryPolicy {
                attempts: 3,
                initial_backoff: Duration::from_millis(50),
            },
            request_interval: Duration::from_millis(10),
            ..ClientConfig::default()
        };
        _server = server;
        config
    };
    let client = HttpArchive::new(config);
    let posts = fetch_window(&client, &event.spec, 72)?;
    println!("{} posts", posts.len());
    for p in posts.iter().rev().take(5) {
        println!("  {} {:>5} {}", p.created_utc, p.score, p.title);
    }
    Ok(())
}
