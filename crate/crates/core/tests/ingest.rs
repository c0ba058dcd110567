mod common;

use std::collections::BTreeMap;
use std::time::Duration;

use buzzcast::ingest::{
    decode_pages, fetch_window, load_posts_fixture, write_posts_fixture, ArchiveQuery,
    ArchiveSource, ClientConfig, EventSpec, FetchWindow, FixtureServer, HttpArchive, IngestError,
    LocalArchive, RawPost, RetryPolicy, Sport, PAGE_SIZE,
};
use proptest::prelude::*;

fn fast_client(base_url: String) -> HttpArchive {
    HttpArchive::new(ClientConfig {
        base_url,
        retry: RetryPolicy {
            attempts: 3,
            initial_backoff: Duration::from_millis(5),
        },
        request_interval: Duration::from_millis(1),
        timeout: Duration::from_secs(5),
    })
}

fn brute_force(posts: &[RawPost], spec: &EventSpec, hours: u32) -> Vec<RawPost> {
    let w = FetchWindow::preceding(spec.start_time, hours).unwrap();
    let mut by_id = BTreeMap::new();
    for p in posts {
        if w.contains(p.created_utc) && p.subreddit.eq_ignore_ascii_case(&spec.subreddit) {
            by_id.entry(p.id.clone()).or_insert_with(|| p.clone());
        }
    }
    let mut out: Vec<RawPost> = by_id.into_values().collect();
    out.sort_by(|a, b| {
        a.created_utc
            .cmp(&b.created_utc)
            .then_with(|| a.id.cmp(&b.id))
    });
    out
}

fn spec(start: i64) -> EventSpec {
    EventSpec {
        name: "T".into(),
        sport: Sport::SuperBowl,
        teams: vec!["SEA".into(), "DEN".into()],
        start_time: start,
        subreddit: "nfl".into(),
        event_title: "Super Bowl".into(),
    }
}

fn post(id: usize, t: i64, sub: &str) -> RawPost {
    RawPost {
        id: format!("p{id}"),
        title: "Super Bowl thread".into(),
        body: String::new(),
        score: id as i64 % 7 - 2,
        num_comments: id as u64 % 5,
        created_utc: t,
        subreddit: sub.into(),
    }
}

#[test]
fn sample_events_match_brute_force_locally_and_over_http() {
    let archive = common::sample_archive();
    let server = FixtureServer::start(LocalArchive::new(archive.posts().to_vec())).unwrap();
    let client = fast_client(server.base_url());
    for event in common::sample_events() {
        let expected = brute_force(archive.posts(), &event.spec, 72);
        assert_eq!(
            fetch_window(&archive, &event.spec, 72).unwrap(),
            expected,
            "{}",
            event.spec.name
        );
        if event.spec.sport == Sport::SuperBowl {
            assert_eq!(
                fetch_window(&client, &event.spec, 72).unwrap(),
                expected,
                "{} over http",
                event.spec.name
            );
        }
    }
}

#[test]
fn largest_sample_event_spans_pages() {
    let archive = common::sample_archive();
    let event = common::sample_events()
        .into_iter()
        .find(|e| e.spec.name == "SB XLVIII")
        .unwrap();
    let posts = fetch_window(&archive, &event.spec, 72).unwrap();
    assert!(posts.len() >= 150 && posts.len() > PAGE_SIZE);
    assert_eq!(posts.len(), 160);
    assert_eq!(posts.iter().map(|p| p.num_comments).sum::<u64>(), 2237);
    assert_eq!(posts.iter().map(|p| p.score).sum::<i64>(), 3077);
}

#[test]
fn retries_then_succeeds() {
    let archive = LocalArchive::new(
        (0..10)
            .map(|i| post(i, 1_000_000 - i as i64, "nfl"))
            .collect(),
    );
    let server = FixtureServer::start_with_failures(archive, 2).unwrap();
    let posts = fetch_window(&fast_client(server.base_url()), &spec(1_000_001), 72).unwrap();
    assert_eq!(posts.len(), 10);
    assert_eq!(server.requests(), 3);
}

#[test]
fn gives_up_after_three_attempts() {
    let server = FixtureServer::start_with_failures(LocalArchive::new(vec![]), 10).unwrap();
    let err = fetch_window(&fast_client(server.base_url()), &spec(1_000_000), 72).unwrap_err();
    assert!(
        matches!(err, IngestError::Fetch { attempts: 3, .. }),
        "{err}"
    );
    assert_eq!(server.requests(), 3);
}

#[test]
fn unreachable_host_is_a_fetch_error() {
    let base = {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        format!("http://{}", listener.local_addr().unwrap())
    };
    let err = fetch_window(&fast_client(base), &spec(1_000_000), 72).unwrap_err();
    assert!(matches!(err, IngestError::Fetch { .. }), "{err}");
}

#[test]
fn fixture_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let posts: Vec<RawPost> = (0..250).map(|i| post(i, 5000 + i as i64, "nfl")).collect();
    write_posts_fixture(&path, &posts).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(load_posts_fixture(&path).unwrap(), posts);
    assert_eq!(decode_pages(&text).unwrap().len(), 250);
}

#[test]
fn decode_reports_record_index() {
    let text = r#"{"data":[{"id":"a","title":"t","score":1,"num_comments":0,"created_utc":5,"subreddit":"nfl"},{"id":"b","title":"t","score":1,"created_utc":5,"subreddit":"nfl"}]}"#;
    match decode_pages(text) {
        Err(IngestError::Decode { index: Some(1), .. }) => {}
        other => panic!("unexpected {other:?}"),
    }
}

/// Counts requests so idempotence and page counts can be checked.
struct Counting<'a>(&'a LocalArchive, std::sync::atomic::AtomicUsize);

impl ArchiveSource for Counting<'_> {
    fn search(&self, q: &ArchiveQuery) -> Result<Vec<RawPost>, IngestError> {
        self.1.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
        self.0.search(q)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pagination_is_complete(
        offsets in prop::collection::vec((0i64..80 * 3600, 0u8..4), 0..400),
        tie_block in 0usize..PAGE_SIZE,
    ) {
        let start = 10_000_000i64;
        let mut posts: Vec<RawPost> = offsets
            .iter()
            .enumerate()
            .map(|(i, (off, s))| {
                let sub = if *s == 0 { "other" } else { "nfl" };
                post(i, start - off, sub)
            })
            .collect();
        // a block of equal timestamps, smaller than one page
        let t = start - 3600;
        for p in posts.iter_mut().take(tie_block) {
            p.created_utc = t;
        }
        if let Some(p) = posts.first().cloned() {
            posts.push(p);
        }
        let archive = LocalArchive::new(posts.clone());
        let counting = Counting(&archive, Default::default());
        let got = fetch_window(&counting, &spec(start), 72).unwrap();
        prop_assert_eq!(&got, &brute_force(&posts, &spec(start), 72));
        prop_assert_eq!(got, fetch_window(&archive, &spec(start), 72).unwrap());
    }
}
