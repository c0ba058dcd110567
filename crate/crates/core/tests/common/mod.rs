#![allow(dead_code)]

use std::path::{Path, PathBuf};

use buzzcast::config::Config;
use buzzcast::features::{aggregate_event, Dataset, EventEngagement, LabeledRow};
use buzzcast::ingest::{fetch_window, load_viewership_csv, LabeledEvent, LocalArchive, Sport};
use buzzcast::pipeline::{analyzers, load_archive_dir};

pub fn sample_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample")
}

pub fn sample_events() -> Vec<LabeledEvent> {
    load_viewership_csv(sample_dir().join("events.csv")).expect("sample events")
}

pub fn sample_archive() -> LocalArchive {
    load_archive_dir(&sample_dir().join("archive")).expect("sample archive")
}

/// The bundled sample featurized in memory.
pub fn sample_dataset() -> Dataset {
    let archive = sample_archive();
    let analyzers = analyzers(&Config::default()).unwrap();
    let rows = sample_events()
        .iter()
        .map(|e| LabeledRow {
            engagement: aggregate_event(
                &e.spec,
                &fetch_window(&archive, &e.spec, 72).unwrap(),
                &analyzers,
            ),
            viewers_millions: e.avg_viewers_millions,
        })
        .collect();
    Dataset::new(rows)
}

pub fn row(name: &str, sport: Sport, numeric: [f64; 5], viewers: f64) -> LabeledRow {
    LabeledRow {
        engagement: EventEngagement {
            name: name.to_string(),
            sport,
            total_posts: numeric[0] as u64,
            total_comments: numeric[1] as u64,
            total_scores: numeric[2] as i64,
            avg_polarity: numeric[3],
            avg_compound: numeric[4],
        },
        viewers_millions: viewers,
    }
}
