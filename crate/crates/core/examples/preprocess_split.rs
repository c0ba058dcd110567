//! Outlier screening, seeded split, and train-only scaling and encoding.
//!
//! ```text
//! cargo run --example preprocess_split [-- SEED]
//! ```

use std::path::Path;

use buzzcast::config::Config;
use buzzcast::ingest::load_viewership_csv;
use buzzcast::pipeline::{featurize, load_archive_dir};
use buzzcast::preprocess::{prepare, PreprocessConfig};

fn main() -> buzzcast::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let events = load_viewership_csv(sample.join("events.csv"))?;

    let posts_dir =
        std::env::temp_dir().join(format!("buzzcast-preprocess-{}", std::process::id()));
    buzzcast::pipeline::fetch(
        &load_archive_dir(&sample.join("archive"))?,
        &events,
        72,
        &posts_dir,
    )?;
    let (dataset, _) = featurize(
        &events,
        &posts_dir,
        &buzzcast::pipeline::analyzers(&Config::default())?,
    )?;
    std::fs::remove_dir_all(&posts_dir).ok();

    let prepared = prepare(&dataset, &PreprocessConfig::default(), seed)?;
    for flag in &prepared.screen.flags {
        println!(
            "outlier: {:<12} {}={} outside [{:.3}, {:.3}]",
            flag.name, flag.feature, flag.value, flag.lower_fence, flag.upper_fence
        );
    }
    let report = prepared.report();
    println!("\n{} of {} rows kept", report.retained_rows, dataset.len());
    println!("train: {}", report.train_events.join(", "));
    println!("test:  {}", report.test_events.join(", "));
    println!("\nfeatures: {}", report.feature_names.join(", "));
    println!("scaler mins {:?}", report.scaler.mins);
    println!("scaler maxs {:?}", report.scaler.maxs);
    println!("first training row {:?}", prepared.x_train.row(0));
    Ok(())
}
