//! Grid search with 5-fold cross-validation, then a final fit.
//!
//! ```text
//! cargo run --release --example train_model
//! ```

use std::path::Path;

use buzzcast::config::Config;
use buzzcast::ingest::load_viewership_csv;
use buzzcast::pipeline::{analyzers, featurize, fetch, load_archive_dir, train};

fn main() -> buzzcast::Result<()> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let events = load_viewership_csv(sample.join("events.csv"))?;
    let config = Config::default();

    let posts_dir = std::env::temp_dir().join(format!("buzzcast-train-{}", std::process::id()));
    fetch(
        &load_archive_dir(&sample.join("archive"))?,
        &events,
        72,
        &posts_dir,
    )?;
    let (dataset, _) = featurize(&events, &posts_dir, &analyzers(&config)?)?;
    std::fs::remove_dir_all(&posts_dir).ok();

    let outcome = train(&dataset, &config)?;
    print!("{}", outcome.search.cv_table());
    println!(
        "\n{} fits; best {:?}",
        outcome.search.fits, outcome.search.best
    );
    let model = &outcome.model;
    println!(
        "{} trees, init {:.4} (log scale)",
        model.trees.len(),
        model.init_value
    );
    for row in &outcome.prepared.test().rows {
        println!(
            "{:<14} actual {:>7.2}M  predicted {:>7.2}M",
            row.engagement.name,
            row.viewers_millions,
            model.predict_viewers(&row.engagement)?
        );
    }
    Ok(())
}
