//! Exact Shapley attributions for one prediction and global importance.
//!
//! ```text
//! cargo run --release --example explain_prediction [-- "EVENT NAME"]
//! ```

use std::path::Path;

use buzzcast::config::Config;
use buzzcast::ingest::load_viewership_csv;
use buzzcast::pipeline::{analyzers, explain, featurize, fetch, load_archive_dir, train};

fn main() -> buzzcast::Result<()> {
    let event = std::env::args().nth(1);
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let events = load_viewership_csv(sample.join("events.csv"))?;
    let config = Config::default();

    let posts_dir = std::env::temp_dir().join(format!("buzzcast-explain-{}", std::process::id()));
    fetch(
        &load_archive_dir(&sample.join("archive"))?,
        &events,
        72,
        &posts_dir,
    )?;
    let (dataset, _) = featurize(&events, &posts_dir, &analyzers(&config)?)?;
    std::fs::remove_dir_all(&posts_dir).ok();

    let model = train(&dataset, &config)?.model;
    let explanation = explain(&model, &dataset, event.as_deref(), &config)?;
    let a = &explanation.attribution;
    println!(
        "{}: prediction {:.4} = base {:.4} + sum of attributions",
        explanation.event, a.prediction, a.base_value
    );
    for j in a.order() {
        println!(
            "  {:<20} {:>+9.4} log  {:>+9.3}M",
            a.feature_names[j], a.values[j], a.display[j]
        );
    }
    println!("efficiency gap {:.2e}\n", a.efficiency_gap());
    print!("{}", explanation.importance.to_csv());
    Ok(())
}
