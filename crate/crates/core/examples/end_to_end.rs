//! The full offline pipeline on the bundled sample, writing every artifact
//! the command-line tool produces.
//!
//! ```text
//! cargo run --release --example end_to_end [-- OUT_DIR]
//! ```

use std::path::{Path, PathBuf};

use buzzcast::config::Config;
use buzzcast::features::load_engagement_csv;
use buzzcast::ingest::load_viewership_csv;
use buzzcast::model::GbmEnsemble;
use buzzcast::pipeline::{self, EvalSplit};

fn main() -> buzzcast::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("buzzcast-run"));
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let config = Config::default();

    let events = load_viewership_csv(sample.join("events.csv"))?;
    let archive = pipeline::load_archive_dir(&sample.join("archive"))?;
    let fetched = pipeline::fetch(
        &archive,
        &events,
        config.ingest.window_hours,
        &out.join("posts"),
    )?;
    println!("fetch: {} events", fetched.events.len());

    let csv = out.join("engagement.csv");
    pipeline::featurize_to_csv(&events, &out.join("posts"), &csv, &config)?;
    let dataset = load_engagement_csv(&csv)?;
    println!("featurize: {} rows", dataset.len());

    let trained = pipeline::train_from_csv(&csv, &out, &config)?;
    println!("train: best {:?}", trained.metadata.best_params);

    let model = GbmEnsemble::load(out.join(pipeline::MODEL_FILE))?;
    for split in [EvalSplit::Test, EvalSplit::Full] {
        let e = pipeline::evaluate(&model, &dataset, split, &config)?;
        println!(
            "evaluate ({split}): MAE {:.3}M RMSE {:.3}M R² {:?}",
            e.mae, e.rmse, e.r2
        );
        if split == EvalSplit::Test {
            pipeline::write_evaluation(&e, &out)?;
        }
    }

    let explanation = pipeline::explain(&model, &dataset, None, &config)?;
    pipeline::write_explanation(&explanation, &out)?;
    println!(
        "explain: {} ranked first",
        explanation.importance.ranked()[0].0
    );

    pipeline::report(&dataset, &out)?;
    println!("report: {}", out.join(pipeline::SUMMARY_FILE).display());
    Ok(())
}
