//! Aggregates the bundled sample into engagement rows and prints the
//! correlation matrix.
//!
//! ```text
//! cargo run --example engagement_features
//! ```

use std::path::Path;

use buzzcast::features::{
    aggregate_event, drop_zero_post_events, pearson_matrix, Dataset, LabeledRow,
};
use buzzcast::ingest::{fetch_window, load_viewership_csv, LabeledEvent};
use buzzcast::pipeline::{load_archive_dir, HEATMAP_COLUMNS};
use buzzcast::sentiment::Analyzers;

fn main() -> buzzcast::Result<()> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let events: Vec<LabeledEvent> = load_viewership_csv(sample.join("events.csv"))?;
    let archive = load_archive_dir(&sample.join("archive"))?;
    let analyzers = Analyzers::bundled();

    let mut rows = Vec::new();
    for event in &events {
        let posts = fetch_window(&archive, &event.spec, 72)?;
        rows.push(LabeledRow {
            engagement: aggregate_event(&event.spec, &posts, &analyzers),
            viewers_millions: event.avg_viewers_millions,
        });
    }
    let (dataset, dropped): (Dataset, usize) = drop_zero_post_events(Dataset::new(rows));
    println!(
        "{} events ({dropped} dropped for zero posts)\n",
        dataset.len()
    );
    println!(
        "{:<14} {:>6} {:>9} {:>7} {:>8} {:>8} {:>8}",
        "event", "posts", "comments", "scores", "polarity", "compound", "viewers"
    );
    for r in &dataset.rows {
        let e = &r.engagement;
        println!(
            "{:<14} {:>6} {:>9} {:>7} {:>8.3} {:>8.3} {:>8.2}",
            e.name,
            e.total_posts,
            e.total_comments,
            e.total_scores,
            e.avg_polarity,
            e.avg_compound,
            r.viewers_millions
        );
    }

    let corr = pearson_matrix(&dataset, &HEATMAP_COLUMNS)?;
    println!();
    print!("{:<15}", "");
    for n in &corr.names {
        print!("{:>9.8}", n);
    }
    println!();
    for (name, row) in corr.names.iter().zip(&corr.values) {
        print!("{name:<15}");
        for r in row {
            print!("{r:>9.2}");
        }
        println!();
    }
    if let Some((r, i, j)) = corr.max_off_diagonal() {
        println!(
            "\nmax |r| = {r:.2} ({} vs {})",
            corr.names[i], corr.names[j]
        );
    }
    Ok(())
}
