//! Metrics and the three SVG figures from a small hand-made dataset.
//!
//! ```text
//! cargo run --example render_report [-- OUT_DIR]
//! ```

use std::path::PathBuf;

use buzzcast::explain::GlobalImportance;
use buzzcast::features::CorrelationMatrix;
use buzzcast::report::{compute_metrics, render_heatmap, render_importance, render_scatter};

fn main() -> buzzcast::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("buzzcast-figures"));
    std::fs::create_dir_all(&out).map_err(|e| buzzcast::Error::Validation(e.to_string()))?;

    let actual = [14.16, 13.71, 13.21, 16.28, 18.15, 111.35, 108.69, 112.19];
    let predicted = [14.9, 13.2, 14.0, 15.1, 17.6, 110.2, 109.9, 111.0];
    let m = compute_metrics(&actual, &predicted)?;
    println!("MAE {:.3}M  RMSE {:.3}M  R² {:.4}", m.mae, m.rmse, m.r2);
    render_scatter(&actual, &predicted, out.join("scatter.svg"))?;

    let importance = GlobalImportance {
        feature_names: vec![
            "total_posts".into(),
            "total_comments".into(),
            "avg_compound".into(),
        ],
        mean_abs: vec![0.82, 0.31, 0.05],
        order: vec![0, 1, 2],
    };
    render_importance(&importance, out.join("importance.svg"))?;

    let corr = CorrelationMatrix {
        names: vec![
            "total_posts".into(),
            "total_comments".into(),
            "viewers".into(),
        ],
        values: vec![
            vec![1.0, 0.62, 0.55],
            vec![0.62, 1.0, 0.41],
            vec![0.55, 0.41, 1.0],
        ],
        zero_variance: vec![],
    };
    render_heatmap(&corr, out.join("heatmap.svg"))?;
    println!("figures written to {}", out.display());
    Ok(())
}
