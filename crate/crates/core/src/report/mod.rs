//! Evaluation metrics in viewer space and SVG figures.

mod svg;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use svg::{
    heatmap_svg, importance_svg, render_heatmap, render_importance, render_scatter, scatter_svg,
    HEIGHT, WIDTH,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("length mismatch: {y_true} actual values vs {y_pred} predictions")]
    Shape { y_true: usize, y_pred: usize },
    #[error("no values to evaluate or plot")]
    Empty,
    #[error("R² undefined for constant actual values (MAE {mae}, RMSE {rmse})")]
    UndefinedR2 { mae: f64, rmse: f64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Regression metrics. Units follow the inputs (millions of viewers in the pipeline).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mae: f64,
    pub rmse: f64,
    pub r2: f64,
}

/// MAE, RMSE and R² of `y_pred` against `y_true`.
pub fn compute_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<Metrics, ReportError> {
    if y_true.len() != y_pred.len() {
        return Err(ReportError::Shape {
            y_true: y_true.len(),
            y_pred: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(ReportError::Empty);
    }
    let n = y_true.len() as f64;
    let mut abs = 0.0;
    let mut ss_res = 0.0;
    for (t, p) in y_true.iter().zip(y_pred) {
        let d = t - p;
        abs += d.abs();
        ss_res += d * d;
    }
    let mae = abs / n;
    // Guard against last-bit rounding putting RMSE under MAE.
    let rmse = (ss_res / n).sqrt().max(mae);
    let mean = y_true.iter().sum::<f64>() / n;
    let ss_tot: f64 = y_true.iter().map(|t| (t - mean) * (t - mean)).sum();
    if ss_tot == 0.0 {
        return Err(ReportError::UndefinedR2 { mae, rmse });
    }
    Ok(Metrics {
        mae,
        rmse,
        r2: 1.0 - ss_res / ss_tot,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), ReportError> {
    std::fs::write(path, text).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let y = [1.0, 4.0, 9.0];
        assert_eq!(
            compute_metrics(&y, &y).unwrap(),
            Metrics {
                mae: 0.0,
                rmse: 0.0,
                r2: 1.0
            }
        );
    }

    #[test]
    fn shifted_predictions() {
        let m = compute_metrics(&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0]).unwrap();
        assert_eq!((m.mae, m.rmse, m.r2), (1.0, 1.0, -0.5));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            compute_metrics(&[1.0], &[1.0, 2.0]),
            Err(ReportError::Shape { .. })
        ));
        assert!(matches!(compute_metrics(&[], &[]), Err(ReportError::Empty)));
        match compute_metrics(&[2.0, 2.0], &[1.0, 3.0]) {
            Err(ReportError::UndefinedR2 { mae, rmse }) => assert_eq!((mae, rmse), (1.0, 1.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mean_predictor_scores_zero() {
        let y = [3.0, 7.0, 1.0, 9.0];
        let m = compute_metrics(&y, &[5.0; 4]).unwrap();
        assert!(m.r2.abs() < 1e-12);
    }
}
