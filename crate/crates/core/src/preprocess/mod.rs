//! Deterministic dataset preparation.
//!
//! Order is fixed: per-sport outlier screening on the whole dataset, then the
//! seeded train/test split, then scaler and encoder fitted on training rows
//! only and applied to both sides.

mod encode;
mod iqr;
mod scale;
mod split;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Dataset, EventEngagement, NUMERIC_FEATURES};
use crate::Matrix;

pub use encode::EncoderState;
pub use iqr::{
    iqr_screen_by_sport, quantile_type7, tukey_fences, IqrConfig, OutlierFlag, ScreenResult,
};
pub use scale::{minmax_apply, minmax_fit, MinMaxScaler, ScalerState};
pub use split::{permutation, split, SplitIndices};

/// Prefix of one-hot sport column names.
pub const SPORT_PREFIX: &str = "sport_";

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("log1p domain error: {0} is negative")]
    Domain(f64),
    #[error("scaler used before fit")]
    NotFitted,
    #[error("shape mismatch: expected width {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("insufficient data: need at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

/// `ln(1 + x)` for audience sizes.
pub fn log1p(x: f64) -> Result<f64, PreprocessError> {
    if x < 0.0 || x.is_nan() {
        return Err(PreprocessError::Domain(x));
    }
    Ok(x.ln_1p())
}

/// Inverse of [`log1p`].
pub fn expm1(y: f64) -> f64 {
    y.exp_m1()
}

/// Fitted feature transform: scaled numeric columns followed by one-hot sport columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub scaler: ScalerState,
    pub encoder: EncoderState,
}

impl FeatureSpace {
    /// Fits on `train` only.
    pub fn fit(train: &Dataset) -> Result<Self, PreprocessError> {
        let raw = Matrix::from_rows(
            &train
                .rows
                .iter()
                .map(|r| r.engagement.numeric())
                .collect::<Vec<_>>(),
        );
        Ok(FeatureSpace {
            scaler: minmax_fit(&raw)?,
            encoder: EncoderState::fit(train.rows.iter().map(|r| r.engagement.sport.as_str())),
        })
    }

    pub fn feature_names(&self) -> Vec<String> {
        NUMERIC_FEATURES
            .iter()
            .map(|s| s.to_string())
            .chain(self.encoder.column_names(SPORT_PREFIX))
            .collect()
    }

    pub fn width(&self) -> usize {
        NUMERIC_FEATURES.len() + self.encoder.width()
    }

    pub fn encode(&self, e: &EventEngagement) -> Result<Vec<f64>, PreprocessError> {
        let mut row = self.scaler.apply_row(&e.numeric())?;
        row.extend(self.encoder.one_hot(e.sport.as_str()));
        Ok(row)
    }

    pub fn encode_dataset(&self, dataset: &Dataset) -> Result<Matrix, PreprocessError> {
        let rows = dataset
            .rows
            .iter()
            .map(|r| self.encode(&r.engagement))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, self.width()));
        }
        Ok(Matrix::from_rows(&rows))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub iqr: IqrConfig,
    pub train_ratio: f64,
    /// Skip outlier screening entirely.
    pub skip_screen: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            iqr: IqrConfig::default(),
            train_ratio: 0.8,
            skip_screen: false,
        }
    }
}

/// Model-ready matrices plus everything needed to reproduce them.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// Dataset after outlier screening; split indices refer to it.
    pub screened: Dataset,
    pub screen: ScreenResult,
    pub split: SplitIndices,
    pub space: FeatureSpace,
    pub x_train: Matrix,
    pub y_train_log: Vec<f64>,
    pub x_test: Matrix,
    pub y_test_log: Vec<f64>,
}

impl Prepared {
    pub fn train(&self) -> Dataset {
        self.screened.select(&self.split.train)
    }

    pub fn test(&self) -> Dataset {
        self.screened.select(&self.split.test)
    }

    pub fn report(&self) -> PreprocessReport {
        let names = |idx: &[usize]| -> Vec<String> {
            idx.iter()
                .map(|&i| self.screened.rows[i].engagement.name.clone())
                .collect()
        };
        PreprocessReport {
            flagged_outliers: self.screen.flags.clone(),
            retained_rows: self.screened.len(),
            scaler: self.space.scaler.clone(),
            encoder_columns: self.space.encoder.column_names(SPORT_PREFIX),
            feature_names: self.space.feature_names(),
            split: self.split.clone(),
            train_events: names(&self.split.train),
            test_events: names(&self.split.test),
        }
    }
}

/// Serializable record of one preparation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub flagged_outliers: Vec<OutlierFlag>,
    pub retained_rows: usize,
    pub scaler: ScalerState,
    pub encoder_columns: Vec<String>,
    pub feature_names: Vec<String>,
    pub split: SplitIndices,
    pub train_events: Vec<String>,
    pub test_events: Vec<String>,
}

fn log_targets(dataset: &Dataset) -> Result<Vec<f64>, PreprocessError> {
    dataset
        .rows
        .iter()
        .map(|r| log1p(r.viewers_millions))
        .collect()
}

/// Screen, split, fit transforms on the training side, encode both sides.
pub fn prepare(
    dataset: &Dataset,
    config: &PreprocessConfig,
    seed: u64,
) -> Result<Prepared, PreprocessError> {
    let screen = if config.skip_screen {
        ScreenResult {
            retained: dataset.clone(),
            retained_rows: (0..dataset.len()).collect(),
            flags: Vec::new(),
        }
    } else {
        iqr_screen_by_sport(dataset, &config.iqr)
    };
    let screened = screen.retained.clone();
    let split = split(screened.len(), config.train_ratio, seed)?;
    let train = screened.select(&split.train);
    let test = screened.select(&split.test);

    let space = FeatureSpace::fit(&train)?;
    Ok(Prepared {
        x_train: space.encode_dataset(&train)?,
        y_train_log: log_targets(&train)?,
        x_test: space.encode_dataset(&test)?,
        y_test_log: log_targets(&test)?,
        screened,
        screen,
        split,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::LabeledRow;
    use crate::ingest::Sport;

    #[test]
    fn log1p_values() {
        assert_eq!(log1p(0.0).unwrap(), 0.0);
        // ln(112.35) evaluated independently at 30 digits
        assert!((log1p(111.35).unwrap() - 4.721_618_998_631_338).abs() < 1e-12);
        assert!((expm1(log1p(18.15).unwrap()) - 18.15).abs() < 1e-12);
        assert!(matches!(log1p(-0.5), Err(PreprocessError::Domain(_))));
    }

    fn dataset(n: usize) -> Dataset {
        let sports = [Sport::WorldSeries, Sport::SuperBowl, Sport::NbaFinals];
        Dataset::new(
            (0..n)
                .map(|i| LabeledRow {
                    engagement: EventEngagement {
                        name: format!("e{i}"),
                        sport: sports[i % 3],
                        total_posts: 10 + i as u64,
                        total_comments: 100 + 7 * i as u64,
                        total_scores: 50 - i as i64,
                        avg_polarity: 0.01 * i as f64,
                        avg_compound: 0.5 - 0.01 * i as f64,
                    },
                    viewers_millions: 5.0 + i as f64,
                })
                .collect(),
        )
    }

    #[test]
    fn train_side_lies_in_unit_box() {
        let p = prepare(&dataset(20), &PreprocessConfig::default(), 42).unwrap();
        assert_eq!(p.x_train.nrows(), 16);
        assert_eq!(p.x_test.nrows(), 4);
        assert_eq!(p.x_train.ncols(), p.space.feature_names().len());
        for row in p.x_train.rows() {
            assert!(row[..5].iter().all(|v| (0.0..=1.0).contains(v)));
            assert!((row[5..].iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn scaler_never_sees_test_rows() {
        let ds = dataset(20);
        let cfg = PreprocessConfig::default();
        let base = prepare(&ds, &cfg, 42).unwrap();
        let mut mutated = ds.clone();
        for &i in &base.split.test {
            mutated.rows[i].engagement.total_posts = 1;
            mutated.rows[i].engagement.avg_compound = -0.99;
            mutated.rows[i].viewers_millions = 0.0;
        }
        let cfg_no_screen = PreprocessConfig {
            skip_screen: true,
            ..cfg
        };
        let a = prepare(&ds, &cfg_no_screen, 42).unwrap();
        let b = prepare(&mutated, &cfg_no_screen, 42).unwrap();
        assert_eq!(a.space, b.space);
    }

    #[test]
    fn report_names_events() {
        let p = prepare(&dataset(10), &PreprocessConfig::default(), 42).unwrap();
        let r = p.report();
        assert_eq!(r.train_events.len() + r.test_events.len(), 10);
        assert_eq!(r.feature_names[0], "total_posts");
    }
}
