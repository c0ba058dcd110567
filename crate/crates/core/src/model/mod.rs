//! Least-squares gradient-boosted regression trees and cross-validated grid search.

mod boost;
mod ensemble;
mod grid;
mod tree;

use thiserror::Error;

pub use boost::{fit_gbm, fit_gbm_traced, Booster, HyperParams};
pub use ensemble::{GbmEnsemble, MODEL_VERSION, TARGET_TRANSFORM};
pub use grid::{grid_search_cv, kfold_indices, CvResult, GridSearch, ParamGrid};
pub use tree::{fit_tree, TreeNode};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("fit error: {0}")]
    Fit(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("insufficient data: need at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),
    #[error("model file: {0}")]
    Format(String),
}

/// A real-valued function of a fixed-width feature row.
pub trait Predictor: Sync {
    fn n_features(&self) -> usize;

    /// Prediction for `x`; callers guarantee `x.len() == n_features()`.
    fn predict_one(&self, x: &[f64]) -> f64;

    fn feature_names(&self) -> Vec<String> {
        (0..self.n_features()).map(|j| format!("x{j}")).collect()
    }
}

impl Predictor for TreeNode {
    fn n_features(&self) -> usize {
        self.max_feature().map_or(0, |f| f + 1)
    }

    fn predict_one(&self, x: &[f64]) -> f64 {
        self.predict(x)
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Predictor for (usize, F) {
    fn n_features(&self) -> usize {
        self.0
    }

    fn predict_one(&self, x: &[f64]) -> f64 {
        (self.1)(x)
    }
}
