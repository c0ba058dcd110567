use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{fit_tree_on_rows, TreeNode};
use super::{ModelError, Predictor};
use crate::Matrix;

/// Boosting hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub subsample: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            n_estimators: 100,
            learning_rate: 0.1,
            max_depth: 3,
            min_samples_split: 2,
            subsample: 1.0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::InvalidParams(m));
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning_rate must be >= 0, got {}",
                self.learning_rate
            ));
        }
        if self.max_depth < 1 {
            return bad("max_depth must be >= 1".into());
        }
        if self.min_samples_split < 2 {
            return bad(format!(
                "min_samples_split must be >= 2, got {}",
                self.min_samples_split
            ));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return bad(format!(
                "subsample must be in (0, 1], got {}",
                self.subsample
            ));
        }
        Ok(())
    }
}

/// Additive tree ensemble: `init_value + learning_rate * sum(tree(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Booster {
    pub init_value: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeNode>,
    pub n_features: usize,
}

impl Booster {
    /// Constant model.
    pub fn constant(value: f64, n_features: usize) -> Self {
        Booster {
            init_value: value,
            learning_rate: 0.0,
            trees: Vec::new(),
            n_features,
        }
    }

    pub fn predict_row(&self, x: &[f64]) -> Result<f64, ModelError> {
        if x.len() != self.n_features {
            return Err(ModelError::Shape {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(self.raw_predict(x))
    }

    fn raw_predict(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        self.init_value + self.learning_rate * sum
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>, ModelError> {
        x.rows().map(|r| self.predict_row(r)).collect()
    }
}

impl Predictor for Booster {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_one(&self, x: &[f64]) -> f64 {
        self.raw_predict(x)
    }
}

fn mse(pred: &[f64], y: &[f64]) -> f64 {
    pred.iter()
        .zip(y)
        .map(|(p, t)| (t - p) * (t - p))
        .sum::<f64>()
        / y.len() as f64
}

/// Fits least-squares gradient boosting on `y` (log-space targets).
pub fn fit_gbm(
    x: &Matrix,
    y: &[f64],
    params: &HyperParams,
    seed: u64,
) -> Result<Booster, ModelError> {
    fit_gbm_traced(x, y, params, seed).map(|(b, _)| b)
}

/// Like [`fit_gbm`], also returning the training MSE before the first tree
/// and after each round (`n_estimators + 1` values).
pub fn fit_gbm_traced(
    x: &Matrix,
    y: &[f64],
    params: &HyperParams,
    seed: u64,
) -> Result<(Booster, Vec<f64>), ModelError> {
    params.validate()?;
    let n = x.nrows();
    if n != y.len() {
        return Err(ModelError::Shape {
            expected: n,
            got: y.len(),
        });
    }
    if n < 2 {
        return Err(ModelError::InsufficientData { needed: 2, got: n });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(ModelError::Fit("targets must be finite".into()));
    }

    let init = y.iter().sum::<f64>() / n as f64;
    let mut pred = vec![init; n];
    let mut residuals = vec![0.0; n];
    let mut trace = Vec::with_capacity(params.n_estimators + 1);
    trace.push(mse(&pred, y));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_rows: Vec<usize> = (0..n).collect();
    let draw = ((params.subsample * n as f64).floor() as usize).clamp(1, n);
    let mut trees = Vec::with_capacity(params.n_estimators);
    for _ in 0..params.n_estimators {
        for i in 0..n {
            residuals[i] = y[i] - pred[i];
        }
        let rows = if params.subsample < 1.0 {
            let mut rows = rand::seq::index::sample(&mut rng, n, draw).into_vec();
            rows.sort_unstable();
            rows
        } else {
            all_rows.clone()
        };
        let tree = fit_tree_on_rows(
            x,
            &residuals,
            &rows,
            params.max_depth,
            params.min_samples_split,
        )?;
        for (i, p) in pred.iter_mut().enumerate() {
            *p += params.learning_rate * tree.predict(x.row(i));
        }
        trace.push(mse(&pred, y));
        trees.push(tree);
    }
    Ok((
        Booster {
            init_value: init,
            learning_rate: params.learning_rate,
            trees,
            n_features: x.ncols(),
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_trees_predicts_mean() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0]]);
        let params = HyperParams {
            n_estimators: 0,
            ..HyperParams::default()
        };
        let b = fit_gbm(&x, &[1.0, 2.0, 6.0], &params, 42).unwrap();
        assert_eq!(b.predict_row(&[5.0]).unwrap(), 3.0);
    }

    #[test]
    fn four_points_one_tree_exact() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let y = [1.0, 2.0, 10.0, 12.0];
        let params = HyperParams {
            n_estimators: 1,
            learning_rate: 1.0,
            max_depth: 2,
            min_samples_split: 2,
            subsample: 1.0,
        };
        let (b, trace) = fit_gbm_traced(&x, &y, &params, 42).unwrap();
        assert!(trace[1] < 1e-24);
        for (row, t) in x.rows().zip(y) {
            assert!((b.predict_row(row).unwrap() - t).abs() < 1e-12);
        }
    }

    #[test]
    fn needs_two_rows() {
        let x = Matrix::from_rows(&[[0.0]]);
        assert!(matches!(
            fit_gbm(&x, &[1.0], &HyperParams::default(), 0),
            Err(ModelError::InsufficientData { .. })
        ));
    }

    #[test]
    fn width_mismatch() {
        let b = Booster::constant(1.0, 3);
        assert!(matches!(
            b.predict_row(&[1.0]),
            Err(ModelError::Shape {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn invalid_params() {
        for p in [
            HyperParams {
                max_depth: 0,
                ..HyperParams::default()
            },
            HyperParams {
                min_samples_split: 1,
                ..HyperParams::default()
            },
            HyperParams {
                subsample: 0.0,
                ..HyperParams::default()
            },
            HyperParams {
                learning_rate: -0.1,
                ..HyperParams::default()
            },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn subsampling_is_seeded() {
        let rows: Vec<[f64; 1]> = (0..30).map(|i| [i as f64]).collect();
        let x = Matrix::from_rows(&rows);
        let y: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64).collect();
        let params = HyperParams {
            n_estimators: 20,
            subsample: 0.8,
            ..HyperParams::default()
        };
        assert_eq!(
            fit_gbm(&x, &y, &params, 7).unwrap(),
            fit_gbm(&x, &y, &params, 7).unwrap()
        );
        assert_ne!(
            fit_gbm(&x, &y, &params, 7).unwrap(),
            fit_gbm(&x, &y, &params, 8).unwrap()
        );
    }
}
