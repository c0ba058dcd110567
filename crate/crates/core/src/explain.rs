//! Exact interventional Shapley attributions by coalition enumeration.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Predictor;
use crate::Matrix;

/// Largest feature count handled by exact enumeration.
pub const MAX_FEATURES: usize = 16;

/// Default cap on background rows.
pub const MAX_BACKGROUND: usize = 100;

#[derive(Debug, Error)]
pub enum ExplainError {
    #[error(
        "{got} features exceed the exact-enumeration limit of {max}; group related features first"
    )]
    TooManyFeatures { got: usize, max: usize },
    #[error("background dataset is empty")]
    EmptyBackground,
    #[error("shape mismatch: expected {expected} features, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Additive explanation of one prediction, in the model's output space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribution {
    /// Mean model output over the background.
    pub base_value: f64,
    pub values: Vec<f64>,
    /// `expm1(base + phi) - expm1(base)` per feature, for display only.
    pub display: Vec<f64>,
    pub feature_names: Vec<String>,
    pub instance: Vec<f64>,
    pub prediction: f64,
}

impl Attribution {
    /// `|base + sum(values) - prediction|`.
    pub fn efficiency_gap(&self) -> f64 {
        (self.base_value + self.values.iter().sum::<f64>() - self.prediction).abs()
    }

    /// Feature indices by descending `|phi|`; ties keep feature order.
    pub fn order(&self) -> Vec<usize> {
        descending(&self.values.iter().map(|v| v.abs()).collect::<Vec<_>>())
    }

    /// CSV export: a `# base_value=` line, then `feature,phi_log,phi_display,rank`.
    pub fn to_csv(&self) -> String {
        let mut rank = vec![0; self.values.len()];
        for (r, &j) in self.order().iter().enumerate() {
            rank[j] = r + 1;
        }
        let mut out = format!(
            "# base_value={}\nfeature,phi_log,phi_display,rank\n",
            self.base_value
        );
        for (((name, phi), shown), r) in self
            .feature_names
            .iter()
            .zip(&self.values)
            .zip(&self.display)
            .zip(&rank)
        {
            let _ = writeln!(out, "{name},{phi},{shown},{r}");
        }
        out
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), ExplainError> {
        write_file(path.as_ref(), &self.to_csv())
    }
}

/// Mean absolute attribution per feature over a set of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalImportance {
    pub feature_names: Vec<String>,
    /// In feature order.
    pub mean_abs: Vec<f64>,
    /// Feature indices, most important first.
    pub order: Vec<usize>,
}

impl GlobalImportance {
    /// `(name, value)` pairs, most important first.
    pub fn ranked(&self) -> Vec<(&str, f64)> {
        self.order
            .iter()
            .map(|&j| (self.feature_names[j].as_str(), self.mean_abs[j]))
            .collect()
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.order
            .iter()
            .position(|&j| self.feature_names[j] == name)
            .map(|p| p + 1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,feature,mean_abs_phi\n");
        for (r, (name, v)) in self.ranked().into_iter().enumerate() {
            let _ = writeln!(out, "{},{name},{v}", r + 1);
        }
        out
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), ExplainError> {
        write_file(path.as_ref(), &self.to_csv())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), ExplainError> {
    std::fs::write(path, text).map_err(|source| ExplainError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// Background rows: all of `rows` when there are at most `cap`, otherwise a
/// seeded sample of `cap` rows kept in their original order.
pub fn sample_background(rows: &Matrix, cap: usize, seed: u64) -> Matrix {
    if rows.nrows() <= cap {
        return rows.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, rows.nrows(), cap).into_vec();
    idx.sort_unstable();
    rows.select_rows(&idx)
}

fn check<P: Predictor + ?Sized>(model: &P, background: &Matrix) -> Result<usize, ExplainError> {
    let d = model.n_features();
    if d > MAX_FEATURES {
        return Err(ExplainError::TooManyFeatures {
            got: d,
            max: MAX_FEATURES,
        });
    }
    if background.nrows() == 0 {
        return Err(ExplainError::EmptyBackground);
    }
    if background.ncols() != d {
        return Err(ExplainError::Shape {
            expected: d,
            got: background.ncols(),
        });
    }
    Ok(d)
}

/// `v(S)` for every coalition mask `S`, indexed by the mask.
fn coalition_values<P: Predictor + ?Sized>(
    model: &P,
    instance: &[f64],
    background: &Matrix,
) -> Vec<f64> {
    let d = instance.len();
    (0..1usize << d)
        .into_par_iter()
        .map(|mask| {
            let mut z = vec![0.0; d];
            let mut total = 0.0;
            for b in background.rows() {
                for j in 0..d {
                    z[j] = if mask & (1 << j) != 0 {
                        instance[j]
                    } else {
                        b[j]
                    };
                }
                total += model.predict_one(&z);
            }
            total / background.nrows() as f64
        })
        .collect()
}

/// `|S|! (d - |S| - 1)! / d!` for `|S| = 0..d`.
fn shapley_weights(d: usize) -> Vec<f64> {
    let fact: Vec<f64> = (0..=d)
        .scan(1.0, |acc, k| {
            if k > 0 {
                *acc *= k as f64;
            }
            Some(*acc)
        })
        .collect();
    (0..d)
        .map(|s| fact[s] * fact[d - s - 1] / fact[d])
        .collect()
}

/// Exact interventional Shapley values of `model` at `instance`.
///
/// `v(S)` averages the model over `background` with coalition features taken
/// from the instance. Cost is `2^d * |background|` model evaluations.
pub fn shapley_values<P: Predictor + ?Sized>(
    model: &P,
    instance: &[f64],
    background: &Matrix,
) -> Result<Attribution, ExplainError> {
    let d = check(model, background)?;
    if instance.len() != d {
        return Err(ExplainError::Shape {
            expected: d,
            got: instance.len(),
        });
    }
    let v = coalition_values(model, instance, background);
    let w = shapley_weights(d);
    let mut values = vec![0.0; d];
    for (j, phi) in values.iter_mut().enumerate() {
        let bit = 1usize << j;
        for mask in 0..1usize << d {
            if mask & bit == 0 {
                *phi += w[mask.count_ones() as usize] * (v[mask | bit] - v[mask]);
            }
        }
    }
    let base_value = v[0];
    let display = values
        .iter()
        .map(|phi| (base_value + phi).exp_m1() - base_value.exp_m1())
        .collect();
    Ok(Attribution {
        base_value,
        values,
        display,
        feature_names: model.feature_names(),
        instance: instance.to_vec(),
        prediction: model.predict_one(instance),
    })
}

/// Shapley values for every row of `rows`.
pub fn shapley_table<P: Predictor + ?Sized>(
    model: &P,
    rows: &Matrix,
    background: &Matrix,
) -> Result<Vec<Attribution>, ExplainError> {
    rows.rows()
        .map(|x| shapley_values(model, x, background))
        .collect()
}

/// Mean `|phi_j|` over `rows`, ranked descending (ties keep feature order).
pub fn global_importance<P: Predictor + ?Sized>(
    model: &P,
    rows: &Matrix,
    background: &Matrix,
) -> Result<GlobalImportance, ExplainError> {
    let d = check(model, background)?;
    if rows.nrows() == 0 {
        return Err(ExplainError::EmptyBackground);
    }
    let mut mean_abs = vec![0.0; d];
    for a in shapley_table(model, rows, background)? {
        for (m, v) in mean_abs.iter_mut().zip(&a.values) {
            *m += v.abs();
        }
    }
    for m in &mut mean_abs {
        *m /= rows.nrows() as f64;
    }
    Ok(GlobalImportance {
        feature_names: model.feature_names(),
        order: descending(&mean_abs),
        mean_abs,
    })
}
