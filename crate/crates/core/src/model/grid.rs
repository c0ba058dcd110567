use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boost::{fit_gbm, HyperParams};
use super::ModelError;
use crate::preprocess::permutation;
use crate::Matrix;

/// Candidate values per hyperparameter. The default is the published grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamGrid {
    pub n_estimators: Vec<usize>,
    pub learning_rate: Vec<f64>,
    pub max_depth: Vec<usize>,
    pub min_samples_split: Vec<usize>,
    pub subsample: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        ParamGrid {
            n_estimators: vec![100, 200],
            learning_rate: vec![0.05],
            max_depth: vec![3, 5],
            min_samples_split: vec![2, 5],
            subsample: vec![0.8, 1.0],
        }
    }
}

impl ParamGrid {
    pub fn single(params: HyperParams) -> Self {
        ParamGrid {
            n_estimators: vec![params.n_estimators],
            learning_rate: vec![params.learning_rate],
            max_depth: vec![params.max_depth],
            min_samples_split: vec![params.min_samples_split],
            subsample: vec![params.subsample],
        }
    }

    /// Cartesian product; `subsample` varies fastest, `n_estimators` slowest.
    pub fn combinations(&self) -> Vec<HyperParams> {
        let mut out = Vec::new();
        for &n_estimators in &self.n_estimators {
            for &learning_rate in &self.learning_rate {
                for &max_depth in &self.max_depth {
                    for &min_samples_split in &self.min_samples_split {
                        for &subsample in &self.subsample {
                            out.push(HyperParams {
                                n_estimators,
                                learning_rate,
                                max_depth,
                                min_samples_split,
                                subsample,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Cross-validation outcome of one parameter combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub params: HyperParams,
    /// Held-out MAE per fold, log space.
    pub fold_mae: Vec<f64>,
    pub mean_mae: f64,
    /// 1 = best.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearch {
    pub best: HyperParams,
    /// In grid enumeration order.
    pub results: Vec<CvResult>,
    pub folds: Vec<Vec<usize>>,
    pub fits: usize,
    pub seed: u64,
}

impl GridSearch {
    pub fn best_result(&self) -> &CvResult {
        self.results
            .iter()
            .find(|r| r.rank == 1)
            .expect("grid search has a best result")
    }

    /// CSV table of all results, in enumeration order.
    pub fn cv_table(&self) -> String {
        let k = self.folds.len();
        let mut out =
            String::from("rank,n_estimators,learning_rate,max_depth,min_samples_split,subsample");
        for f in 1..=k {
            let _ = write!(out, ",fold_{f}_mae");
        }
        out.push_str(",mean_mae\n");
        for r in &self.results {
            let p = &r.params;
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                r.rank,
                p.n_estimators,
                p.learning_rate,
                p.max_depth,
                p.min_samples_split,
                p.subsample
            );
            for m in &r.fold_mae {
                let _ = write!(out, ",{m}");
            }
            let _ = writeln!(out, ",{}", r.mean_mae);
        }
        out
    }
}

/// Shuffles `0..n` with `seed` and cuts it into `k` contiguous blocks; the
/// first `n % k` blocks get one extra row.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ModelError> {
    if k < 2 {
        return Err(ModelError::InvalidParams(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if n < k {
        return Err(ModelError::InsufficientData { needed: k, got: n });
    }
    let idx = permutation(n, seed);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(idx[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

fn mean_abs_error(pred: &[f64], y: &[f64]) -> f64 {
    pred.iter().zip(y).map(|(p, t)| (p - t).abs()).sum::<f64>() / y.len() as f64
}

/// Exhaustive grid search scored by mean held-out absolute error.
///
/// All combinations share one set of folds. The smallest mean MAE wins; ties
/// go to the earlier combination. Combinations are evaluated in parallel, which
/// does not affect any number.
pub fn grid_search_cv(
    x: &Matrix,
    y: &[f64],
    grid: &ParamGrid,
    k: usize,
    seed: u64,
) -> Result<GridSearch, ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::Shape {
            expected: x.nrows(),
            got: y.len(),
        });
    }
    let combos = grid.combinations();
    if combos.is_empty() {
        return Err(ModelError::InvalidParams("parameter grid is empty".into()));
    }
    for c in &combos {
        c.validate()?;
    }
    let folds = kfold_indices(x.nrows(), k, seed)?;

    let splits: Vec<(Matrix, Vec<f64>, Matrix, Vec<f64>)> = folds
        .iter()
        .map(|held_out| {
            let mut train: Vec<usize> = folds
                .iter()
                .filter(|f| *f != held_out)
                .flatten()
                .copied()
                .collect();
            train.sort_unstable();
            let mut test = held_out.clone();
            test.sort_unstable();
            (
                x.select_rows(&train),
                train.iter().map(|&i| y[i]).collect(),
                x.select_rows(&test),
                test.iter().map(|&i| y[i]).collect(),
            )
        })
        .collect();

    let fold_scores: Vec<Vec<f64>> = combos
        .par_iter()
        .map(|params| {
            splits
                .iter()
                .map(|(xt, yt, xv, yv)| {
                    let model = fit_gbm(xt, yt, params, seed)?;
                    Ok(mean_abs_error(&model.predict(xv)?, yv))
                })
                .collect::<Result<Vec<f64>, ModelError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut results: Vec<CvResult> = combos
        .iter()
        .zip(fold_scores)
        .map(|(params, fold_mae)| {
            let mean_mae = fold_mae.iter().sum::<f64>() / fold_mae.len() as f64;
            CvResult {
                params: *params,
                fold_mae,
                mean_mae,
                rank: 0,
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| {
        results[a]
            .mean_mae
            .total_cmp(&results[b].mean_mae)
            .then(a.cmp(&b))
    });
    for (rank, &i) in order.iter().enumerate() {
        results[i].rank = rank + 1;
    }
    let best = results[order[0]].params;
    Ok(GridSearch {
        best,
        fits: combos.len() * folds.len(),
        results,
        folds,
        seed,
    })
}
