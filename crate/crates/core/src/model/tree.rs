use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::Matrix;

/// Regression tree node. Routing: `x[feature] <= threshold` goes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        value: f64,
    },
}

impl TreeNode {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Largest feature index referenced, if any split exists.
    pub fn max_feature(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature,
                left,
                right,
                ..
            } => Some(
                (*feature)
                    .max(left.max_feature().unwrap_or(0))
                    .max(right.max_feature().unwrap_or(0)),
            ),
        }
    }
}

/// Best split of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    /// Sum of squared deviations of the two children.
    pub children_sse: f64,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    // adjacent floats: keep `hi` on the right
    if mid >= hi {
        lo
    } else {
        mid
    }
}

/// Scans every feature and every midpoint between consecutive distinct values;
/// returns the split with the smallest children SSE. Earlier features and
/// lower thresholds win ties; SSEs within a relative `1e-12` of each other
/// count as tied so rounding noise cannot reorder candidates.
pub(crate) fn best_split(x: &Matrix, residuals: &[f64], rows: &[usize]) -> Option<SplitChoice> {
    let n = rows.len();
    let total_sum: f64 = rows.iter().map(|&i| residuals[i]).sum();
    let total_sq: f64 = rows.iter().map(|&i| residuals[i] * residuals[i]).sum();

    let tol = 1e-12 * total_sq;
    let mut best: Option<SplitChoice> = None;
    let mut order = rows.to_vec();
    for feature in 0..x.ncols() {
        order.sort_by(|&a, &b| x.get(a, feature).total_cmp(&x.get(b, feature)));
        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        for k in 0..n - 1 {
            let r = residuals[order[k]];
            left_sum += r;
            left_sq += r * r;
            let here = x.get(order[k], feature);
            let next = x.get(order[k + 1], feature);
            if here == next {
                continue;
            }
            let nl = (k + 1) as f64;
            let nr = (n - k - 1) as f64;
            let right_sum = total_sum - left_sum;
            let right_sq = total_sq - left_sq;
            let sse = (left_sq - left_sum * left_sum / nl).max(0.0)
                + (right_sq - right_sum * right_sum / nr).max(0.0);
            if best.is_none_or(|b| sse < b.children_sse - tol) {
                best = Some(SplitChoice {
                    feature,
                    threshold: midpoint(here, next),
                    children_sse: sse,
                });
            }
        }
    }
    best
}

/// Mean anchored at the first value, so equal residuals return that value exactly.
fn mean_at(residuals: &[f64], rows: &[usize]) -> f64 {
    let first = residuals[rows[0]];
    first + rows.iter().map(|&i| residuals[i] - first).sum::<f64>() / rows.len() as f64
}

fn grow(
    x: &Matrix,
    residuals: &[f64],
    rows: &[usize],
    depth: usize,
    max_depth: usize,
    min_samples_split: usize,
) -> TreeNode {
    let leaf = || TreeNode::Leaf {
        value: mean_at(residuals, rows),
    };
    if depth >= max_depth || rows.len() < min_samples_split.max(2) {
        return leaf();
    }
    let first = residuals[rows[0]];
    if rows.iter().all(|&i| residuals[i] == first) {
        return leaf();
    }
    let Some(choice) = best_split(x, residuals, rows) else {
        return leaf();
    };
    let (left, right): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&i| x.get(i, choice.feature) <= choice.threshold);
    TreeNode::Split {
        feature: choice.feature,
        threshold: choice.threshold,
        left: Box::new(grow(
            x,
            residuals,
            &left,
            depth + 1,
            max_depth,
            min_samples_split,
        )),
        right: Box::new(grow(
            x,
            residuals,
            &right,
            depth + 1,
            max_depth,
            min_samples_split,
        )),
    }
}

/// Fits a least-squares regression tree on the given rows of `x`.
///
/// `residuals` is indexed like the rows of `x`.
pub(crate) fn fit_tree_on_rows(
    x: &Matrix,
    residuals: &[f64],
    rows: &[usize],
    max_depth: usize,
    min_samples_split: usize,
) -> Result<TreeNode, ModelError> {
    if rows.is_empty() {
        return Err(ModelError::Fit("cannot fit a tree on zero rows".into()));
    }
    if residuals.len() != x.nrows() {
        return Err(ModelError::Shape {
            expected: x.nrows(),
            got: residuals.len(),
        });
    }
    Ok(grow(x, residuals, rows, 0, max_depth, min_samples_split))
}

/// Greedy recursive regression tree minimizing the children's summed squared
/// deviation from their means.
///
/// Growth stops at `max_depth`, below `min_samples_split` rows, when a node's
/// residuals are all equal, or when no two rows differ on any feature. Leaves
/// hold the mean residual of their rows.
pub fn fit_tree(
    x: &Matrix,
    residuals: &[f64],
    max_depth: usize,
    min_samples_split: usize,
) -> Result<TreeNode, ModelError> {
    let rows: Vec<usize> = (0..x.nrows()).collect();
    fit_tree_on_rows(x, residuals, &rows, max_depth, min_samples_split)
}
