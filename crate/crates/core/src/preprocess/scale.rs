use serde::{Deserialize, Serialize};

use super::PreprocessError;
use crate::Matrix;

/// Per-feature `(min, max)` learned from training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerState {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl ScalerState {
    pub fn width(&self) -> usize {
        self.mins.len()
    }

    /// `(x - min) / (max - min)`; constant features map to 0. Not clamped.
    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>, PreprocessError> {
        if row.len() != self.width() {
            return Err(PreprocessError::Shape {
                expected: self.width(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&x, (&lo, &hi))| if hi > lo { (x - lo) / (hi - lo) } else { 0.0 })
            .collect())
    }

    pub fn apply(&self, matrix: &Matrix) -> Result<Matrix, PreprocessError> {
        let rows = matrix
            .rows()
            .map(|r| self.apply_row(r))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, self.width()));
        }
        Ok(Matrix::from_rows(&rows))
    }
}

/// Learns per-column bounds. Needs at least one row.
pub fn minmax_fit(train: &Matrix) -> Result<ScalerState, PreprocessError> {
    if train.nrows() == 0 {
        return Err(PreprocessError::InsufficientData { needed: 1, got: 0 });
    }
    let mut mins = vec![f64::INFINITY; train.ncols()];
    let mut maxs = vec![f64::NEG_INFINITY; train.ncols()];
    for row in train.rows() {
        for (j, &x) in row.iter().enumerate() {
            mins[j] = mins[j].min(x);
            maxs[j] = maxs[j].max(x);
        }
    }
    Ok(ScalerState { mins, maxs })
}

pub fn minmax_apply(state: &ScalerState, matrix: &Matrix) -> Result<Matrix, PreprocessError> {
    state.apply(matrix)
}

/// Stateful wrapper: `transform` before `fit` is an error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MinMaxScaler {
    state: Option<ScalerState>,
}

impl MinMaxScaler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fit(&mut self, train: &Matrix) -> Result<&ScalerState, PreprocessError> {
        self.state = Some(minmax_fit(train)?);
        Ok(self.state.as_ref().expect("just set"))
    }

    pub fn transform(&self, matrix: &Matrix) -> Result<Matrix, PreprocessError> {
        self.state
            .as_ref()
            .ok_or(PreprocessError::NotFitted)?
            .apply(matrix)
    }

    pub fn state(&self) -> Option<&ScalerState> {
        self.state.as_ref()
    }
}
