use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PreprocessError;

/// Row indices of a train/test partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Seeded random permutation of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx
}

/// Shuffles `0..n` with `seed` and takes the first `round(ratio * n)` as training rows.
pub fn split(n: usize, ratio: f64, seed: u64) -> Result<SplitIndices, PreprocessError> {
    if n < 5 {
        return Err(PreprocessError::InsufficientData { needed: 5, got: n });
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(PreprocessError::Invalid(format!(
            "split ratio must be in (0, 1), got {ratio}"
        )));
    }
    let idx = permutation(n, seed);
    let n_train = ((ratio * n as f64).round() as usize).clamp(1, n - 1);
    Ok(SplitIndices {
        train: idx[..n_train].to_vec(),
        test: idx[n_train..].to_vec(),
        seed,
    })
}
