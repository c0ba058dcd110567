use serde::{Deserialize, Serialize};

/// Known categories, alphabetical; category `i` owns column `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderState {
    pub categories: Vec<String>,
}

impl EncoderState {
    pub fn fit<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut categories: Vec<String> =
            values.into_iter().map(|s| s.as_ref().to_string()).collect();
        categories.sort();
        categories.dedup();
        EncoderState { categories }
    }

    pub fn width(&self) -> usize {
        self.categories.len()
    }

    pub fn column_names(&self, prefix: &str) -> Vec<String> {
        self.categories
            .iter()
            .map(|c| format!("{prefix}{c}"))
            .collect()
    }

    /// Indicator vector; an unknown category encodes as all zeros.
    pub fn one_hot(&self, category: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.width()];
        match self.categories.iter().position(|c| c == category) {
            Some(i) => v[i] = 1.0,
            None => log::warn!("unknown category `{category}` encoded as all zeros"),
        }
        v
    }
}
