use std::path::Path;

use serde::{Deserialize, Serialize};

use super::boost::{Booster, HyperParams};
use super::tree::TreeNode;
use super::{ModelError, Predictor};
use crate::features::EventEngagement;
use crate::preprocess::{expm1, EncoderState, FeatureSpace, ScalerState};

/// Format tag written into every model file.
pub const MODEL_VERSION: &str = "buzzcast-model/1";

/// Name of the target transform stored with the model.
pub const TARGET_TRANSFORM: &str = "log1p";

/// A trained viewership model: boosted trees in log space plus the fitted
/// feature transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbmEnsemble {
    pub version: String,
    pub init_value: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeNode>,
    pub feature_names: Vec<String>,
    pub scaler: ScalerState,
    pub encoder: EncoderState,
    pub target_transform: String,
    pub params: HyperParams,
    pub seed: u64,
}

impl GbmEnsemble {
    pub fn new(
        booster: Booster,
        space: FeatureSpace,
        params: HyperParams,
        seed: u64,
    ) -> Result<Self, ModelError> {
        let feature_names = space.feature_names();
        if feature_names.len() != booster.n_features {
            return Err(ModelError::Shape {
                expected: feature_names.len(),
                got: booster.n_features,
            });
        }
        Ok(GbmEnsemble {
            version: MODEL_VERSION.to_string(),
            init_value: booster.init_value,
            learning_rate: booster.learning_rate,
            trees: booster.trees,
            feature_names,
            scaler: space.scaler,
            encoder: space.encoder,
            target_transform: TARGET_TRANSFORM.to_string(),
            params,
            seed,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_space(&self) -> FeatureSpace {
        FeatureSpace {
            scaler: self.scaler.clone(),
            encoder: self.encoder.clone(),
        }
    }

    pub fn booster(&self) -> Booster {
        Booster {
            init_value: self.init_value,
            learning_rate: self.learning_rate,
            trees: self.trees.clone(),
            n_features: self.n_features(),
        }
    }

    /// Log-space prediction for an already encoded row.
    pub fn predict_log(&self, row: &[f64]) -> Result<f64, ModelError> {
        if row.len() != self.n_features() {
            return Err(ModelError::Shape {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        Ok(self.predict_one(row))
    }

    /// Viewers in millions for an encoded row; negative outputs clamp to 0.
    pub fn predict_viewers_row(&self, row: &[f64]) -> Result<f64, ModelError> {
        let v = expm1(self.predict_log(row)?);
        if v < 0.0 {
            log::warn!("negative viewership prediction {v} clamped to 0");
            return Ok(0.0);
        }
        Ok(v)
    }

    /// Encodes `engagement` with the stored transforms and predicts viewers in millions.
    pub fn predict_viewers(&self, engagement: &EventEngagement) -> Result<f64, ModelError> {
        let row = self
            .feature_space()
            .encode(engagement)
            .map_err(|e| ModelError::Fit(e.to_string()))?;
        self.predict_viewers_row(&row)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let model: GbmEnsemble =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        if model.version != MODEL_VERSION {
            return Err(ModelError::Format(format!(
                "unsupported model version `{}` (expected `{MODEL_VERSION}`)",
                model.version
            )));
        }
        if model.target_transform != TARGET_TRANSFORM {
            return Err(ModelError::Format(format!(
                "unsupported target transform `{}`",
                model.target_transform
            )));
        }
        let width = model.scaler.width() + model.encoder.width();
        if width != model.feature_names.len() {
            return Err(ModelError::Format(format!(
                "feature_names has {} entries but transforms produce {width}",
                model.feature_names.len()
            )));
        }
        if let Some(f) = model.trees.iter().filter_map(TreeNode::max_feature).max() {
            if f >= width {
                return Err(ModelError::Format(format!(
                    "tree references feature {f} of {width}"
                )));
            }
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json())
            .map_err(|e| ModelError::Format(format!("{}: {e}", path.display())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ModelError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

impl Predictor for GbmEnsemble {
    fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    fn predict_one(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        self.init_value + self.learning_rate * sum
    }

    fn feature_names(&self) -> Vec<String> {
        self.feature_names.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::log1p;

    fn space() -> FeatureSpace {
        FeatureSpace {
            scaler: ScalerState {
                mins: vec![0.0; 5],
                maxs: vec![1.0; 5],
            },
            encoder: EncoderState::fit(["Super_Bowl"]),
        }
    }

    #[test]
    fn zero_tree_model_inverts_init() {
        let init = log1p(10.0).unwrap();
        let m = GbmEnsemble::new(
            Booster::constant(init, 6),
            space(),
            HyperParams::default(),
            42,
        )
        .unwrap();
        assert!((m.predict_viewers_row(&[0.0; 6]).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(
            m.predict_viewers_row(&[0.0; 5]),
            Err(ModelError::Shape {
                expected: 6,
                got: 5
            })
        ));
    }

    #[test]
    fn negative_prediction_clamps() {
        let m = GbmEnsemble::new(
            Booster::constant(-0.5, 6),
            space(),
            HyperParams::default(),
            42,
        )
        .unwrap();
        assert_eq!(m.predict_viewers_row(&[0.0; 6]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_wrong_version() {
        let m = GbmEnsemble::new(
            Booster::constant(1.0, 6),
            space(),
            HyperParams::default(),
            42,
        )
        .unwrap();
        let json = m.to_json().replace(MODEL_VERSION, "other/9");
        assert!(matches!(
            GbmEnsemble::from_json(&json),
            Err(ModelError::Format(_))
        ));
        assert_eq!(GbmEnsemble::from_json(&m.to_json()).unwrap(), m);
    }
}
