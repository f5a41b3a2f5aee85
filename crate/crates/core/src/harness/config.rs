//! The TOML run-configuration file. Every field has a default, so a config
//! file only states what it overrides; CLI flags override the file in turn.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    AlgoParams, Algorithm, DtParams, GnbParams, KnnParams, LrParams, MlpParams, MnbParams,
    RfParams, SvmParams, ALL_ALGORITHMS,
};
use crate::error::{Error, Result};
use crate::features::{FeatureMode, ALL_FEATURE_MODES};
use crate::textnorm::NormalizationConfig;

use super::GridSpec;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub split: SplitSection,
    pub normalize: NormalizationConfig,
    pub vectorizer: VectorizerSection,
    pub grid: GridSection,
    pub multilabel: MultiLabelSection,
    pub hyper: HyperParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSection {
    pub train_fraction: f64,
    pub stratified: bool,
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection {
            train_fraction: 0.8,
            stratified: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VectorizerSection {
    pub min_df: usize,
    pub max_features: Option<usize>,
}

impl Default for VectorizerSection {
    fn default() -> Self {
        VectorizerSection {
            min_df: 1,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub algorithms: Vec<String>,
    pub features: Vec<String>,
    pub save_models: bool,
    pub repeats: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            algorithms: ALL_ALGORITHMS.iter().map(|a| a.as_str().to_string()).collect(),
            features: ALL_FEATURE_MODES
                .iter()
                .map(|f| f.as_str().to_string())
                .collect(),
            save_models: false,
            repeats: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MultiLabelSection {
    pub threshold: f64,
}

impl Default for MultiLabelSection {
    fn default() -> Self {
        MultiLabelSection { threshold: 0.5 }
    }
}

/// Hyperparameters for every algorithm, with the published defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperParams {
    pub gnb: GnbParams,
    pub mnb: MnbParams,
    pub dt: DtParams,
    pub rf: RfParams,
    pub lr: LrParams,
    pub svm: SvmParams,
    pub knn: KnnParams,
    pub mlp: MlpParams,
}

impl HyperParams {
    pub fn params_for(&self, algorithm: Algorithm) -> AlgoParams {
        match algorithm {
            Algorithm::Gnb => AlgoParams::Gnb(self.gnb),
            Algorithm::Mnb => AlgoParams::Mnb(self.mnb),
            Algorithm::Dt => AlgoParams::Dt(self.dt),
            Algorithm::Rf => AlgoParams::Rf(self.rf),
            Algorithm::Lr => AlgoParams::Lr(self.lr),
            Algorithm::Svm => AlgoParams::Svm(self.svm),
            Algorithm::Knn => AlgoParams::Knn(self.knn),
            Algorithm::Mlp => AlgoParams::Mlp(self.mlp),
        }
    }
}

pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    toml::from_str(&text).map_err(|e| Error::Toml {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

impl RunConfig {
    /// Resolves the config into a validated grid specification.
    /// `default_seed` applies when the file does not set one.
    pub fn to_grid_spec(&self, default_seed: u64) -> Result<GridSpec> {
        let algorithms: Result<Vec<Algorithm>> = self
            .grid
            .algorithms
            .iter()
            .map(|s| Algorithm::parse(s))
            .collect();
        let features: Result<Vec<FeatureMode>> = self
            .grid
            .features
            .iter()
            .map(|s| FeatureMode::parse(s))
            .collect();
        let spec = GridSpec {
            algorithms: algorithms?,
            features: features?,
            seed: self.seed.unwrap_or(default_seed),
            train_fraction: self.split.train_fraction,
            stratified: self.split.stratified,
            normalization: self.normalize.clone(),
            min_df: self.vectorizer.min_df,
            max_features: self.vectorizer.max_features,
            threshold: self.multilabel.threshold,
            hyper: self.hyper.clone(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_the_full_grid() {
        let config = RunConfig::default();
        let spec = config.to_grid_spec(42).unwrap();
        assert_eq!(spec.algorithms.len(), 8);
        assert_eq!(spec.features.len(), 4);
        assert_eq!(spec.seed, 42);
        assert_eq!(spec.train_fraction, 0.8);
        assert_eq!(spec.threshold, 0.5);
    }

    #[test]
    fn paper_defaults_are_pinned() {
        let hyper = HyperParams::default();
        assert_eq!(hyper.knn.k, 5);
        assert_eq!(hyper.mlp.hidden, 20);
        assert_eq!(hyper.mlp.batch_size, 32);
        assert_eq!(hyper.rf.n_trees, 100);
        assert_eq!(hyper.mnb.alpha, 1.0);
    }

    #[test]
    fn toml_overrides_apply() {
        let text = r#"
seed = 7

[split]
train_fraction = 0.7

[grid]
algorithms = ["mnb", "mlp"]
features = ["unigram", "tfidf"]

[hyper.mlp]
epochs = 10

[hyper.knn]
k = 3
"#;
        let config: RunConfig = toml::from_str(text).unwrap();
        let spec = config.to_grid_spec(0).unwrap();
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.train_fraction, 0.7);
        assert_eq!(spec.algorithms, vec![Algorithm::Mnb, Algorithm::Mlp]);
        assert_eq!(config.hyper.mlp.epochs, 10);
        assert_eq!(config.hyper.knn.k, 3);
        // Untouched sections keep their defaults.
        assert_eq!(config.hyper.mlp.hidden, 20);
        assert_eq!(config.multilabel.threshold, 0.5);
    }

    #[test]
    fn unknown_names_are_rejected() {
        let text = r#"
[grid]
algorithms = ["xgboost"]
"#;
        let config: RunConfig = toml::from_str(text).unwrap();
        assert!(config.to_grid_spec(0).is_err());
    }
}
