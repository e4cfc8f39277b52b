//! Classifier selection, training and the versioned model file.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::forest::{fit_forest, ForestConfig, ForestModel};
use super::logistic::{fit_logistic, LogisticConfig, LogisticModel};
use super::naive_bayes::{fit_naive_bayes, NaiveBayesConfig, NaiveBayesModel};
use super::pairs::{FeatureVector, TrainingPair};
use super::FEATURES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    LogisticRegression,
    GaussianNaiveBayes,
    RandomForest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [
        ClassifierKind::LogisticRegression,
        ClassifierKind::GaussianNaiveBayes,
        ClassifierKind::RandomForest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::LogisticRegression => "logistic_regression",
            ClassifierKind::GaussianNaiveBayes => "gaussian_naive_bayes",
            ClassifierKind::RandomForest => "random_forest",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic_regression" | "lr" => Ok(ClassifierKind::LogisticRegression),
            "gaussian_naive_bayes" | "nb" => Ok(ClassifierKind::GaussianNaiveBayes),
            "random_forest" | "rf" => Ok(ClassifierKind::RandomForest),
            other => Err(Error::InvalidConfig(format!(
                "unknown classifier {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub logistic: LogisticConfig,
    pub naive_bayes: NaiveBayesConfig,
    pub forest: ForestConfig,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ClassifierModel {
    LogisticRegression(LogisticModel),
    GaussianNaiveBayes(NaiveBayesModel),
    RandomForest(ForestModel),
}

impl ClassifierModel {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierModel::LogisticRegression(_) => ClassifierKind::LogisticRegression,
            ClassifierModel::GaussianNaiveBayes(_) => ClassifierKind::GaussianNaiveBayes,
            ClassifierModel::RandomForest(_) => ClassifierKind::RandomForest,
        }
    }

    /// Probability that the pair refers to one author.
    pub fn predict(&self, features: &FeatureVector) -> f64 {
        let x = features.as_array();
        match self {
            ClassifierModel::LogisticRegression(m) => m.predict(&x),
            ClassifierModel::GaussianNaiveBayes(m) => m.predict(&x),
            ClassifierModel::RandomForest(m) => m.predict(&x),
        }
    }
}

pub fn train(
    kind: ClassifierKind,
    pairs: &[TrainingPair],
    config: &TrainConfig,
) -> Result<ClassifierModel> {
    let x: Vec<[f64; FEATURES]> = pairs.iter().map(|p| p.features.as_array()).collect();
    let y: Vec<bool> = pairs.iter().map(|p| p.positive).collect();
    let model = match kind {
        ClassifierKind::LogisticRegression => {
            let fit = fit_logistic(&x, &y, &config.logistic)?;
            log::debug!(
                "logistic regression converged in {} iterations",
                fit.iterations
            );
            ClassifierModel::LogisticRegression(fit.model)
        }
        ClassifierKind::GaussianNaiveBayes => {
            ClassifierModel::GaussianNaiveBayes(fit_naive_bayes(&x, &y, &config.naive_bayes)?)
        }
        ClassifierKind::RandomForest => {
            ClassifierModel::RandomForest(fit_forest(&x, &y, &config.forest, config.seed)?)
        }
    };
    Ok(model)
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A trained model with the settings that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub seed: u64,
    pub config_hash: String,
    pub train_config: TrainConfig,
    /// Selected clustering threshold, when one has been tuned.
    #[serde(default)]
    pub threshold: Option<f64>,
    pub model: ClassifierModel,
}

impl ModelFile {
    pub fn new(model: ClassifierModel, train_config: TrainConfig, config_hash: String) -> Self {
        Self {
            format_version: MODEL_FORMAT_VERSION,
            seed: train_config.seed,
            config_hash,
            train_config,
            threshold: None,
            model,
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        self.model.kind()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization is infallible")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: ModelFile = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "{} has model format {}, expected {MODEL_FORMAT_VERSION}",
                path.display(),
                file.format_version
            )));
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs() -> Vec<TrainingPair> {
        (0..30)
            .map(|i| {
                let t = i as f64 / 30.0;
                TrainingPair {
                    instance_a: format!("a{i}"),
                    instance_b: format!("b{i}"),
                    features: FeatureVector {
                        sim_name: t,
                        sim_coauthor: t * t,
                        sim_title: 1.0 - t,
                    },
                    positive: t > 0.5,
                }
            })
            .collect()
    }

    #[test]
    fn every_kind_trains_and_round_trips() {
        let cfg = TrainConfig {
            forest: ForestConfig {
                n_trees: 10,
                ..Default::default()
            },
            seed: 5,
            ..Default::default()
        };
        let dir = tempfile::tempdir().unwrap();
        for kind in ClassifierKind::ALL {
            let model = train(kind, &pairs(), &cfg).unwrap();
            assert_eq!(model.kind(), kind);
            let p = model.predict(&FeatureVector {
                sim_name: 0.9,
                sim_coauthor: 0.8,
                sim_title: 0.1,
            });
            assert!(p > 0.5, "{kind}: {p}");
            let file = ModelFile::new(model, cfg.clone(), "abc".into());
            let path = dir.path().join(format!("{kind}.json"));
            file.save(&path).unwrap();
            assert_eq!(ModelFile::load(&path).unwrap(), file);
            assert_eq!(kind.as_str().parse::<ClassifierKind>().unwrap(), kind);
        }
    }

    #[test]
    fn single_class_errors() {
        let only_pos: Vec<TrainingPair> = pairs().into_iter().filter(|p| p.positive).collect();
        for kind in ClassifierKind::ALL {
            assert!(matches!(
                train(kind, &only_pos, &TrainConfig::default()),
                Err(Error::SingleClass(_))
            ));
        }
    }

    #[test]
    fn wrong_version_is_rejected() {
        let model = train(
            ClassifierKind::GaussianNaiveBayes,
            &pairs(),
            &TrainConfig::default(),
        )
        .unwrap();
        let mut file = ModelFile::new(model, TrainConfig::default(), String::new());
        file.format_version = 99;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        file.save(&path).unwrap();
        assert!(ModelFile::load(&path).is_err());
    }
}
