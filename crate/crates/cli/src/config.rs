use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use autolabel_core::corpus::io::CorpusFormat;
use autolabel_core::corpus::CorpusOptions;
use autolabel_core::disambiguator::{
    BlockingMode, ClassifierKind, ForestConfig, LogisticConfig, NaiveBayesConfig, ThresholdGrid,
};
use autolabel_core::matching::{Feature, MatchOptions, MatchRule, Scheme};
use autolabel_core::synth::SynthConfig;

/// Input files. Relative paths resolve against the config file's
/// directory; unset derived inputs default to files in the output
/// directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub corpus_format: CorpusFormat,
    pub supplemental: Option<PathBuf>,
    pub profiles: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub tags: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelSettings {
    /// Clusters smaller than this are left out of the label file.
    pub min_cluster_size: usize,
}

impl Default for LabelSettings {
    fn default() -> Self {
        Self {
            min_cluster_size: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlSettings {
    pub classifier: ClassifierKind,
    pub blocking: BlockingMode,
    pub train_ratio: f64,
    /// Share of truth-labeled instances kept out of training and used by
    /// `disambiguate` and `evaluate`. Zero disables the hold-out.
    pub holdout_fraction: f64,
    pub threshold_grid: ThresholdGrid,
    /// Overrides the threshold stored with the model.
    pub threshold: Option<f64>,
    pub ngrams: Vec<usize>,
    pub logistic: LogisticConfig,
    pub naive_bayes: NaiveBayesConfig,
    pub forest: ForestConfig,
}

impl Default for MlSettings {
    fn default() -> Self {
        Self {
            classifier: ClassifierKind::LogisticRegression,
            blocking: BlockingMode::FirstInitial,
            train_ratio: 0.5,
            holdout_fraction: 0.0,
            threshold_grid: ThresholdGrid::default(),
            threshold: None,
            ngrams: autolabel_core::disambiguator::DEFAULT_NGRAMS.to_vec(),
            logistic: LogisticConfig::default(),
            naive_bayes: NaiveBayesConfig::default(),
            forest: ForestConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSettings {
    /// Inclusive block-size range of the power-law fit.
    pub fit_range: (usize, usize),
    /// Pool tag categories beyond the `top_k` most frequent into "Other".
    pub top_k: Option<usize>,
}

impl Default for ReportSettings {
    fn default() -> Self {
        Self {
            fit_range: (1, 50),
            top_k: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Seeds every random choice: synthetic generation, hold-out sampling,
    /// the train/dev split and the forest.
    pub seed: u64,
    pub paths: Paths,
    /// Rules for iterative labeling, in application order.
    pub rules: Vec<MatchRule>,
    /// Rules scored by `validate-rules`.
    pub validation_rules: Vec<MatchRule>,
    pub match_options: MatchOptions,
    pub corpus: CorpusOptions,
    pub label: LabelSettings,
    pub ml: MlSettings,
    pub synth: SynthConfig,
    pub report: ReportSettings,
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            paths: Paths::default(),
            rules: MatchRule::default_rules(),
            validation_rules: default_validation_rules(),
            match_options: MatchOptions::default(),
            corpus: CorpusOptions::default(),
            label: LabelSettings::default(),
            ml: MlSettings::default(),
            synth: SynthConfig::default(),
            report: ReportSettings::default(),
            output_dir: PathBuf::from("out"),
            base_dir: PathBuf::new(),
        }
    }
}

fn rule(feature: Feature, scheme: Scheme, min_shared: usize) -> MatchRule {
    MatchRule {
        feature,
        scheme,
        min_shared,
    }
}

/// Every e-mail scheme, both self-citation schemes, and coauthor rules at
/// one and two shared coauthors.
pub fn default_validation_rules() -> Vec<MatchRule> {
    use Feature::*;
    use Scheme::*;
    vec![
        rule(Email, FullString, 1),
        rule(Email, PreAt, 1),
        rule(Email, AlnumOnly, 1),
        rule(SelfCitation, FullString, 1),
        rule(SelfCitation, FirstInitial, 1),
        rule(Coauthor, FullString, 1),
        rule(Coauthor, FullString, 2),
        rule(Coauthor, FirstInitial, 1),
    ]
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut config: Self = serde_json::from_str(&text)
            .with_context(|| format!("malformed config {}", path.display()))?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.output_dir = config.resolve(&config.output_dir);
        Ok(config)
    }

    /// Applies command-line overrides and propagates the seed.
    pub fn with_overrides(mut self, seed: Option<u64>, out: Option<PathBuf>) -> Self {
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(out) = out {
            self.output_dir = out;
        }
        self.synth.seed = self.seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for r in self.rules.iter().chain(&self.validation_rules) {
            r.validate()?;
        }
        self.synth.validate()?;
        anyhow::ensure!(
            self.label.min_cluster_size >= 1,
            "label.min_cluster_size must be at least 1"
        );
        anyhow::ensure!(
            !self.ml.ngrams.is_empty() && !self.ml.ngrams.contains(&0),
            "ml.ngrams must be non-empty and positive"
        );
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, excluding the output directory
    /// so that reruns into different directories share a hash.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let json = serde_json::to_string(&canonical).expect("config serialization is infallible");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}
