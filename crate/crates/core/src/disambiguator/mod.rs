//! Supervised disambiguation trained on automatically labeled instances.
//!
//! Each instance is reduced to three texts (its name, its coauthors' names
//! and its stemmed title words) and each text to character 2/3/4-gram term
//! frequencies. Within a block, a pair of instances is described by the
//! cosine similarities of those profiles, a classifier turns the
//! similarities into a same-author probability, and average-linkage
//! clustering on the probabilities splits the block into authors. The
//! clustering threshold is tuned on development pairs.

mod forest;
mod hac;
mod logistic;
mod model;
mod naive_bayes;
mod pairs;
mod porter;
mod text;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::evaluation::pairwise_metrics;

pub use forest::{fit_forest, ForestConfig, ForestModel, Tree};
pub use hac::{hac_cluster, Dendrogram, HacConfig, Linkage, Merge, SimilarityMatrix};
pub use logistic::{fit_logistic, sigmoid, LogisticConfig, LogisticFit, LogisticModel};
pub use model::{
    train, ClassifierKind, ClassifierModel, ModelFile, TrainConfig, MODEL_FORMAT_VERSION,
};
pub use naive_bayes::{fit_naive_bayes, NaiveBayesConfig, NaiveBayesModel};
pub use pairs::{
    blocking_key, build_pairs, group_blocks, labeled_pairs, parse_pairs, resolve_labels,
    sample_holdout, split_by_cluster, write_pairs, BlockingMode, FeatureExtractor, FeatureVector,
    InstanceProfile, InstanceText, LabeledInstances, PairSets, ProfileTable, SplitConfig,
    TrainingPair, PAIR_HEADER,
};
pub use porter::porter_stem;
pub use text::{cosine, ngram_profile, Preprocessor, TextKind, TfVector, DEFAULT_NGRAMS};

/// Similarity features per pair: name, coauthors, title.
pub const FEATURES: usize = 3;

/// One block with its pair probabilities reduced to a dendrogram.
#[derive(Clone, Debug)]
pub struct ScoredBlock {
    pub key: String,
    /// Instance indices ordered by instance id.
    pub members: Vec<usize>,
    pub dendrogram: Dendrogram,
    /// Mean pair probability; `None` for single-instance blocks.
    pub mean_probability: Option<f64>,
}

/// Scores every within-block pair of `instances` and builds the block
/// dendrograms.
pub fn score_blocks(
    corpus: &Corpus,
    instances: &[usize],
    profiles: &ProfileTable,
    model: &ClassifierModel,
    mode: BlockingMode,
) -> Vec<ScoredBlock> {
    let blocks: Vec<(String, Vec<usize>)> =
        group_blocks(corpus, instances, mode).into_iter().collect();
    blocks
        .into_par_iter()
        .map(|(key, members)| {
            let sim = SimilarityMatrix::from_fn(members.len(), |i, j| {
                model.predict(&profiles.features(members[i], members[j]))
            });
            ScoredBlock {
                key,
                mean_probability: sim.mean(),
                dendrogram: Dendrogram::build(&sim),
                members,
            }
        })
        .collect()
}

/// Clusters of instance indices across all blocks at `threshold`, each
/// sorted and ordered by smallest member.
pub fn cut_blocks(blocks: &[ScoredBlock], threshold: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = blocks
        .iter()
        .flat_map(|b| {
            b.dendrogram.cut(threshold).into_iter().map(|c| {
                let mut m: Vec<usize> = c.into_iter().map(|k| b.members[k]).collect();
                m.sort_unstable();
                m
            })
        })
        .collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Candidate clustering thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ThresholdGrid {
    /// `0, step, 2·step, …, 1`.
    Uniform {
        step: f64,
    },
    /// The mean pair probability of each development block.
    ObservedBlockMeans,
    Explicit {
        values: Vec<f64>,
    },
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        ThresholdGrid::Uniform { step: 0.01 }
    }
}

impl ThresholdGrid {
    pub fn values(&self, blocks: &[ScoredBlock]) -> Result<Vec<f64>> {
        let mut values = match self {
            ThresholdGrid::Uniform { step } => {
                if !(*step > 0.0 && *step <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "grid step {step} is outside (0, 1]"
                    )));
                }
                let steps = (1.0 / step).round() as usize;
                (0..=steps).map(|i| i as f64 / steps as f64).collect()
            }
            ThresholdGrid::ObservedBlockMeans => {
                blocks.iter().filter_map(|b| b.mean_probability).collect()
            }
            ThresholdGrid::Explicit { values } => values.clone(),
        };
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScore {
    pub threshold: f64,
    pub f1: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSelection {
    pub config: HacConfig,
    pub f1: Option<f64>,
    pub scores: Vec<ThresholdScore>,
}

/// Picks the threshold whose clustering of `blocks` has the best pairwise
/// F1 against `labels`. Ties go to the higher threshold; an undefined F1
/// ranks below every defined one.
pub fn select_threshold(
    blocks: &[ScoredBlock],
    labels: &[(usize, String)],
    grid: &[f64],
) -> Result<ThresholdSelection> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let scores: Vec<ThresholdScore> = grid
        .par_iter()
        .map(|&threshold| {
            let clusters = cut_blocks(blocks, threshold);
            let predicted = clusters
                .iter()
                .enumerate()
                .flat_map(|(c, m)| m.iter().map(move |&i| (i, c)));
            let truth = labels.iter().map(|(i, c)| (*i, c.as_str()));
            ThresholdScore {
                threshold,
                f1: pairwise_metrics(predicted, truth).f1,
            }
        })
        .collect();
    let rank = |s: &ThresholdScore| s.f1.unwrap_or(-1.0);
    let best = scores
        .iter()
        .copied()
        .reduce(|best, s| {
            let better =
                rank(&s) > rank(&best) || (rank(&s) == rank(&best) && s.threshold > best.threshold);
            if better {
                s
            } else {
                best
            }
        })
        .expect("grid is non-empty");
    Ok(ThresholdSelection {
        config: HacConfig::new(best.threshold),
        f1: best.f1,
        scores,
    })
}

/// Disambiguates `instances`: per-block clustering of model probabilities
/// at the configured threshold.
pub fn disambiguate(
    corpus: &Corpus,
    instances: &[usize],
    profiles: &ProfileTable,
    model: &ClassifierModel,
    mode: BlockingMode,
    config: &HacConfig,
) -> Vec<Vec<usize>> {
    cut_blocks(
        &score_blocks(corpus, instances, profiles, model, mode),
        config.threshold,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(members: Vec<usize>, pairs: &[((usize, usize), f64)]) -> ScoredBlock {
        let sim = SimilarityMatrix::from_fn(members.len(), |i, j| {
            pairs.iter().find(|p| p.0 == (i, j)).map_or(0.0, |p| p.1)
        });
        ScoredBlock {
            key: String::new(),
            mean_probability: sim.mean(),
            dendrogram: Dendrogram::build(&sim),
            members,
        }
    }

    #[test]
    fn grid_selection_finds_optimum_and_breaks_ties_high() {
        // Truth {0,1},{2}: merging 0-1 (0.7) is right, merging in 2 (0.3) is wrong.
        let blocks = vec![block(
            vec![0, 1, 2],
            &[((0, 1), 0.7), ((0, 2), 0.3), ((1, 2), 0.3)],
        )];
        let labels = vec![
            (0, "a".to_string()),
            (1, "a".to_string()),
            (2, "b".to_string()),
        ];
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let sel = select_threshold(&blocks, &labels, &grid).unwrap();
        assert_eq!(sel.config.threshold, 0.7);
        assert_eq!(sel.f1, Some(1.0));
        let exhaustive = sel
            .scores
            .iter()
            .filter(|s| s.f1 == Some(1.0))
            .map(|s| s.threshold)
            .fold(f64::MIN, f64::max);
        assert_eq!(exhaustive, sel.config.threshold);
        assert_eq!(
            select_threshold(&blocks, &labels, &[0.2])
                .unwrap()
                .config
                .threshold,
            0.2
        );
        assert!(matches!(
            select_threshold(&blocks, &labels, &[]),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn perfect_scores_pick_highest_grid_value() {
        let blocks = vec![block(vec![0, 1, 2], &[((0, 1), 1.0)])];
        let labels = vec![
            (0, "a".to_string()),
            (1, "a".to_string()),
            (2, "b".to_string()),
        ];
        let grid = ThresholdGrid::Uniform { step: 0.1 }
            .values(&blocks)
            .unwrap();
        assert_eq!(grid.len(), 11);
        let interior: Vec<f64> = grid[1..10].to_vec();
        assert_eq!(
            select_threshold(&blocks, &labels, &interior)
                .unwrap()
                .config
                .threshold,
            0.9
        );
    }

    #[test]
    fn grids() {
        let blocks = vec![block(vec![0, 1], &[((0, 1), 0.25)]), block(vec![2], &[])];
        assert_eq!(
            ThresholdGrid::ObservedBlockMeans.values(&blocks).unwrap(),
            vec![0.25]
        );
        assert!(matches!(
            ThresholdGrid::ObservedBlockMeans.values(&blocks[1..]),
            Err(Error::EmptyGrid)
        ));
        assert_eq!(ThresholdGrid::default().values(&[]).unwrap().len(), 101);
        assert_eq!(cut_blocks(&blocks, 0.2), vec![vec![0, 1], vec![2]]);
    }
}
