//! Random forest of Gini-impurity classification trees.
//!
//! Each tree is grown on a bootstrap sample with a random feature subset
//! tried at every node; the ensemble score is the fraction of trees voting
//! positive. Tree `t` draws from its own ChaCha8 stream, so the forest is
//! identical however the trees are scheduled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::FEATURES;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features tried per split; `None` means `floor(sqrt(d))`.
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 500,
            max_features: None,
            max_depth: None,
            min_samples_leaf: 1,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    pub fn features_per_split(&self) -> usize {
        self.max_features
            .unwrap_or_else(|| (FEATURES as f64).sqrt().floor() as usize)
            .clamp(1, FEATURES)
    }
}

/// A tree as parallel node arrays. A node with `feature < 0` is a leaf
/// whose vote is `positive`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub feature: Vec<i8>,
    pub threshold: Vec<f64>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub positive: Vec<bool>,
}

impl Tree {
    fn push_leaf(&mut self, positive: bool) -> usize {
        self.feature.push(-1);
        self.threshold.push(0.0);
        self.left.push(0);
        self.right.push(0);
        self.positive.push(positive);
        self.feature.len() - 1
    }

    pub fn len(&self) -> usize {
        self.feature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feature.is_empty()
    }

    pub fn vote(&self, x: &[f64; FEATURES]) -> bool {
        let mut node = 0;
        loop {
            let f = self.feature[node];
            if f < 0 {
                return self.positive[node];
            }
            node = if x[f as usize] <= self.threshold[node] {
                self.left[node]
            } else {
                self.right[node]
            } as usize;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
}

impl ForestModel {
    /// Fraction of trees voting positive.
    pub fn predict(&self, x: &[f64; FEATURES]) -> f64 {
        if self.trees.is_empty() {
            return 0.5;
        }
        let votes = self.trees.iter().filter(|t| t.vote(x)).count();
        votes as f64 / self.trees.len() as f64
    }
}

struct Split {
    feature: usize,
    threshold: f64,
    /// Weighted child impurity, `n_l * gini_l + n_r * gini_r`, up to a factor 2.
    score: f64,
}

fn weighted_gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (pos * (n - pos)) as f64 / n as f64
}

fn best_split_on(
    feature: usize,
    samples: &mut [usize],
    x: &[[f64; FEATURES]],
    y: &[bool],
    min_leaf: usize,
) -> Option<Split> {
    samples.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]).then(a.cmp(&b)));
    let n = samples.len();
    let total_pos = samples.iter().filter(|&&s| y[s]).count();
    let mut left_pos = 0;
    let mut best: Option<Split> = None;
    for i in 0..n - 1 {
        left_pos += usize::from(y[samples[i]]);
        let (lo, hi) = (x[samples[i]][feature], x[samples[i + 1]][feature]);
        let left_n = i + 1;
        if lo == hi || left_n < min_leaf || n - left_n < min_leaf {
            continue;
        }
        let score =
            weighted_gini(left_pos, left_n) + weighted_gini(total_pos - left_pos, n - left_n);
        if best.as_ref().is_none_or(|b| score < b.score) {
            let mid = lo + (hi - lo) / 2.0;
            best = Some(Split {
                feature,
                threshold: if mid < hi { mid } else { lo },
                score,
            });
        }
    }
    best
}

/// Parent slot (node index, right child?), samples and depth of a node
/// still to be grown.
type Pending = (Option<(usize, bool)>, Vec<usize>, usize);

fn grow_tree(
    x: &[[f64; FEATURES]],
    y: &[bool],
    sample: Vec<usize>,
    config: &ForestConfig,
    rng: &mut ChaCha8Rng,
) -> Tree {
    let mut tree = Tree::default();
    let tries = config.features_per_split();
    let min_leaf = config.min_samples_leaf.max(1);
    // (node slot, samples, depth); the slot is patched once the node is known.
    let mut stack: Vec<Pending> = vec![(None, sample, 0)];
    while let Some((parent, mut samples, depth)) = stack.pop() {
        let n = samples.len();
        let pos = samples.iter().filter(|&&s| y[s]).count();
        let depth_ok = config.max_depth.is_none_or(|d| depth < d);
        let mut split: Option<Split> = None;
        if pos > 0 && pos < n && depth_ok && n >= 2 * min_leaf {
            let mut order: Vec<usize> = (0..FEATURES).collect();
            order.shuffle(rng);
            for (tried, &f) in order.iter().enumerate() {
                if tried >= tries && split.is_some() {
                    break;
                }
                if let Some(s) = best_split_on(f, &mut samples, x, y, min_leaf) {
                    if split.as_ref().is_none_or(|b| s.score < b.score) {
                        split = Some(s);
                    }
                }
            }
        }
        let node = match &split {
            None => tree.push_leaf(2 * pos > n),
            Some(s) => {
                let id = tree.push_leaf(false);
                tree.feature[id] = s.feature as i8;
                tree.threshold[id] = s.threshold;
                id
            }
        };
        if let Some((p, is_left)) = parent {
            if is_left {
                tree.left[p] = node as u32;
            } else {
                tree.right[p] = node as u32;
            }
        }
        if let Some(s) = split {
            let (l, r): (Vec<usize>, Vec<usize>) = samples
                .into_iter()
                .partition(|&i| x[i][s.feature] <= s.threshold);
            stack.push((Some((node, false)), r, depth + 1));
            stack.push((Some((node, true)), l, depth + 1));
        }
    }
    tree
}

pub fn fit_forest(
    x: &[[f64; FEATURES]],
    y: &[bool],
    config: &ForestConfig,
    seed: u64,
) -> Result<ForestModel> {
    if !y.iter().any(|&v| v) {
        return Err(Error::SingleClass("negative"));
    }
    if y.iter().all(|&v| v) {
        return Err(Error::SingleClass("positive"));
    }
    if config.n_trees == 0 {
        return Err(Error::InvalidConfig(
            "random forest needs at least one tree".into(),
        ));
    }
    let n = x.len();
    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let sample: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grow_tree(x, y, sample, config, &mut rng)
        })
        .collect();
    Ok(ForestModel { trees })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> (Vec<[f64; FEATURES]>, Vec<bool>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..60 {
            let t = i as f64 / 60.0;
            x.push([t, (i % 7) as f64 / 7.0, 0.5]);
            y.push(t > 0.4);
        }
        (x, y)
    }

    #[test]
    fn fully_grown_tree_fits_training_data() {
        let (x, y) = data();
        let cfg = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            max_features: Some(FEATURES),
            ..Default::default()
        };
        let forest = fit_forest(&x, &y, &cfg, 1).unwrap();
        for (row, &label) in x.iter().zip(&y) {
            assert_eq!(forest.trees[0].vote(row), label);
        }
        assert_eq!(forest.trees[0].len(), 3);
    }

    #[test]
    fn separable_data_ranks_positives_first() {
        let (x, y) = data();
        let cfg = ForestConfig {
            n_trees: 50,
            ..Default::default()
        };
        let forest = fit_forest(&x, &y, &cfg, 3).unwrap();
        let scores: Vec<f64> = x.iter().map(|r| forest.predict(r)).collect();
        assert!(scores.iter().all(|s| (0.0..=1.0).contains(s)));
        let min_pos = scores
            .iter()
            .zip(&y)
            .filter(|p| *p.1)
            .map(|p| *p.0)
            .fold(f64::MAX, f64::min);
        let max_neg = scores
            .iter()
            .zip(&y)
            .filter(|p| !*p.1)
            .map(|p| *p.0)
            .fold(f64::MIN, f64::max);
        assert!(min_pos > max_neg);
    }

    #[test]
    fn seeded_and_schedule_independent() {
        let (x, y) = data();
        let cfg = ForestConfig {
            n_trees: 20,
            ..Default::default()
        };
        let a = fit_forest(&x, &y, &cfg, 9).unwrap();
        let b = fit_forest(&x, &y, &cfg, 9).unwrap();
        assert_eq!(a, b);
        let c = fit_forest(&x, &y, &ForestConfig { n_trees: 5, ..cfg }, 9).unwrap();
        assert_eq!(c.trees[..], a.trees[..5]);
    }

    #[test]
    fn prediction_is_vote_fraction() {
        let stump = |positive: bool| {
            let mut t = Tree::default();
            t.push_leaf(positive);
            t
        };
        let forest = ForestModel {
            trees: vec![stump(true), stump(false), stump(true), stump(true)],
        };
        assert_eq!(forest.predict(&[0.0; FEATURES]), 0.75);
        assert_eq!(ForestConfig::default().features_per_split(), 1);
    }
}
