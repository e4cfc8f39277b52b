//! Instance text, similarity features and labeled pair construction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, NameInstance};
use crate::error::{Error, Result};

use super::text::{
    cosine_with_norms, ngram_profile, norm, Preprocessor, TextKind, TfVector, DEFAULT_NGRAMS,
};
use super::FEATURES;

/// Similarities of two instances over name, coauthors and title.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub sim_name: f64,
    pub sim_coauthor: f64,
    pub sim_title: f64,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; FEATURES] {
        [self.sim_name, self.sim_coauthor, self.sim_title]
    }
}

/// Preprocessed text of one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceText {
    pub name: String,
    pub coauthors: Vec<String>,
    pub title: String,
}

impl InstanceText {
    pub fn new(inst: &NameInstance, title: &str, pre: &Preprocessor) -> Self {
        Self {
            name: pre.preprocess(&inst.name.to_string(), TextKind::Name),
            coauthors: inst
                .coauthors
                .iter()
                .map(|c| pre.preprocess(&c.to_string(), TextKind::Name))
                .collect(),
            title: pre.preprocess(title, TextKind::Title),
        }
    }

    /// `author_id<TAB>instance_id<TAB>name<TAB>coauthors<TAB>title words`,
    /// coauthors joined by `|`.
    pub fn record_line(&self, author_id: &str, instance_id: &str) -> String {
        format!(
            "{author_id}\t{instance_id}\t{}\t{}\t{}",
            self.name,
            self.coauthors.join("|"),
            self.title
        )
    }
}

#[derive(Clone, Debug, Default)]
struct Profile {
    tf: TfVector,
    norm: f64,
}

impl Profile {
    fn new(text: &str, ns: &[usize]) -> Self {
        let tf = ngram_profile(text, ns);
        let norm = norm(&tf);
        Self { tf, norm }
    }

    fn cosine(&self, other: &Profile) -> f64 {
        cosine_with_norms(&self.tf, self.norm, &other.tf, other.norm)
    }
}

/// N-gram profiles of one instance.
#[derive(Clone, Debug, Default)]
pub struct InstanceProfile {
    name: Profile,
    coauthors: Profile,
    title: Profile,
}

impl InstanceProfile {
    pub fn from_text(text: &InstanceText, ns: &[usize]) -> Self {
        Self {
            name: Profile::new(&text.name, ns),
            coauthors: Profile::new(&text.coauthors.join(" "), ns),
            title: Profile::new(&text.title, ns),
        }
    }

    pub fn features(&self, other: &InstanceProfile) -> FeatureVector {
        FeatureVector {
            sim_name: self.name.cosine(&other.name),
            sim_coauthor: self.coauthors.cosine(&other.coauthors),
            sim_title: self.title.cosine(&other.title),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FeatureExtractor {
    pub preprocessor: Preprocessor,
    pub ngrams: Vec<usize>,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        Self {
            preprocessor: Preprocessor::default(),
            ngrams: DEFAULT_NGRAMS.to_vec(),
        }
    }
}

impl FeatureExtractor {
    pub fn text(&self, corpus: &Corpus, idx: usize) -> InstanceText {
        let inst = corpus.instance(idx);
        InstanceText::new(
            inst,
            &corpus.records()[inst.paper].title,
            &self.preprocessor,
        )
    }

    pub fn profiles(&self, corpus: &Corpus, instances: &[usize]) -> ProfileTable {
        let profiles = instances
            .par_iter()
            .map(|&i| {
                (
                    i,
                    InstanceProfile::from_text(&self.text(corpus, i), &self.ngrams),
                )
            })
            .collect();
        ProfileTable { profiles }
    }
}

/// Profiles keyed by instance index.
#[derive(Clone, Debug, Default)]
pub struct ProfileTable {
    profiles: HashMap<usize, InstanceProfile>,
}

impl ProfileTable {
    pub fn get(&self, idx: usize) -> Option<&InstanceProfile> {
        self.profiles.get(&idx)
    }

    /// Features of two profiled instances.
    ///
    /// # Panics
    /// If either instance has no profile.
    pub fn features(&self, a: usize, b: usize) -> FeatureVector {
        let pa = self
            .get(a)
            .unwrap_or_else(|| panic!("instance {a} was not profiled"));
        let pb = self
            .get(b)
            .unwrap_or_else(|| panic!("instance {b} was not profiled"));
        pa.features(pb)
    }
}

/// Which names may be compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockingMode {
    /// First forename initial and full surname.
    #[default]
    FirstInitial,
    /// Full forename and full surname.
    FullForename,
}

pub fn blocking_key(inst: &NameInstance, mode: BlockingMode) -> String {
    match mode {
        BlockingMode::FirstInitial => inst.block_key.clone(),
        BlockingMode::FullForename => inst.name.full_key(),
    }
}

/// Instances grouped by blocking key; members ordered by instance id.
pub fn group_blocks(
    corpus: &Corpus,
    instances: &[usize],
    mode: BlockingMode,
) -> BTreeMap<String, Vec<usize>> {
    let mut blocks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &i in instances {
        blocks
            .entry(blocking_key(corpus.instance(i), mode))
            .or_default()
            .push(i);
    }
    for members in blocks.values_mut() {
        members.sort_by(|&a, &b| {
            corpus
                .instance(a)
                .instance_id
                .cmp(&corpus.instance(b).instance_id)
        });
        members.dedup();
    }
    blocks
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingPair {
    pub instance_a: String,
    pub instance_b: String,
    pub features: FeatureVector,
    /// Same cluster in the labeled data.
    pub positive: bool,
}

/// Labeled instances as `(instance index, cluster id)`.
pub type LabeledInstances = Vec<(usize, String)>;

/// Resolves `(instance_id, cluster_id)` rows against the corpus.
pub fn resolve_labels(corpus: &Corpus, labels: &[(String, String)]) -> Result<LabeledInstances> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(labels.len());
    for (id, cluster) in labels {
        let idx = corpus.instance_index(id).ok_or_else(|| {
            Error::InvalidConfig(format!("label refers to unknown instance {id:?}"))
        })?;
        if !seen.insert(idx) {
            return Err(Error::InvalidConfig(format!(
                "instance {id:?} is labeled twice"
            )));
        }
        out.push((idx, cluster.clone()));
    }
    out.sort();
    Ok(out)
}

/// Every within-block pair of labeled instances, positive iff both carry
/// the same cluster id.
pub fn labeled_pairs(
    corpus: &Corpus,
    labeled: &[(usize, String)],
    profiles: &ProfileTable,
    mode: BlockingMode,
) -> Vec<TrainingPair> {
    let cluster: HashMap<usize, &str> = labeled.iter().map(|(i, c)| (*i, c.as_str())).collect();
    let instances: Vec<usize> = labeled.iter().map(|(i, _)| *i).collect();
    let blocks = group_blocks(corpus, &instances, mode);
    blocks
        .into_values()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|members| {
            let mut pairs = Vec::new();
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    pairs.push(TrainingPair {
                        instance_a: corpus.instance(a).instance_id.clone(),
                        instance_b: corpus.instance(b).instance_id.clone(),
                        features: profiles.features(a, b),
                        positive: cluster[&a] == cluster[&b],
                    });
                }
            }
            pairs
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitConfig {
    /// Target share of labeled instances in the training half.
    pub train_ratio: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_ratio: 0.5,
            seed: 42,
        }
    }
}

/// Splits labeled instances by whole clusters. Clusters are visited in a
/// seeded random order and go to the training side until it holds
/// `train_ratio` of the instances.
pub fn split_by_cluster(
    labeled: &[(usize, String)],
    config: &SplitConfig,
) -> Result<(LabeledInstances, LabeledInstances)> {
    if !(0.0..=1.0).contains(&config.train_ratio) {
        return Err(Error::InvalidConfig(format!(
            "train_ratio {} is outside [0, 1]",
            config.train_ratio
        )));
    }
    let mut clusters: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in labeled {
        clusters.entry(c.as_str()).or_default().push(*i);
    }
    let mut order: Vec<&str> = clusters.keys().copied().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    let target = (config.train_ratio * labeled.len() as f64).round() as usize;
    let mut train_clusters = BTreeSet::new();
    let mut filled = 0;
    for c in order {
        if filled >= target {
            break;
        }
        filled += clusters[c].len();
        train_clusters.insert(c);
    }
    let (train, dev) = labeled
        .iter()
        .cloned()
        .partition(|(_, c)| train_clusters.contains(c.as_str()));
    Ok((train, dev))
}

/// A seeded random `fraction` of `candidates`, returned sorted. Used to
/// keep evaluation instances out of training.
pub fn sample_holdout(candidates: &[usize], fraction: f64, seed: u64) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidConfig(format!(
            "holdout fraction {fraction} is outside [0, 1]"
        )));
    }
    let mut pool = candidates.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let n = (fraction * pool.len() as f64).round() as usize;
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pool.truncate(n);
    pool.sort_unstable();
    Ok(pool)
}

#[derive(Clone, Debug, Default)]
pub struct PairSets {
    pub train: Vec<TrainingPair>,
    pub dev: Vec<TrainingPair>,
    pub train_instances: LabeledInstances,
    pub dev_instances: LabeledInstances,
}

/// Splits labeled instances into training and development halves and
/// enumerates the labeled within-block pairs of each.
pub fn build_pairs(
    corpus: &Corpus,
    labeled: &[(usize, String)],
    profiles: &ProfileTable,
    mode: BlockingMode,
    split: &SplitConfig,
) -> Result<PairSets> {
    let (train_instances, dev_instances) = split_by_cluster(labeled, split)?;
    Ok(PairSets {
        train: labeled_pairs(corpus, &train_instances, profiles, mode),
        dev: labeled_pairs(corpus, &dev_instances, profiles, mode),
        train_instances,
        dev_instances,
    })
}

pub const PAIR_HEADER: &str = "instance_a\tinstance_b\tsim_name\tsim_coauthor\tsim_title\tlabel";

pub fn write_pairs(pairs: &[TrainingPair]) -> String {
    let mut out = String::from(PAIR_HEADER);
    out.push('\n');
    for p in pairs {
        let f = &p.features;
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}",
            p.instance_a,
            p.instance_b,
            f.sim_name,
            f.sim_coauthor,
            f.sim_title,
            u8::from(p.positive)
        );
    }
    out
}

pub fn parse_pairs(text: &str) -> Result<Vec<TrainingPair>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() || (n == 0 && line == PAIR_HEADER) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let err = |message: String| Error::Format {
            line: line_no,
            message,
        };
        if cols.len() != 6 {
            return Err(err(format!("expected 6 columns, found {}", cols.len())));
        }
        let sim = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| err(format!("bad similarity {s:?}")))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(err(format!("similarity {v} outside [0, 1]")))
            }
        };
        let positive = match cols[5] {
            "1" => true,
            "0" => false,
            other => return Err(err(format!("label must be 0 or 1, found {other:?}"))),
        };
        out.push(TrainingPair {
            instance_a: cols[0].to_string(),
            instance_b: cols[1].to_string(),
            features: FeatureVector {
                sim_name: sim(cols[2])?,
                sim_coauthor: sim(cols[3])?,
                sim_title: sim(cols[4])?,
            },
            positive,
        });
    }
    Ok(out)
}
