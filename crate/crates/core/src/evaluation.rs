//! Pairwise precision/recall/F1 against truth labels, and representativeness
//! diagnostics (block-size distributions, categorical tag ratios).

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairwise scores. A ratio is `None` when its denominator is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub predicted_pairs: u64,
    pub truth_pairs: u64,
    pub correct_pairs: u64,
    pub predicted_clusters: usize,
    pub truth_clusters: usize,
    pub evaluable_instances: usize,
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

pub(crate) fn f1(p: Option<f64>, r: Option<f64>) -> Option<f64> {
    match (p, r) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    }
}

/// Pairwise metrics of a predicted clustering against truth labels.
///
/// Only instances present in both maps are considered, and of those only
/// instances whose truth author has at least two such instances (an
/// instance without a comparable pair is not evaluable). Predicted pairs
/// are same-cluster pairs and truth pairs same-author pairs among the
/// evaluable instances.
pub fn pairwise_metrics<K, P, T>(
    predicted: impl IntoIterator<Item = (K, P)>,
    truth: impl IntoIterator<Item = (K, T)>,
) -> EvaluationReport
where
    K: Eq + Hash,
    P: Eq + Hash,
    T: Eq + Hash,
{
    let predicted: HashMap<K, P> = predicted.into_iter().collect();
    let both: Vec<(&P, T)> = truth
        .into_iter()
        .filter_map(|(k, t)| predicted.get(&k).map(|p| (p, t)))
        .collect();

    let mut author_sizes: HashMap<&T, u64> = HashMap::new();
    for (_, t) in &both {
        *author_sizes.entry(t).or_default() += 1;
    }
    let mut cluster_sizes: HashMap<&P, u64> = HashMap::new();
    let mut cells: HashMap<(&P, &T), u64> = HashMap::new();
    let mut evaluable = 0;
    for (p, t) in &both {
        if author_sizes[t] < 2 {
            continue;
        }
        evaluable += 1;
        *cluster_sizes.entry(*p).or_default() += 1;
        *cells.entry((*p, t)).or_default() += 1;
    }
    let truth_sizes: Vec<u64> = author_sizes.values().copied().filter(|&n| n >= 2).collect();

    let predicted_pairs: u64 = cluster_sizes.values().map(|&n| pairs(n)).sum();
    let truth_pairs: u64 = truth_sizes.iter().map(|&n| pairs(n)).sum();
    let correct_pairs: u64 = cells.values().map(|&n| pairs(n)).sum();
    let precision = (predicted_pairs > 0).then(|| correct_pairs as f64 / predicted_pairs as f64);
    let recall = (truth_pairs > 0).then(|| correct_pairs as f64 / truth_pairs as f64);
    EvaluationReport {
        precision,
        recall,
        f1: f1(precision, recall),
        predicted_pairs,
        truth_pairs,
        correct_pairs,
        predicted_clusters: cluster_sizes.len(),
        truth_clusters: truth_sizes.len(),
        evaluable_instances: evaluable,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least-squares line through `(ln x, ln y)`. Needs two distinct positive
/// `x` values; points with non-positive coordinates are ignored.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerLawFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(PowerLawFit {
        slope,
        intercept,
        r_squared,
        points: logs.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulativePoint {
    pub size: usize,
    pub blocks_at_least: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockStats {
    pub blocks: usize,
    pub instances: usize,
    /// Block sizes, largest first (ties by key).
    pub sizes: Vec<(String, usize)>,
    /// `r(n)` at every observed block size, ascending.
    pub cumulative: Vec<CumulativePoint>,
    pub fit_range: (usize, usize),
    /// `None` when fewer than two observed sizes fall in `fit_range`.
    pub fit: Option<PowerLawFit>,
}

impl BlockStats {
    /// Fraction of blocks with at least `n` instances.
    pub fn ratio_at(&self, n: usize) -> f64 {
        if self.blocks == 0 {
            return 0.0;
        }
        let at_least = self.sizes.iter().filter(|(_, s)| *s >= n).count();
        at_least as f64 / self.blocks as f64
    }
}

/// Groups instances by block key and computes the cumulative block-size
/// ratio `r(n) = #blocks of size >= n / #blocks`, with a log-log power-law
/// fit over the observed sizes in `fit_range` (inclusive).
pub fn block_stats<S: AsRef<str>>(
    block_keys: impl IntoIterator<Item = S>,
    fit_range: (usize, usize),
) -> BlockStats {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut instances = 0;
    for key in block_keys {
        *counts.entry(key.as_ref().to_string()).or_default() += 1;
        instances += 1;
    }
    let blocks = counts.len();
    let mut sizes: Vec<(String, usize)> = counts.into_iter().collect();
    sizes.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, s) in &sizes {
        *by_size.entry(*s).or_default() += 1;
    }
    let mut remaining = blocks;
    let mut cumulative = Vec::with_capacity(by_size.len());
    for (size, count) in by_size {
        cumulative.push(CumulativePoint {
            size,
            blocks_at_least: remaining,
            ratio: remaining as f64 / blocks as f64,
        });
        remaining -= count;
    }
    let in_range: Vec<(f64, f64)> = cumulative
        .iter()
        .filter(|p| p.size >= fit_range.0 && p.size <= fit_range.1)
        .map(|p| (p.size as f64, p.ratio))
        .collect();
    BlockStats {
        blocks,
        instances,
        sizes,
        cumulative,
        fit_range,
        fit: fit_power_law(&in_range),
    }
}

pub const NULL_CATEGORY: &str = "Null";
pub const OTHER_CATEGORY: &str = "Other";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TagRatioRow {
    pub category: String,
    pub subset_ratio: f64,
    pub population_ratio: f64,
    pub abs_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TagRatioReport {
    pub subset_size: usize,
    pub population_size: usize,
    /// Sorted by population frequency, descending.
    pub rows: Vec<TagRatioRow>,
}

/// Category ratios of `subset` and `population`. Untagged instances count
/// as `"Null"`. With `top_k`, categories beyond the `k` most frequent in
/// the population are pooled into `"Other"` so each column still sums to 1.
pub fn tag_ratios<S: AsRef<str>>(
    subset: &[S],
    population: &[S],
    tags: &HashMap<String, String>,
    top_k: Option<usize>,
) -> Result<TagRatioReport> {
    if tags.is_empty() {
        return Err(Error::EmptyTagMap);
    }
    if subset.is_empty() || population.is_empty() {
        return Err(Error::InvalidConfig(
            "tag ratios need non-empty instance sets".into(),
        ));
    }
    let count = |set: &[S]| -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for id in set {
            let cat = tags.get(id.as_ref()).map_or(NULL_CATEGORY, String::as_str);
            *m.entry(cat).or_default() += 1;
        }
        m
    };
    let sub = count(subset);
    let pop = count(population);
    let mut categories: Vec<&str> = pop.keys().chain(sub.keys()).copied().collect();
    categories.sort_unstable();
    categories.dedup();
    categories.sort_by(|a, b| {
        let (ca, cb) = (
            pop.get(a).copied().unwrap_or(0),
            pop.get(b).copied().unwrap_or(0),
        );
        cb.cmp(&ca).then_with(|| a.cmp(b))
    });

    let ratio = |m: &BTreeMap<&str, usize>, cats: &[&str], n: usize| -> f64 {
        cats.iter()
            .map(|c| m.get(c).copied().unwrap_or(0))
            .sum::<usize>() as f64
            / n as f64
    };
    let mut groups: Vec<(String, Vec<&str>)> = Vec::new();
    match top_k {
        Some(k) if k < categories.len() => {
            for c in &categories[..k] {
                groups.push((c.to_string(), vec![*c]));
            }
            groups.push((OTHER_CATEGORY.to_string(), categories[k..].to_vec()));
        }
        _ => groups.extend(categories.iter().map(|c| (c.to_string(), vec![*c]))),
    }
    let rows = groups
        .into_iter()
        .map(|(category, cats)| {
            let s = ratio(&sub, &cats, subset.len());
            let p = ratio(&pop, &cats, population.len());
            TagRatioRow {
                category,
                subset_ratio: s,
                population_ratio: p,
                abs_difference: (s - p).abs(),
            }
        })
        .collect();
    Ok(TagRatioReport {
        subset_size: subset.len(),
        population_size: population.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(v: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
        v.to_vec()
    }

    /// Independent O(n^2) pair counter with the same evaluability filter.
    fn brute_force(
        pred: &[(usize, usize)],
        truth: &[(usize, usize)],
    ) -> (Option<f64>, Option<f64>) {
        let p: HashMap<usize, usize> = pred.iter().copied().collect();
        let t: HashMap<usize, usize> = truth.iter().copied().collect();
        let common: Vec<usize> = {
            let mut c: Vec<usize> = t.keys().filter(|k| p.contains_key(k)).copied().collect();
            c.sort();
            c
        };
        let ev: Vec<usize> = common
            .iter()
            .copied()
            .filter(|&i| common.iter().filter(|&&j| t[&j] == t[&i]).count() >= 2)
            .collect();
        let (mut pp, mut tp, mut both) = (0u64, 0u64, 0u64);
        for a in 0..ev.len() {
            for b in a + 1..ev.len() {
                let same_p = p[&ev[a]] == p[&ev[b]];
                let same_t = t[&ev[a]] == t[&ev[b]];
                pp += same_p as u64;
                tp += same_t as u64;
                both += (same_p && same_t) as u64;
            }
        }
        (
            (pp > 0).then(|| both as f64 / pp as f64),
            (tp > 0).then(|| both as f64 / tp as f64),
        )
    }

    #[test]
    fn worked_example() {
        // pairs ab, ac, bc predicted; ab, cd true
        let pred = labels(&[("a", "1"), ("b", "1"), ("c", "1"), ("d", "2")]);
        let truth = labels(&[("a", "X"), ("b", "X"), ("c", "Y"), ("d", "Y")]);
        let r = pairwise_metrics(pred, truth);
        assert_eq!(r.precision, Some(1.0 / 3.0));
        assert_eq!(r.recall, Some(0.5));
        assert!((r.f1.unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(
            (
                r.predicted_clusters,
                r.truth_clusters,
                r.evaluable_instances
            ),
            (2, 2, 4)
        );
    }

    #[test]
    fn identity_and_degenerate_cases() {
        let truth = labels(&[("a", "X"), ("b", "X"), ("c", "Y"), ("d", "Y")]);
        let r = pairwise_metrics(truth.clone(), truth.clone());
        assert_eq!(
            (r.precision, r.recall, r.f1),
            (Some(1.0), Some(1.0), Some(1.0))
        );
        let singles = labels(&[("a", "1"), ("b", "2"), ("c", "3"), ("d", "4")]);
        let r = pairwise_metrics(singles, truth);
        assert_eq!((r.precision, r.recall, r.f1), (None, Some(0.0), None));
        let r = pairwise_metrics(labels(&[("a", "1")]), labels(&[("a", "X")]));
        assert_eq!(r.recall, None);
        assert_eq!(r.evaluable_instances, 0);
    }

    #[test]
    fn instances_without_comparable_pairs_are_excluded() {
        // e is the only instance of author Z; its false merge is not counted
        let pred = labels(&[("a", "1"), ("b", "1"), ("e", "1")]);
        let truth = labels(&[("a", "X"), ("b", "X"), ("e", "Z"), ("q", "X")]);
        let r = pairwise_metrics(pred, truth);
        assert_eq!(r.precision, Some(1.0));
        assert_eq!(r.evaluable_instances, 2);
    }

    /// (instance, cluster) assignments for a prediction and a truth.
    type Partitions = (Vec<(usize, usize)>, Vec<(usize, usize)>);

    fn arb_partitions() -> impl Strategy<Value = Partitions> {
        (1usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0usize..6), 0..n),
                prop::collection::vec((0..n, 0usize..6), 0..n),
            )
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force((pred, truth) in arb_partitions()) {
            let dedup = |v: Vec<(usize, usize)>| -> Vec<(usize, usize)> {
                v.into_iter().collect::<BTreeMap<_, _>>().into_iter().collect()
            };
            let (pred, truth) = (dedup(pred), dedup(truth));
            let r = pairwise_metrics(pred.clone(), truth.clone());
            let (p, rr) = brute_force(&pred, &truth);
            prop_assert_eq!(r.precision, p);
            prop_assert_eq!(r.recall, rr);
        }

        #[test]
        fn invariant_under_relabeling((pred, truth) in arb_partitions(), shift in 1usize..100) {
            let a = pairwise_metrics(pred.clone(), truth.clone());
            let pred2: Vec<_> = pred.iter().map(|&(k, c)| (k, (c * 7 + shift).to_string())).collect();
            let truth2: Vec<_> = truth.iter().map(|&(k, c)| (k, format!("t{}", c + shift))).collect();
            let b = pairwise_metrics(pred2, truth2);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn precision_and_recall_swap_with_roles() {
        // with every author represented at least twice on both sides the
        // evaluability filter is symmetric
        let a = vec![(0, 0), (1, 0), (2, 0), (3, 1), (4, 1), (5, 1)];
        let b = vec![(0, 0), (1, 0), (2, 1), (3, 1), (4, 2), (5, 2)];
        let x = pairwise_metrics(a.clone(), b.clone());
        let y = pairwise_metrics(b, a);
        assert_eq!(x.precision, y.recall);
        assert_eq!(x.recall, y.precision);
    }

    #[test]
    fn block_stats_exact_power_law() {
        // r(1)=1, r(2)=1/4, r(4)=1/16: 12 blocks of 1, 3 of 2, 1 of 4
        let mut keys = Vec::new();
        for b in 0..12 {
            keys.push(format!("s{b}"));
        }
        for b in 0..3 {
            keys.extend(std::iter::repeat_n(format!("d{b}"), 2));
        }
        keys.extend(std::iter::repeat_n("q".to_string(), 4));
        let stats = block_stats(&keys, (1, 60));
        assert_eq!(stats.blocks, 16);
        assert_eq!(stats.ratio_at(1), 1.0);
        assert_eq!(stats.ratio_at(2), 0.25);
        let fit = stats.fit.unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn labeled_blocks_start_at_two() {
        let keys = ["a", "a", "b", "b", "b", "c", "c"];
        let stats = block_stats(keys, (1, 60));
        assert_eq!(stats.ratio_at(1), 1.0);
        assert_eq!(stats.ratio_at(2), 1.0);
        assert_eq!(stats.cumulative[0].size, 2);
        assert!((stats.ratio_at(3) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fit_needs_two_sizes() {
        let stats = block_stats(["a", "b"], (1, 60));
        assert!(stats.fit.is_none());
        assert!(block_stats(Vec::<String>::new(), (1, 60)).fit.is_none());
    }

    proptest! {
        #[test]
        fn cumulative_ratio_is_non_increasing(sizes in prop::collection::vec(1usize..30, 1..40)) {
            let mut keys = Vec::new();
            for (b, s) in sizes.iter().enumerate() {
                keys.extend(std::iter::repeat_n(format!("k{b}"), *s));
            }
            let stats = block_stats(&keys, (1, 60));
            prop_assert_eq!(stats.ratio_at(1), 1.0);
            for w in stats.cumulative.windows(2) {
                prop_assert!(w[1].ratio < w[0].ratio);
            }
            // growing a block never raises r(n) below its old size
            let old = sizes[0];
            keys.push("k0".into());
            let grown = block_stats(&keys, (1, 60));
            for n in 1..=old {
                prop_assert!(grown.ratio_at(n) <= stats.ratio_at(n));
            }
        }
    }

    #[test]
    fn tag_ratio_cases() {
        let tags: HashMap<String, String> = [
            ("a", "Chinese"),
            ("b", "English"),
            ("c", "Chinese"),
            ("d", "Korean"),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        let pop = ["a", "b", "c", "d", "e"];
        let r = tag_ratios(&pop, &pop, &tags, None).unwrap();
        assert!(r.rows.iter().all(|row| row.abs_difference == 0.0));
        assert_eq!(r.rows[0].category, "Chinese");

        // hand count: subset {a, c, e} = Chinese 2/3, Null 1/3
        let r = tag_ratios(&["a", "c", "e"], &pop, &tags, None).unwrap();
        let get = |c: &str| r.rows.iter().find(|row| row.category == c).unwrap().clone();
        assert!((get("Chinese").subset_ratio - 2.0 / 3.0).abs() < 1e-12);
        assert!((get("Chinese").population_ratio - 0.4).abs() < 1e-12);
        assert!((get("Null").subset_ratio - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(get("English").subset_ratio, 0.0);
        let total: f64 = r.rows.iter().map(|row| row.subset_ratio).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let r = tag_ratios(&pop, &pop, &tags, Some(1)).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!((r.rows[1].population_ratio - 0.6).abs() < 1e-12);

        let single: HashMap<String, String> = pop
            .iter()
            .map(|k| (k.to_string(), "X".to_string()))
            .collect();
        let r = tag_ratios(&pop[..2], &pop, &single, None).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(
            (r.rows[0].subset_ratio, r.rows[0].population_ratio),
            (1.0, 1.0)
        );

        assert!(matches!(
            tag_ratios(&pop, &pop, &HashMap::new(), None),
            Err(Error::EmptyTagMap)
        ));
    }
}
