//! Average-linkage agglomerative clustering on pair probabilities.
//!
//! The greedy merge sequence does not depend on the stopping threshold, so
//! a block's dendrogram is built once and cut at any threshold by taking
//! the prefix of merges whose linkage is at least that threshold.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    /// Mean pairwise similarity between two clusters.
    #[default]
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HacConfig {
    pub threshold: f64,
    #[serde(default)]
    pub linkage: Linkage,
}

impl HacConfig {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            linkage: Linkage::Average,
        }
    }
}

/// Symmetric similarity matrix over `n` items.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Fills the matrix from `f(i, j)` for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Mean over all off-diagonal pairs; `None` below two items.
    pub fn mean(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        let pairs = self.n * (self.n - 1) / 2;
        let sum: f64 = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .sum();
        Some(sum / pairs as f64)
    }
}

/// Two clusters, named by their smallest items, joined at `similarity`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub similarity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    pub n: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Runs average linkage to a single cluster. Ties in linkage go to the
    /// pair with the smallest `(a, b)` item names.
    pub fn build(sim: &SimilarityMatrix) -> Self {
        let n = sim.len();
        // sums[a][b]: total similarity between the clusters named a and b.
        let mut sums: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| sim.get(i, j)).collect())
            .collect();
        let mut size = vec![1usize; n];
        let mut active: Vec<usize> = (0..n).collect();
        let mut merges = Vec::with_capacity(n.saturating_sub(1));
        while active.len() > 1 {
            let mut best: Option<(f64, usize, usize)> = None;
            for (x, &a) in active.iter().enumerate() {
                for &b in &active[x + 1..] {
                    let link = sums[a][b] / (size[a] * size[b]) as f64;
                    if best.is_none_or(|(s, _, _)| link > s) {
                        best = Some((link, a, b));
                    }
                }
            }
            let (similarity, a, b) = best.expect("at least two active clusters");
            for &c in &active {
                if c != a && c != b {
                    let s = sums[a][c] + sums[b][c];
                    sums[a][c] = s;
                    sums[c][a] = s;
                }
            }
            size[a] += size[b];
            active.retain(|&c| c != b);
            merges.push(Merge { a, b, similarity });
        }
        Self { n, merges }
    }

    /// Clusters after applying merges while their linkage is at least
    /// `threshold`. Members are sorted; clusters are ordered by smallest
    /// member.
    pub fn cut(&self, threshold: f64) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Option<Vec<usize>>> = (0..self.n).map(|i| Some(vec![i])).collect();
        for m in self.merges.iter().take_while(|m| m.similarity >= threshold) {
            let absorbed = clusters[m.b].take().expect("merged clusters are live");
            let keep = clusters[m.a].as_mut().expect("merged clusters are live");
            keep.extend(absorbed);
        }
        let mut out: Vec<Vec<usize>> = clusters.into_iter().flatten().collect();
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort_by_key(|c| c[0]);
        out
    }
}

/// Average-linkage clustering that stops when the best linkage falls below
/// the threshold.
pub fn hac_cluster(sim: &SimilarityMatrix, config: &HacConfig) -> Vec<Vec<usize>> {
    Dendrogram::build(sim).cut(config.threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(n: usize, pairs: &[((usize, usize), f64)]) -> SimilarityMatrix {
        SimilarityMatrix::from_fn(n, |i, j| {
            pairs.iter().find(|p| p.0 == (i, j)).map_or(0.0, |p| p.1)
        })
    }

    #[test]
    fn extremes() {
        let ones = SimilarityMatrix::from_fn(4, |_, _| 1.0);
        assert_eq!(
            hac_cluster(&ones, &HacConfig::new(0.5)),
            vec![vec![0, 1, 2, 3]]
        );
        let zeros = SimilarityMatrix::from_fn(4, |_, _| 0.0);
        assert_eq!(hac_cluster(&zeros, &HacConfig::new(0.1)).len(), 4);
        assert_eq!(
            hac_cluster(
                &SimilarityMatrix::from_fn(0, |_, _| 0.0),
                &HacConfig::new(0.5)
            ),
            Vec::<Vec<usize>>::new()
        );
    }

    #[test]
    fn hand_traced_average_linkage() {
        // Step 1: {0,1} at 0.9. Step 2: {2,3} at 0.8.
        // Step 3: avg({0,1},{2,3}) = (0.6 + 0.2 + 0.4 + 0.2) / 4 = 0.35.
        let sim = matrix(
            4,
            &[
                ((0, 1), 0.9),
                ((0, 2), 0.6),
                ((0, 3), 0.2),
                ((1, 2), 0.4),
                ((1, 3), 0.2),
                ((2, 3), 0.8),
            ],
        );
        let d = Dendrogram::build(&sim);
        let trace: Vec<(usize, usize, f64)> =
            d.merges.iter().map(|m| (m.a, m.b, m.similarity)).collect();
        assert_eq!(trace.len(), 3);
        assert_eq!((trace[0].0, trace[0].1), (0, 1));
        assert_eq!((trace[1].0, trace[1].1), (2, 3));
        assert!((trace[2].2 - 0.35).abs() < 1e-12);
        assert_eq!(d.cut(0.5), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(d.cut(0.35), vec![vec![0, 1, 2, 3]]);
        assert_eq!(d.cut(0.85), vec![vec![0, 1], vec![2], vec![3]]);
    }

    /// Direct average-linkage loop with a threshold, for comparison with
    /// the dendrogram cut.
    fn naive(sim: &SimilarityMatrix, t: f64) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Vec<usize>> = (0..sim.len()).map(|i| vec![i]).collect();
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for x in 0..clusters.len() {
                for y in x + 1..clusters.len() {
                    let mut s = 0.0;
                    for &i in &clusters[x] {
                        for &j in &clusters[y] {
                            s += sim.get(i, j);
                        }
                    }
                    let link = s / (clusters[x].len() * clusters[y].len()) as f64;
                    if best.is_none_or(|b| link > b.0) {
                        best = Some((link, x, y));
                    }
                }
            }
            match best {
                Some((link, x, y)) if link >= t => {
                    let moved = clusters.remove(y);
                    clusters[x].extend(moved);
                    clusters[x].sort_unstable();
                }
                _ => break,
            }
        }
        clusters.sort_by_key(|c| c[0]);
        clusters
    }

    proptest! {
        #[test]
        fn cut_matches_direct_loop(n in 0usize..9, raw in prop::collection::vec(0u8..=8, 36), t in 0u8..=8) {
            // Multiples of 1/8 keep every sum exact, so both sides see the same ties.
            let mut k = 0;
            let sim = SimilarityMatrix::from_fn(n, |_, _| { k += 1; f64::from(raw[k - 1]) / 8.0 });
            let t = f64::from(t) / 8.0;
            prop_assert_eq!(hac_cluster(&sim, &HacConfig::new(t)), naive(&sim, t));
        }
    }
}
