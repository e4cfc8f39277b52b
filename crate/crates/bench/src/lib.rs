//! Seeded inputs shared by the benchmarks.

use autolabel_core::clustering::{rule_features, select_in_scope};
use autolabel_core::corpus::{Corpus, CorpusOptions};
use autolabel_core::matching::MatchRule;
use autolabel_core::synth::{generate, SynthConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A synthetic corpus of about `instances` name instances and its in-scope
/// instances under the default rules.
pub fn synthetic(instances: usize, seed: u64) -> (Corpus, Vec<usize>) {
    let config = SynthConfig {
        n_authors: instances / 5 + 10,
        target_instances: Some(instances),
        seed,
        ..SynthConfig::default()
    };
    let s = generate(&config).expect("default synthetic config is valid");
    let corpus =
        Corpus::build(s.records, &[], &CorpusOptions::default()).expect("generated records build");
    let scope = select_in_scope(&corpus, &rule_features(&MatchRule::default_rules()));
    (corpus, scope)
}

/// `edges` uniform random pairs over `0..nodes`.
pub fn random_pairs(nodes: usize, edges: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..edges)
        .map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..nodes)))
        .collect()
}

/// Every title in the corpus.
pub fn titles(corpus: &Corpus) -> Vec<String> {
    corpus.records().iter().map(|r| r.title.clone()).collect()
}
