use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use autolabel_bench::{random_pairs, synthetic, titles};
use autolabel_core::clustering::{iterative_cluster, transitive_closure, IterativeConfig};
use autolabel_core::disambiguator::{
    cosine, ngram_profile, porter_stem, Preprocessor, TextKind, DEFAULT_NGRAMS,
};
use autolabel_core::matching::{MatchOptions, MatchRule};

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("transitive_closure");
    for nodes in [1_000, 10_000, 100_000] {
        let pairs = random_pairs(nodes, nodes, 1);
        group.throughput(Throughput::Elements(pairs.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &pairs, |b, pairs| {
            b.iter(|| transitive_closure(black_box(pairs), nodes))
        });
    }
    group.finish();
}

fn iterative(c: &mut Criterion) {
    let rules = MatchRule::default_rules();
    let config = IterativeConfig {
        rules: &rules,
        options: MatchOptions::default(),
        truth: None,
    };
    let mut group = c.benchmark_group("iterative_cluster");
    group.sample_size(10);
    for instances in [2_000, 10_000] {
        let (corpus, scope) = synthetic(instances, 42);
        group.throughput(Throughput::Elements(scope.len() as u64));
        group.bench_function(BenchmarkId::from_parameter(instances), |b| {
            b.iter(|| iterative_cluster(&corpus, black_box(&scope), &config))
        });
    }
    group.finish();
}

fn text(c: &mut Criterion) {
    let (corpus, _) = synthetic(2_000, 7);
    let titles = titles(&corpus);
    let pre = Preprocessor::default();

    c.bench_function("porter_stem/title_words", |b| {
        b.iter(|| {
            for t in &titles {
                for w in t.split_whitespace() {
                    black_box(porter_stem(&w.to_ascii_lowercase()));
                }
            }
        })
    });

    let profiles: Vec<_> = titles
        .iter()
        .map(|t| ngram_profile(&pre.preprocess(t, TextKind::Title), &DEFAULT_NGRAMS))
        .collect();
    c.bench_function("ngram_profile/title", |b| {
        b.iter(|| {
            ngram_profile(
                &pre.preprocess(black_box(&titles[0]), TextKind::Title),
                &DEFAULT_NGRAMS,
            )
        })
    });
    c.bench_function("cosine/100x100_titles", |b| {
        b.iter(|| {
            let mut total = 0.0;
            for p in &profiles[..100] {
                for q in &profiles[100..200] {
                    total += cosine(p, q);
                }
            }
            total
        })
    });
}

criterion_group!(benches, closure, iterative, text);
criterion_main!(benches);
