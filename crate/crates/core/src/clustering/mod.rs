//! Per-feature clustering with transitivity closure, and iterative
//! clustering across features with feature aggregation.
//!
//! Clusters start as singleton instances. Each stage applies one matching
//! rule to the current clusters, merges every matched pair, and closes the
//! result transitively; merged clusters carry the union of their members'
//! features into later stages. The rule list is re-run in passes until a
//! full pass merges nothing.

mod union_find;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, TruthLabels};
use crate::evaluation::{pairwise_metrics, EvaluationReport};
use crate::matching::{
    match_pairs, Feature, MatchOptions, MatchPairList, MatchRule, Scheme, UnitFeatures,
};

pub use union_find::DisjointSet;

/// A cluster of instances with aggregated features.
pub type Cluster = UnitFeatures;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// 1-based stage counter across all passes.
    pub stage: usize,
    pub pass: usize,
    pub feature: Feature,
    pub scheme: Scheme,
    pub min_shared: usize,
    pub clusters: usize,
    pub merges: usize,
    pub evaluation: Option<EvaluationReport>,
}

#[derive(Clone, Debug, Default)]
pub struct ClusteringState {
    /// Disjoint clusters ordered by smallest member.
    pub clusters: Vec<Cluster>,
    pub stage_log: Vec<StageRecord>,
}

impl ClusteringState {
    /// Singleton clusters for the given instances.
    pub fn singletons(corpus: &Corpus, scope: &[usize]) -> Self {
        let mut scope = scope.to_vec();
        scope.sort_unstable();
        scope.dedup();
        Self {
            clusters: scope
                .into_iter()
                .map(|i| UnitFeatures::from_instance(i, corpus.instance(i)))
                .collect(),
            stage_log: Vec::new(),
        }
    }

    pub fn total_merges(&self) -> usize {
        self.stage_log.iter().map(|s| s.merges).sum()
    }

    /// `(instance index, cluster ordinal)` for every clustered instance.
    pub fn assignments(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .clusters
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| cl.members.iter().map(move |&m| (m, c)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Instances carrying at least one of `features`: an assigned e-mail, a
/// place in a self-citation candidate pair, or a non-empty coauthor list.
pub fn select_in_scope(corpus: &Corpus, features: &[Feature]) -> Vec<usize> {
    let mut cited = vec![false; corpus.instances().len()];
    if features.contains(&Feature::SelfCitation) {
        for c in corpus.self_citations() {
            cited[c.citing] = true;
            cited[c.cited] = true;
        }
    }
    corpus
        .instances()
        .iter()
        .enumerate()
        .filter(|(i, inst)| {
            features.iter().any(|f| match f {
                Feature::Email => inst.email.is_some(),
                Feature::SelfCitation => cited[*i],
                Feature::Coauthor => !inst.coauthors.is_empty(),
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Connected components of the graph on `0..universe` with edges `pairs`,
/// each sorted, ordered by smallest member.
pub fn transitive_closure(pairs: &[(usize, usize)], universe: usize) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(universe);
    for &(a, b) in pairs {
        ds.union(a, b);
    }
    ds.components()
}

/// One stage: match the units under `rule`, merge matched pairs, and close
/// transitively. Returns the new clusters (ordered by smallest member) and
/// the pair list that produced them.
pub fn per_feature_cluster(
    units: Vec<Cluster>,
    rule: &MatchRule,
    corpus: &Corpus,
    opts: &MatchOptions,
) -> (Vec<Cluster>, MatchPairList) {
    let pairs = match_pairs(&units, rule, corpus, opts);
    if pairs.is_empty() {
        return (units, pairs);
    }
    let components = transitive_closure(pairs.pairs(), units.len());
    let mut slots: Vec<Option<Cluster>> = units.into_iter().map(Some).collect();
    let mut merged: Vec<Cluster> = components
        .into_iter()
        .map(|comp| {
            let mut it = comp.into_iter();
            let mut acc = slots[it.next().expect("components are non-empty")]
                .take()
                .expect("each unit belongs to one component");
            for u in it {
                acc.absorb(slots[u].take().expect("each unit belongs to one component"));
            }
            acc
        })
        .collect();
    merged.sort_by_key(|c| c.members[0]);
    (merged, pairs)
}

#[derive(Clone, Debug)]
pub struct IterativeConfig<'a> {
    pub rules: &'a [MatchRule],
    pub options: MatchOptions,
    /// When present, every stage is scored against these labels.
    pub truth: Option<&'a TruthLabels>,
}

/// Runs the rule list from singleton clusters over `scope` until a full
/// pass produces no merge.
pub fn iterative_cluster(
    corpus: &Corpus,
    scope: &[usize],
    config: &IterativeConfig,
) -> ClusteringState {
    continue_clustering(corpus, ClusteringState::singletons(corpus, scope), config)
}

/// Continues iterative clustering from an existing state.
pub fn continue_clustering(
    corpus: &Corpus,
    mut state: ClusteringState,
    config: &IterativeConfig,
) -> ClusteringState {
    let mut stage = state.stage_log.last().map_or(0, |s| s.stage);
    let mut pass = state.stage_log.last().map_or(0, |s| s.pass);
    if config.rules.is_empty() {
        return state;
    }
    loop {
        pass += 1;
        let mut pass_merges = 0;
        for rule in config.rules {
            let before = state.clusters.len();
            let (clusters, _) = per_feature_cluster(
                std::mem::take(&mut state.clusters),
                rule,
                corpus,
                &config.options,
            );
            state.clusters = clusters;
            let merges = before - state.clusters.len();
            pass_merges += merges;
            stage += 1;
            let evaluation = config.truth.map(|t| evaluate_state(&state, corpus, t));
            log::debug!(
                "stage {stage} (pass {pass}, {rule}): {} clusters, {merges} merges",
                state.clusters.len()
            );
            state.stage_log.push(StageRecord {
                stage,
                pass,
                feature: rule.feature,
                scheme: rule.scheme,
                min_shared: rule.min_shared,
                clusters: state.clusters.len(),
                merges,
                evaluation,
            });
        }
        if pass_merges == 0 {
            return state;
        }
    }
}

/// Pairwise metrics of the current clusters against truth labels.
pub fn evaluate_state(
    state: &ClusteringState,
    corpus: &Corpus,
    truth: &TruthLabels,
) -> EvaluationReport {
    let predicted = state
        .assignments()
        .into_iter()
        .map(|(i, c)| (corpus.instance(i).instance_id.as_str(), c));
    pairwise_metrics(predicted, truth.iter())
}

/// Cluster id of the `ordinal`-th cluster (ordered by smallest member).
pub fn cluster_id(ordinal: usize) -> String {
    format!("{:03}", ordinal + 1)
}

/// `(instance_id, cluster_id)` for every clustered instance, in corpus
/// order. Ids number clusters by their smallest member.
pub fn emit_labels(state: &ClusteringState, corpus: &Corpus) -> Vec<(String, String)> {
    state
        .assignments()
        .into_iter()
        .map(|(i, c)| (corpus.instance(i).instance_id.clone(), cluster_id(c)))
        .collect()
}

/// Like [`emit_labels`], restricted to clusters of at least `min_size`
/// members. With `min_size = 2` this is the labeled subset: instances
/// linked to at least one other instance by some rule. Cluster ids are
/// the same as in the unrestricted output.
pub fn emit_grouped_labels(
    state: &ClusteringState,
    corpus: &Corpus,
    min_size: usize,
) -> Vec<(String, String)> {
    state
        .assignments()
        .into_iter()
        .filter(|&(_, c)| state.clusters[c].members.len() >= min_size)
        .map(|(i, c)| (corpus.instance(i).instance_id.clone(), cluster_id(c)))
        .collect()
}

pub const STAGE_LOG_HEADER: &str = "stage,feature,scheme,clusters,merges,pP,pR,pF1";

/// Stage log as CSV. Undefined or absent scores are written as
/// `undefined` / empty respectively.
pub fn stage_log_csv(log: &[StageRecord]) -> String {
    let fmt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.4}"));
    let mut out = String::from(STAGE_LOG_HEADER);
    out.push('\n');
    for s in log {
        let scheme = if s.feature == Feature::Coauthor {
            format!("{}>={}", s.scheme, s.min_shared)
        } else {
            s.scheme.to_string()
        };
        let _ = write!(
            out,
            "{},{},{},{},{}",
            s.stage, s.feature, scheme, s.clusters, s.merges
        );
        match &s.evaluation {
            Some(e) => {
                let _ = writeln!(out, ",{},{},{}", fmt(e.precision), fmt(e.recall), fmt(e.f1));
            }
            None => out.push_str(",,,\n"),
        }
    }
    out
}

/// Features used by a rule list, for [`select_in_scope`].
pub fn rule_features(rules: &[MatchRule]) -> Vec<Feature> {
    rules
        .iter()
        .map(|r| r.feature)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusOptions, PublicationRecord};
    use proptest::prelude::*;

    /// Independent BFS component finder.
    fn bfs_components(pairs: &[(usize, usize)], n: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    #[test]
    fn closure_of_worked_example() {
        // #1..#5 as 0..4: [#1,#3], [#1,#4], [#2,#5]
        let comps = transitive_closure(&[(0, 2), (0, 3), (1, 4)], 5);
        assert_eq!(comps, vec![vec![0, 2, 3], vec![1, 4]]);
        assert_eq!(transitive_closure(&[], 3), vec![vec![0], vec![1], vec![2]]);
    }

    proptest! {
        #[test]
        fn closure_equals_bfs(n in 1usize..50, raw in prop::collection::vec((0usize..50, 0usize..50), 0..80)) {
            let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            prop_assert_eq!(transitive_closure(&pairs, n), bfs_components(&pairs, n));
        }
    }

    fn record(id: &str, authors: &[&str], emails: &[&str], cites: &[&str]) -> PublicationRecord {
        PublicationRecord {
            paper_id: id.into(),
            doi: Some(format!("10.1/{}", id.to_lowercase())),
            title: String::new(),
            year: Some(2015),
            authors: authors.iter().map(|s| s.to_string()).collect(),
            emails: emails.iter().map(|s| s.to_string()).collect(),
            cited_keys: cites.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn empty_scope_is_valid() {
        let corpus = Corpus::build(
            vec![record("P1", &["A B"], &[], &[])],
            &[],
            &CorpusOptions::default(),
        )
        .unwrap();
        let rules = MatchRule::default_rules();
        let scope = select_in_scope(&corpus, &rule_features(&rules));
        assert!(scope.is_empty());
        let state = iterative_cluster(
            &corpus,
            &scope,
            &IterativeConfig {
                rules: &rules,
                options: MatchOptions::default(),
                truth: None,
            },
        );
        assert!(state.clusters.is_empty());
        assert_eq!(state.stage_log.len(), 3);
        assert!(emit_labels(&state, &corpus).is_empty());
    }

    #[test]
    fn scope_selection() {
        let corpus = Corpus::build(
            vec![
                record("P1", &["Mark Nolan"], &["mnolan@x.edu"], &[]),
                record("P2", &["Sole Author"], &[], &[]),
                record("P3", &["Al Pha", "Be Ta"], &[], &["10.1/p1"]),
            ],
            &[],
            &CorpusOptions::default(),
        )
        .unwrap();
        assert_eq!(select_in_scope(&corpus, &[Feature::Email]), vec![0]);
        assert_eq!(
            select_in_scope(&corpus, &[Feature::SelfCitation]),
            vec![0, 2, 3]
        );
        assert_eq!(select_in_scope(&corpus, &Feature::ALL), vec![0, 2, 3]);
    }

    /// Five papers, each by a Nolan variant and one coauthor; P2 cites P1.
    /// Returns the corpus and the Nolan instances as units with the given
    /// e-mail sets.
    fn worked_example(emails: [&[&str]; 5]) -> (Corpus, Vec<Cluster>) {
        let names = [
            "Mark Nolan",
            "M. Nolan",
            "M.E.J. Nolan",
            "Nolan M.",
            "M. Nolan",
        ];
        let coauthors = ["Ann Coa", "Bob Cob", "Cy Coc", "Dee Cod", "Dee Cod"];
        let records = (0..5)
            .map(|i| {
                let cites: Vec<&str> = if i == 1 { vec!["10.1/p1"] } else { vec![] };
                record(
                    &format!("P{}", i + 1),
                    &[names[i], coauthors[i]],
                    &[],
                    &cites,
                )
            })
            .collect();
        let corpus = Corpus::build(records, &[], &CorpusOptions::default()).unwrap();
        let units = (0..5)
            .map(|p| {
                let idx = corpus.paper_span(p).start;
                let mut u = UnitFeatures::from_instance(idx, corpus.instance(idx));
                u.emails = emails[p].iter().map(|e| e.to_string()).collect();
                u
            })
            .collect();
        (corpus, units)
    }

    fn partition_ids(clusters: &[Cluster], corpus: &Corpus) -> Vec<Vec<String>> {
        clusters
            .iter()
            .map(|c| {
                c.members
                    .iter()
                    .map(|&m| corpus.instance(m).paper_id.clone())
                    .collect()
            })
            .collect()
    }

    const E1: &str = "mark@northu.edu";
    const E2: &str = "mejn@westinst.edu";
    const E3: &str = "mnolan@ibm.com";

    #[test]
    fn email_stage_of_worked_example() {
        let (corpus, units) =
            worked_example([&[E1, E2], &["m1@a.org"], &[E1], &[E2], &["m2@b.org"]]);
        let rule = MatchRule::new(Feature::Email, Scheme::FullString, 1).unwrap();
        let (clusters, pairs) =
            per_feature_cluster(units, &rule, &corpus, &MatchOptions::default());
        let p = |c: &Cluster| c.members[0];
        assert_eq!(pairs.len(), 2);
        assert_eq!(
            partition_ids(&clusters, &corpus),
            vec![vec!["P1", "P3", "P4"], vec!["P2"], vec!["P5"]]
        );
        assert_eq!(clusters.iter().map(p).collect::<Vec<_>>(), vec![0, 2, 8]);
    }

    #[test]
    fn grouped_labels_drop_singletons() {
        let (corpus, units) =
            worked_example([&[E1, E2], &["m1@a.org"], &[E1], &[E2], &["m2@b.org"]]);
        let email = [MatchRule::new(Feature::Email, Scheme::FullString, 1).unwrap()];
        let cfg = IterativeConfig {
            rules: &email,
            options: MatchOptions::default(),
            truth: None,
        };
        let state = continue_clustering(
            &corpus,
            ClusteringState {
                clusters: units,
                stage_log: vec![],
            },
            &cfg,
        );
        let all = emit_labels(&state, &corpus);
        assert_eq!(all.len(), 5);
        let grouped = emit_grouped_labels(&state, &corpus, 2);
        let ids: Vec<&str> = grouped.iter().map(|(i, _)| i.as_str()).collect();
        assert_eq!(ids, ["P1:0", "P3:0", "P4:0"]);
        assert!(grouped.iter().all(|row| all.contains(row)));
        assert_eq!(emit_grouped_labels(&state, &corpus, 1), all);
    }

    #[test]
    fn worked_example_merges_across_features() {
        let (corpus, units) = worked_example([&[E1, E2], &[E3], &[E1], &[E2], &[E3]]);
        let email = [MatchRule::new(Feature::Email, Scheme::FullString, 1).unwrap()];
        let cfg = IterativeConfig {
            rules: &email,
            options: MatchOptions::default(),
            truth: None,
        };
        let state = continue_clustering(
            &corpus,
            ClusteringState {
                clusters: units,
                stage_log: vec![],
            },
            &cfg,
        );
        assert_eq!(
            partition_ids(&state.clusters, &corpus),
            vec![vec!["P1", "P3", "P4"], vec!["P2", "P5"]]
        );
        let labels = emit_labels(&state, &corpus);
        let ids: Vec<&str> = labels.iter().map(|(_, c)| c.as_str()).collect();
        assert_eq!(ids, ["001", "002", "001", "001", "002"]);

        for rules in [
            vec![MatchRule::new(Feature::Coauthor, Scheme::FullString, 1).unwrap()],
            vec![MatchRule::new(Feature::SelfCitation, Scheme::FirstInitial, 1).unwrap()],
            MatchRule::default_rules(),
        ] {
            let cfg = IterativeConfig {
                rules: &rules,
                options: MatchOptions::default(),
                truth: None,
            };
            let merged = continue_clustering(&corpus, state.clone(), &cfg);
            assert_eq!(merged.clusters.len(), 1, "rules {rules:?}");
            assert_eq!(merged.clusters[0].members, vec![0, 2, 4, 6, 8]);
            let last = merged.stage_log.last().unwrap();
            assert_eq!(last.merges, 0);
        }

        // #2 and #1 differ in full forename, so full-string self-citation alone cannot merge.
        let rules = [MatchRule::new(Feature::SelfCitation, Scheme::FullString, 1).unwrap()];
        let cfg = IterativeConfig {
            rules: &rules,
            options: MatchOptions::default(),
            truth: None,
        };
        assert_eq!(continue_clustering(&corpus, state, &cfg).clusters.len(), 2);
    }

    #[test]
    fn singleton_labels_are_distinct() {
        let (corpus, units) = worked_example([&[], &[], &[], &[], &[]]);
        let state = ClusteringState {
            clusters: units,
            stage_log: vec![],
        };
        let labels = emit_labels(&state, &corpus);
        let ids: BTreeSet<&str> = labels.iter().map(|(_, c)| c.as_str()).collect();
        assert_eq!(ids.len(), 5);
    }

    /// Small random corpora over a narrow name and e-mail pool, so that
    /// every feature fires and blocks collide.
    fn arb_corpus() -> impl Strategy<Value = Corpus> {
        const NAMES: [&str; 8] = [
            "Mark Nolan",
            "M. Nolan",
            "Mike Nolan",
            "Jin Kim",
            "J. Kim",
            "Roberto Silva",
            "Ann Lee",
            "A. Lee",
        ];
        let paper = (
            prop::collection::btree_set(0usize..NAMES.len(), 1..4),
            prop::collection::vec(0usize..6, 0..3),
            prop::collection::vec(0usize..12, 0..3),
        );
        prop::collection::vec(paper, 1..12).prop_map(|papers| {
            let n = papers.len();
            let records = papers
                .into_iter()
                .enumerate()
                .map(|(i, (authors, emails, cites))| {
                    let authors: Vec<String> =
                        authors.into_iter().map(|a| NAMES[a].to_string()).collect();
                    let emails: Vec<String> = emails
                        .into_iter()
                        .map(|e| {
                            [
                                "mnolan@a.edu",
                                "mark@b.edu",
                                "jkim@c.edu",
                                "roberto@d.edu",
                                "alee@e.edu",
                                "lee@f.edu",
                            ][e]
                                .to_string()
                        })
                        .collect();
                    let cites: Vec<String> = cites
                        .into_iter()
                        .map(|c| format!("10.1/p{}", c % n))
                        .collect();
                    PublicationRecord {
                        paper_id: format!("P{i}"),
                        doi: Some(format!("10.1/p{i}")),
                        authors,
                        emails,
                        cited_keys: cites,
                        ..Default::default()
                    }
                })
                .collect();
            Corpus::build(records, &[], &CorpusOptions::default()).unwrap()
        })
    }

    fn same_cluster_pairs(state: &ClusteringState) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for c in &state.clusters {
            for (i, &a) in c.members.iter().enumerate() {
                for &b in &c.members[i + 1..] {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    fn rule_sets() -> Vec<Vec<MatchRule>> {
        vec![
            MatchRule::default_rules(),
            vec![
                MatchRule::new(Feature::Email, Scheme::AlnumOnly, 1).unwrap(),
                MatchRule::new(Feature::SelfCitation, Scheme::FirstInitial, 1).unwrap(),
                MatchRule::new(Feature::Coauthor, Scheme::FirstInitial, 2).unwrap(),
            ],
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn final_partition_ignores_rule_order(corpus in arb_corpus(), restricted: bool) {
            let options = MatchOptions { email_block_restricted: restricted };
            for rules in rule_sets() {
                let scope = select_in_scope(&corpus, &rule_features(&rules));
                let mut reference: Option<Vec<Vec<usize>>> = None;
                for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    let ordered: Vec<MatchRule> = perm.iter().map(|&i| rules[i]).collect();
                    let cfg = IterativeConfig { rules: &ordered, options, truth: None };
                    let parts: Vec<Vec<usize>> = iterative_cluster(&corpus, &scope, &cfg).clusters.into_iter().map(|c| c.members).collect();
                    match &reference {
                        None => reference = Some(parts),
                        Some(r) => prop_assert_eq!(r, &parts),
                    }
                }
            }
        }

        #[test]
        fn stages_are_monotone_and_partition_scope(corpus in arb_corpus()) {
            for rules in rule_sets() {
                let scope = select_in_scope(&corpus, &rule_features(&rules));
                let cfg = IterativeConfig { rules: &rules, options: MatchOptions::default(), truth: None };
                let mut state = ClusteringState::singletons(&corpus, &scope);
                let mut prev_pairs = same_cluster_pairs(&state);
                let mut prev_count = state.clusters.len();
                // Drive one stage at a time to observe intermediate partitions.
                loop {
                    let mut pass_merges = 0;
                    for rule in &rules {
                        let (clusters, _) = per_feature_cluster(std::mem::take(&mut state.clusters), rule, &corpus, &cfg.options);
                        state.clusters = clusters;
                        let mut covered: Vec<usize> = state.clusters.iter().flat_map(|c| c.members.clone()).collect();
                        covered.sort_unstable();
                        prop_assert_eq!(&covered, &scope);
                        prop_assert!(state.clusters.len() <= prev_count);
                        let pairs = same_cluster_pairs(&state);
                        prop_assert!(prev_pairs.is_subset(&pairs));
                        pass_merges += prev_count - state.clusters.len();
                        prev_count = state.clusters.len();
                        prev_pairs = pairs;
                    }
                    if pass_merges == 0 {
                        break;
                    }
                }
                let full = iterative_cluster(&corpus, &scope, &cfg);
                prop_assert_eq!(&full.clusters, &state.clusters);
                prop_assert!(full.stage_log.windows(2).all(|w| w[1].clusters <= w[0].clusters));
            }
        }

        #[test]
        fn rerun_on_output_is_quiescent(corpus in arb_corpus()) {
            let rules = MatchRule::default_rules();
            let scope = select_in_scope(&corpus, &rule_features(&rules));
            let cfg = IterativeConfig { rules: &rules, options: MatchOptions::default(), truth: None };
            let done = iterative_cluster(&corpus, &scope, &cfg);
            let again = continue_clustering(&corpus, ClusteringState { clusters: done.clusters.clone(), stage_log: vec![] }, &cfg);
            prop_assert_eq!(again.total_merges(), 0);
            prop_assert_eq!(again.stage_log.len(), rules.len());
            prop_assert_eq!(again.clusters, done.clusters);
        }
    }

    #[test]
    fn stage_log_csv_layout() {
        let log = vec![StageRecord {
            stage: 1,
            pass: 1,
            feature: Feature::Coauthor,
            scheme: Scheme::FullString,
            min_shared: 1,
            clusters: 4,
            merges: 1,
            evaluation: None,
        }];
        assert_eq!(
            stage_log_csv(&log),
            format!("{STAGE_LOG_HEADER}\n1,coauthor,full_string>=1,4,1,,,\n")
        );
    }
}
