//! Identity-matching rules over name instances and clusters.
//!
//! A rule pairs a feature (e-mail, self-citation, coauthor) with a string
//! comparison scheme. Predicates work on [`UnitFeatures`], which describe
//! either a single instance or a cluster carrying the union of its members'
//! features; all predicates are monotone in those feature sets.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    alpha_local_part, local_part, Corpus, NameInstance, PersonName, SelfCitationCandidate,
    TruthLabels,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Email,
    SelfCitation,
    Coauthor,
}

impl Feature {
    pub const ALL: [Feature; 3] = [Feature::Email, Feature::SelfCitation, Feature::Coauthor];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Email => "email",
            Feature::SelfCitation => "self_citation",
            Feature::Coauthor => "coauthor",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Whole address, or full normalized name.
    FullString,
    /// Local part of the address.
    PreAt,
    /// Local part with non-alphanumerics deleted.
    AlnumOnly,
    /// First forename initial plus full surname.
    FirstInitial,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::FullString => "full_string",
            Scheme::PreAt => "pre_at",
            Scheme::AlnumOnly => "alnum_only",
            Scheme::FirstInitial => "first_initial",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_min_shared() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchRule {
    pub feature: Feature,
    pub scheme: Scheme,
    /// Minimum number of shared coauthors; ignored by other features.
    #[serde(default = "default_min_shared")]
    pub min_shared: usize,
}

impl MatchRule {
    pub fn new(feature: Feature, scheme: Scheme, min_shared: usize) -> Result<Self> {
        let rule = Self {
            feature,
            scheme,
            min_shared,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.feature {
            Feature::Email => matches!(
                self.scheme,
                Scheme::FullString | Scheme::PreAt | Scheme::AlnumOnly
            ),
            Feature::SelfCitation | Feature::Coauthor => {
                matches!(self.scheme, Scheme::FullString | Scheme::FirstInitial)
            }
        };
        if !ok {
            return Err(Error::InvalidRule(format!(
                "scheme {} is not defined for feature {}",
                self.scheme, self.feature
            )));
        }
        if self.min_shared == 0 {
            return Err(Error::InvalidRule("min_shared must be at least 1".into()));
        }
        Ok(())
    }

    /// Self-citation, coauthor (one shared coauthor), then e-mail, all on
    /// full strings.
    pub fn default_rules() -> Vec<MatchRule> {
        vec![
            MatchRule {
                feature: Feature::SelfCitation,
                scheme: Scheme::FullString,
                min_shared: 1,
            },
            MatchRule {
                feature: Feature::Coauthor,
                scheme: Scheme::FullString,
                min_shared: 1,
            },
            MatchRule {
                feature: Feature::Email,
                scheme: Scheme::FullString,
                min_shared: 1,
            },
        ]
    }
}

impl fmt::Display for MatchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.feature, self.scheme)?;
        if self.feature == Feature::Coauthor {
            write!(f, "/k={}", self.min_shared)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOptions {
    /// Only compare e-mails of units that share a block.
    #[serde(default)]
    pub email_block_restricted: bool,
}

/// Features of an instance, or the aggregate features of a cluster.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitFeatures {
    /// Sorted instance indices.
    pub members: Vec<usize>,
    pub names: BTreeSet<PersonName>,
    pub block_keys: BTreeSet<String>,
    pub emails: BTreeSet<String>,
    pub coauthors: BTreeSet<PersonName>,
}

impl UnitFeatures {
    pub fn from_instance(idx: usize, inst: &NameInstance) -> Self {
        Self {
            members: vec![idx],
            names: BTreeSet::from([inst.name.clone()]),
            block_keys: BTreeSet::from([inst.block_key.clone()]),
            emails: inst.email.iter().cloned().collect(),
            coauthors: inst.coauthors.iter().cloned().collect(),
        }
    }

    /// Union of member features.
    pub fn absorb(&mut self, other: UnitFeatures) {
        self.members.extend(other.members);
        self.members.sort_unstable();
        self.names.extend(other.names);
        self.block_keys.extend(other.block_keys);
        self.emails.extend(other.emails);
        self.coauthors.extend(other.coauthors);
    }

    pub fn shares_block(&self, other: &UnitFeatures) -> bool {
        !self.block_keys.is_disjoint(&other.block_keys)
    }
}

/// Comparison key of an address under an e-mail scheme.
pub fn email_key(email: &str, scheme: Scheme) -> Option<String> {
    let key = match scheme {
        Scheme::FullString => email.to_string(),
        Scheme::PreAt => local_part(email).to_string(),
        Scheme::AlnumOnly => local_part(email)
            .chars()
            .filter(char::is_ascii_alphanumeric)
            .collect(),
        Scheme::FirstInitial => alpha_local_part(email),
    };
    (!key.is_empty()).then_some(key)
}

/// Comparison key of a name under a name scheme.
pub fn name_key(name: &PersonName, scheme: Scheme) -> String {
    match scheme {
        Scheme::FirstInitial => name.block_key(),
        _ => name.to_string(),
    }
}

pub fn names_match(a: &PersonName, b: &PersonName, scheme: Scheme) -> bool {
    name_key(a, scheme) == name_key(b, scheme)
}

/// True iff some address of `a` equals some address of `b` under `scheme`.
pub fn match_email(a: &UnitFeatures, b: &UnitFeatures, scheme: Scheme) -> bool {
    let keys: HashSet<String> = a
        .emails
        .iter()
        .filter_map(|e| email_key(e, scheme))
        .collect();
    b.emails
        .iter()
        .filter_map(|e| email_key(e, scheme))
        .any(|k| keys.contains(&k))
}

/// Whether the two instances of a self-citation candidate have matching
/// names.
pub fn match_self_citation(
    candidate: SelfCitationCandidate,
    scheme: Scheme,
    corpus: &Corpus,
) -> bool {
    names_match(
        &corpus.instance(candidate.citing).name,
        &corpus.instance(candidate.cited).name,
        scheme,
    )
}

/// Number of distinct coauthor keys the two units share under `scheme`.
pub fn shared_coauthors(a: &UnitFeatures, b: &UnitFeatures, scheme: Scheme) -> usize {
    let keys: HashSet<String> = a.coauthors.iter().map(|c| name_key(c, scheme)).collect();
    b.coauthors
        .iter()
        .map(|c| name_key(c, scheme))
        .collect::<HashSet<_>>()
        .intersection(&keys)
        .count()
}

/// True iff the units share a block and at least `min_shared` coauthors.
pub fn match_coauthor(
    a: &UnitFeatures,
    b: &UnitFeatures,
    scheme: Scheme,
    min_shared: usize,
) -> bool {
    a.shares_block(b) && shared_coauthors(a, b, scheme) >= min_shared
}

/// Direct evaluation of `rule` on two units. Pair generation in
/// [`match_pairs`] uses inverted indexes instead; this is the reference it
/// must agree with.
pub fn match_units(
    a: &UnitFeatures,
    b: &UnitFeatures,
    rule: &MatchRule,
    corpus: &Corpus,
    opts: &MatchOptions,
) -> bool {
    match rule.feature {
        Feature::Email => {
            (!opts.email_block_restricted || a.shares_block(b)) && match_email(a, b, rule.scheme)
        }
        Feature::Coauthor => match_coauthor(a, b, rule.scheme, rule.min_shared),
        Feature::SelfCitation => corpus.self_citations().iter().any(|c| {
            let crosses = (a.members.binary_search(&c.citing).is_ok()
                && b.members.binary_search(&c.cited).is_ok())
                || (b.members.binary_search(&c.citing).is_ok()
                    && a.members.binary_search(&c.cited).is_ok());
            crosses && match_self_citation(*c, rule.scheme, corpus)
        }),
    }
}

/// Unordered, duplicate-free pairs of unit indices, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchPairList(Vec<(usize, usize)>);

impl MatchPairList {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut v: Vec<(usize, usize)> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All unit pairs satisfying `rule`.
pub fn match_pairs(
    units: &[UnitFeatures],
    rule: &MatchRule,
    corpus: &Corpus,
    opts: &MatchOptions,
) -> MatchPairList {
    match rule.feature {
        Feature::Email => email_pairs(units, rule.scheme, opts.email_block_restricted),
        Feature::SelfCitation => self_citation_pairs(units, rule.scheme, corpus),
        Feature::Coauthor => coauthor_pairs(units, rule.scheme, rule.min_shared),
    }
}

fn bucket_pairs<K: std::hash::Hash + Eq>(buckets: HashMap<K, Vec<usize>>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for mut units in buckets.into_values() {
        units.sort_unstable();
        units.dedup();
        for i in 0..units.len() {
            for j in i + 1..units.len() {
                out.push((units[i], units[j]));
            }
        }
    }
    out
}

fn email_pairs(units: &[UnitFeatures], scheme: Scheme, block_restricted: bool) -> MatchPairList {
    let mut buckets: HashMap<(String, String), Vec<usize>> = HashMap::new();
    for (u, unit) in units.iter().enumerate() {
        let keys: BTreeSet<String> = unit
            .emails
            .iter()
            .filter_map(|e| email_key(e, scheme))
            .collect();
        for key in keys {
            if block_restricted {
                for block in &unit.block_keys {
                    buckets
                        .entry((block.clone(), key.clone()))
                        .or_default()
                        .push(u);
                }
            } else {
                buckets.entry((String::new(), key)).or_default().push(u);
            }
        }
    }
    MatchPairList::from_pairs(bucket_pairs(buckets))
}

fn self_citation_pairs(units: &[UnitFeatures], scheme: Scheme, corpus: &Corpus) -> MatchPairList {
    let mut unit_of: HashMap<usize, usize> = HashMap::new();
    for (u, unit) in units.iter().enumerate() {
        for &m in &unit.members {
            unit_of.insert(m, u);
        }
    }
    MatchPairList::from_pairs(corpus.self_citations().iter().filter_map(|c| {
        let (u, v) = (*unit_of.get(&c.citing)?, *unit_of.get(&c.cited)?);
        (u != v && match_self_citation(*c, scheme, corpus)).then_some((u, v))
    }))
}

fn coauthor_pairs(units: &[UnitFeatures], scheme: Scheme, min_shared: usize) -> MatchPairList {
    let mut interned: HashMap<String, u32> = HashMap::new();
    let mut buckets: HashMap<(String, u32), Vec<usize>> = HashMap::new();
    for (u, unit) in units.iter().enumerate() {
        let keys: BTreeSet<u32> = unit
            .coauthors
            .iter()
            .map(|c| {
                let next = interned.len() as u32;
                *interned.entry(name_key(c, scheme)).or_insert(next)
            })
            .collect();
        for block in &unit.block_keys {
            for &k in &keys {
                buckets.entry((block.clone(), k)).or_default().push(u);
            }
        }
    }
    let mut shared: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    for ((_, k), mut members) in buckets {
        members.sort_unstable();
        members.dedup();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                shared.entry((members[i], members[j])).or_default().push(k);
            }
        }
    }
    MatchPairList::from_pairs(shared.into_iter().filter_map(|(pair, mut ks)| {
        ks.sort_unstable();
        ks.dedup();
        (ks.len() >= min_shared).then_some(pair)
    }))
}

/// Instance-level pairs found by `rule` among the instances in `scope`
/// (instance indices). Returned pairs are instance indices.
pub fn instance_match_pairs(
    corpus: &Corpus,
    scope: &[usize],
    rule: &MatchRule,
    opts: &MatchOptions,
) -> Vec<(usize, usize)> {
    let units: Vec<UnitFeatures> = scope
        .iter()
        .map(|&i| UnitFeatures::from_instance(i, corpus.instance(i)))
        .collect();
    match_pairs(&units, rule, corpus, opts)
        .pairs()
        .iter()
        .map(|&(a, b)| (scope[a], scope[b]))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleAccuracyReport {
    /// All pairs the rule matched.
    pub match_pairs: usize,
    /// Matched pairs whose instances both carry truth labels.
    pub evaluable_pairs: usize,
    /// Evaluable pairs with equal authority ids.
    pub true_match: usize,
    /// `true_match / evaluable_pairs`; `None` when nothing is evaluable.
    pub accuracy: Option<f64>,
}

impl RuleAccuracyReport {
    pub fn from_counts(match_pairs: usize, evaluable_pairs: usize, true_match: usize) -> Self {
        Self {
            match_pairs,
            evaluable_pairs,
            true_match,
            accuracy: (evaluable_pairs > 0).then(|| true_match as f64 / evaluable_pairs as f64),
        }
    }
}

/// Accuracy of matched instance-id pairs against truth labels.
pub fn evaluate_rule<S: AsRef<str>>(matched: &[(S, S)], truth: &TruthLabels) -> RuleAccuracyReport {
    let mut evaluable = 0;
    let mut correct = 0;
    for (a, b) in matched {
        if let (Some(x), Some(y)) = (truth.get(a.as_ref()), truth.get(b.as_ref())) {
            evaluable += 1;
            if x == y {
                correct += 1;
            }
        }
    }
    RuleAccuracyReport::from_counts(matched.len(), evaluable, correct)
}
