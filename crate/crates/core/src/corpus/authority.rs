use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::name::PersonName;
use super::Corpus;

/// An external author profile (e.g. an ORCID record): the owner's name and
/// the DOIs they claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorityProfile {
    pub authority_id: String,
    pub surname: String,
    pub forename: String,
    #[serde(default)]
    pub dois: Vec<String>,
}

/// Partial map from instance id to an authority id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthLabels(BTreeMap<String, String>);

impl TruthLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, instance_id: impl Into<String>, authority_id: impl Into<String>) {
        self.0.insert(instance_id.into(), authority_id.into());
    }

    pub fn get(&self, instance_id: &str) -> Option<&str> {
        self.0.get(instance_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.0
    }

    /// Keeps only the instances accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }
}

impl FromIterator<(String, String)> for TruthLabels {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Links corpus instances to authority profiles.
///
/// For each profile DOI found in the corpus, the instances on that paper
/// whose block key equals the owner's are candidates. A sole candidate is
/// linked; two or more candidates on one paper are all left unlinked. An
/// instance linked by two different profiles is dropped as well.
pub fn link_authority(corpus: &Corpus, profiles: &[AuthorityProfile]) -> TruthLabels {
    let mut links: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for profile in profiles {
        let Ok(owner) = PersonName::from_parts(&profile.surname, &profile.forename) else {
            log::warn!(
                "authority profile {} has no usable name",
                profile.authority_id
            );
            continue;
        };
        let owner_key = owner.block_key();
        let papers: BTreeSet<usize> = profile
            .dois
            .iter()
            .filter_map(|d| corpus.paper_index(d))
            .collect();
        for paper in papers {
            let candidates: Vec<usize> = corpus
                .paper_span(paper)
                .filter(|&i| corpus.instance(i).block_key == owner_key)
                .collect();
            if let [only] = candidates[..] {
                links.entry(only).or_default().insert(&profile.authority_id);
            }
        }
    }
    links
        .into_iter()
        .filter(|(_, ids)| ids.len() == 1)
        .map(|(i, ids)| {
            let id = ids.into_iter().next().unwrap_or_default();
            (corpus.instance(i).instance_id.clone(), id.to_string())
        })
        .collect()
}
