//! Publication records, name instances, and the identity features extracted
//! from them: assigned e-mail addresses, coauthor lists, and citation links
//! between papers (the source of self-citation candidates).

mod authority;
mod email;
pub mod io;
mod name;

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use authority::{link_authority, AuthorityProfile, TruthLabels};
pub use email::{
    alpha_local_part, assign_emails, email_candidates, local_part, normalize_email, CandidateRank,
    EmailCandidate,
};
pub use name::{normalize_name, PersonName};

/// One paper as ingested.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub paper_id: String,
    #[serde(default)]
    pub doi: Option<String>,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub year: Option<i32>,
    pub authors: Vec<String>,
    #[serde(default)]
    pub emails: Vec<String>,
    #[serde(default)]
    pub cited_keys: Vec<String>,
}

/// One occurrence of an author name on one paper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameInstance {
    pub instance_id: String,
    pub paper: usize,
    pub paper_id: String,
    pub position: usize,
    pub raw_name: String,
    pub name: PersonName,
    pub block_key: String,
    pub email: Option<String>,
    pub coauthors: Vec<PersonName>,
}

/// `citing` cites `cited`; both are paper indices into the corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CitationEdge {
    pub citing: usize,
    pub cited: usize,
}

/// An instance on a citing paper paired with an instance on the cited
/// paper. Both fields are instance indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelfCitationCandidate {
    pub citing: usize,
    pub cited: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusOptions {
    pub email_candidates: Vec<EmailCandidate>,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self {
            email_candidates: EmailCandidate::DEFAULT_SET.to_vec(),
        }
    }
}

pub fn instance_id(paper_id: &str, position: usize) -> String {
    format!("{paper_id}:{position}")
}

/// Lowercases and trims a DOI and strips resolver prefixes.
pub fn normalize_doi(raw: &str) -> Option<String> {
    let mut doi = raw.trim().to_lowercase();
    for prefix in [
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    ] {
        if let Some(rest) = doi.strip_prefix(prefix) {
            doi = rest.trim().to_string();
            break;
        }
    }
    (!doi.is_empty()).then_some(doi)
}

/// Every other byline name, in byline order.
pub fn build_coauthor_lists(byline: &[PersonName]) -> Vec<Vec<PersonName>> {
    (0..byline.len())
        .map(|i| {
            byline
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, n)| n.clone())
                .collect()
        })
        .collect()
}

/// Resolves cited keys and supplemental `(citing, cited)` key pairs to
/// paper indices. A key resolves when it equals a paper id or, after DOI
/// normalization, a paper DOI. Unresolvable keys and self-loops are
/// dropped; the result is sorted and duplicate-free.
pub fn extract_citations(
    records: &[PublicationRecord],
    supplemental: &[(String, String)],
) -> Vec<CitationEdge> {
    let lookup = KeyLookup::new(records);
    let mut edges = BTreeSet::new();
    for (citing, record) in records.iter().enumerate() {
        for key in &record.cited_keys {
            if let Some(cited) = lookup.resolve(key) {
                edges.insert(CitationEdge { citing, cited });
            }
        }
    }
    for (a, b) in supplemental {
        if let (Some(citing), Some(cited)) = (lookup.resolve(a), lookup.resolve(b)) {
            edges.insert(CitationEdge { citing, cited });
        }
    }
    edges.into_iter().filter(|e| e.citing != e.cited).collect()
}

/// Pairs every instance on a citing paper with every instance on the paper
/// it cites. `spans[p]` is the instance index range of paper `p`.
pub fn build_self_citation_candidates(
    edges: &[CitationEdge],
    spans: &[Range<usize>],
) -> Vec<SelfCitationCandidate> {
    let mut out = Vec::new();
    for edge in edges {
        for citing in spans[edge.citing].clone() {
            for cited in spans[edge.cited].clone() {
                out.push(SelfCitationCandidate { citing, cited });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct KeyLookup {
    by_id: HashMap<String, usize>,
    by_doi: HashMap<String, usize>,
}

impl KeyLookup {
    fn new(records: &[PublicationRecord]) -> Self {
        let mut by_id = HashMap::new();
        let mut by_doi = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            by_id.entry(r.paper_id.clone()).or_insert(i);
            if let Some(doi) = r.doi.as_deref().and_then(normalize_doi) {
                by_doi.entry(doi).or_insert(i);
            }
        }
        Self { by_id, by_doi }
    }

    fn resolve(&self, key: &str) -> Option<usize> {
        let key = key.trim();
        self.by_id
            .get(key)
            .or_else(|| normalize_doi(key).and_then(|d| self.by_doi.get(&d)))
            .copied()
    }
}

/// An immutable corpus with all features extracted.
#[derive(Clone, Debug)]
pub struct Corpus {
    records: Vec<PublicationRecord>,
    instances: Vec<NameInstance>,
    spans: Vec<Range<usize>>,
    instance_lookup: HashMap<String, usize>,
    paper_lookup: KeyLookup,
    citations: Vec<CitationEdge>,
    self_citations: Vec<SelfCitationCandidate>,
}

impl Corpus {
    /// Normalizes names, assigns e-mails, builds coauthor lists, and
    /// resolves citations. Fails on a duplicate paper id, an empty byline,
    /// or a byline name that normalizes to nothing.
    pub fn build(
        mut records: Vec<PublicationRecord>,
        supplemental: &[(String, String)],
        options: &CorpusOptions,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, r) in records.iter_mut().enumerate() {
            if seen.insert(r.paper_id.clone(), i).is_some() {
                return Err(Error::InvalidConfig(format!(
                    "duplicate paper id {:?}",
                    r.paper_id
                )));
            }
            if r.authors.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "paper {:?} has an empty byline",
                    r.paper_id
                )));
            }
            r.doi = r.doi.as_deref().and_then(normalize_doi);
        }

        let per_record: Vec<Vec<NameInstance>> = records
            .par_iter()
            .enumerate()
            .map(|(paper, r)| extract_instances(paper, r, options))
            .collect::<Result<_>>()?;

        let mut instances = Vec::new();
        let mut spans = Vec::with_capacity(records.len());
        for batch in per_record {
            let start = instances.len();
            instances.extend(batch);
            spans.push(start..instances.len());
        }

        let citations = extract_citations(&records, supplemental);
        let self_citations = build_self_citation_candidates(&citations, &spans);
        let instance_lookup = instances
            .iter()
            .enumerate()
            .map(|(i, inst)| (inst.instance_id.clone(), i))
            .collect();
        let paper_lookup = KeyLookup::new(&records);
        Ok(Self {
            records,
            instances,
            spans,
            instance_lookup,
            paper_lookup,
            citations,
            self_citations,
        })
    }

    pub fn records(&self) -> &[PublicationRecord] {
        &self.records
    }

    pub fn instances(&self) -> &[NameInstance] {
        &self.instances
    }

    pub fn instance(&self, idx: usize) -> &NameInstance {
        &self.instances[idx]
    }

    pub fn instance_index(&self, instance_id: &str) -> Option<usize> {
        self.instance_lookup.get(instance_id).copied()
    }

    /// Instance index range of paper `paper`.
    pub fn paper_span(&self, paper: usize) -> Range<usize> {
        self.spans[paper].clone()
    }

    pub fn paper_instances(&self, paper: usize) -> &[NameInstance] {
        &self.instances[self.spans[paper].clone()]
    }

    /// Paper index for a paper id or DOI.
    pub fn paper_index(&self, key: &str) -> Option<usize> {
        self.paper_lookup.resolve(key)
    }

    pub fn citations(&self) -> &[CitationEdge] {
        &self.citations
    }

    pub fn self_citations(&self) -> &[SelfCitationCandidate] {
        &self.self_citations
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

fn extract_instances(
    paper: usize,
    record: &PublicationRecord,
    options: &CorpusOptions,
) -> Result<Vec<NameInstance>> {
    let byline: Vec<PersonName> = record
        .authors
        .iter()
        .map(|a| PersonName::parse(a))
        .collect::<Result<_>>()?;
    let mut emails: Vec<Option<String>> = vec![None; byline.len()];
    for (pos, email) in assign_emails(&byline, &record.emails, &options.email_candidates) {
        emails[pos] = Some(email);
    }
    let coauthors = build_coauthor_lists(&byline);
    Ok(byline
        .into_iter()
        .zip(coauthors)
        .zip(emails)
        .enumerate()
        .map(|(position, ((name, coauthors), email))| NameInstance {
            instance_id: instance_id(&record.paper_id, position),
            paper,
            paper_id: record.paper_id.clone(),
            position,
            raw_name: record.authors[position].clone(),
            block_key: name.block_key(),
            name,
            email,
            coauthors,
        })
        .collect())
}
