//! Synthetic bibliographic corpora with known authorship.
//!
//! Authors belong to small research groups and mostly write with members
//! of their own group, so coauthor overlap identifies them. Work outside
//! the group goes to a few fixed partner groups, and citations other than
//! self-citations stay within that neighbourhood. Titles draw on group and
//! personal topic words. Each author owns one e-mail address that a paper
//! lists with probability `email_coverage`, and a paper cites an earlier
//! paper of one of its authors with probability `self_cite_prob`.
//!
//! Ambiguity is injected on purpose. A homonym author reuses a block
//! (first initial and surname) held only by unrelated groups, keeping the
//! same forename as its model half of the time. A synonym author is
//! printed in several forms of one name ("Mark Nolan", "M. Nolan",
//! "Mark E. Nolan") that all fall in the same block. Every other author gets a block of their own.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusOptions, PersonName, PublicationRecord, TruthLabels};
use crate::error::{Error, Result};
use crate::evaluation::{block_stats, BlockStats};

const SURNAMES: &str = include_str!("../data/surnames.tsv");
const FORENAMES: &str = include_str!("../data/forenames.tsv");
const TOPICS: &str = include_str!("../data/topics.txt");
const TITLE_GLUE: [&str; 5] = ["for", "of", "in", "with", "and"];
const FIT_RANGE: (usize, usize) = (1, 60);

/// `min + Poisson(mean - min)`, truncated to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountDistribution {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
}

impl CountDistribution {
    pub fn fixed(n: usize) -> Self {
        Self {
            mean: n as f64,
            min: n,
            max: n,
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let ok =
            self.min <= self.max && self.mean >= self.min as f64 && self.mean <= self.max as f64;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "{what}: need min <= mean <= max, got {} <= {} <= {}",
                self.min, self.mean, self.max
            )))
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let extra = self.mean - self.min as f64;
        let draw = if extra > 0.0 {
            Poisson::new(extra).expect("positive rate").sample(rng) as usize
        } else {
            0
        };
        (self.min + draw).min(self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_authors: usize,
    /// Papers led by each author.
    pub papers_per_author: CountDistribution,
    pub team_size: CountDistribution,
    /// Probability that an author reuses a block held only by groups that
    /// are not partners of its own.
    pub homonym_rate: f64,
    /// Probability that an author with two or more instances is printed
    /// in varying name forms.
    pub synonym_rate: f64,
    pub email_coverage: f64,
    pub self_cite_prob: f64,
    /// Additional citations of earlier papers led from the citing lead's
    /// group or its partner groups.
    pub random_citations: CountDistribution,
    pub group_size: usize,
    /// Probability that a coauthor slot is filled from the lead's group.
    pub in_group_prob: f64,
    /// Groups each group collaborates with. Zero draws outside coauthors
    /// and citations from the whole corpus.
    pub partner_groups: usize,
    /// Stop adding papers once this many instances exist; the last team is
    /// truncated to hit the target exactly.
    pub target_instances: Option<usize>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_authors: 350,
            papers_per_author: CountDistribution {
                mean: 2.0,
                min: 1,
                max: 8,
            },
            team_size: CountDistribution {
                mean: 3.0,
                min: 1,
                max: 8,
            },
            homonym_rate: 0.1,
            synonym_rate: 0.1,
            email_coverage: 0.6,
            self_cite_prob: 0.3,
            random_citations: CountDistribution {
                mean: 1.0,
                min: 0,
                max: 5,
            },
            group_size: 5,
            in_group_prob: 0.85,
            partner_groups: 2,
            target_instances: None,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("homonym_rate", self.homonym_rate),
            ("synonym_rate", self.synonym_rate),
            ("email_coverage", self.email_coverage),
            ("self_cite_prob", self.self_cite_prob),
            ("in_group_prob", self.in_group_prob),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {rate} is outside [0, 1]"
                )));
            }
        }
        self.papers_per_author.validate("papers_per_author")?;
        self.team_size.validate("team_size")?;
        self.random_citations.validate("random_citations")?;
        if self.team_size.max == 0 {
            return Err(Error::InvalidConfig(
                "team_size.max must be at least 1".into(),
            ));
        }
        if self.group_size == 0 {
            return Err(Error::InvalidConfig("group_size must be at least 1".into()));
        }
        if self.n_authors == 0
            && (self.papers_per_author.max > 0 || self.target_instances.unwrap_or(0) > 0)
        {
            return Err(Error::InvalidConfig(
                "papers requested but n_authors is 0".into(),
            ));
        }
        Ok(())
    }
}

/// Counts taken while generating, for comparison with [`summarize`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub papers: usize,
    pub instances: usize,
    /// Authors that appear on at least one paper.
    pub authors: usize,
    /// Appearing authors whose block holds another appearing author.
    pub homonym_authors: usize,
    /// Appearing authors printed in two or more name forms.
    pub synonym_authors: usize,
    pub emails_listed: usize,
    pub self_citing_papers: usize,
}

#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub records: Vec<PublicationRecord>,
    pub truth: TruthLabels,
    pub stats: GenerationStats,
}

struct Pool {
    names: Vec<String>,
    weights: WeightedIndex<u32>,
}

impl Pool {
    fn parse(text: &str) -> Self {
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (name, w) = line.split_once('\t').unwrap_or((line, "1"));
            names.push(name.trim().to_string());
            weights.push(w.trim().parse::<u32>().unwrap_or(1).max(1));
        }
        let weights = WeightedIndex::new(&weights).expect("pool weights are positive");
        Self { names, weights }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> &str {
        &self.names[self.weights.sample(rng)]
    }
}

struct Author {
    surname: String,
    forename: String,
    middle: char,
    email: String,
    group: usize,
    topics: Vec<String>,
}

impl Author {
    fn block(&self) -> (char, &str) {
        (initial(&self.forename), &self.surname)
    }

    /// Name forms used for a synonym author; the first is the usual form.
    fn forms(&self) -> [String; 3] {
        [
            format!("{} {}", self.forename, self.surname),
            format!("{}. {}", initial(&self.forename), self.surname),
            format!("{} {}. {}", self.forename, self.middle, self.surname),
        ]
    }
}

fn initial(s: &str) -> char {
    s.chars()
        .next()
        .expect("pool names are non-empty")
        .to_ascii_uppercase()
}

fn ascii_lower(s: &str) -> String {
    deunicode::deunicode(s)
        .to_lowercase()
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .collect()
}

fn email_local(a: &Author, rng: &mut ChaCha8Rng) -> String {
    let f = ascii_lower(&a.forename);
    let s = ascii_lower(&a.surname);
    let fi = &f[..1];
    let si = &s[..1];
    match rng.gen_range(0..5) {
        0 => format!("{f}{s}"),
        1 => format!("{fi}{s}"),
        2 => format!("{f}{si}"),
        3 => format!("{f}.{s}"),
        _ => format!("{fi}{}{s}", a.middle.to_ascii_lowercase()),
    }
}

fn make_authors(
    config: &SynthConfig,
    hoods: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Author>> {
    let surnames = Pool::parse(SURNAMES);
    let forenames = Pool::parse(FORENAMES);
    let topics: Vec<&str> = TOPICS.lines().filter(|l| !l.is_empty()).collect();
    let mut by_initial: BTreeMap<char, Vec<&str>> = BTreeMap::new();
    for f in &forenames.names {
        by_initial.entry(initial(f)).or_default().push(f);
    }
    let n_groups = hoods.len();
    let group_topics: Vec<Vec<&str>> = (0..n_groups)
        .map(|_| topics.choose_multiple(rng, 8).copied().collect())
        .collect();

    let mut used_blocks: BTreeMap<(char, String), usize> = BTreeMap::new();
    // Groups holding an author in each block, and each author's block.
    let mut block_groups: Vec<Vec<usize>> = Vec::new();
    let mut block_of: Vec<usize> = Vec::with_capacity(config.n_authors);
    let mut used_emails: BTreeSet<String> = BTreeSet::new();
    let mut authors: Vec<Author> = Vec::with_capacity(config.n_authors);
    for i in 0..config.n_authors {
        let group = i / config.group_size;
        // Homonyms join a block held only by unrelated groups; namesakes
        // rarely work together.
        let related = |g: usize| hoods[group].contains(&g) || hoods[g].contains(&group);
        let unrelated: Vec<usize> = (0..authors.len())
            .filter(|&a| !block_groups[block_of[a]].iter().any(|&g| related(g)))
            .collect();
        let homonym = !unrelated.is_empty() && rng.gen_bool(config.homonym_rate);
        let (surname, forename) = if homonym {
            let model = &authors[*unrelated.choose(rng).expect("non-empty")];
            let forename = if rng.gen_bool(0.5) {
                model.forename.clone()
            } else {
                by_initial[&initial(&model.forename)]
                    .choose(rng)
                    .expect("initial is present")
                    .to_string()
            };
            (model.surname.clone(), forename)
        } else {
            let mut found = None;
            for _ in 0..10_000 {
                let s = surnames.draw(rng).to_string();
                let f = forenames.draw(rng).to_string();
                if !used_blocks.contains_key(&(initial(&f), s.clone())) {
                    found = Some((s, f));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "name pool cannot supply {} distinct blocks",
                    config.n_authors
                ))
            })?
        };
        let next = block_groups.len();
        let block = *used_blocks
            .entry((initial(&forename), surname.clone()))
            .or_insert(next);
        if block == next {
            block_groups.push(Vec::new());
        }
        block_groups[block].push(group);
        block_of.push(block);
        let mut author = Author {
            surname,
            forename,
            middle: (b'A' + rng.gen_range(0..26u8)) as char,
            email: String::new(),
            group,
            topics: topics
                .choose_multiple(rng, 3)
                .map(|t| t.to_string())
                .collect(),
        };
        author
            .topics
            .extend(group_topics[group].iter().map(|t| t.to_string()));
        loop {
            let domain = format!("inst{}.edu", rng.gen_range(0..200));
            let email = format!("{}@{domain}", email_local(&author, rng));
            if used_emails.insert(email.clone()) {
                author.email = email;
                break;
            }
        }
        authors.push(author);
    }
    Ok(authors)
}

/// For each group, itself followed by its partner groups.
fn make_neighbourhoods(
    config: &SynthConfig,
    n_groups: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<usize>> {
    (0..n_groups)
        .map(|g| {
            let others: Vec<usize> = (0..n_groups).filter(|&o| o != g).collect();
            let mut hood = vec![g];
            hood.extend(others.choose_multiple(rng, config.partner_groups.min(others.len())));
            hood
        })
        .collect()
}

/// Paper teams as author indices, lead first.
fn make_teams(
    config: &SynthConfig,
    authors: &[Author],
    hoods: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<usize>> {
    let n = authors.len();
    let mut leads: Vec<usize> = Vec::new();
    for a in 0..n {
        let k = config.papers_per_author.sample(rng);
        leads.extend(std::iter::repeat_n(a, k));
    }
    leads.shuffle(rng);
    let mut teams = Vec::with_capacity(leads.len());
    let mut total = 0;
    for lead in leads {
        let size = config.team_size.sample(rng).max(1).min(n);
        let group = authors[lead].group;
        let group_members: Vec<usize> = (0..n)
            .filter(|&a| authors[a].group == group && a != lead)
            .collect();
        let outside: Vec<usize> = if config.partner_groups == 0 {
            (0..n).collect()
        } else {
            (0..n)
                .filter(|&a| hoods[group][1..].contains(&authors[a].group))
                .collect()
        };
        let mut team = vec![lead];
        let mut guard = 0;
        while team.len() < size && guard < 100 * size {
            guard += 1;
            let pick = if !group_members.is_empty() && rng.gen_bool(config.in_group_prob) {
                *group_members.choose(rng).expect("non-empty")
            } else if let Some(&a) = outside.choose(rng) {
                a
            } else {
                rng.gen_range(0..n)
            };
            if !team.contains(&pick) {
                team.push(pick);
            }
        }
        if let Some(target) = config.target_instances {
            if total >= target {
                break;
            }
            team.truncate(target - total);
        }
        total += team.len();
        teams.push(team);
    }
    teams
}

fn title(team: &[usize], authors: &[Author], rng: &mut ChaCha8Rng) -> String {
    let lead = &authors[team[0]];
    let mut words: Vec<&str> = lead.topics[3..]
        .choose_multiple(rng, 3)
        .map(String::as_str)
        .collect();
    for &a in team.iter().take(3) {
        words.push(
            authors[a].topics[..3]
                .choose(rng)
                .expect("three personal topics"),
        );
    }
    words.dedup();
    words.shuffle(rng);
    let mut out: Vec<String> = Vec::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 && rng.gen_bool(0.3) {
            out.push(TITLE_GLUE.choose(rng).expect("non-empty").to_string());
        }
        let mut c = w.chars();
        let first = c.next().map(|f| f.to_ascii_uppercase()).unwrap_or_default();
        out.push(if i == 0 {
            format!("{first}{}", c.as_str())
        } else {
            w.to_string()
        });
    }
    out.join(" ")
}

pub fn doi(paper: usize) -> String {
    format!("10.5555/synth.{paper}")
}

pub fn author_id(author: usize) -> String {
    format!("A{author:05}")
}

/// Generates a corpus and its truth labels. The output depends only on
/// the configuration, seed included.
pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_groups = config.n_authors.div_ceil(config.group_size).max(1);
    let hoods = make_neighbourhoods(config, n_groups, &mut rng);
    let authors = make_authors(config, &hoods, &mut rng)?;
    let teams = make_teams(config, &authors, &hoods, &mut rng);

    let mut instance_count = vec![0usize; authors.len()];
    for team in &teams {
        for &a in team {
            instance_count[a] += 1;
        }
    }
    let synonym: Vec<bool> = instance_count
        .iter()
        .map(|&c| c >= 2 && rng.gen_bool(config.synonym_rate))
        .collect();
    let form_order: Vec<[usize; 3]> = (0..authors.len())
        .map(|_| {
            let mut order = [0, 1, 2];
            order.shuffle(&mut rng);
            order
        })
        .collect();

    let n_papers = teams.len();
    let mut seen_instances = vec![0usize; authors.len()];
    let mut papers_of: Vec<Vec<usize>> = vec![Vec::new(); authors.len()];
    let mut records = Vec::with_capacity(n_papers);
    let mut truth = TruthLabels::new();
    let mut stats = GenerationStats::default();
    for (p, team) in teams.iter().enumerate() {
        let paper_id = format!("S{p:05}");
        let mut byline = Vec::with_capacity(team.len());
        let mut emails = Vec::new();
        for (pos, &a) in team.iter().enumerate() {
            let forms = authors[a].forms();
            let form = if synonym[a] {
                &forms[form_order[a][seen_instances[a] % 3]]
            } else {
                &forms[0]
            };
            seen_instances[a] += 1;
            byline.push(form.clone());
            if rng.gen_bool(config.email_coverage) {
                emails.push(authors[a].email.clone());
            }
            truth.insert(crate::corpus::instance_id(&paper_id, pos), author_id(a));
        }

        let mut cited: BTreeSet<usize> = BTreeSet::new();
        if p > 0 && rng.gen_bool(config.self_cite_prob) {
            let with_history: Vec<usize> = team
                .iter()
                .copied()
                .filter(|&a| !papers_of[a].is_empty())
                .collect();
            if let Some(&a) = with_history.choose(&mut rng) {
                cited.insert(*papers_of[a].choose(&mut rng).expect("non-empty history"));
            }
        }
        if p > 0 {
            let hood = &hoods[authors[team[0]].group];
            let near: Vec<usize> = if config.partner_groups == 0 {
                Vec::new()
            } else {
                (0..p)
                    .filter(|&q| hood.contains(&authors[teams[q][0]].group))
                    .collect()
            };
            for _ in 0..config.random_citations.sample(&mut rng) {
                cited.insert(
                    near.choose(&mut rng)
                        .copied()
                        .unwrap_or_else(|| rng.gen_range(0..p)),
                );
            }
        }
        let members: BTreeSet<usize> = team.iter().copied().collect();
        if cited
            .iter()
            .any(|&c| teams[c].iter().any(|a| members.contains(a)))
        {
            stats.self_citing_papers += 1;
        }
        for &a in team {
            if papers_of[a].last() != Some(&p) {
                papers_of[a].push(p);
            }
        }
        stats.emails_listed += emails.len();
        records.push(PublicationRecord {
            paper_id,
            doi: Some(doi(p)),
            title: title(team, &authors, &mut rng),
            year: Some(2012 + (5 * p / n_papers.max(1)) as i32),
            authors: byline,
            emails,
            cited_keys: cited.into_iter().map(doi).collect(),
        });
    }

    let appearing: Vec<usize> = (0..authors.len())
        .filter(|&a| instance_count[a] > 0)
        .collect();
    let mut block_authors: HashMap<(char, &str), usize> = HashMap::new();
    for &a in &appearing {
        *block_authors.entry(authors[a].block()).or_default() += 1;
    }
    stats.papers = n_papers;
    stats.instances = instance_count.iter().sum();
    stats.authors = appearing.len();
    stats.homonym_authors = appearing
        .iter()
        .filter(|&&a| block_authors[&authors[a].block()] > 1)
        .count();
    stats.synonym_authors = appearing.iter().filter(|&&a| synonym[a]).count();
    Ok(SynthCorpus {
        records,
        truth,
        stats,
    })
}

/// Realized statistics of a labeled corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub counts: GenerationStats,
    /// Listed addresses per instance.
    pub email_coverage: Option<f64>,
    pub self_citation_rate: Option<f64>,
    pub mean_team_size: Option<f64>,
    pub blocks: Option<BlockStats>,
}

/// Recounts the statistics of a corpus from its records and truth labels
/// alone.
pub fn summarize(records: &[PublicationRecord], truth: &TruthLabels) -> Result<SynthReport> {
    if records.is_empty() {
        return Ok(SynthReport::default());
    }
    let corpus = Corpus::build(records.to_vec(), &[], &CorpusOptions::default())?;
    let author_of = |i: usize| truth.get(&corpus.instance(i).instance_id);
    let mut counts = GenerationStats {
        papers: records.len(),
        instances: corpus.instances().len(),
        emails_listed: records.iter().map(|r| r.emails.len()).sum(),
        ..Default::default()
    };
    let mut block_members: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut forms: BTreeMap<&str, BTreeSet<&PersonName>> = BTreeMap::new();
    for (i, inst) in corpus.instances().iter().enumerate() {
        if let Some(a) = author_of(i) {
            block_members
                .entry(inst.block_key.as_str())
                .or_default()
                .insert(a);
            forms.entry(a).or_default().insert(&inst.name);
        }
    }
    counts.authors = forms.len();
    counts.homonym_authors = block_members
        .values()
        .filter(|s| s.len() > 1)
        .map(BTreeSet::len)
        .sum();
    counts.synonym_authors = forms.values().filter(|f| f.len() > 1).count();
    let paper_authors: Vec<BTreeSet<&str>> = (0..records.len())
        .map(|p| corpus.paper_span(p).filter_map(author_of).collect())
        .collect();
    let mut self_citing: BTreeSet<usize> = BTreeSet::new();
    for e in corpus.citations() {
        if !paper_authors[e.citing].is_disjoint(&paper_authors[e.cited]) {
            self_citing.insert(e.citing);
        }
    }
    counts.self_citing_papers = self_citing.len();
    let n = counts.instances as f64;
    let keys: Vec<&str> = corpus
        .instances()
        .iter()
        .map(|i| i.block_key.as_str())
        .collect();
    Ok(SynthReport {
        email_coverage: Some(counts.emails_listed as f64 / n),
        self_citation_rate: Some(counts.self_citing_papers as f64 / counts.papers as f64),
        mean_team_size: Some(n / counts.papers as f64),
        blocks: Some(block_stats(keys, FIT_RANGE)),
        counts,
    })
}
