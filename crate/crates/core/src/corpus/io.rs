//! Interchange formats: the corpus TSV/JSON, supplemental citation edges,
//! authority profiles, and two-column id maps (truth labels, cluster
//! labels, tag maps).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::authority::{AuthorityProfile, TruthLabels};
use super::name::PersonName;
use super::{normalize_doi, PublicationRecord};
use crate::error::{Error, Result};

pub const CORPUS_HEADER: &str = "paper_id\tdoi\tyear\ttitle\tbyline\temails\tcited_keys";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    #[default]
    Tsv,
    Json,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Self::Tsv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown corpus format {other:?}"
            ))),
        }
    }
}

/// A row that could not be ingested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// 1-based line number (TSV) or 0-based array index (JSON).
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedCorpus {
    pub records: Vec<PublicationRecord>,
    /// Records dropped because the byline was empty or anonymous.
    pub skipped_anonymous: usize,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads a corpus file. An unreadable file is an error; malformed rows are
/// skipped and reported in [`ParsedCorpus::diagnostics`].
pub fn parse_corpus(path: &Path, format: CorpusFormat) -> Result<ParsedCorpus> {
    let text = read_to_string(path)?;
    match format {
        CorpusFormat::Tsv => Ok(parse_corpus_tsv(&text)),
        CorpusFormat::Json => parse_corpus_json(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        }),
    }
}

fn is_anonymous(author: &str) -> bool {
    let a = author
        .trim()
        .trim_matches(|c: char| c == '[' || c == ']' || c == '(' || c == ')')
        .to_ascii_lowercase();
    a == "anonymous" || a == "anon"
}

fn split_list(field: &str) -> Vec<String> {
    field
        .split('|')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

enum RowOutcome {
    Record(PublicationRecord),
    Anonymous,
}

fn check_byline(authors: &[String]) -> std::result::Result<bool, String> {
    if authors.is_empty() || authors.iter().any(|a| is_anonymous(a)) {
        return Ok(false);
    }
    for a in authors {
        if a.trim().is_empty() {
            return Err("empty author entry in byline".into());
        }
        if PersonName::parse(a).is_err() {
            return Err(format!("author {a:?} has no usable name"));
        }
    }
    Ok(true)
}

fn parse_row(line: &str) -> std::result::Result<RowOutcome, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 7 {
        return Err(format!(
            "expected 7 tab-separated columns, found {}",
            cols.len()
        ));
    }
    let paper_id = cols[0].trim();
    if paper_id.is_empty() {
        return Err("empty paper_id".into());
    }
    let year = match cols[2].trim() {
        "" => None,
        y => Some(
            y.parse::<i32>()
                .map_err(|_| format!("invalid year {y:?}"))?,
        ),
    };
    let byline = cols[4].trim();
    let authors: Vec<String> = if byline.is_empty() {
        Vec::new()
    } else {
        byline.split('|').map(|a| a.trim().to_string()).collect()
    };
    if !check_byline(&authors)? {
        return Ok(RowOutcome::Anonymous);
    }
    Ok(RowOutcome::Record(PublicationRecord {
        paper_id: paper_id.to_string(),
        doi: normalize_doi(cols[1]),
        year,
        title: cols[3].trim().to_string(),
        authors,
        emails: split_list(cols[5]),
        cited_keys: split_list(cols[6]),
    }))
}

pub fn parse_corpus_tsv(text: &str) -> ParsedCorpus {
    let mut out = ParsedCorpus::default();
    let mut seen = std::collections::HashSet::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if std::mem::take(&mut first) && line.starts_with("paper_id\t") {
            continue;
        }
        match parse_row(line) {
            Ok(RowOutcome::Record(r)) => {
                if seen.insert(r.paper_id.clone()) {
                    out.records.push(r);
                } else {
                    push_diag(
                        &mut out,
                        line_no,
                        format!("duplicate paper_id {:?}", r.paper_id),
                    );
                }
            }
            Ok(RowOutcome::Anonymous) => {
                log::debug!("line {line_no}: anonymous or empty byline skipped");
                out.skipped_anonymous += 1;
            }
            Err(message) => push_diag(&mut out, line_no, message),
        }
    }
    out
}

fn push_diag(out: &mut ParsedCorpus, line: usize, message: String) {
    log::warn!("corpus line {line}: {message}; row skipped");
    out.diagnostics.push(Diagnostic { line, message });
}

/// Parses a JSON array of records. The document must be an array; any
/// element that does not deserialize is skipped with a diagnostic.
pub fn parse_corpus_json(text: &str) -> std::result::Result<ParsedCorpus, serde_json::Error> {
    let values: Vec<serde_json::Value> = if text.trim().is_empty() {
        Vec::new()
    } else {
        serde_json::from_str(text)?
    };
    let mut out = ParsedCorpus::default();
    let mut seen = std::collections::HashSet::new();
    for (i, value) in values.into_iter().enumerate() {
        let mut record: PublicationRecord = match serde_json::from_value(value) {
            Ok(r) => r,
            Err(e) => {
                push_diag(&mut out, i, e.to_string());
                continue;
            }
        };
        record
            .authors
            .iter_mut()
            .for_each(|a| *a = a.trim().to_string());
        match check_byline(&record.authors) {
            Ok(true) => {}
            Ok(false) => {
                out.skipped_anonymous += 1;
                continue;
            }
            Err(message) => {
                push_diag(&mut out, i, message);
                continue;
            }
        }
        if record.paper_id.trim().is_empty() {
            push_diag(&mut out, i, "empty paper_id".into());
            continue;
        }
        record.doi = record.doi.as_deref().and_then(normalize_doi);
        if seen.insert(record.paper_id.clone()) {
            out.records.push(record);
        } else {
            push_diag(
                &mut out,
                i,
                format!("duplicate paper_id {:?}", record.paper_id),
            );
        }
    }
    Ok(out)
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// Serializes records in the corpus TSV layout, with a header line.
pub fn write_corpus_tsv(records: &[PublicationRecord]) -> String {
    let mut out = String::from(CORPUS_HEADER);
    out.push('\n');
    for r in records {
        let join = |v: &[String]| v.iter().map(|s| tsv_field(s)).collect::<Vec<_>>().join("|");
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            tsv_field(&r.paper_id),
            r.doi.as_deref().map(tsv_field).unwrap_or_default(),
            r.year.map(|y| y.to_string()).unwrap_or_default(),
            tsv_field(&r.title),
            join(&r.authors),
            join(&r.emails),
            join(&r.cited_keys),
        );
    }
    out
}

/// Parses `a<TAB>b` lines. Blank lines and `#` comments are ignored, as is
/// a first data line equal to `header`.
pub fn parse_pairs_tsv(text: &str, header: Option<&str>) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if std::mem::take(&mut first) && Some(line) == header {
            continue;
        }
        match line.split('\t').collect::<Vec<_>>()[..] {
            [a, b] if !a.trim().is_empty() && !b.trim().is_empty() => {
                out.push((a.trim().to_string(), b.trim().to_string()))
            }
            _ => {
                return Err(Error::Format {
                    line: i + 1,
                    message: "expected two non-empty tab-separated columns".into(),
                })
            }
        }
    }
    Ok(out)
}

pub fn write_pairs_tsv<'a>(
    header: &str,
    rows: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> String {
    let mut out = format!("{header}\n");
    for (a, b) in rows {
        let _ = writeln!(out, "{a}\t{b}");
    }
    out
}

pub const SUPPLEMENTAL_HEADER: &str = "citing_key\tcited_key";
pub const TRUTH_HEADER: &str = "instance_id\tauthority_id";
pub const LABEL_HEADER: &str = "instance_id\tcluster_id";
pub const TAG_HEADER: &str = "instance_id\tcategory";

pub fn read_supplemental(path: &Path) -> Result<Vec<(String, String)>> {
    parse_pairs_tsv(&read_to_string(path)?, Some(SUPPLEMENTAL_HEADER))
        .map_err(|e| with_path(e, path))
}

pub fn read_truth_labels(path: &Path) -> Result<TruthLabels> {
    Ok(parse_pairs_tsv(&read_to_string(path)?, Some(TRUTH_HEADER))
        .map_err(|e| with_path(e, path))?
        .into_iter()
        .collect())
}

pub fn write_truth_labels(labels: &TruthLabels) -> String {
    write_pairs_tsv(TRUTH_HEADER, labels.iter())
}

pub fn read_profiles(path: &Path) -> Result<Vec<AuthorityProfile>> {
    serde_json::from_str(&read_to_string(path)?).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Format { line, message } => Error::Format {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}
