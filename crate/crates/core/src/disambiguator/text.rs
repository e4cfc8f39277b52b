//! Text normalization, character n-gram profiles and TF cosine similarity.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

use super::porter::porter_stem;

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Gram lengths used for every feature.
pub const DEFAULT_NGRAMS: [usize; 3] = [2, 3, 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextKind {
    /// Author names keep the surname/forename comma.
    Name,
    /// Titles lose stopwords and are stemmed.
    Title,
}

/// Term-frequency vector over character n-grams.
pub type TfVector = BTreeMap<String, u32>;

#[derive(Clone, Debug)]
pub struct Preprocessor {
    stopwords: HashSet<String>,
}

impl Default for Preprocessor {
    fn default() -> Self {
        Self::with_stopwords(DEFAULT_STOPWORDS.lines())
    }
}

impl Preprocessor {
    pub fn with_stopwords<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        let stopwords = words
            .into_iter()
            .map(|w| w.trim().to_lowercase())
            .filter(|w| !w.is_empty() && !w.starts_with('#'))
            .collect();
        Self { stopwords }
    }

    /// Reads a stopword list, one word per line.
    pub fn from_stopword_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::with_stopwords(text.lines()))
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn preprocess(&self, text: &str, kind: TextKind) -> String {
        let ascii = deunicode::deunicode(text).to_lowercase();
        let cleaned: String = ascii
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || (c == ',' && kind == TextKind::Name) {
                    c
                } else {
                    ' '
                }
            })
            .collect();
        match kind {
            TextKind::Name => {
                let joined = cleaned.split_whitespace().collect::<Vec<_>>().join(" ");
                joined.replace(" ,", ",")
            }
            TextKind::Title => cleaned
                .split_whitespace()
                .filter(|w| !self.is_stopword(w))
                .map(porter_stem)
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Character n-grams of every whitespace- or comma-separated token, for
/// each length in `ns`, with term frequencies.
pub fn ngram_profile(text: &str, ns: &[usize]) -> TfVector {
    let mut tf = TfVector::new();
    for token in text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
    {
        let chars: Vec<char> = token.chars().collect();
        for &n in ns {
            if n == 0 {
                continue;
            }
            for gram in chars.windows(n) {
                *tf.entry(gram.iter().collect()).or_insert(0) += 1;
            }
        }
    }
    tf
}

pub fn norm(p: &TfVector) -> f64 {
    p.values()
        .map(|&v| f64::from(v) * f64::from(v))
        .sum::<f64>()
        .sqrt()
}

/// Cosine of two TF vectors; 0 when either is empty.
pub fn cosine(p: &TfVector, q: &TfVector) -> f64 {
    cosine_with_norms(p, norm(p), q, norm(q))
}

pub(crate) fn cosine_with_norms(p: &TfVector, np: f64, q: &TfVector, nq: f64) -> f64 {
    if p.is_empty() || q.is_empty() {
        return 0.0;
    }
    let (small, large) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    let dot: f64 = small
        .iter()
        .filter_map(|(g, &a)| large.get(g).map(|&b| f64::from(a) * f64::from(b)))
        .sum();
    (dot / (np * nq)).clamp(0.0, 1.0)
}
