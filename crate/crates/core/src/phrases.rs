//! POS-filtered chunking, n-grams and maximum-likelihood n-gram probabilities.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::textprep::Token;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NGram {
    pub terms: Vec<String>,
}

impl NGram {
    pub fn n(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.terms.join(" "))
    }
}

/// Keeps nouns, verbs, adjectives and adverbs, in order.
pub fn chunk_filter(tokens: &[Token]) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| t.tag.is_noun() || t.tag.is_verb() || t.tag.is_adjective() || t.tag.is_adverb())
        .cloned()
        .collect()
}

/// All contiguous windows of length `n`.
pub fn ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> Result<Vec<NGram>> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "n-gram order must be at least 1".into(),
        ));
    }
    Ok(tokens
        .windows(n)
        .map(|w| NGram {
            terms: w.iter().map(|t| t.as_ref().to_string()).collect(),
        })
        .collect())
}

/// n-gram counts with, for each history, the number of n-grams that extend it.
#[derive(Debug, Clone)]
pub struct NGramCounts {
    n: usize,
    grams: HashMap<Vec<String>, usize>,
    histories: HashMap<Vec<String>, usize>,
}

impl NGramCounts {
    /// Counts within each sentence; n-grams never cross sentence boundaries.
    pub fn from_sentences<S: AsRef<str>>(sentences: &[Vec<S>], n: usize) -> Result<Self> {
        let mut counts = NGramCounts {
            n,
            grams: HashMap::new(),
            histories: HashMap::new(),
        };
        for sentence in sentences {
            for gram in ngrams(sentence, n)? {
                *counts
                    .histories
                    .entry(gram.terms[..n - 1].to_vec())
                    .or_default() += 1;
                *counts.grams.entry(gram.terms).or_default() += 1;
            }
        }
        Ok(counts)
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S], n: usize) -> Result<Self> {
        let sentence: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
        Self::from_sentences(&[sentence], n)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn count(&self, terms: &[&str]) -> usize {
        let key: Vec<String> = terms.iter().map(|s| s.to_string()).collect();
        self.grams.get(&key).copied().unwrap_or(0)
    }

    /// count(h·w) / count(h), or 0 when the history was never seen.
    /// A history of the wrong length also gives 0.
    pub fn prob<S: AsRef<str>>(&self, history: &[S], word: &str) -> f64 {
        if history.len() + 1 != self.n {
            return 0.0;
        }
        let history: Vec<String> = history.iter().map(|s| s.as_ref().to_string()).collect();
        let Some(&denominator) = self.histories.get(&history) else {
            return 0.0;
        };
        let mut gram = history;
        gram.push(word.to_string());
        let numerator = self.grams.get(&gram).copied().unwrap_or(0);
        numerator as f64 / denominator as f64
    }

    /// n-grams sorted by descending count, ties lexicographic.
    pub fn most_common(&self, limit: usize) -> Vec<(NGram, usize)> {
        let mut all: Vec<_> = self.grams.iter().collect();
        all.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        all.into_iter()
            .take(limit)
            .map(|(terms, &c)| {
                (
                    NGram {
                        terms: terms.clone(),
                    },
                    c,
                )
            })
            .collect()
    }
}

/// Convenience for `ngram_prob` over a single token stream.
pub fn ngram_prob<S: AsRef<str>>(history: &[S], word: &str, counts: &NGramCounts) -> f64 {
    counts.prob(history, word)
}
