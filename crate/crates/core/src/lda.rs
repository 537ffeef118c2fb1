//! Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persist;
use crate::vocab::{top_indices, Vocabulary};

const FORMAT: &str = "toplab-lda";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    /// Symmetric document-topic prior; `None` means `50 / topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams {
            topics: 3,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            seed: 1,
        }
    }
}

impl LdaParams {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics as f64)
    }
}

/// Collapsed Gibbs sampler state over word-id documents.
///
/// Resamples each token from
/// `p(z = k | rest) ∝ (n_dk + α) · (n_kw + β) / (n_k + Vβ)`
/// in a fixed document/token scan order, so a seed fully determines the chain.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    docs: Vec<Vec<usize>>,
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    z: Vec<Vec<usize>>,
    doc_topic: Vec<Vec<u32>>,
    topic_word: Vec<Vec<u32>>,
    topic_total: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl GibbsSampler {
    pub fn new(
        docs: Vec<Vec<usize>>,
        topics: usize,
        vocab_size: usize,
        alpha: f64,
        beta: f64,
        seed: u64,
    ) -> Result<Self> {
        if topics < 1 {
            return Err(Error::InvalidArgument(
                "number of topics must be at least 1".into(),
            ));
        }
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidArgument(
                "alpha and beta must be positive".into(),
            ));
        }
        if docs.iter().all(Vec::is_empty) {
            return Err(Error::InvalidArgument("corpus has no tokens".into()));
        }
        if let Some(&w) = docs.iter().flatten().find(|&&w| w >= vocab_size) {
            return Err(Error::InvalidArgument(format!(
                "word id {w} outside vocabulary of size {vocab_size}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut doc_topic = vec![vec![0u32; topics]; docs.len()];
        let mut topic_word = vec![vec![0u32; vocab_size]; topics];
        let mut topic_total = vec![0u32; topics];
        let z = docs
            .iter()
            .enumerate()
            .map(|(d, doc)| {
                doc.iter()
                    .map(|&w| {
                        let k = rng.gen_range(0..topics);
                        doc_topic[d][k] += 1;
                        topic_word[k][w] += 1;
                        topic_total[k] += 1;
                        k
                    })
                    .collect()
            })
            .collect();
        Ok(GibbsSampler {
            docs,
            topics,
            vocab_size,
            alpha,
            beta,
            z,
            doc_topic,
            topic_word,
            topic_total,
            rng,
            weights: vec![0.0; topics],
        })
    }

    /// One full scan over every token.
    pub fn sweep(&mut self) {
        let v_beta = self.vocab_size as f64 * self.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.z[d][i];
                self.doc_topic[d][old] -= 1;
                self.topic_word[old][w] -= 1;
                self.topic_total[old] -= 1;

                let mut total = 0.0;
                for k in 0..self.topics {
                    let p = (f64::from(self.doc_topic[d][k]) + self.alpha)
                        * (f64::from(self.topic_word[k][w]) + self.beta)
                        / (f64::from(self.topic_total[k]) + v_beta);
                    total += p;
                    self.weights[k] = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = self
                    .weights
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(self.topics - 1);

                self.z[d][i] = new;
                self.doc_topic[d][new] += 1;
                self.topic_word[new][w] += 1;
                self.topic_total[new] += 1;
            }
        }
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.z
    }

    /// Checks Σ_k n_dk = N_d, Σ_w n_kw = n_k, and that the counts equal a
    /// recount of the current assignments.
    pub fn counts_consistent(&self) -> bool {
        let mut doc_topic = vec![vec![0u32; self.topics]; self.docs.len()];
        let mut topic_word = vec![vec![0u32; self.vocab_size]; self.topics];
        for (d, doc) in self.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let k = self.z[d][i];
                doc_topic[d][k] += 1;
                topic_word[k][w] += 1;
            }
        }
        let totals_ok = self
            .doc_topic
            .iter()
            .zip(&self.docs)
            .all(|(row, doc)| row.iter().sum::<u32>() as usize == doc.len())
            && self
                .topic_word
                .iter()
                .zip(&self.topic_total)
                .all(|(row, &n)| row.iter().sum::<u32>() == n);
        totals_ok && doc_topic == self.doc_topic && topic_word == self.topic_word
    }

    /// Smoothed topic-word distribution.
    pub fn phi(&self) -> Vec<Vec<f64>> {
        let v_beta = self.vocab_size as f64 * self.beta;
        self.topic_word
            .iter()
            .zip(&self.topic_total)
            .map(|(row, &n)| {
                row.iter()
                    .map(|&c| (f64::from(c) + self.beta) / (f64::from(n) + v_beta))
                    .collect()
            })
            .collect()
    }

    /// Smoothed document-topic distribution.
    pub fn theta(&self) -> Vec<Vec<f64>> {
        let k_alpha = self.topics as f64 * self.alpha;
        self.doc_topic
            .iter()
            .zip(&self.docs)
            .map(|(row, doc)| {
                row.iter()
                    .map(|&c| (f64::from(c) + self.alpha) / (doc.len() as f64 + k_alpha))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub topics: usize,
    pub documents: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub vocab: Vocabulary,
    /// K×V, rows sum to 1.
    pub phi: Vec<Vec<f64>>,
    /// M×K, rows sum to 1.
    pub theta: Vec<Vec<f64>>,
    /// Topic of every token, per document.
    pub assignments: Vec<Vec<usize>>,
}

/// Fits LDA over tokenized documents (lemmas). Empty documents are kept and
/// get the prior as their topic mixture.
pub fn fit_lda<S: AsRef<str>>(documents: &[Vec<S>], params: &LdaParams) -> Result<LdaModel> {
    if documents.is_empty() {
        return Err(Error::InvalidArgument("corpus is empty".into()));
    }
    let vocab = Vocabulary::from_documents(documents);
    let docs: Vec<Vec<usize>> = documents.iter().map(|d| vocab.encode(d)).collect();
    let alpha = params.alpha();
    let mut sampler = GibbsSampler::new(
        docs,
        params.topics,
        vocab.len(),
        alpha,
        params.beta,
        params.seed,
    )?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    Ok(LdaModel {
        topics: params.topics,
        documents: documents.len(),
        alpha,
        beta: params.beta,
        iterations: params.iterations,
        seed: params.seed,
        phi: sampler.phi(),
        theta: sampler.theta(),
        assignments: sampler.z,
        vocab,
    })
}

impl LdaModel {
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// The `n` highest-probability words of `topic`; ties go to the lower vocabulary index.
    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
        if topic >= self.topics {
            return Err(Error::InvalidArgument(format!(
                "topic {topic} out of range (model has {})",
                self.topics
            )));
        }
        if n < 1 || n > self.vocab.len() {
            return Err(Error::InvalidArgument(format!(
                "word count {n} outside 1..={}",
                self.vocab.len()
            )));
        }
        let row = &self.phi[topic];
        Ok(top_indices(row, n)
            .into_iter()
            .map(|w| (self.vocab.word(w).to_string(), row[w]))
            .collect())
    }

    pub fn to_json(&self) -> String {
        persist::to_json(FORMAT, self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        persist::from_json(FORMAT, text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        persist::save(path.as_ref(), FORMAT, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        persist::load(path.as_ref(), FORMAT)
    }
}

/// `0.071*"topic" + 0.046*"algorithm"` style rendering of top words.
pub fn format_top_words(words: &[(String, f64)]) -> String {
    words
        .iter()
        .map(|(w, p)| format!("{p:.3}*\"{w}\""))
        .collect::<Vec<_>>()
        .join(" + ")
}
