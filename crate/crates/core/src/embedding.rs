//! Skip-gram Word2Vec with negative sampling, trained by plain SGD.

use std::collections::HashMap;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persist;
use crate::vocab::Vocabulary;

const FORMAT: &str = "toplab-word2vec";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    /// Starting learning rate; decays linearly towards `lr · 1e-4`.
    pub learning_rate: f64,
    pub min_count: usize,
    pub seed: u64,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        EmbeddingParams {
            dim: 100,
            window: 5,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_count: 1,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingModel {
    pub params: EmbeddingParams,
    /// Ordered by descending frequency, then first occurrence.
    pub vocab: Vocabulary,
    pub counts: Vec<u64>,
    pub vectors: Vec<Vec<f64>>,
    pub context_vectors: Vec<Vec<f64>>,
    /// Mean loss per (center, context) pair, one entry per epoch.
    pub epoch_losses: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `ln σ(x)` without overflow for large |x|.
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Negative-sampling loss for one center vector, its true context vector and
/// a set of negative context vectors:
/// `−ln σ(u_c·v) − Σ ln σ(−u_n·v)`.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    -log_sigmoid(dot(context, center))
        - negatives
            .iter()
            .map(|n| log_sigmoid(-dot(n, center)))
            .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradient of [`sgns_loss`] with respect to every argument.
pub fn sgns_gradients(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradients {
    let g_pos = sigmoid(dot(context, center)) - 1.0;
    let mut d_center: Vec<f64> = context.iter().map(|u| g_pos * u).collect();
    let d_context = center.iter().map(|v| g_pos * v).collect();
    let mut d_negatives = Vec::with_capacity(negatives.len());
    for n in negatives {
        let g = sigmoid(dot(n, center));
        for (d, u) in d_center.iter_mut().zip(n.iter()) {
            *d += g * u;
        }
        d_negatives.push(center.iter().map(|v| g * v).collect());
    }
    SgnsGradients {
        center: d_center,
        context: d_context,
        negatives: d_negatives,
    }
}

fn build_vocab<S: AsRef<str>>(corpus: &[Vec<S>], min_count: usize) -> (Vocabulary, Vec<u64>) {
    let mut counts: HashMap<&str, (u64, usize)> = HashMap::new();
    for (i, w) in corpus.iter().flatten().enumerate() {
        counts.entry(w.as_ref()).or_insert((0, i)).0 += 1;
    }
    let mut entries: Vec<(&str, u64, usize)> = counts
        .into_iter()
        .filter(|(_, (c, _))| *c >= min_count as u64)
        .map(|(w, (c, first))| (w, c, first))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let words = entries.iter().map(|e| e.0.to_string()).collect::<Vec<_>>();
    (
        Vocabulary::from(words),
        entries.iter().map(|e| e.1).collect(),
    )
}

/// Trains skip-gram vectors over sentences of tokens, single-threaded.
pub fn train_word2vec<S: AsRef<str>>(
    corpus: &[Vec<S>],
    params: &EmbeddingParams,
) -> Result<EmbeddingModel> {
    if params.dim == 0 || params.window == 0 || params.epochs == 0 {
        return Err(Error::InvalidArgument(
            "dimension, window and epochs must be positive".into(),
        ));
    }
    if params.learning_rate.is_nan() || params.learning_rate <= 0.0 {
        return Err(Error::InvalidArgument(
            "learning rate must be positive".into(),
        ));
    }
    let (vocab, counts) = build_vocab(corpus, params.min_count.max(1));
    if vocab.is_empty() {
        return Err(Error::InvalidArgument(
            "corpus has no tokens to train on".into(),
        ));
    }
    let sentences: Vec<Vec<usize>> = corpus.iter().map(|s| vocab.encode(s)).collect();
    let total: usize = sentences.iter().map(Vec::len).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let dim = params.dim;
    let bound = 0.5 / dim as f64;
    let mut vectors: Vec<Vec<f64>> = (0..vocab.len())
        .map(|_| (0..dim).map(|_| rng.gen_range(-bound..bound)).collect())
        .collect();
    let mut context_vectors = vec![vec![0.0; dim]; vocab.len()];
    let noise =
        WeightedIndex::new(counts.iter().map(|&c| (c as f64).powf(0.75))).expect("positive counts");

    let steps = (params.epochs * total) as f64;
    let mut step = 0usize;
    let mut epoch_losses = Vec::with_capacity(params.epochs);
    let mut negatives: Vec<usize> = Vec::with_capacity(params.negatives);
    let mut d_center = vec![0.0; dim];
    for _ in 0..params.epochs {
        let mut loss = 0.0;
        let mut pairs = 0usize;
        for sentence in &sentences {
            for (i, &center) in sentence.iter().enumerate() {
                let lr = params.learning_rate * (1.0 - step as f64 / steps).max(1e-4);
                step += 1;
                let lo = i.saturating_sub(params.window);
                let hi = (i + params.window).min(sentence.len() - 1);
                for j in (lo..=hi).filter(|&j| j != i) {
                    let context = sentence[j];
                    negatives.clear();
                    for _ in 0..params.negatives {
                        let n = noise.sample(&mut rng);
                        if n != context {
                            negatives.push(n);
                        }
                    }

                    d_center.iter_mut().for_each(|d| *d = 0.0);
                    let v = &vectors[center];
                    let score = dot(&context_vectors[context], v);
                    loss -= log_sigmoid(score);
                    let g = sigmoid(score) - 1.0;
                    for k in 0..dim {
                        d_center[k] += g * context_vectors[context][k];
                        context_vectors[context][k] -= lr * g * v[k];
                    }
                    for &n in &negatives {
                        let score = dot(&context_vectors[n], v);
                        loss -= log_sigmoid(-score);
                        let g = sigmoid(score);
                        for k in 0..dim {
                            d_center[k] += g * context_vectors[n][k];
                            context_vectors[n][k] -= lr * g * v[k];
                        }
                    }
                    for (x, d) in vectors[center].iter_mut().zip(&d_center) {
                        *x -= lr * d;
                    }
                    pairs += 1;
                }
            }
        }
        epoch_losses.push(if pairs == 0 { 0.0 } else { loss / pairs as f64 });
    }

    if vectors.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Validation(
            "training diverged to non-finite values".into(),
        ));
    }
    Ok(EmbeddingModel {
        params: params.clone(),
        vocab,
        counts,
        vectors,
        context_vectors,
        epoch_losses,
    })
}

/// Cosine similarity clamped to [−1, 1]; 0 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

impl EmbeddingModel {
    pub fn dim(&self) -> usize {
        self.params.dim
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.vocab.id(word).map(|i| self.vectors[i].as_slice())
    }

    pub fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        Ok(cosine(self.lookup(a)?, self.lookup(b)?))
    }

    fn lookup(&self, word: &str) -> Result<&[f64]> {
        self.vector(word).ok_or_else(|| Error::NotInVocabulary {
            word: word.to_string(),
            nearest: self.lexicographic_neighbors(word, 5),
        })
    }

    fn lexicographic_neighbors(&self, word: &str, n: usize) -> Vec<String> {
        let mut sorted: Vec<&String> = self.vocab.words().iter().collect();
        sorted.sort();
        let at = sorted.partition_point(|w| w.as_str() < word);
        let start = at.saturating_sub(n / 2).min(sorted.len().saturating_sub(n));
        sorted.into_iter().skip(start).take(n).cloned().collect()
    }

    /// The `topn` words closest to `word` by cosine, excluding `word`.
    /// Ties go to the lower vocabulary index.
    pub fn most_similar(&self, word: &str, topn: usize) -> Result<Vec<(String, f64)>> {
        let query = self.lookup(word)?;
        let own = self.vocab.id(word);
        let mut scored: Vec<(usize, f64)> = (0..self.vocab.len())
            .filter(|&i| Some(i) != own)
            .map(|i| (i, cosine(query, &self.vectors[i])))
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(topn);
        Ok(scored
            .into_iter()
            .map(|(i, s)| (self.vocab.word(i).to_string(), s))
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> EmbeddingParams {
        EmbeddingParams {
            dim: 16,
            window: 2,
            epochs: 3,
            ..Default::default()
        }
    }

    fn words(text: &str) -> Vec<String> {
        text.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn vocab_orders_by_frequency_then_first_seen() {
        let corpus = vec![words("b a c a"), words("c d")];
        let (vocab, counts) = build_vocab(&corpus, 1);
        assert_eq!(vocab.words(), ["a", "c", "b", "d"]);
        assert_eq!(counts, [2, 2, 1, 1]);
        let (vocab, _) = build_vocab(&corpus, 2);
        assert_eq!(vocab.words(), ["a", "c"]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let corpus: Vec<Vec<String>> = vec![vec![]];
        assert!(train_word2vec(&corpus, &small()).is_err());
        assert!(train_word2vec::<String>(&[], &small()).is_err());
    }

    #[test]
    fn training_is_deterministic() {
        let corpus = vec![words("the cat sat on the mat"), words("a dog sat on a log")];
        let a = train_word2vec(&corpus, &small()).unwrap();
        let b = train_word2vec(&corpus, &small()).unwrap();
        assert_eq!(a, b);
        assert!(a.vectors.iter().flatten().all(|x| x.is_finite()));
    }

    #[test]
    fn initial_vectors_are_bounded_and_contexts_zero() {
        let corpus = vec![words("x y z")];
        let params = EmbeddingParams {
            epochs: 1,
            learning_rate: 1e-300,
            ..small()
        };
        let model = train_word2vec(&corpus, &params).unwrap();
        let bound = 0.5 / 16.0;
        assert!(model.vectors.iter().flatten().all(|x| x.abs() <= bound));
    }

    #[test]
    fn most_similar_excludes_query_and_is_sorted() {
        let corpus = vec![words("a b c d e f g h i j k l m")];
        let model = train_word2vec(&corpus, &small()).unwrap();
        let hits = model.most_similar("c", 10).unwrap();
        assert_eq!(hits.len(), 10);
        assert!(hits.iter().all(|(w, _)| w != "c"));
        assert!(hits.windows(2).all(|p| p[0].1 >= p[1].1));
        assert!(hits.iter().all(|(_, s)| (-1.0..=1.0).contains(s)));
    }

    #[test]
    fn unknown_word_lists_neighbors() {
        let corpus = vec![words("apple apricot banana cherry")];
        let model = train_word2vec(&corpus, &small()).unwrap();
        match model.most_similar("apz", 3) {
            Err(Error::NotInVocabulary { word, nearest }) => {
                assert_eq!(word, "apz");
                assert!(nearest.contains(&"apricot".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let corpus = vec![words("one two three two one")];
        let model = train_word2vec(&corpus, &small()).unwrap();
        let back = EmbeddingModel::from_json(&model.to_json()).unwrap();
        for (a, b) in model
            .vectors
            .iter()
            .flatten()
            .zip(back.vectors.iter().flatten())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back, model);
    }

    #[test]
    fn cosine_edge_cases() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
        assert!((cosine(&[3.0, 4.0], &[3.0, 4.0]) - 1.0).abs() < 1e-15);
        assert!((cosine(&[1.0, 0.0], &[-2.0, 0.0]) + 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn cosine_is_symmetric_and_bounded(
            a in prop::collection::vec(-10.0f64..10.0, 5),
            b in prop::collection::vec(-10.0f64..10.0, 5),
        ) {
            let ab = cosine(&a, &b);
            prop_assert!((ab - cosine(&b, &a)).abs() <= 1e-12);
            prop_assert!((-1.0..=1.0).contains(&ab));
            if a.iter().any(|&x| x != 0.0) {
                prop_assert!((cosine(&a, &a) - 1.0).abs() < 1e-12);
            }
        }
    }
}
