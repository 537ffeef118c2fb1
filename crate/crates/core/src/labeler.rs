//! Turning fitted topics and clusters into single-word labels.
//!
//! The top-weighted word of each topic is looked up in WordNet; the other
//! lemmas and gloss nouns of its noun senses become candidate labels, and the
//! candidate with the highest Wu-Palmer similarity to the top word wins.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::kmeans::KMeansModel;
use crate::lda::LdaModel;
use crate::textprep::{TextPipeline, Token};
use crate::wordnet::{Pos, SensePolicy, WordNetDb};

/// Neighbors taken from the embedding when it contributes candidates.
pub const EMBEDDING_TOPN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "lda")]
    Lda,
    #[serde(rename = "kmeans")]
    KMeans,
}

impl ModelKind {
    /// "Topic" or "Cluster".
    pub fn unit(self) -> &'static str {
        match self {
            ModelKind::Lda => "Topic",
            ModelKind::KMeans => "Cluster",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lda => "LDA",
            ModelKind::KMeans => "K-Means",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedWord {
    pub word: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub model_kind: ModelKind,
    pub doc_set_id: String,
    /// 1-based topic or cluster number.
    pub index: usize,
    pub top_words: Vec<WeightedWord>,
    /// First top word with a noun synset; `None` marks the topic unlabeled.
    pub top_weighted: Option<String>,
}

/// Anything that exposes ranked words per topic.
pub trait TopicSource {
    fn kind(&self) -> ModelKind;
    fn topic_count(&self) -> usize;
    fn ranked_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>>;
}

impl TopicSource for LdaModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Lda
    }

    fn topic_count(&self) -> usize {
        self.topics
    }

    fn ranked_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
        if self.vocab_size() == 0 {
            return Ok(Vec::new());
        }
        self.top_words(topic, n.min(self.vocab_size()))
    }
}

impl TopicSource for KMeansModel {
    fn kind(&self) -> ModelKind {
        ModelKind::KMeans
    }

    fn topic_count(&self) -> usize {
        self.k
    }

    fn ranked_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
        self.top_terms(topic, n)
    }
}

/// One summary per topic with its `words_per_topic` best words.
pub fn summarize(
    db: &WordNetDb,
    model: &dyn TopicSource,
    doc_set_id: &str,
    words_per_topic: usize,
) -> Result<Vec<TopicSummary>> {
    (0..model.topic_count())
        .map(|t| {
            let top_words: Vec<WeightedWord> = model
                .ranked_words(t, words_per_topic)?
                .into_iter()
                .map(|(word, weight)| WeightedWord { word, weight })
                .collect();
            let top_weighted = top_words
                .iter()
                .find(|w| db.has_noun_synset(&w.word))
                .map(|w| w.word.clone());
            if top_weighted.is_none() {
                log::warn!(
                    "{} {} of {doc_set_id}: no top word has a noun synset",
                    model.kind().unit(),
                    t + 1
                );
            }
            Ok(TopicSummary {
                model_kind: model.kind(),
                doc_set_id: doc_set_id.to_string(),
                index: t + 1,
                top_words,
                top_weighted,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSource {
    SynsetLemma,
    GlossNoun,
    EmbeddingNeighbor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub source: CandidateSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub top_weighted: String,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.candidates.iter().map(|c| c.label.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }
}

/// Noun lemmas ordered by descending frequency, ties by first occurrence.
pub fn extract_nouns(tokens: &[Token]) -> Vec<String> {
    let mut counts: HashMap<&str, (usize, usize)> = HashMap::new();
    for (i, t) in tokens.iter().enumerate().filter(|(_, t)| t.tag.is_noun()) {
        counts.entry(t.lemma.as_str()).or_insert((0, i)).0 += 1;
    }
    let mut nouns: Vec<(&str, usize, usize)> = counts
        .into_iter()
        .map(|(w, (c, first))| (w, c, first))
        .collect();
    nouns.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    nouns.into_iter().map(|(w, _, _)| w.to_string()).collect()
}

/// Candidate labels drawn from every noun sense of `top_weighted`: co-lemmas
/// of the later senses (multiword lemmas split into words), nouns of each
/// definition, then optionally embedding neighbors.
///
/// The top word, its base form and the lemmas of its first sense are left
/// out, as is anything without a noun synset. Duplicates keep their first
/// position.
pub fn generate_candidates(
    db: &WordNetDb,
    pipeline: &TextPipeline<'_>,
    top_weighted: &str,
    embedding: Option<&EmbeddingModel>,
) -> Result<CandidateSet> {
    let senses = db.synsets(top_weighted, Pos::Noun);
    if senses.is_empty() {
        return Err(Error::NoNounSynset(top_weighted.to_string()));
    }
    let mut excluded: HashSet<String> = HashSet::new();
    excluded.insert(top_weighted.to_lowercase());
    if let Some(base) = db.morphy(&top_weighted.to_lowercase(), Pos::Noun) {
        excluded.insert(base);
    }
    excluded.extend(senses[0].lemmas.iter().map(|l| l.to_lowercase()));

    let mut raw: Vec<Candidate> = Vec::new();
    for (i, sense) in senses.iter().enumerate() {
        // First-sense lemmas are synonyms of the top word; their parts are not
        // offered either ("algorithmic_program" would otherwise add "program").
        let lemmas = if i == 0 { &[][..] } else { &sense.lemmas[..] };
        for lemma in lemmas {
            for part in lemma.split('_') {
                raw.push(Candidate {
                    label: part.to_lowercase(),
                    source: CandidateSource::SynsetLemma,
                });
            }
        }
        for noun in extract_nouns(&pipeline.preprocess_text(&sense.definition)) {
            raw.push(Candidate {
                label: noun,
                source: CandidateSource::GlossNoun,
            });
        }
    }
    if let Some(model) = embedding {
        match model.most_similar(top_weighted, EMBEDDING_TOPN) {
            Ok(neighbors) => raw.extend(neighbors.into_iter().map(|(w, _)| Candidate {
                label: w.to_lowercase(),
                source: CandidateSource::EmbeddingNeighbor,
            })),
            Err(Error::NotInVocabulary { .. }) => {
                log::debug!("{top_weighted} is not in the embedding vocabulary")
            }
            Err(e) => return Err(e),
        }
    }

    let mut seen = excluded;
    let candidates: Vec<Candidate> = raw
        .into_iter()
        .filter(|c| !c.label.is_empty() && db.has_noun_synset(&c.label))
        .filter(|c| seen.insert(c.label.clone()))
        .collect();
    if candidates.is_empty() {
        log::warn!("no candidate labels for {top_weighted}");
    }
    Ok(CandidateSet {
        top_weighted: top_weighted.to_string(),
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub label: String,
    pub wup_score: f64,
}

/// The candidate with the highest WUP similarity to the top word; the
/// earliest candidate wins ties.
pub fn select_label(
    db: &WordNetDb,
    candidates: &CandidateSet,
    policy: SensePolicy,
) -> Result<Selection> {
    let mut best: Option<Selection> = None;
    for label in candidates.labels() {
        let score = db.wup_words(&candidates.top_weighted, label, policy);
        if best.as_ref().is_none_or(|b| score > b.wup_score) {
            best = Some(Selection {
                label: label.to_string(),
                wup_score: score,
            });
        }
    }
    best.ok_or_else(|| Error::NoCandidates(candidates.top_weighted.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelResult {
    pub summary: TopicSummary,
    pub candidates: CandidateSet,
    pub label: String,
    pub wup_score: f64,
}

/// Why a topic ended up without a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unlabeled {
    pub summary: TopicSummary,
    pub reason: String,
}

/// Candidates and label for one summary.
pub fn label_topic(
    db: &WordNetDb,
    pipeline: &TextPipeline<'_>,
    summary: &TopicSummary,
    embedding: Option<&EmbeddingModel>,
    policy: SensePolicy,
) -> std::result::Result<LabelResult, Unlabeled> {
    let unlabeled = |reason: String| Unlabeled {
        summary: summary.clone(),
        reason,
    };
    let top = summary
        .top_weighted
        .as_deref()
        .ok_or_else(|| unlabeled("no top word has a noun synset".into()))?;
    let candidates =
        generate_candidates(db, pipeline, top, embedding).map_err(|e| unlabeled(e.to_string()))?;
    let selection = select_label(db, &candidates, policy).map_err(|e| unlabeled(e.to_string()))?;
    Ok(LabelResult {
        summary: summary.clone(),
        candidates,
        label: selection.label,
        wup_score: selection.wup_score,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentScores {
    pub doc_set_id: String,
    pub results: Vec<LabelResult>,
    pub avg_wup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model_kind: ModelKind,
    pub per_document: Vec<DocumentScores>,
    /// Mean of the per-document averages; `None` when no document has a label.
    pub total_avg: Option<f64>,
    pub unlabeled: Vec<Unlabeled>,
}

/// Arithmetic mean, summed in sorted order so it does not depend on input order.
pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(sorted.iter().sum::<f64>() / sorted.len() as f64)
}

/// Per-document mean WUP and the model total (mean of document means).
/// Documents without any labeled topic are left out with a warning.
pub fn aggregate(
    model_kind: ModelKind,
    groups: Vec<(String, Vec<LabelResult>)>,
    unlabeled: Vec<Unlabeled>,
) -> ModelReport {
    let mut per_document = Vec::new();
    for (doc_set_id, results) in groups {
        let scores: Vec<f64> = results.iter().map(|r| r.wup_score).collect();
        match mean(&scores) {
            Some(avg_wup) => per_document.push(DocumentScores {
                doc_set_id,
                results,
                avg_wup,
            }),
            None => {
                log::warn!("{model_kind}: {doc_set_id} has no labeled topics, left out of averages")
            }
        }
    }
    let averages: Vec<f64> = per_document.iter().map(|d| d.avg_wup).collect();
    ModelReport {
        model_kind,
        total_avg: mean(&averages),
        per_document,
        unlabeled,
    }
}
