//! End-to-end run: corpus, preprocessing, models, labels, report.

use std::fmt;

use serde::Serialize;
use toplab::corpus::{load_jsonl, load_text_dir, Corpus};
use toplab::embedding::{train_word2vec, EmbeddingModel, EmbeddingParams};
use toplab::kmeans::{fit_kmeans, tfidf, KMeansParams};
use toplab::labeler::{aggregate, label_topic, summarize, ModelKind, ModelReport, TopicSource};
use toplab::lda::{fit_lda, LdaParams};
use toplab::phrases::NGramCounts;
use toplab::textprep::TextPipeline;
use toplab::wordnet::{SensePolicy, WordNetDb};

use crate::config::{InputFormat, ModelChoice, RunConfig};

pub const REPORT_FORMAT: &str = "toplab-report";
pub const REPORT_VERSION: u32 = 1;
const DIAGNOSTIC_BIGRAMS: usize = 5;

/// A pipeline failure tagged with the stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: String,
    pub source: toplab::Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.source)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

fn stage<T>(name: impl Into<String>, r: toplab::Result<T>) -> Result<T, StageError> {
    r.map_err(|source| StageError {
        stage: name.into(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSettings {
    pub model: ModelChoice,
    pub topics: usize,
    pub words: usize,
    pub seed: u64,
    pub lda_iterations: usize,
    pub n_init: usize,
    pub max_iter: usize,
    pub use_embedding: bool,
    pub sense_policy: SensePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BigramCount {
    pub bigram: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentInfo {
    pub id: String,
    pub title: Option<String>,
    pub sentences: usize,
    pub tokens: usize,
    pub top_bigrams: Vec<BigramCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub version: u32,
    pub settings: ReportSettings,
    pub documents: Vec<DocumentInfo>,
    pub models: Vec<ModelReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn model(&self, kind: ModelKind) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.model_kind == kind)
    }
}

pub fn load_corpus(config: &RunConfig) -> Result<Corpus, StageError> {
    let loaded = match config.format {
        InputFormat::Jsonl => load_jsonl(&config.input),
        InputFormat::TxtDir => load_text_dir(&config.input),
    };
    stage("corpus", loaded)
}

/// Runs every stage with an already loaded WordNet.
pub fn run_with(config: &RunConfig, db: &WordNetDb) -> Result<Report, StageError> {
    let corpus = load_corpus(config)?;
    let pipeline = TextPipeline::bundled(db);

    // Each document is modeled on its own, with its sentences as the units.
    let mut documents = Vec::new();
    let mut units: Vec<(String, Vec<Vec<String>>)> = Vec::new();
    for doc in corpus.iter() {
        let sentences: Vec<Vec<String>> = pipeline
            .preprocess_sentences(&doc.model_text())
            .into_iter()
            .map(|s| s.into_iter().map(|t| t.lemma).collect())
            .filter(|s: &Vec<String>| !s.is_empty())
            .collect();
        let bigrams = stage(
            format!("phrases ({})", doc.id),
            NGramCounts::from_sentences(&sentences, 2),
        )?;
        documents.push(DocumentInfo {
            id: doc.id.clone(),
            title: doc.title.clone(),
            sentences: sentences.len(),
            tokens: sentences.iter().map(Vec::len).sum(),
            top_bigrams: bigrams
                .most_common(DIAGNOSTIC_BIGRAMS)
                .into_iter()
                .map(|(g, count)| BigramCount {
                    bigram: g.to_string(),
                    count,
                })
                .collect(),
        });
        units.push((doc.id.clone(), sentences));
    }

    let embedding: Option<EmbeddingModel> = if config.use_embedding {
        let all: Vec<Vec<String>> = units.iter().flat_map(|(_, s)| s.clone()).collect();
        let params = EmbeddingParams {
            seed: config.seed,
            ..Default::default()
        };
        Some(stage("embedding", train_word2vec(&all, &params))?)
    } else {
        None
    };

    let mut models = Vec::new();
    let kinds = [
        (ModelKind::Lda, config.model.lda()),
        (ModelKind::KMeans, config.model.kmeans()),
    ];
    for (kind, _) in kinds.into_iter().filter(|(_, on)| *on) {
        let mut groups = Vec::new();
        let mut unlabeled = Vec::new();
        for (id, sentences) in &units {
            let model: Box<dyn TopicSource> = match kind {
                ModelKind::Lda => {
                    let params = LdaParams {
                        topics: config.topics,
                        iterations: config.iters,
                        seed: config.seed,
                        ..Default::default()
                    };
                    Box::new(stage(format!("lda ({id})"), fit_lda(sentences, &params))?)
                }
                ModelKind::KMeans => {
                    let params = KMeansParams {
                        k: config.topics,
                        n_init: config.n_init,
                        max_iter: config.max_iter,
                        seed: config.seed,
                    };
                    let x = stage(format!("tfidf ({id})"), tfidf(sentences))?;
                    Box::new(stage(format!("kmeans ({id})"), fit_kmeans(&x, &params))?)
                }
            };
            let summaries = stage(
                format!("labeler ({id})"),
                summarize(db, model.as_ref(), id, config.words),
            )?;
            let mut results = Vec::new();
            for summary in &summaries {
                match label_topic(
                    db,
                    &pipeline,
                    summary,
                    embedding.as_ref(),
                    config.sense_policy,
                ) {
                    Ok(r) => results.push(r),
                    Err(u) => unlabeled.push(u),
                }
            }
            groups.push((id.clone(), results));
        }
        models.push(aggregate(kind, groups, unlabeled));
    }

    Ok(Report {
        format: REPORT_FORMAT,
        version: REPORT_VERSION,
        settings: ReportSettings {
            model: config.model,
            topics: config.topics,
            words: config.words,
            seed: config.seed,
            lda_iterations: config.iters,
            n_init: config.n_init,
            max_iter: config.max_iter,
            use_embedding: config.use_embedding,
            sense_policy: config.sense_policy,
        },
        documents,
        models,
    })
}

/// Loads WordNet from the configured directory, then runs.
pub fn run(config: &RunConfig) -> Result<Report, StageError> {
    let db = stage("wordnet", WordNetDb::load(&config.wordnet_dir))?;
    run_with(config, &db)
}
