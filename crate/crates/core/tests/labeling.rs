mod common;

use common::db;
use proptest::prelude::*;
use toplab::labeler::{
    generate_candidates, select_label, summarize, Candidate, CandidateSet, CandidateSource,
    ModelKind, TopicSource,
};
use toplab::textprep::TextPipeline;
use toplab::wordnet::SensePolicy;
use toplab::Result;

const PAIRS: [(&str, &str, f64); 10] = [
    ("topic", "conversation", 0.545),
    ("use", "service", 0.800),
    ("document", "information", 0.545),
    ("news", "information", 0.909),
    ("headline", "story", 0.400),
    ("label", "identification", 0.625),
    ("algorithm", "rule", 0.353),
    ("sentiment", "feeling", 0.909),
    ("user", "person", 0.800),
    ("noun", "preposition", 0.750),
];

#[test]
fn first_sense_wup_pairs() {
    let db = db();
    for (a, b, want) in PAIRS {
        let got = db.wup_words(a, b, SensePolicy::FirstSense);
        assert!((got - want).abs() < 1e-3, "{a}/{b}: {got}");
        assert_eq!(got, db.wup_words(b, a, SensePolicy::FirstSense));
    }
}

#[test]
fn max_over_senses_never_below_first_sense() {
    let db = db();
    for (a, b, _) in PAIRS {
        let first = db.wup_words(a, b, SensePolicy::FirstSense);
        let max = db.wup_words(a, b, SensePolicy::MaxOverSenses);
        assert!(max >= first && max <= 1.0, "{a}/{b}");
    }
}

fn labels(set: &CandidateSet) -> Vec<&str> {
    set.labels().collect()
}

#[test]
fn topic_candidates_and_label() {
    let db = db();
    let pipeline = TextPipeline::bundled(db);
    let set = generate_candidates(db, &pipeline, "topic", None).unwrap();
    let got = labels(&set);
    for want in ["matter", "conversation", "discussion", "situation", "event"] {
        assert!(got.contains(&want), "missing {want} in {got:?}");
    }
    assert!(!got.contains(&"topic") && !got.contains(&"subject"));
    let pick = select_label(db, &set, SensePolicy::FirstSense).unwrap();
    assert_eq!(pick.label, "conversation");
    assert!((pick.wup_score - 6.0 / 11.0).abs() < 1e-12);
}

#[test]
fn news_candidates_and_label() {
    let db = db();
    let pipeline = TextPipeline::bundled(db);
    let set = generate_candidates(db, &pipeline, "news", None).unwrap();
    let got = labels(&set);
    for want in [
        "information",
        "event",
        "magazine",
        "newspaper",
        "commentary",
    ] {
        assert!(got.contains(&want), "missing {want} in {got:?}");
    }
    let pick = select_label(db, &set, SensePolicy::FirstSense).unwrap();
    assert_eq!(pick.label, "information");
    assert!((pick.wup_score - 10.0 / 11.0).abs() < 1e-12);
}

#[test]
fn other_reference_labels() {
    let db = db();
    let pipeline = TextPipeline::bundled(db);
    for (word, label) in [
        ("algorithm", "rule"),
        ("sentiment", "feeling"),
        ("user", "person"),
    ] {
        let set = generate_candidates(db, &pipeline, word, None).unwrap();
        let pick = select_label(db, &set, SensePolicy::FirstSense).unwrap();
        assert_eq!(pick.label, label, "{word}: {:?}", labels(&set));
    }
}

#[test]
fn candidates_are_unique_nouns_with_sources() {
    let db = db();
    let pipeline = TextPipeline::bundled(db);
    for word in ["topic", "news", "document", "label", "headline"] {
        let set = generate_candidates(db, &pipeline, word, None).unwrap();
        let mut seen = std::collections::HashSet::new();
        for c in &set.candidates {
            assert!(seen.insert(c.label.to_lowercase()), "duplicate {}", c.label);
            assert!(db.has_noun_synset(&c.label));
            assert_ne!(c.source, CandidateSource::EmbeddingNeighbor);
        }
    }
}

#[test]
fn no_noun_synset_is_an_error() {
    let db = db();
    let pipeline = TextPipeline::bundled(db);
    assert!(generate_candidates(db, &pipeline, "nmf", None).is_err());
    let empty = CandidateSet {
        top_weighted: "topic".into(),
        candidates: vec![],
    };
    assert!(select_label(db, &empty, SensePolicy::FirstSense).is_err());
}

#[test]
fn singleton_candidate_wins() {
    let db = db();
    let set = CandidateSet {
        top_weighted: "topic".into(),
        candidates: vec![Candidate {
            label: "banana".into(),
            source: CandidateSource::GlossNoun,
        }],
    };
    let pick = select_label(db, &set, SensePolicy::FirstSense).unwrap();
    assert_eq!(pick.label, "banana");
    assert_eq!(
        pick.wup_score,
        db.wup_words("topic", "banana", SensePolicy::FirstSense)
    );
}

struct Fixed(Vec<Vec<(&'static str, f64)>>);

impl TopicSource for Fixed {
    fn kind(&self) -> ModelKind {
        ModelKind::KMeans
    }
    fn topic_count(&self) -> usize {
        self.0.len()
    }
    fn ranked_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
        Ok(self.0[topic]
            .iter()
            .take(n)
            .map(|(w, x)| (w.to_string(), *x))
            .collect())
    }
}

#[test]
fn summaries_fall_back_past_non_nouns() {
    let db = db();
    let model = Fixed(vec![
        vec![("topic", 0.071), ("algorithm", 0.046), ("document", 0.034)],
        vec![("nmf", 0.2), ("use", 0.1), ("lda", 0.05)],
        vec![("nmf", 0.2), ("quickly", 0.1)],
    ]);
    let s = summarize(db, &model, "S1", 3).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s[0].top_weighted.as_deref(), Some("topic"));
    assert_eq!(s[1].top_weighted.as_deref(), Some("use"));
    assert_eq!(s[2].top_weighted, None);
    assert_eq!(s[0].index, 1);
    assert!(summarize(db, &Fixed(vec![]), "S1", 3).unwrap().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn label_survives_candidate_permutation(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let db = db();
        let pipeline = TextPipeline::bundled(db);
        let set = generate_candidates(db, &pipeline, "topic", None).unwrap();
        let base = select_label(db, &set, SensePolicy::FirstSense).unwrap();
        let mut shuffled = set.clone();
        shuffled.candidates.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let pick = select_label(db, &shuffled, SensePolicy::FirstSense).unwrap();
        prop_assert_eq!(pick.wup_score, base.wup_score);
        let tied: Vec<&str> = set.labels()
            .filter(|l| db.wup_words("topic", l, SensePolicy::FirstSense) == base.wup_score)
            .collect();
        prop_assert!(tied.contains(&pick.label.as_str()));
        prop_assert!((0.0..=1.0).contains(&pick.wup_score));
    }
}
