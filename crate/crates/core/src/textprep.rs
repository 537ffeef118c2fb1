//! Tokenization, POS tagging, stop-word removal and lemmatization.
//!
//! The tagger is a most-frequent-tag lexicon with suffix fallbacks; the
//! lemmatizer is WordNet morphy. Tagging runs on the full sentence before
//! stop words are dropped.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::wordnet::{Pos, WordNetDb};

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PennTag {
    NN,
    NNS,
    NNP,
    NNPS,
    VB,
    VBD,
    VBG,
    VBN,
    VBP,
    VBZ,
    JJ,
    JJR,
    JJS,
    RB,
    RBR,
    RBS,
    DT,
    IN,
    PRP,
    CC,
    CD,
    PUNCT,
    OTHER,
}

impl PennTag {
    /// Maps a raw Penn Treebank tag; unlisted tags become `OTHER`.
    pub fn from_penn(tag: &str) -> PennTag {
        use PennTag::*;
        match tag {
            "NN" => NN,
            "NNS" => NNS,
            "NNP" => NNP,
            "NNPS" => NNPS,
            "VB" => VB,
            "VBD" => VBD,
            "VBG" => VBG,
            "VBN" => VBN,
            "VBP" => VBP,
            "VBZ" => VBZ,
            "JJ" => JJ,
            "JJR" => JJR,
            "JJS" => JJS,
            "RB" => RB,
            "RBR" => RBR,
            "RBS" => RBS,
            "DT" => DT,
            "IN" => IN,
            "PRP" => PRP,
            "CC" => CC,
            "CD" => CD,
            "PUNCT" | "," | "." | ":" | "``" | "''" | "(" | ")" | "#" | "$" | "SYM" => PUNCT,
            _ => OTHER,
        }
    }

    pub fn as_str(self) -> &'static str {
        use PennTag::*;
        match self {
            NN => "NN",
            NNS => "NNS",
            NNP => "NNP",
            NNPS => "NNPS",
            VB => "VB",
            VBD => "VBD",
            VBG => "VBG",
            VBN => "VBN",
            VBP => "VBP",
            VBZ => "VBZ",
            JJ => "JJ",
            JJR => "JJR",
            JJS => "JJS",
            RB => "RB",
            RBR => "RBR",
            RBS => "RBS",
            DT => "DT",
            IN => "IN",
            PRP => "PRP",
            CC => "CC",
            CD => "CD",
            PUNCT => "PUNCT",
            OTHER => "OTHER",
        }
    }

    pub fn is_noun(self) -> bool {
        matches!(
            self,
            PennTag::NN | PennTag::NNS | PennTag::NNP | PennTag::NNPS
        )
    }

    pub fn is_verb(self) -> bool {
        use PennTag::*;
        matches!(self, VB | VBD | VBG | VBN | VBP | VBZ)
    }

    pub fn is_adjective(self) -> bool {
        matches!(self, PennTag::JJ | PennTag::JJR | PennTag::JJS)
    }

    pub fn is_adverb(self) -> bool {
        matches!(self, PennTag::RB | PennTag::RBR | PennTag::RBS)
    }

    /// Plural, past, participle, third person, comparative or superlative.
    pub fn is_inflected(self) -> bool {
        use PennTag::*;
        matches!(
            self,
            NNS | NNPS | VBD | VBG | VBN | VBZ | JJR | JJS | RBR | RBS
        )
    }

    /// WordNet part of speech used for lemmatization.
    pub fn wordnet_pos(self) -> Option<Pos> {
        if self.is_noun() {
            Some(Pos::Noun)
        } else if self.is_verb() {
            Some(Pos::Verb)
        } else if self.is_adjective() {
            Some(Pos::Adj)
        } else if self.is_adverb() {
            Some(Pos::Adv)
        } else {
            None
        }
    }
}

impl fmt::Display for PennTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Display form: lowercase, except all-caps acronyms.
    pub surface: String,
    /// Lowercase base form.
    pub lemma: String,
    pub tag: PennTag,
    /// Sentence index within the document.
    pub sentence: usize,
    /// Index within the sentence, before any filtering.
    pub position: usize,
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-')
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Lowercases unless the word is an all-caps acronym of two or more letters.
fn normalize_case(word: &str) -> String {
    let letters = word.chars().filter(|c| c.is_alphabetic()).count();
    let acronym = letters >= 2
        && word
            .chars()
            .filter(|c| c.is_alphabetic())
            .all(char::is_uppercase);
    if acronym {
        word.to_string()
    } else {
        word.to_lowercase()
    }
}

/// Splits text into sentences of words.
///
/// Sentences end at `.`, `!` or `?` followed by whitespace or end of text.
/// Words are maximal alphanumeric runs; an apostrophe or hyphen between two
/// alphanumerics stays inside the word ("don't", "k-means"), as does a dot
/// between two digits. All other punctuation separates words and is dropped.
pub fn tokenize(text: &str) -> Vec<Vec<String>> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut sentence: Vec<String> = Vec::new();
    let mut word = String::new();

    let flush_word = |word: &mut String, sentence: &mut Vec<String>| {
        if !word.is_empty() {
            sentence.push(normalize_case(word));
            word.clear();
        }
    };

    for (i, &c) in chars.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| chars[j]);
        let next = chars.get(i + 1).copied();
        if c.is_alphanumeric() {
            word.push(c);
            continue;
        }
        let between_alnum =
            prev.is_some_and(char::is_alphanumeric) && next.is_some_and(char::is_alphanumeric);
        if between_alnum && is_joiner(c) {
            word.push(if c == '\u{2019}' { '\'' } else { c });
            continue;
        }
        if between_alnum
            && c == '.'
            && prev.is_some_and(|p| p.is_ascii_digit())
            && next.is_some_and(|n| n.is_ascii_digit())
        {
            word.push(c);
            continue;
        }
        flush_word(&mut word, &mut sentence);
        if is_terminator(c) && next.is_none_or(char::is_whitespace) && !sentence.is_empty() {
            sentences.push(std::mem::take(&mut sentence));
        }
    }
    flush_word(&mut word, &mut sentence);
    if !sentence.is_empty() {
        sentences.push(sentence);
    }
    sentences
}

/// A fixed list of function words, matched on lowercase form.
#[derive(Debug, Clone, Default)]
pub struct StopList {
    words: HashSet<String>,
}

impl StopList {
    /// One lowercase word per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        StopList { words }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn bundled() -> &'static StopList {
        static LIST: OnceLock<StopList> = OnceLock::new();
        LIST.get_or_init(|| StopList::parse(BUNDLED_STOPWORDS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn remove_stopwords<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<String> {
        tokens
            .iter()
            .map(AsRef::as_ref)
            .filter(|t| !self.contains(t))
            .map(String::from)
            .collect()
    }
}

/// Most-frequent-tag lexicon keyed by lowercase word.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    tags: HashMap<String, PennTag>,
}

impl Lexicon {
    /// `word<TAB>tag` per line.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let mut tags = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source, i + 1, "expected word<TAB>tag"))?;
            tags.insert(word.to_lowercase(), PennTag::from_penn(tag.trim()));
        }
        Ok(Lexicon { tags })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn bundled() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            Lexicon::parse(BUNDLED_LEXICON, Path::new("lexicon.tsv")).expect("bundled lexicon")
        })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn lookup(&self, word: &str) -> Option<PennTag> {
        self.tags.get(&word.to_lowercase()).copied()
    }

    /// Lexicon tag, else punctuation/number classes, else suffix rules, else NN.
    pub fn tag_word(&self, word: &str) -> PennTag {
        if let Some(tag) = self.lookup(word) {
            return tag;
        }
        if !word.is_empty() && word.chars().all(|c| !c.is_alphanumeric()) {
            return PennTag::PUNCT;
        }
        if word.chars().any(|c| c.is_ascii_digit())
            && word
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-'))
        {
            return PennTag::CD;
        }
        let lower = word.to_lowercase();
        let len = lower.chars().count();
        if lower.ends_with("ing") && len > 4 {
            PennTag::VBG
        } else if lower.ends_with("ed") && len > 3 {
            PennTag::VBD
        } else if lower.ends_with("ly") && len > 3 {
            PennTag::RB
        } else if lower.ends_with('s')
            && len > 3
            && !(lower.ends_with("ss") || lower.ends_with("us") || lower.ends_with("is"))
        {
            PennTag::NNS
        } else {
            PennTag::NN
        }
    }

    pub fn pos_tag<S: AsRef<str>>(&self, sentence: &[S]) -> Vec<(String, PennTag)> {
        sentence
            .iter()
            .map(|w| (w.as_ref().to_string(), self.tag_word(w.as_ref())))
            .collect()
    }
}

/// Base-form lookup used by the pipeline.
pub trait Lemmatizer {
    fn base_form(&self, word: &str, pos: Pos) -> Option<String>;

    /// Like `base_form`, for words whose tag marks them as inflected.
    fn inflected_base_form(&self, word: &str, pos: Pos) -> Option<String> {
        self.base_form(word, pos)
    }
}

impl Lemmatizer for WordNetDb {
    fn base_form(&self, word: &str, pos: Pos) -> Option<String> {
        self.morphy(word, pos)
    }

    fn inflected_base_form(&self, word: &str, pos: Pos) -> Option<String> {
        self.morphy_inflected(word, pos)
    }
}

/// The full preprocessing pipeline over borrowed, immutable resources.
#[derive(Clone, Copy)]
pub struct TextPipeline<'a> {
    lexicon: &'a Lexicon,
    stopwords: &'a StopList,
    lemmatizer: &'a dyn Lemmatizer,
}

impl<'a> TextPipeline<'a> {
    pub fn new(
        lexicon: &'a Lexicon,
        stopwords: &'a StopList,
        lemmatizer: &'a dyn Lemmatizer,
    ) -> Self {
        TextPipeline {
            lexicon,
            stopwords,
            lemmatizer,
        }
    }

    /// Bundled lexicon and stop list.
    pub fn bundled(lemmatizer: &'a dyn Lemmatizer) -> Self {
        Self::new(Lexicon::bundled(), StopList::bundled(), lemmatizer)
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    pub fn stopwords(&self) -> &'a StopList {
        self.stopwords
    }

    /// Lowercase base form for open-class tags; lowercase identity otherwise.
    pub fn lemmatize(&self, surface: &str, tag: PennTag) -> String {
        let lower = surface.to_lowercase();
        let Some(pos) = tag.wordnet_pos() else {
            return lower;
        };
        let base = if tag.is_inflected() {
            self.lemmatizer.inflected_base_form(&lower, pos)
        } else {
            self.lemmatizer.base_form(&lower, pos)
        };
        base.unwrap_or(lower)
    }

    /// Tokenized, tagged and lemmatized sentences with nothing removed.
    pub fn analyze(&self, text: &str) -> Vec<Vec<Token>> {
        tokenize(text)
            .into_iter()
            .enumerate()
            .map(|(sentence, words)| {
                self.lexicon
                    .pos_tag(&words)
                    .into_iter()
                    .enumerate()
                    .map(|(position, (surface, tag))| Token {
                        lemma: self.lemmatize(&surface, tag),
                        surface,
                        tag,
                        sentence,
                        position,
                    })
                    .collect()
            })
            .collect()
    }

    /// `analyze`, then drop stop words and punctuation. Sentences left empty
    /// are kept so sentence indices stay aligned with the source text.
    pub fn preprocess_sentences(&self, text: &str) -> Vec<Vec<Token>> {
        self.analyze(text)
            .into_iter()
            .map(|sentence| {
                sentence
                    .into_iter()
                    .filter(|t| t.tag != PennTag::PUNCT && !self.stopwords.contains(&t.surface))
                    .collect()
            })
            .collect()
    }

    pub fn preprocess_text(&self, text: &str) -> Vec<Token> {
        self.preprocess_sentences(text)
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn preprocess(&self, doc: &Document) -> Vec<Token> {
        self.preprocess_text(&doc.model_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lemmatizer with a handful of fixed entries, for tests that do not load WordNet.
    struct Fixed;

    impl Lemmatizer for Fixed {
        fn base_form(&self, word: &str, pos: Pos) -> Option<String> {
            let base = match (word, pos) {
                ("topics", Pos::Noun) => "topic",
                ("reproduced", Pos::Verb) => "reproduce",
                _ => word,
            };
            Some(base.to_string())
        }
    }

    fn words(sentences: &[&[&str]]) -> Vec<Vec<String>> {
        sentences
            .iter()
            .map(|s| s.iter().map(|w| w.to_string()).collect())
            .collect()
    }

    #[test]
    fn tokenize_plain_sentence() {
        assert_eq!(
            tokenize("Please enter your abstract text"),
            words(&[&["please", "enter", "your", "abstract", "text"]])
        );
    }

    #[test]
    fn tokenize_keeps_contractions() {
        assert_eq!(tokenize("I don't know."), words(&[&["i", "don't", "know"]]));
        assert_eq!(
            tokenize("I'll go, I'd say"),
            words(&[&["i'll", "go", "i'd", "say"]])
        );
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ... !").is_empty());
    }

    #[test]
    fn tokenize_sentences_and_acronyms() {
        assert_eq!(
            tokenize("LDA and K-Means work. NMF (too)! Really? Version 3.0 exists"),
            words(&[
                &["LDA", "and", "k-means", "work"],
                &["NMF", "too"],
                &["really"],
                &["version", "3.0", "exists"],
            ])
        );
    }

    #[test]
    fn tokenize_does_not_split_on_inner_dots() {
        assert_eq!(
            tokenize("see e.g.the end."),
            words(&[&["see", "e", "g", "the", "end"]])
        );
    }

    #[test]
    fn stopword_examples() {
        let stop = StopList::bundled();
        assert_eq!(
            stop.remove_stopwords(&["the", "algorithm", "is", "fast"]),
            ["algorithm", "fast"]
        );
        assert_eq!(stop.remove_stopwords(&["algorithm"]), ["algorithm"]);
        assert!(stop.remove_stopwords(&["an", "in", "almost"]).is_empty());
        assert!(stop.contains("The"));
        assert!((140..=200).contains(&stop.len()));
    }

    #[test]
    fn tagger_lexicon_and_fallbacks() {
        let lex = Lexicon::bundled();
        let tags: Vec<_> = lex
            .pos_tag(&["the", "experience", "is", "wrong", "now"])
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        use PennTag::*;
        assert_eq!(tags, [DT, NN, VBZ, JJ, RB]);
        assert_eq!(lex.tag_word("algorithm"), NN);
        assert_eq!(lex.tag_word(","), PUNCT);
        assert_eq!(lex.tag_word("42"), CD);
        assert_eq!(lex.tag_word("blorfing"), VBG);
        assert_eq!(lex.tag_word("blorfed"), VBD);
        assert_eq!(lex.tag_word("blorfly"), RB);
        assert_eq!(lex.tag_word("blorfs"), NNS);
        assert_eq!(lex.tag_word("blorf"), NN);
        assert_eq!(lex.tag_word("LDA"), NN);
    }

    #[test]
    fn lexicon_parse_errors_name_the_line() {
        let err = Lexicon::parse("a\tDT\nbroken\n", Path::new("lex.tsv")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn pos_tag_length_matches_input() {
        let lex = Lexicon::bundled();
        let sentence = ["a", "b", "c", ",", "topic"];
        assert_eq!(lex.pos_tag(&sentence).len(), sentence.len());
    }

    #[test]
    fn preprocess_drops_stopwords_and_keeps_positions() {
        let lemmatizer = Fixed;
        let pipeline = TextPipeline::bundled(&lemmatizer);
        let tokens = pipeline.preprocess_text("The topics are reproduced.");
        let got: Vec<_> = tokens
            .iter()
            .map(|t| (t.lemma.as_str(), t.tag, t.position))
            .collect();
        assert_eq!(
            got,
            [("topic", PennTag::NNS, 1), ("reproduce", PennTag::VBN, 3)]
        );
        assert!(pipeline.preprocess_text("").is_empty());
    }

    #[test]
    fn acronyms_keep_display_case_but_lemma_is_lowercase() {
        let lemmatizer = Fixed;
        let pipeline = TextPipeline::bundled(&lemmatizer);
        let tokens = pipeline.preprocess_text("LDA works");
        assert_eq!(tokens[0].surface, "LDA");
        assert_eq!(tokens[0].lemma, "lda");
    }
}
