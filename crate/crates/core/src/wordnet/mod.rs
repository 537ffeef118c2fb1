//! WordNet 3.0 database reader.
//!
//! Reads the `dict` files as distributed (`index.*`, `data.*`, `*.exc`),
//! resolves every index entry and pointer at load time, and precomputes the
//! shortest-path depth of every noun synset. After loading the database is
//! immutable, so all queries take `&self` and can be shared across threads.

mod morphy;
mod parse;
mod similarity;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use similarity::SensePolicy;

/// Offset of `entity.n.01`, the unique root of the WordNet 3.0 noun hierarchy.
pub const NOUN_ROOT_OFFSET: u32 = 1740;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    /// Suffix of the database files (`index.noun`, `noun.exc`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
        }
    }

    /// Single-letter code used in synset names.
    pub fn letter(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adj => 'a',
            Pos::Adv => 'r',
        }
    }

    /// Parses the pos code of data and index files; adjective satellites (`s`) fold into `Adj`.
    pub fn from_code(code: &str) -> Option<Pos> {
        match code {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adj),
            "r" => Some(Pos::Adv),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

impl SynsetId {
    pub fn new(pos: Pos, offset: u32) -> Self {
        SynsetId { pos, offset }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.letter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synset {
    pub id: SynsetId,
    /// Lemma names in data-file order, adjective markers such as `(p)` removed.
    pub lemmas: Vec<String>,
    /// Gloss text before the first quoted example.
    pub definition: String,
    pub examples: Vec<String>,
    /// `@` pointers.
    pub hypernyms: Vec<SynsetId>,
    /// `@i` pointers.
    pub instance_hypernyms: Vec<SynsetId>,
}

impl Synset {
    /// Hypernyms followed by instance hypernyms.
    pub fn parents(&self) -> impl Iterator<Item = SynsetId> + '_ {
        self.hypernyms
            .iter()
            .chain(&self.instance_hypernyms)
            .copied()
    }

    /// The full gloss: definition, then examples in quotes.
    pub fn gloss(&self) -> String {
        let mut out = self.definition.clone();
        for ex in &self.examples {
            out.push_str("; \"");
            out.push_str(ex);
            out.push('"');
        }
        out
    }
}

#[derive(Debug, Default)]
struct PosTable {
    synsets: Vec<Synset>,
    by_offset: HashMap<u32, usize>,
    index: HashMap<String, Vec<u32>>,
    exceptions: HashMap<String, Vec<String>>,
}

impl PosTable {
    fn get(&self, offset: u32) -> Option<&Synset> {
        self.by_offset.get(&offset).map(|&i| &self.synsets[i])
    }
}

/// The loaded lexical database.
#[derive(Debug)]
pub struct WordNetDb {
    tables: [PosTable; 4],
    /// Noun synset depth (root = 1), parallel to the noun table.
    noun_depth: Vec<u32>,
    /// Noun parents as table positions, parallel to the noun table.
    noun_parents: Vec<Vec<u32>>,
}

impl WordNetDb {
    /// Loads and validates a WordNet 3.0 `dict` directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut tables: [PosTable; 4] = Default::default();
        for pos in Pos::ALL {
            let table = &mut tables[pos.slot()];
            table.synsets = parse::read_data_file(&dir.join(format!("data.{pos}")), pos)?;
            table.by_offset = table
                .synsets
                .iter()
                .enumerate()
                .map(|(i, s)| (s.id.offset, i))
                .collect();
            let index_path = dir.join(format!("index.{pos}"));
            table.index = parse::read_index_file(&index_path, pos)?;
            table.exceptions = parse::read_exception_file(&dir.join(format!("{pos}.exc")))?;
            for (lemma, offsets) in &table.index {
                if let Some(missing) = offsets.iter().find(|o| !table.by_offset.contains_key(o)) {
                    return Err(Error::Format(format!(
                        "{}: `{lemma}` points at missing synset {missing:08}",
                        index_path.display()
                    )));
                }
            }
        }
        for pos in Pos::ALL {
            for synset in &tables[pos.slot()].synsets {
                for parent in synset.parents() {
                    if tables[parent.pos.slot()].get(parent.offset).is_none() {
                        return Err(Error::Format(format!(
                            "synset {} has dangling hypernym {parent}",
                            synset.id
                        )));
                    }
                }
            }
        }

        let nouns = &tables[Pos::Noun.slot()];
        let noun_parents: Vec<Vec<u32>> = nouns
            .synsets
            .iter()
            .map(|s| {
                s.parents()
                    .filter(|p| p.pos == Pos::Noun)
                    .map(|p| nouns.by_offset[&p.offset] as u32)
                    .collect()
            })
            .collect();
        let noun_depth = similarity::shortest_depths(&nouns.synsets, &noun_parents)?;

        Ok(WordNetDb {
            tables,
            noun_depth,
            noun_parents,
        })
    }

    fn table(&self, pos: Pos) -> &PosTable {
        &self.tables[pos.slot()]
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.table(id.pos).get(id.offset)
    }

    /// Number of synsets of one part of speech.
    pub fn synset_count(&self, pos: Pos) -> usize {
        self.table(pos).synsets.len()
    }

    pub fn root(&self) -> &Synset {
        self.table(Pos::Noun)
            .get(NOUN_ROOT_OFFSET)
            .expect("root checked at load")
    }

    /// Whether `lemma` (already in base form) is an index entry for `pos`.
    pub fn is_indexed(&self, lemma: &str, pos: Pos) -> bool {
        self.table(pos).index.contains_key(lemma)
    }

    /// Sense-ordered synsets of `word`; morphy is applied when the raw form is not indexed.
    pub fn synsets(&self, word: &str, pos: Pos) -> Vec<&Synset> {
        let key = normalize(word);
        let table = self.table(pos);
        let offsets = match table.index.get(&key) {
            Some(offsets) => offsets,
            None => match self
                .morphy(&key, pos)
                .and_then(|base| table.index.get(&base))
            {
                Some(offsets) => offsets,
                None => return Vec::new(),
            },
        };
        offsets.iter().filter_map(|&o| table.get(o)).collect()
    }

    pub fn has_noun_synset(&self, word: &str) -> bool {
        !self.synsets(word, Pos::Noun).is_empty()
    }

    /// Conventional `lemma.p.NN` name, e.g. `dog.n.01`.
    pub fn synset_name(&self, synset: &Synset) -> String {
        let lemma = synset.lemmas[0].to_lowercase();
        let sense = self
            .table(synset.id.pos)
            .index
            .get(&lemma)
            .and_then(|offs| offs.iter().position(|&o| o == synset.id.offset))
            .map_or(0, |i| i + 1);
        format!("{}.{}.{:02}", lemma, synset.id.pos.letter(), sense)
    }

    fn noun_slot(&self, synset: &Synset) -> Result<usize> {
        if synset.id.pos != Pos::Noun {
            return Err(Error::UnsupportedPos(format!(
                "{} is a {} synset; only nouns are supported",
                synset.id, synset.id.pos
            )));
        }
        Ok(self.table(Pos::Noun).by_offset[&synset.id.offset])
    }
}

/// Index-key form of a word: lowercase, spaces as underscores.
pub(crate) fn normalize(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}
