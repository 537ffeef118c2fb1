//! Morphy: WordNet's exception-list plus suffix-detachment lemmatizer.

use super::{normalize, Pos, WordNetDb};

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adj => ADJ_RULES,
        Pos::Adv => &[],
    }
}

impl WordNetDb {
    /// Base form of `word` for `pos`, or `None` when no indexed form is found.
    ///
    /// Order: the word itself if indexed, then the exception list, then the
    /// first detachment rule whose result is indexed. Every returned form is
    /// indexed, so applying morphy to its own output is the identity.
    pub fn morphy(&self, word: &str, pos: Pos) -> Option<String> {
        let word = normalize(word);
        if word.is_empty() {
            return None;
        }
        let table = self.table(pos);
        if table.index.contains_key(&word) {
            return Some(word);
        }
        if let Some(bases) = table.exceptions.get(&word) {
            if let Some(base) = bases.iter().find(|b| table.index.contains_key(*b)) {
                return Some(base.clone());
            }
        }
        if pos == Pos::Noun && (word.ends_with("ss") || word.len() <= 2) {
            return None;
        }
        rules(pos).iter().find_map(|(suffix, replacement)| {
            let stem = word.strip_suffix(suffix)?;
            if stem.is_empty() {
                return None;
            }
            let candidate = format!("{stem}{replacement}");
            table.index.contains_key(&candidate).then_some(candidate)
        })
    }

    /// Base form of a word known to be inflected (a plural noun, a past or
    /// progressive verb, a comparative adjective).
    ///
    /// WordNet indexes many plurals as lemmas of their own ("things",
    /// "numbers"), so the surface form is not preferred here: every indexed
    /// candidate from the exception list, the detachment rules and the word
    /// itself is collected and the shortest wins, earlier candidates first.
    pub fn morphy_inflected(&self, word: &str, pos: Pos) -> Option<String> {
        let word = normalize(word);
        if word.is_empty() {
            return None;
        }
        let table = self.table(pos);
        let mut found: Vec<String> = Vec::new();
        if let Some(bases) = table.exceptions.get(&word) {
            found.extend(
                bases
                    .iter()
                    .filter(|b| table.index.contains_key(*b))
                    .cloned(),
            );
        }
        if !(pos == Pos::Noun && (word.ends_with("ss") || word.len() <= 2)) {
            for (suffix, replacement) in rules(pos) {
                if let Some(stem) = word.strip_suffix(suffix).filter(|s| !s.is_empty()) {
                    let candidate = format!("{stem}{replacement}");
                    if table.index.contains_key(&candidate) {
                        found.push(candidate);
                    }
                }
            }
        }
        if table.index.contains_key(&word) {
            found.push(word);
        }
        found.into_iter().min_by_key(String::len)
    }
}
