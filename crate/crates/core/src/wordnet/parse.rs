use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{Pos, Synset, SynsetId};
use crate::error::{Error, Result};

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| {
        Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e.utf8_error()),
        )
    })
}

/// Iterates `(line number, byte offset, line)`, skipping the license header
/// (lines that start with two spaces).
fn records(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    let mut offset = 0;
    text.split_inclusive('\n')
        .enumerate()
        .filter_map(move |(i, raw)| {
            let start = offset;
            offset += raw.len();
            let line = raw.trim_end_matches(['\n', '\r']);
            if line.is_empty() || line.starts_with("  ") {
                None
            } else {
                Some((i + 1, start, line))
            }
        })
}

struct Fields<'a> {
    iter: std::str::SplitAsciiWhitespace<'a>,
    path: &'a Path,
    line: usize,
}

impl<'a> Fields<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str> {
        self.iter
            .next()
            .ok_or_else(|| Error::parse(self.path, self.line, format!("missing {what}")))
    }

    fn number(&mut self, what: &str, radix: u32) -> Result<u32> {
        let field = self.next(what)?;
        u32::from_str_radix(field, radix)
            .map_err(|_| Error::parse(self.path, self.line, format!("bad {what} `{field}`")))
    }
}

pub(super) fn read_data_file(path: &Path, pos: Pos) -> Result<Vec<Synset>> {
    let text = read_text(path)?;
    let mut synsets = Vec::new();
    for (line, byte_offset, record) in records(&text) {
        synsets.push(parse_data_line(record, pos, path, line, byte_offset)?);
    }
    Ok(synsets)
}

fn parse_data_line(
    record: &str,
    pos: Pos,
    path: &Path,
    line: usize,
    byte_offset: usize,
) -> Result<Synset> {
    let (head, gloss) = record
        .split_once(" | ")
        .map(|(h, g)| (h, g.trim()))
        .unwrap_or((record, ""));
    let mut fields = Fields {
        iter: head.split_ascii_whitespace(),
        path,
        line,
    };
    let offset = fields.number("synset offset", 10)?;
    if offset as usize != byte_offset {
        return Err(Error::parse(
            path,
            line,
            format!("offset {offset:08} does not match byte position {byte_offset}"),
        ));
    }
    fields.next("lexicographer file number")?;
    let ss_type = fields.next("synset type")?;
    if Pos::from_code(ss_type) != Some(pos) {
        return Err(Error::parse(
            path,
            line,
            format!("unexpected synset type `{ss_type}`"),
        ));
    }
    let word_count = fields.number("word count", 16)?;
    let mut lemmas = Vec::with_capacity(word_count as usize);
    for _ in 0..word_count {
        let word = fields.next("word")?;
        fields.next("lex id")?;
        lemmas.push(strip_adjective_marker(word).to_string());
    }
    if lemmas.is_empty() {
        return Err(Error::parse(path, line, "synset without lemmas"));
    }
    let pointer_count = fields.number("pointer count", 10)?;
    let mut hypernyms = Vec::new();
    let mut instance_hypernyms = Vec::new();
    for _ in 0..pointer_count {
        let symbol = fields.next("pointer symbol")?;
        let target = fields.number("pointer offset", 10)?;
        let target_pos = fields.next("pointer pos")?;
        fields.next("pointer source/target")?;
        let target_pos = Pos::from_code(target_pos)
            .ok_or_else(|| Error::parse(path, line, format!("bad pointer pos `{target_pos}`")))?;
        match symbol {
            "@" => hypernyms.push(SynsetId::new(target_pos, target)),
            "@i" => instance_hypernyms.push(SynsetId::new(target_pos, target)),
            _ => {}
        }
    }
    if gloss.is_empty() {
        return Err(Error::parse(path, line, "empty gloss"));
    }
    let (definition, examples) = split_gloss(gloss);
    Ok(Synset {
        id: SynsetId::new(pos, offset),
        lemmas,
        definition,
        examples,
        hypernyms,
        instance_hypernyms,
    })
}

fn strip_adjective_marker(word: &str) -> &str {
    for marker in ["(a)", "(p)", "(ip)"] {
        if let Some(stripped) = word.strip_suffix(marker) {
            return stripped;
        }
    }
    word
}

/// Splits `definition; "example one"; "example two"`.
pub(super) fn split_gloss(gloss: &str) -> (String, Vec<String>) {
    let (definition, rest) = match gloss.find("; \"") {
        Some(i) => (&gloss[..i], &gloss[i + 2..]),
        None if gloss.starts_with('"') => ("", gloss),
        None => (gloss, ""),
    };
    let examples = rest
        .split('"')
        .skip(1)
        .step_by(2)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    (definition.trim().to_string(), examples)
}

pub(super) fn read_index_file(path: &Path, pos: Pos) -> Result<HashMap<String, Vec<u32>>> {
    let text = read_text(path)?;
    let mut index = HashMap::new();
    for (line, _, record) in records(&text) {
        let mut fields = Fields {
            iter: record.split_ascii_whitespace(),
            path,
            line,
        };
        let lemma = fields.next("lemma")?;
        let code = fields.next("pos")?;
        if Pos::from_code(code) != Some(pos) {
            return Err(Error::parse(path, line, format!("unexpected pos `{code}`")));
        }
        let synset_count = fields.number("synset count", 10)?;
        let pointer_count = fields.number("pointer count", 10)?;
        for _ in 0..pointer_count {
            fields.next("pointer symbol")?;
        }
        fields.number("sense count", 10)?;
        fields.number("tagged sense count", 10)?;
        let mut offsets = Vec::with_capacity(synset_count as usize);
        for _ in 0..synset_count {
            offsets.push(fields.number("synset offset", 10)?);
        }
        if fields.iter.next().is_some() {
            return Err(Error::parse(
                path,
                line,
                "trailing fields after synset offsets",
            ));
        }
        index.insert(lemma.to_string(), offsets);
    }
    Ok(index)
}

pub(super) fn read_exception_file(path: &Path) -> Result<HashMap<String, Vec<String>>> {
    let text = read_text(path)?;
    let mut exceptions = HashMap::new();
    for (line, _, record) in records(&text) {
        let mut words = record.split_ascii_whitespace();
        let inflected = words
            .next()
            .ok_or_else(|| Error::parse(path, line, "empty exception record"))?;
        let bases: Vec<String> = words.map(String::from).collect();
        if bases.is_empty() {
            return Err(Error::parse(path, line, "exception without base form"));
        }
        exceptions.insert(inflected.to_string(), bases);
    }
    Ok(exceptions)
}
