//! Document collections: JSONL and directory-of-`.txt` loaders.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One abstract. `title`, when present, is prepended to `text` for modeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            title: None,
            text: text.into(),
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    /// Text fed to the preprocessing pipeline: title and abstract joined by one space.
    pub fn model_text(&self) -> String {
        match &self.title {
            Some(title) if !title.trim().is_empty() => format!("{} {}", title.trim(), self.text),
            _ => self.text.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Validation("document id is empty".into()));
        }
        if self.text.trim().is_empty() {
            return Err(Error::Validation(format!(
                "document `{}` has empty text",
                self.id
            )));
        }
        Ok(())
    }
}

/// Ordered, id-unique collection of documents. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    /// Validates every document and rejects duplicate ids.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            doc.validate()?;
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    /// One JSON object per line, LF terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            out.push_str(&serde_json::to_string(doc).expect("document serializes"));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = std::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

/// Parses JSONL text. `source` only labels error messages.
pub fn parse_jsonl(bytes: &[u8], source: &Path) -> Result<Corpus> {
    let mut documents = Vec::new();
    for (i, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = i + 1;
        let line = std::str::from_utf8(raw)
            .map_err(|e| Error::parse(source, line_no, format!("invalid UTF-8: {e}")))?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(line).map_err(|e| Error::parse(source, line_no, e.to_string()))?;
        documents.push(doc);
    }
    Corpus::new(documents)
}

pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&bytes, path)
}

/// Every regular `*.txt` file is one document; id is the file stem. Sorted by id.
pub fn load_text_dir(path: impl AsRef<Path>) -> Result<Corpus> {
    let dir = path.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut documents = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let file = entry.path();
        if !file.is_file() || file.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let Some(stem) = file.file_stem().and_then(|s| s.to_str()) else {
            return Err(Error::Validation(format!(
                "file name is not UTF-8: {}",
                file.display()
            )));
        };
        let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
        let text = String::from_utf8(bytes).map_err(|e| {
            Error::io(
                &file,
                std::io::Error::new(std::io::ErrorKind::InvalidData, e.utf8_error()),
            )
        })?;
        documents.push(Document::new(stem, text));
    }
    documents.sort_by(|a, b| a.id.cmp(&b.id));
    Corpus::new(documents)
}
