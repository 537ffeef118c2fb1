#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use toplab::wordnet::WordNetDb;

pub fn wordnet_dir() -> PathBuf {
    std::env::var_os("TOPLAB_WORDNET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/wordnet"))
        })
}

pub fn db() -> &'static WordNetDb {
    static DB: OnceLock<WordNetDb> = OnceLock::new();
    DB.get_or_init(|| WordNetDb::load(wordnet_dir()).expect("WordNet loads"))
}

pub fn fixture_path() -> PathBuf {
    PathBuf::from(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/fixtures/abstracts.jsonl"
    ))
}
