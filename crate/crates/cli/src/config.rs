//! Run configuration: command-line flags over a `key = value` file over defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use toplab::wordnet::SensePolicy;

pub const WORDNET_ENV: &str = "TOPLAB_WORDNET_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    Jsonl,
    TxtDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    Lda,
    Kmeans,
    Both,
}

impl ModelChoice {
    pub fn lda(self) -> bool {
        matches!(self, ModelChoice::Lda | ModelChoice::Both)
    }

    pub fn kmeans(self) -> bool {
        matches!(self, ModelChoice::Kmeans | ModelChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    Json,
    Markdown,
    Both,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}: line {1}: expected `key = value`")]
    Syntax(String, usize),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("{0} must be at least 1")]
    TooSmall(&'static str),
    #[error("cannot read config file {0}: {1}")]
    Io(String, String),
}

macro_rules! parse_enum {
    ($ty:ty { $($text:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($variant),)+
                    _ => Err(format!("expected one of: {}", [$($text),+].join(", "))),
                }
            }
        }
    };
}

parse_enum!(InputFormat { "jsonl" => InputFormat::Jsonl, "txt-dir" => InputFormat::TxtDir });
parse_enum!(ModelChoice {
    "lda" => ModelChoice::Lda,
    "kmeans" => ModelChoice::Kmeans,
    "both" => ModelChoice::Both,
});
parse_enum!(Emit { "json" => Emit::Json, "markdown" => Emit::Markdown, "both" => Emit::Both });

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelChoice::Lda => "lda",
            ModelChoice::Kmeans => "kmeans",
            ModelChoice::Both => "both",
        })
    }
}

/// Settings that may come from flags or the config file; unset fields fall through.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub format: Option<InputFormat>,
    pub wordnet_dir: Option<PathBuf>,
    pub model: Option<ModelChoice>,
    pub topics: Option<usize>,
    pub words: Option<usize>,
    pub seed: Option<u64>,
    pub iters: Option<usize>,
    pub n_init: Option<usize>,
    pub max_iter: Option<usize>,
    pub use_embedding: Option<bool>,
    pub sense_policy: Option<SensePolicy>,
    pub out: Option<PathBuf>,
    pub emit: Option<Emit>,
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse().map_err(|_| ConfigError::Value {
        key: key.to_string(),
        value: raw.to_string(),
    })
}

pub fn parse_sense_policy(s: &str) -> Result<SensePolicy, String> {
    match s {
        "first-sense" => Ok(SensePolicy::FirstSense),
        "max-over-senses" => Ok(SensePolicy::MaxOverSenses),
        _ => Err("expected first-sense or max-over-senses".into()),
    }
}

impl Overrides {
    /// Parses a flat `key = value` file. Blank lines and `#` comments are
    /// ignored; keys use the long flag names (`n-init` or `n_init`).
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax(source.to_string(), i + 1))?;
            entries.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        let mut o = Overrides::default();
        for (k, v) in &entries {
            match k.as_str() {
                "input" => o.input = Some(PathBuf::from(v)),
                "format" => o.format = Some(value(k, v)?),
                "wordnet-dir" => o.wordnet_dir = Some(PathBuf::from(v)),
                "model" => o.model = Some(value(k, v)?),
                "topics" => o.topics = Some(value(k, v)?),
                "words" => o.words = Some(value(k, v)?),
                "seed" => o.seed = Some(value(k, v)?),
                "iters" => o.iters = Some(value(k, v)?),
                "n-init" => o.n_init = Some(value(k, v)?),
                "max-iter" => o.max_iter = Some(value(k, v)?),
                "use-embedding" => o.use_embedding = Some(value(k, v)?),
                "sense-policy" => {
                    o.sense_policy =
                        Some(parse_sense_policy(v).map_err(|_| ConfigError::Value {
                            key: k.clone(),
                            value: v.clone(),
                        })?)
                }
                "out" => o.out = Some(PathBuf::from(v)),
                "emit" => o.emit = Some(value(k, v)?),
                _ => return Err(ConfigError::UnknownKey(k.clone())),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(path.display().to_string(), e.to_string()))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn or(self, lower: Overrides) -> Overrides {
        Overrides {
            input: self.input.or(lower.input),
            format: self.format.or(lower.format),
            wordnet_dir: self.wordnet_dir.or(lower.wordnet_dir),
            model: self.model.or(lower.model),
            topics: self.topics.or(lower.topics),
            words: self.words.or(lower.words),
            seed: self.seed.or(lower.seed),
            iters: self.iters.or(lower.iters),
            n_init: self.n_init.or(lower.n_init),
            max_iter: self.max_iter.or(lower.max_iter),
            use_embedding: self.use_embedding.or(lower.use_embedding),
            sense_policy: self.sense_policy.or(lower.sense_policy),
            out: self.out.or(lower.out),
            emit: self.emit.or(lower.emit),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub wordnet_dir: PathBuf,
    pub model: ModelChoice,
    pub topics: usize,
    pub words: usize,
    pub seed: u64,
    pub iters: usize,
    pub n_init: usize,
    pub max_iter: usize,
    pub use_embedding: bool,
    pub sense_policy: SensePolicy,
    pub out: Option<PathBuf>,
    pub emit: Emit,
}

impl RunConfig {
    /// Fills unset fields with defaults. `env_wordnet` is the value of
    /// [`WORDNET_ENV`], used when neither flags nor the file name a directory.
    pub fn resolve(o: Overrides, env_wordnet: Option<PathBuf>) -> Result<Self, ConfigError> {
        let input = o.input.ok_or(ConfigError::Missing("--input"))?;
        let format = o.format.unwrap_or_else(|| {
            if input.is_dir() {
                InputFormat::TxtDir
            } else {
                InputFormat::Jsonl
            }
        });
        let config = RunConfig {
            input,
            format,
            wordnet_dir: o.wordnet_dir.or(env_wordnet).ok_or(ConfigError::Missing(
                "--wordnet-dir (or TOPLAB_WORDNET_DIR)",
            ))?,
            model: o.model.unwrap_or(ModelChoice::Both),
            topics: o.topics.unwrap_or(3),
            words: o.words.unwrap_or(3),
            seed: o.seed.unwrap_or(1),
            iters: o.iters.unwrap_or(1000),
            n_init: o.n_init.unwrap_or(1),
            max_iter: o.max_iter.unwrap_or(100),
            use_embedding: o.use_embedding.unwrap_or(false),
            sense_policy: o.sense_policy.unwrap_or_default(),
            out: o.out,
            emit: o.emit.unwrap_or(Emit::Json),
        };
        for (name, v) in [
            ("topics", config.topics),
            ("words", config.words),
            ("iters", config.iters),
            ("n-init", config.n_init),
            ("max-iter", config.max_iter),
        ] {
            if v < 1 {
                return Err(ConfigError::TooSmall(name));
            }
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Overrides {
        Overrides {
            input: Some("in.jsonl".into()),
            wordnet_dir: Some("wn".into()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(base(), None).unwrap();
        assert_eq!((c.topics, c.words, c.seed, c.iters), (3, 3, 1, 1000));
        assert_eq!((c.n_init, c.max_iter), (1, 100));
        assert_eq!(c.model, ModelChoice::Both);
        assert_eq!(c.format, InputFormat::Jsonl);
        assert!(!c.use_embedding);
    }

    #[test]
    fn file_parsing_and_precedence() {
        let file = Overrides::parse(
            "# comment\ntopics = 5\nn_init=4\nmodel = lda\nsense-policy = max-over-senses\n",
            "cfg",
        )
        .unwrap();
        assert_eq!(file.n_init, Some(4));
        let flags = Overrides {
            topics: Some(2),
            ..base()
        };
        let c = RunConfig::resolve(flags.or(file), None).unwrap();
        assert_eq!(c.topics, 2);
        assert_eq!(c.n_init, 4);
        assert_eq!(c.model, ModelChoice::Lda);
        assert_eq!(c.sense_policy, SensePolicy::MaxOverSenses);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            Overrides::parse("topics 3", "f"),
            Err(ConfigError::Syntax(_, 1))
        ));
        assert!(matches!(
            Overrides::parse("colour = red", "f"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            Overrides::parse("topics = x", "f"),
            Err(ConfigError::Value { .. })
        ));
    }

    #[test]
    fn wordnet_dir_falls_back_to_env() {
        let o = Overrides {
            wordnet_dir: None,
            ..base()
        };
        assert_eq!(
            RunConfig::resolve(o.clone(), None),
            Err(ConfigError::Missing(
                "--wordnet-dir (or TOPLAB_WORDNET_DIR)"
            ))
        );
        let c = RunConfig::resolve(o, Some("envdir".into())).unwrap();
        assert_eq!(c.wordnet_dir, PathBuf::from("envdir"));
    }

    #[test]
    fn zero_topics_rejected() {
        let o = Overrides {
            topics: Some(0),
            ..base()
        };
        assert_eq!(
            RunConfig::resolve(o, None),
            Err(ConfigError::TooSmall("topics"))
        );
    }
}
