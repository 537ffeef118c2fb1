use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use toplab::wordnet::{Pos, SensePolicy, WordNetDb};
use toplab_cli::config::{parse_sense_policy, WORDNET_ENV};
use toplab_cli::{
    render_tables, run, validate_report, Emit, InputFormat, ModelChoice, Overrides, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "toplab",
    version,
    about = "Label LDA topics and K-Means clusters with WordNet"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the models on a corpus and write the label report.
    Run(RunArgs),
    /// Wu-Palmer similarity of two nouns.
    Wup {
        w1: String,
        w2: String,
        #[arg(long)]
        wordnet_dir: Option<PathBuf>,
        #[arg(long, value_parser = parse_sense_policy, default_value = "first-sense")]
        sense_policy: SensePolicy,
    },
    /// List the noun senses of a word.
    Synsets {
        word: String,
        #[arg(long)]
        wordnet_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<InputFormat>,
    #[arg(long)]
    wordnet_dir: Option<PathBuf>,
    #[arg(long)]
    model: Option<ModelChoice>,
    /// Topics per document for LDA, clusters per document for K-Means.
    #[arg(long)]
    topics: Option<usize>,
    /// Top words kept per topic.
    #[arg(long)]
    words: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Gibbs sweeps for LDA.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    n_init: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Add Word2Vec neighbors to the candidate labels.
    #[arg(long)]
    use_embedding: bool,
    #[arg(long, value_parser = parse_sense_policy)]
    sense_policy: Option<SensePolicy>,
    /// JSON report path; markdown goes next to it with an `.md` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    emit: Option<Emit>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            input: self.input.clone(),
            format: self.format,
            wordnet_dir: self.wordnet_dir.clone(),
            model: self.model,
            topics: self.topics,
            words: self.words,
            seed: self.seed,
            iters: self.iters,
            n_init: self.n_init,
            max_iter: self.max_iter,
            use_embedding: self.use_embedding.then_some(true),
            sense_policy: self.sense_policy,
            out: self.out.clone(),
            emit: self.emit,
        }
    }
}

fn env_wordnet() -> Option<PathBuf> {
    std::env::var_os(WORDNET_ENV).map(PathBuf::from)
}

fn open_wordnet(flag: Option<PathBuf>) -> anyhow::Result<WordNetDb> {
    let Some(dir) = flag.or_else(env_wordnet) else {
        bail!("missing --wordnet-dir (or {WORDNET_ENV})");
    };
    WordNetDb::load(&dir).with_context(|| format!("wordnet: loading {}", dir.display()))
}

fn run_command(args: RunArgs) -> anyhow::Result<()> {
    let file = match &args.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    let config = RunConfig::resolve(args.overrides().or(file), env_wordnet())?;
    let report = run(&config)?;

    let json = report.to_json();
    let value: serde_json::Value =
        serde_json::from_str(&json).context("report: re-reading JSON")?;
    let violations = validate_report(&value);
    if !violations.is_empty() {
        bail!(
            "report: schema validation failed:\n  {}",
            violations.join("\n  ")
        );
    }

    let markdown =
        matches!(config.emit, Emit::Markdown | Emit::Both).then(|| render_tables(&report));
    match &config.out {
        Some(path) => {
            std::fs::write(path, &json)
                .with_context(|| format!("report: writing {}", path.display()))?;
            if let Some(md) = &markdown {
                let md_path = path.with_extension("md");
                std::fs::write(&md_path, md)
                    .with_context(|| format!("report: writing {}", md_path.display()))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if config.emit != Emit::Markdown {
                stdout.write_all(json.as_bytes())?;
            }
            if let Some(md) = &markdown {
                stdout.write_all(md.as_bytes())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Wup {
            w1,
            w2,
            wordnet_dir,
            sense_policy,
        } => open_wordnet(wordnet_dir).map(|db| {
            let score = db.wup_words(&w1, &w2, sense_policy);
            let (a, b) = (db.synsets(&w1, Pos::Noun), db.synsets(&w2, Pos::Noun));
            if let (Some(a), Some(b)) = (a.first(), b.first()) {
                if let Ok(lcs) = db.lcs(a, b) {
                    eprintln!(
                        "{} {} lcs {}",
                        db.synset_name(a),
                        db.synset_name(b),
                        db.synset_name(lcs)
                    );
                }
            }
            println!("{score:.4}");
        }),
        Command::Synsets { word, wordnet_dir } => open_wordnet(wordnet_dir).map(|db| {
            for s in db.synsets(&word, Pos::Noun) {
                let depth = db.depth(s).map_or_else(|_| "?".into(), |d| d.to_string());
                println!("{}\tdepth {}\t{}", db.synset_name(s), depth, s.definition);
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<toplab_cli::config::ConfigError>()
                .is_some()
            {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
