use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "psg", version, about = "Predict algorithm tags and difficulty of competitive-programming problems")]
pub struct Cli {
    /// key=value configuration file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and merge JSONL dataset files into one file
    Ingest(IngestArgs),
    /// Download problems from Codeforces into a JSONL dataset
    Fetch(FetchArgs),
    /// Print tag and rating histograms
    Stats(StatsArgs),
    /// Write a seeded train/test split
    Split(SplitArgs),
    /// Train a model and evaluate it on the test split
    Train(TrainArgs),
    /// Evaluate a checkpoint on the test split
    Eval(EvalArgs),
    /// Train one model per lambda and print a comparison table
    Sweep(SweepArgs),
    /// Predict tags and difficulty for one statement
    Predict(PredictArgs),
    /// Export per-tag ROC curves on the test split as CSV
    Roc(RocArgs),
    /// Generate a synthetic dataset
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// JSONL file, or a directory whose *.jsonl files are merged in name order
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Output directory for problems.jsonl and the fetch summary
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Minimum spacing between requests, e.g. 2s or 2500ms (at least 2s)
    #[arg(long)]
    pub min_interval: Option<String>,
    /// Reuse cached responses from an earlier run
    #[arg(long)]
    pub resume: bool,
    #[arg(long)]
    pub max_retries: Option<u32>,
    #[arg(long)]
    pub user_agent: Option<String>,
    /// Page cache directory [default: $PSG_CACHE_DIR, else <out>/cache]
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct DataArgs {
    /// JSONL dataset
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Tag vocabulary: `amt`, `amt10`, or a file with one tag per line
    #[arg(long)]
    pub vocab: Option<String>,
    /// Keep only the k most frequent vocabulary tags
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Also write the statistics to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub test_frac: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleTask {
    Tag,
    Difficulty,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ModelArgs {
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Hidden units of the shared encoder
    #[arg(long)]
    pub hidden: Option<usize>,
    /// `hashed` or `vocabulary`
    #[arg(long)]
    pub features: Option<String>,
    /// Hashed feature dimension (power of two)
    #[arg(long)]
    pub hash_dim: Option<usize>,
    /// Tokens kept per statement
    #[arg(long)]
    pub max_tokens: Option<usize>,
    /// Stop after this many epochs without improvement of the training loss
    #[arg(long)]
    pub patience: Option<usize>,
    /// Cumulative-score tolerances, comma separated
    #[arg(long)]
    pub theta: Option<String>,
    /// Tag probability threshold for F1
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Weight of the difficulty loss
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Train only one head
    #[arg(long, value_enum)]
    pub single_task: Option<SingleTask>,
    /// Train the linear TF-IDF baseline instead
    #[arg(long, conflicts_with = "single_task")]
    pub baseline: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Output directory (checkpoint, report, resolved config)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Cumulative-score tolerances, comma separated
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Directory for report.json and report.txt
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Comma-separated lambda values
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Add single-task tag and difficulty reference rows
    #[arg(long)]
    pub single_task_refs: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Statement file; `-` or absent reads stdin
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub split: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Amt,
    Learnability,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    /// Record count (learnability only)
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}
