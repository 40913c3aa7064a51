//! The `psg` command line.

mod args;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use psg_core::corpus::{build_dataset, difficulty_histogram, split, tag_histogram, Dataset, TagVocabulary};
use psg_core::model::{AdamConfig, BaselineConfig, TrainConfig};
use psg_core::text::{FeatureMode, TokenizerConfig};

pub use args::{Cli, Command};
use args::*;

use crate::config::{List, Resolver, SNAPSHOT};
use crate::error::{PsgError, Result};
use crate::experiment::{self, ExperimentSpec, LoadedData, ModelKind};
use crate::fetch::{self, CodeforcesClient, FetchConfig, SystemClock, UreqTransport};
use crate::report::{self, ExperimentReport, Timing};
use crate::{checkpoint, io, synth};

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mut r = Resolver::new(cli.config.as_deref())?;
    let name = command_name(&cli.command);
    let started = Instant::now();
    let outputs = match cli.command {
        Command::Ingest(a) => ingest(&mut r, a)?,
        Command::Fetch(a) => fetch(&mut r, a)?,
        Command::Stats(a) => stats(&mut r, a)?,
        Command::Split(a) => split_cmd(&mut r, a)?,
        Command::Train(a) => train(&mut r, a)?,
        Command::Eval(a) => eval(&mut r, a)?,
        Command::Sweep(a) => sweep(&mut r, a)?,
        Command::Predict(a) => predict(&mut r, a)?,
        Command::Roc(a) => roc(&mut r, a)?,
        Command::Synth(a) => synth_cmd(a)?,
    };
    for key in r.unused() {
        log::warn!("config key {key} is not used by `psg {name}`");
    }
    match outputs {
        Output::None => {}
        Output::File(path) => r.write_snapshot(name, &snapshot_for_file(&path))?,
        Output::Dir(dir) => {
            r.write_snapshot(name, &dir.join(SNAPSHOT))?;
            let timing = Timing { command: name.to_string(), wall_clock_secs: started.elapsed().as_secs_f64() };
            io::write_json(&dir.join("timing.json"), &timing)?;
        }
    }
    Ok(())
}

/// Snapshot location for commands whose output is a single file.
pub fn snapshot_for_file(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".config");
    path.with_file_name(name)
}

enum Output {
    None,
    File(PathBuf),
    Dir(PathBuf),
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ingest(_) => "ingest",
        Command::Fetch(_) => "fetch",
        Command::Stats(_) => "stats",
        Command::Split(_) => "split",
        Command::Train(_) => "train",
        Command::Eval(_) => "eval",
        Command::Sweep(_) => "sweep",
        Command::Predict(_) => "predict",
        Command::Roc(_) => "roc",
        Command::Synth(_) => "synth",
    }
}

fn path_opt(r: &mut Resolver, key: &str, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
    Ok(r.get_opt::<String>(key, flag.map(|p| p.to_string_lossy().into_owned()))?.map(PathBuf::from))
}

fn path_req(r: &mut Resolver, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
    Ok(PathBuf::from(r.require::<String>(key, flag.map(|p| p.to_string_lossy().into_owned()))?))
}

fn vocab_from(spec: &str) -> Result<TagVocabulary> {
    match spec {
        "amt" => Ok(TagVocabulary::amt()),
        "amt10" => Ok(TagVocabulary::amt10()),
        path => io::read_vocab(Path::new(path)),
    }
}

fn load_data(r: &mut Resolver, a: DataArgs) -> Result<LoadedData> {
    let path = path_req(r, "data", a.data)?;
    let vocab = vocab_from(&r.get("vocab", a.vocab, "amt".to_string())?)?;
    let top_k = r.get_opt("top_k", a.top_k)?;
    experiment::load_data(&path, &vocab, top_k)
}

/// `2s`, `2500ms`, `1.5s` or plain seconds.
pub fn parse_duration(s: &str) -> std::result::Result<Duration, String> {
    let s = s.trim();
    let (num, scale) = if let Some(v) = s.strip_suffix("ms") {
        (v, 1e-3)
    } else if let Some(v) = s.strip_suffix('s') {
        (v, 1.0)
    } else {
        (s, 1.0)
    };
    let value: f64 = num.trim().parse().map_err(|_| format!("invalid duration {s:?}"))?;
    if !(value >= 0.0 && value.is_finite()) {
        return Err(format!("invalid duration {s:?}"));
    }
    Ok(Duration::from_secs_f64(value * scale))
}

fn ingest(r: &mut Resolver, a: IngestArgs) -> Result<Output> {
    let input = path_req(r, "input", a.input)?;
    let out = path_req(r, "out", a.out)?;
    let files = if input.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&input)
            .map_err(|e| PsgError::io(&input, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        files.sort();
        files
    } else {
        vec![input.clone()]
    };
    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for file in &files {
        for record in io::load_jsonl(file)? {
            if !seen.insert(record.id.clone()) {
                return Err(PsgError::Data(format!("{}: duplicate id {} across input files", file.display(), record.id)));
            }
            records.push(record);
        }
    }
    io::write_jsonl(&out, &records)?;
    println!("{} records from {} file(s) written to {}", records.len(), files.len(), out.display());
    Ok(Output::File(out))
}

fn fetch(r: &mut Resolver, a: FetchArgs) -> Result<Output> {
    let out = path_req(r, "out", a.out)?;
    let interval_raw = r.get("min_interval", a.min_interval, "2s".to_string())?;
    let min_interval = parse_duration(&interval_raw).map_err(PsgError::Usage)?;
    let default_cache = std::env::var_os("PSG_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| out.join("cache"));
    let cache_dir = path_opt(r, "cache_dir", a.cache_dir)?.unwrap_or(default_cache);
    let mut config = FetchConfig::new(cache_dir);
    config.min_interval = min_interval;
    config.resume = r.get("resume", a.resume.then_some(true), false)?;
    config.max_retries = r.get("max_retries", a.max_retries, config.max_retries)?;
    config.user_agent = r.get("user_agent", a.user_agent, config.user_agent.clone())?;
    config.validate().map_err(|e| PsgError::Usage(e.to_string()))?;
    let mut client = CodeforcesClient::new(config, UreqTransport::new(Duration::from_secs(30)), SystemClock::default())?;
    let (records, summary) = fetch::collect_records(&mut client)?;
    io::write_jsonl(&out.join("problems.jsonl"), &records)?;
    io::write_json(&out.join("fetch_summary.json"), &summary)?;
    println!("{summary}");
    Ok(Output::Dir(out))
}

/// Tag and rating histograms as printed by `psg stats`.
pub fn render_stats(total_records: usize, dataset: &Dataset) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "records: {total_records}");
    let _ = writeln!(s, "kept: {} (dropped {} without an in-vocabulary tag)", dataset.len(), dataset.dropped());
    let _ = writeln!(s, "vocabulary: {} tags", dataset.vocab().len());
    let _ = writeln!(s);
    let tags = tag_histogram(dataset);
    let width = tags.iter().map(|(t, _)| t.len()).max().unwrap_or(3).max(3);
    let _ = writeln!(s, "{:<width$}  problems", "tag");
    for (tag, count) in &tags {
        let _ = writeln!(s, "{tag:<width$}  {count:>8}");
    }
    let _ = writeln!(s);
    let hist = difficulty_histogram(dataset);
    let _ = writeln!(s, "rating  problems");
    for (rating, count) in &hist.counts {
        let _ = writeln!(s, "{rating:>6}  {count:>8}");
    }
    let _ = writeln!(s, "rated: {}", hist.rated());
    let _ = writeln!(s, "missing rating: {}", hist.missing);
    s
}

fn stats(r: &mut Resolver, a: StatsArgs) -> Result<Output> {
    let path = path_req(r, "data", a.data.data.clone())?;
    let records = io::load_jsonl(&path)?;
    let total = records.len();
    let vocab = vocab_from(&r.get("vocab", a.data.vocab, "amt".to_string())?)?;
    let mut dataset = build_dataset(records, &vocab)?;
    if let Some(k) = r.get_opt("top_k", a.data.top_k)? {
        dataset = psg_core::corpus::restrict_top_k(&dataset, k)?;
    }
    let text = render_stats(total, &dataset);
    print!("{text}");
    match path_opt(r, "out", a.out)? {
        Some(out) => {
            io::write_file(&out, text.as_bytes())?;
            Ok(Output::File(out))
        }
        None => Ok(Output::None),
    }
}

fn split_cmd(r: &mut Resolver, a: SplitArgs) -> Result<Output> {
    let data = load_data(r, a.data)?;
    let seed = r.get("seed", a.seed, psg_core::corpus::DEFAULT_SPLIT_SEED)?;
    let frac = r.get("test_frac", a.test_frac, psg_core::corpus::DEFAULT_TEST_FRACTION)?;
    let out = path_req(r, "out", a.out)?;
    let assignment = split(&data.dataset, seed, frac)?;
    io::write_split(&out, &assignment)?;
    println!("{} train / {} test written to {}", assignment.train_ids.len(), assignment.test_ids.len(), out.display());
    Ok(Output::File(out))
}

fn thetas(r: &mut Resolver, flag: Option<String>) -> Result<Vec<usize>> {
    let raw = r.get("theta", flag, "3,5".to_string())?;
    raw.parse::<List<usize>>().map(|l| l.0).map_err(|e| PsgError::Usage(format!("--theta: {e}")))
}

fn model_spec(r: &mut Resolver, m: ModelArgs, kind: ModelKind, lambda: f64) -> Result<ExperimentSpec> {
    let defaults = ExperimentSpec::default();
    let seed = r.get("seed", m.seed, 42)?;
    let lr_default = if kind == ModelKind::Baseline { BaselineConfig::default().learning_rate } else { 1e-3 };
    let learning_rate = r.get("lr", m.lr, lr_default)?;
    let batch_size = r.get("batch_size", m.batch_size, 32)?;
    let epochs = r.get("epochs", m.epochs, 20)?;
    let features = match r.get("features", m.features, "hashed".to_string())?.as_str() {
        "hashed" => FeatureMode::Hashed { dim: r.get("hash_dim", m.hash_dim, psg_core::text::DEFAULT_HASH_DIM)? },
        "vocabulary" => FeatureMode::Vocabulary,
        other => return Err(PsgError::Usage(format!("--features must be hashed or vocabulary, got {other:?}"))),
    };
    let tokenizer = TokenizerConfig {
        max_tokens: r.get("max_tokens", m.max_tokens, defaults.tokenizer.max_tokens)?,
        ..defaults.tokenizer
    };
    let spec = ExperimentSpec {
        kind,
        train: TrainConfig {
            lambda,
            learning_rate,
            batch_size,
            epochs,
            seed,
            heads: Default::default(),
            adam: AdamConfig::default(),
            patience: r.get_opt("patience", m.patience)?,
        },
        baseline: BaselineConfig { learning_rate, batch_size, epochs, seed, adam: AdamConfig::default() },
        hidden: if kind == ModelKind::Baseline { 0 } else { r.get("hidden", m.hidden, defaults.hidden)? },
        features,
        tokenizer,
        thetas: thetas(r, m.theta)?,
        threshold: r.get("threshold", m.threshold, defaults.threshold)?,
    };
    Ok(spec)
}

fn write_run(dir: &Path, report: &ExperimentReport, thetas: &[usize]) -> Result<String> {
    let table = report::render_table(std::slice::from_ref(report), thetas);
    io::write_json(&dir.join("report.json"), report)?;
    io::write_file(&dir.join("report.txt"), table.as_bytes())?;
    Ok(table)
}

fn train(r: &mut Resolver, a: TrainArgs) -> Result<Output> {
    let baseline = r.get("baseline", a.baseline.then_some(true), false)?;
    let single = match r.get_opt::<String>("single_task", a.single_task.map(|s| format!("{s:?}").to_lowercase()))? {
        None => None,
        Some(s) if s == "tag" => Some(SingleTask::Tag),
        Some(s) if s == "difficulty" => Some(SingleTask::Difficulty),
        Some(s) => return Err(PsgError::Usage(format!("--single-task must be tag or difficulty, got {s:?}"))),
    };
    let kind = match (baseline, single) {
        (true, Some(_)) => return Err(PsgError::Usage("--baseline cannot be combined with --single-task".into())),
        (true, None) => ModelKind::Baseline,
        (false, Some(SingleTask::Tag)) => ModelKind::SingleTag,
        (false, Some(SingleTask::Difficulty)) => ModelKind::SingleDifficulty,
        (false, None) => ModelKind::MultiTask,
    };
    let lambda = if kind == ModelKind::Baseline {
        if a.lambda.is_some() {
            return Err(PsgError::Usage("--lambda does not apply to the baseline, which has no shared layer".into()));
        }
        0.0
    } else {
        r.get("lambda", a.lambda, 10.0)?
    };
    let data = load_data(r, a.data)?;
    let split_path = path_req(r, "split", a.split)?;
    let out = path_req(r, "out", a.out)?;
    let spec = model_spec(r, a.model, kind, lambda)?;
    let assignment = io::read_split(&split_path)?;
    let (ckpt, report) = experiment::run(&data, &assignment, &spec)?;
    checkpoint::save(&ckpt, &out)?;
    print!("{}", write_run(&out, &report, &spec.thetas)?);
    Ok(Output::Dir(out))
}

fn eval_data(r: &mut Resolver, ckpt: &psg_core::Checkpoint, a: DataArgs) -> Result<LoadedData> {
    let path = path_req(r, "data", a.data)?;
    let vocab = match r.get_opt::<String>("vocab", a.vocab)? {
        Some(spec) => vocab_from(&spec)?,
        None => ckpt.vocab.clone(),
    };
    let top_k = r.get_opt("top_k", a.top_k)?;
    experiment::load_data(&path, &vocab, top_k)
}

fn eval(r: &mut Resolver, a: EvalArgs) -> Result<Output> {
    let ckpt_dir = path_req(r, "checkpoint", a.checkpoint)?;
    let ckpt = checkpoint::load(&ckpt_dir)?;
    let data = eval_data(r, &ckpt, a.data)?;
    let assignment = io::read_split(&path_req(r, "split", a.split)?)?;
    let thetas = thetas(r, a.theta)?;
    let threshold = r.get("threshold", a.threshold, 0.5)?;
    let out = path_opt(r, "out", a.out)?;
    experiment::check_compatible(&ckpt, &data.dataset)?;
    let (_, test) = experiment::apply_split(&data.dataset, &assignment)?;
    let evaluation = experiment::evaluate(&ckpt, &test, &thetas, threshold)?;
    let report = experiment::build_report(&ckpt, &data, &assignment, &test, &evaluation);
    match out {
        Some(dir) => {
            print!("{}", write_run(&dir, &report, &thetas)?);
            Ok(Output::Dir(dir))
        }
        None => {
            print!("{}", report::render_table(std::slice::from_ref(&report), &thetas));
            Ok(Output::None)
        }
    }
}

fn sweep(r: &mut Resolver, a: SweepArgs) -> Result<Output> {
    let lambdas = r
        .get("lambdas", a.lambdas, "1,10,100".to_string())?
        .parse::<List<f64>>()
        .map_err(|e| PsgError::Usage(format!("--lambdas: {e}")))?
        .0;
    if lambdas.is_empty() {
        return Err(PsgError::Usage("--lambdas needs at least one value".into()));
    }
    let refs = r.get("single_task_refs", a.single_task_refs.then_some(true), false)?;
    let data = load_data(r, a.data)?;
    let assignment = io::read_split(&path_req(r, "split", a.split)?)?;
    let out = path_req(r, "out", a.out)?;
    let base = model_spec(r, a.model, ModelKind::MultiTask, 0.0)?;
    let mut runs: Vec<ExperimentSpec> = Vec::new();
    if refs {
        runs.push(ExperimentSpec { kind: ModelKind::SingleTag, ..base.clone() });
        runs.push(ExperimentSpec { kind: ModelKind::SingleDifficulty, ..base.clone() });
    }
    for &lambda in &lambdas {
        runs.push(ExperimentSpec { train: TrainConfig { lambda, ..base.train.clone() }, ..base.clone() });
    }
    let mut reports = Vec::new();
    for spec in &runs {
        log::info!("training {} (lambda {})", spec.kind.name(), spec.train.lambda);
        reports.push(experiment::run(&data, &assignment, spec)?.1);
    }
    let table = report::render_table(&reports, &base.thetas);
    io::write_json(&out.join("sweep.json"), &reports)?;
    io::write_file(&out.join("sweep.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(Output::Dir(out))
}

fn predict(r: &mut Resolver, a: PredictArgs) -> Result<Output> {
    let ckpt = checkpoint::load(&path_req(r, "checkpoint", a.checkpoint)?)?;
    let threshold = r.get("threshold", a.threshold, 0.5)?;
    let text = match path_opt(r, "input", a.input)? {
        Some(p) if p.as_os_str() != "-" => io::read_to_string(&p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| PsgError::io("<stdin>", e))?;
            s
        }
    };
    if text.trim().is_empty() {
        return Err(PsgError::Data("input statement is empty".into()));
    }
    let prediction = ckpt.predict(&text, threshold)?;
    let json = serde_json::to_string_pretty(&prediction).map_err(|e| PsgError::Data(e.to_string()))?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{json}").map_err(|e| PsgError::io("<stdout>", e))?;
    Ok(Output::None)
}

fn roc(r: &mut Resolver, a: RocArgs) -> Result<Output> {
    let ckpt = checkpoint::load(&path_req(r, "checkpoint", a.checkpoint)?)?;
    let data = eval_data(r, &ckpt, a.data)?;
    let assignment = io::read_split(&path_req(r, "split", a.split)?)?;
    let out = path_req(r, "out", a.out)?;
    if !ckpt.has_tag_head() {
        return Err(PsgError::Data("checkpoint has no tag head".into()));
    }
    let (_, test) = experiment::apply_split(&data.dataset, &assignment)?;
    let evaluation = experiment::evaluate(&ckpt, &test, &[], 0.5)?;
    let probs = evaluation.tag_probs.unwrap_or_default();
    let csv = report::roc_csv(ckpt.vocab.labels(), &probs, test.labels())?;
    io::write_file(&out, csv.as_bytes())?;
    Ok(Output::File(out))
}

fn synth_cmd(a: SynthArgs) -> Result<Output> {
    let records = match a.kind {
        SynthKind::Amt => synth::amt_fixture(a.seed),
        SynthKind::Learnability => synth::learnability(a.n, a.seed),
    };
    io::write_jsonl(&a.out, &records)?;
    println!("{} records written to {}", records.len(), a.out.display());
    Ok(Output::None)
}
