mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use common::{check_golden, fixture, golden_path};
use psg::report::ExperimentReport;

fn psg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psg")).args(args).output().unwrap()
}

fn psg_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_psg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // The child may exit before reading its input; a broken pipe is fine.
    let _ = child.stdin.take().unwrap().write_all(input.as_bytes());
    child.wait_with_output().unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "exit {:?}\nstderr: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn amt() -> PathBuf {
    fixture("amt_fixture.jsonl")
}

fn read_report(path: &Path) -> ExperimentReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Trains the small golden configuration into `out`.
fn train_small(out: &Path, extra: &[&str]) -> Output {
    let split = golden_path("split_amt.json");
    let conf = golden_path("amt_small.conf");
    let data = amt();
    let mut args = vec!["train", "--config", s(&conf), "--data", s(&data), "--split", s(&split), "--out", s(out)];
    args.extend_from_slice(extra);
    psg(&args)
}

#[test]
fn ingest_malformed_reports_line_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\":\"1A\",\"statement\":\"ok\",\"tags\":[\"dp\"]}\n{\"id\":\"1B\",\"statement\":\n").unwrap();
    let out = psg(&["ingest", "--input", s(&bad), "--out", s(&dir.path().join("o.jsonl"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.jsonl:2:"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn ingest_merges_directory_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    std::fs::create_dir(&input).unwrap();
    std::fs::write(input.join("b.jsonl"), "{\"id\":\"2A\",\"statement\":\"y\",\"tags\":[\"Math\"],\"rating\":900}\n").unwrap();
    std::fs::write(input.join("a.jsonl"), "{\"id\":\"1A\",\"statement\":\"x\",\"tags\":[\"dp\"],\"rating\":null}\n").unwrap();
    std::fs::write(input.join("notes.txt"), "ignored").unwrap();
    let merged = dir.path().join("all.jsonl");
    ok(psg(&["ingest", "--input", s(&input), "--out", s(&merged)]));
    let records = psg::io::load_jsonl(&merged).unwrap();
    assert_eq!(records.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["1A", "2A"]);
    assert!(dir.path().join("all.jsonl.config").exists());

    std::fs::write(input.join("c.jsonl"), "{\"id\":\"1A\",\"statement\":\"z\",\"tags\":[]}\n").unwrap();
    assert_eq!(code(&psg(&["ingest", "--input", s(&input), "--out", s(&merged)])), 2);
}

#[test]
fn stats_on_fixture_matches_golden() {
    let text = ok(psg(&["stats", "--data", s(&amt())]));
    check_golden(&golden_path("stats_amt.txt"), &text);
    assert!(text.contains("missing rating: 162"));
}

#[test]
fn split_is_reproducible_and_frozen() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        ok(psg(&["split", "--data", s(&amt()), "--seed", "42", "--test-frac", "0.1", "--out", s(p)]));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    check_golden(&golden_path("split_amt.json"), &text);
    let snapshot = std::fs::read_to_string(dir.path().join("a.json.config")).unwrap();
    assert!(snapshot.contains("seed=42\n") && snapshot.contains("test_frac=0.1\n"), "{snapshot}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&psg(&["stats"])), 1);
    assert_eq!(code(&psg(&["train", "--no-such-flag"])), 1);
    assert_eq!(code(&psg(&["bogus"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = psg(&["fetch", "--out", s(dir.path()), "--min-interval", "1s"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("min_interval"));
    let out = train_small(&dir.path().join("b"), &["--baseline", "--lambda", "1"]);
    assert_eq!(code(&out), 1);
    let out = train_small(&dir.path().join("c"), &["--theta", "3,x"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope");
    assert_eq!(code(&psg(&["stats", "--data", s(&missing)])), 2);
    assert_eq!(code(&psg(&["predict", "--checkpoint", s(&missing), "--input", s(&missing)])), 2);
}

#[test]
fn golden_checkpoint_is_reproduced_by_training() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    ok(train_small(&out, &[]));
    let golden = golden_path("checkpoint");
    for file in ["params.json", "params.bin", "vectorizer.json"] {
        let bytes = std::fs::read(out.join(file)).unwrap();
        if std::env::var_os("PSG_BLESS").is_some_and(|v| v == "1") {
            std::fs::create_dir_all(&golden).unwrap();
            std::fs::write(golden.join(file), &bytes).unwrap();
        }
        assert_eq!(bytes, std::fs::read(golden.join(file)).unwrap(), "{file} differs from the frozen checkpoint");
    }
    let snapshot = std::fs::read_to_string(out.join("resolved_config.txt")).unwrap();
    for key in ["seed=42", "lambda=10", "hash_dim=1024", "hidden=16", "epochs=2", "lr=0.003"] {
        assert!(snapshot.lines().any(|l| l == key), "{key} missing from snapshot:\n{snapshot}");
    }
    assert!(out.join("timing.json").exists());

    // The snapshot alone reproduces the run.
    let again = dir.path().join("again");
    let snap_path = out.join("resolved_config.txt");
    ok(psg(&["train", "--config", s(&snap_path), "--out", s(&again)]));
    assert_eq!(std::fs::read(out.join("params.bin")).unwrap(), std::fs::read(again.join("params.bin")).unwrap());
    assert_eq!(std::fs::read(out.join("report.json")).unwrap(), std::fs::read(again.join("report.json")).unwrap());
}

#[test]
fn eval_of_golden_checkpoint_matches_golden_report() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = golden_path("checkpoint");
    let split = golden_path("split_amt.json");
    let out = dir.path().join("eval");
    ok(psg(&["eval", "--checkpoint", s(&ckpt), "--data", s(&amt()), "--split", s(&split), "--theta", "0,3,5", "--out", s(&out)]));
    let text = std::fs::read_to_string(out.join("report.json")).unwrap();
    check_golden(&golden_path("report_amt.json"), &text);
    let report = read_report(&out.join("report.json"));
    let d = report.difficulty_eval.unwrap();
    assert_eq!(d.cs_at(0).unwrap(), d.accuracy * 100.0);
    assert!(report.tag_eval.unwrap().macro_auroc.is_some());
    assert_eq!(report.lambda, Some(10.0));
    assert_eq!(report.split.test, 798);
}

#[test]
fn eval_with_mismatched_vocabulary_exits_2() {
    let ckpt = golden_path("checkpoint");
    let split = golden_path("split_amt.json");
    let out = psg(&["eval", "--checkpoint", s(&ckpt), "--data", s(&amt()), "--split", s(&split), "--vocab", "amt10"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("K=20"));
}

#[test]
fn predict_matches_golden_and_reads_stdin() {
    let ckpt = golden_path("checkpoint");
    let input = fixture("html/1000A.txt");
    let from_file = ok(psg(&["predict", "--checkpoint", s(&ckpt), "--input", s(&input), "--threshold", "0.3"]));
    check_golden(&golden_path("predict_1000A.json"), &from_file);
    let statement = std::fs::read_to_string(&input).unwrap();
    assert_eq!(ok(psg_stdin(&["predict", "--checkpoint", s(&ckpt), "--threshold", "0.3"], &statement)), from_file);
    assert_eq!(ok(psg_stdin(&["predict", "--checkpoint", s(&ckpt), "--input", "-", "--threshold", "0.3"], &statement)), from_file);
    let value: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    assert_eq!(value["difficulty"]["prob_dist"].as_array().unwrap().len(), 28);

    let empty = psg_stdin(&["predict", "--checkpoint", s(&ckpt)], "  \n");
    assert_eq!(code(&empty), 2);
}

#[test]
fn predict_threshold_on_zero_checkpoint() {
    use psg_core::model::{Checkpoint, Dims, Heads, ModelParams, Network, TrainConfig};
    use psg_core::text::{FeatureMode, TokenizerConfig, Vectorizer};
    let dir = tempfile::tempdir().unwrap();
    let vectorizer = Vectorizer::fit(&[vec!["given", "array"]], FeatureMode::Hashed { dim: 64 }, TokenizerConfig::default()).unwrap();
    let dims = Dims { input: 64, hidden: 4, tags: 20, levels: 28 };
    let ckpt = Checkpoint {
        network: Network::TwoHead { params: ModelParams::zeros(dims, Heads::Both), config: TrainConfig::default() },
        vectorizer,
        vocab: psg_core::TagVocabulary::amt(),
        scale: psg_core::DifficultyScale::AMT,
        log: Default::default(),
    };
    psg::checkpoint::save(&ckpt, dir.path()).unwrap();
    let high = ok(psg_stdin(&["predict", "--checkpoint", s(dir.path()), "--threshold", "0.99"], "Given an array."));
    let value: serde_json::Value = serde_json::from_str(&high).unwrap();
    assert!(value["tags"].as_array().unwrap().is_empty());
    assert_eq!(value["difficulty"]["rating"], 800);
    let all = ok(psg_stdin(&["predict", "--checkpoint", s(dir.path())], "Given an array."));
    let value: serde_json::Value = serde_json::from_str(&all).unwrap();
    assert_eq!(value["tags"].as_array().unwrap().len(), 20);
}

#[test]
fn single_task_runs_and_lambda_zero_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let (zero, tag, diff) = (dir.path().join("zero"), dir.path().join("tag"), dir.path().join("diff"));
    ok(train_small(&zero, &["--lambda", "0"]));
    ok(train_small(&tag, &["--single-task", "tag"]));
    ok(train_small(&diff, &["--single-task", "difficulty"]));
    let (z, t, d) = (read_report(&zero.join("report.json")), read_report(&tag.join("report.json")), read_report(&diff.join("report.json")));
    assert_eq!(z.tag_eval, t.tag_eval);
    assert!(t.difficulty_eval.is_none() && t.lambda.is_none());
    assert!(d.tag_eval.is_none() && d.difficulty_eval.is_some());
    let manifest = std::fs::read_to_string(diff.join("params.json")).unwrap();
    assert!(!manifest.contains("W_tag") && manifest.contains("W_diff"));
}

#[test]
fn baseline_trains_and_rejects_lambda_in_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("base");
    ok(train_small(&out, &["--baseline", "--lr", "0.01"]));
    let report = read_report(&out.join("report.json"));
    assert_eq!(report.model, "baseline");
    assert!(report.lambda.is_none() && report.baseline_config.is_some());
    let manifest = out.join("params.json");
    let text = std::fs::read_to_string(&manifest).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["baseline_config"]["lambda"] = serde_json::json!(10.0);
    std::fs::write(&manifest, serde_json::to_string(&value).unwrap()).unwrap();
    let out = psg_stdin(&["predict", "--checkpoint", s(&out)], "Given an array.");
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
}

#[test]
fn sweep_has_one_row_per_run_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let split = golden_path("split_amt.json");
    let conf = golden_path("amt_small.conf");
    let run = |out: &Path| {
        ok(psg(&[
            "sweep", "--config", s(&conf), "--data", s(&amt()), "--split", s(&split), "--lambdas", "1,10,100",
            "--single-task-refs", "--epochs", "1", "--out", s(out),
        ]))
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let table = run(&a);
    run(&b);
    assert_eq!(std::fs::read(a.join("sweep.json")).unwrap(), std::fs::read(b.join("sweep.json")).unwrap());
    assert_eq!(std::fs::read(a.join("sweep.txt")).unwrap(), std::fs::read(b.join("sweep.txt")).unwrap());
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 5, "{table}");
    assert!(rows[0].contains("single-task-tag") && rows[1].contains("single-task-difficulty"));
    for (row, lambda) in rows[2..].iter().zip(["1", "10", "100"]) {
        let cells: Vec<&str> = row.split('|').map(str::trim).filter(|c| !c.is_empty()).collect();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[1], lambda);
        assert!(cells[2..].iter().all(|c| *c != "-"), "{row}");
    }
    assert!(a.join("resolved_config.txt").exists());
}

#[test]
fn roc_export_has_monotone_curves() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("roc.csv");
    let ckpt = golden_path("checkpoint");
    let split = golden_path("split_amt.json");
    ok(psg(&["roc", "--checkpoint", s(&ckpt), "--data", s(&amt()), "--split", s(&split), "--out", s(&csv_path)]));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("label,threshold,fpr,tpr"));
    let mut curves: std::collections::BTreeMap<String, Vec<(f64, f64)>> = Default::default();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        curves.entry(cells[0].to_string()).or_default().push((cells[2].parse().unwrap(), cells[3].parse().unwrap()));
    }
    assert_eq!(curves.len(), 20);
    for points in curves.values() {
        assert_eq!(points[0], (0.0, 0.0));
        assert_eq!(*points.last().unwrap(), (1.0, 1.0));
        assert!(points.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
    }
}

#[test]
fn synth_regenerates_the_committed_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("amt.jsonl");
    ok(psg(&["synth", "--kind", "amt", "--seed", "42", "--out", s(&out)]));
    assert!(std::fs::read(&out).unwrap() == std::fs::read(amt()).unwrap());
}
