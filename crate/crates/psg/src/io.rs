//! Dataset, vocabulary and split files.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use psg_core::corpus::{CorpusError, ProblemRecord, SplitAssignment, TagVocabulary};
use sha2::{Digest, Sha256};

use crate::error::{PsgError, Result};

/// Reads one record per non-blank line. Records are validated and ids must
/// be unique; errors carry the 1-based line number.
pub fn load_jsonl(path: &Path) -> Result<Vec<ProblemRecord>> {
    let file = fs::File::open(path).map_err(|e| PsgError::io(path, e))?;
    parse_jsonl(BufReader::new(file), path)
}

pub fn parse_jsonl(reader: impl BufRead, path: &Path) -> Result<Vec<ProblemRecord>> {
    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| PsgError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| PsgError::Parse { path: path.to_path_buf(), line: line_no, message };
        let mut record: ProblemRecord = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        record.validate().map_err(|e| parse_err(e.to_string()))?;
        if !seen.insert(record.id.clone()) {
            return Err(parse_err(CorpusError::DuplicateId(record.id).to_string()));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_jsonl(path: &Path, records: &[ProblemRecord]) -> Result<()> {
    let mut out = Vec::new();
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(|e| PsgError::Data(e.to_string()))?;
        out.push(b'\n');
    }
    write_file(path, &out)
}

/// One tag per line; blank lines are ignored.
pub fn read_vocab(path: &Path) -> Result<TagVocabulary> {
    let text = read_to_string(path)?;
    Ok(TagVocabulary::new(text.lines().map(str::trim).filter(|l| !l.is_empty()))?)
}

pub fn write_vocab(path: &Path, vocab: &TagVocabulary) -> Result<()> {
    let mut text = vocab.labels().join("\n");
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub fn read_split(path: &Path) -> Result<SplitAssignment> {
    let text = read_to_string(path)?;
    let split: SplitAssignment =
        serde_json::from_str(&text).map_err(|e| PsgError::Data(format!("{}: {e}", path.display())))?;
    if !split.train_ids.is_disjoint(&split.test_ids) {
        return Err(PsgError::Data(format!("{}: train and test ids overlap", path.display())));
    }
    Ok(split)
}

pub fn write_split(path: &Path, split: &SplitAssignment) -> Result<()> {
    write_json(path, split)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| PsgError::Data(e.to_string()))?;
    bytes.push(b'\n');
    write_file(path, &bytes)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| PsgError::io(path, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| PsgError::io(parent, e))?;
    }
    let mut file = fs::File::create(path).map_err(|e| PsgError::io(path, e))?;
    file.write_all(bytes).map_err(|e| PsgError::io(path, e))
}

/// `sha256:<hex>` of the file contents.
pub fn fingerprint(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path).map_err(|e| PsgError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| PsgError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    let digest = hasher.finalize();
    Ok(format!("sha256:{}", digest.iter().map(|b| format!("{b:02x}")).collect::<String>()))
}
