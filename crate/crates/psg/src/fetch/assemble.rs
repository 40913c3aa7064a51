use std::collections::BTreeMap;

use psg_core::corpus::{canonical_tag, DifficultyScale, ProblemRecord};
use serde::{Deserialize, Serialize};

use super::client::RawProblemMeta;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssembleSummary {
    pub metas: usize,
    pub emitted: usize,
    /// Problems without any tag.
    pub dropped_tagless: usize,
    /// Tagged problems with no statement text available.
    pub unmatched: usize,
    /// Ratings off the difficulty grid, stored as null.
    pub off_grid_ratings: usize,
}

impl std::fmt::Display for AssembleSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} problems listed, {} records written, {} dropped without tags, {} without statement, {} off-grid ratings",
            self.metas, self.emitted, self.dropped_tagless, self.unmatched, self.off_grid_ratings
        )
    }
}

/// Joins metadata with statement text keyed by `(contest_id, index)`.
/// Tagless problems are dropped, tags are mapped to display spelling, and
/// records come out sorted by `(contest_id, index)`.
pub fn assemble_records(
    metas: &[RawProblemMeta],
    statements: &BTreeMap<(i64, String), String>,
) -> (Vec<ProblemRecord>, AssembleSummary) {
    let mut summary = AssembleSummary { metas: metas.len(), ..Default::default() };
    let mut sorted: Vec<&RawProblemMeta> = metas.iter().collect();
    sorted.sort_by(|a, b| (a.contest_id, &a.index).cmp(&(b.contest_id, &b.index)));
    let mut records = Vec::new();
    for meta in sorted {
        if meta.tags.is_empty() {
            summary.dropped_tagless += 1;
            continue;
        }
        let Some(statement) = statements.get(&(meta.contest_id, meta.index.clone())) else {
            log::warn!("no statement for {}", meta.id());
            summary.unmatched += 1;
            continue;
        };
        let rating = meta.rating.filter(|&r| {
            let ok = DifficultyScale::AMT.index_of(r).is_ok();
            if !ok {
                summary.off_grid_ratings += 1;
            }
            ok
        });
        let mut tags: Vec<String> = Vec::new();
        for tag in &meta.tags {
            let display = canonical_tag(tag);
            if !tags.contains(&display) {
                tags.push(display);
            }
        }
        records.push(ProblemRecord {
            id: meta.id(),
            contest_id: Some(meta.contest_id),
            index: Some(meta.index.clone()),
            title: meta.name.clone(),
            statement: statement.clone(),
            tags,
            rating,
            source: "codeforces".to_string(),
        });
    }
    summary.emitted = records.len();
    (records, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(contest_id: i64, index: &str, tags: &[&str], rating: Option<i64>) -> RawProblemMeta {
        RawProblemMeta {
            contest_id,
            index: index.to_string(),
            name: format!("P{contest_id}{index}"),
            tags: tags.iter().map(|s| s.to_string()).collect(),
            rating,
        }
    }

    #[test]
    fn drops_tagless_and_keeps_null_rating() {
        let metas = vec![meta(2, "A", &["dp", "math"], None), meta(1, "B", &[], Some(800)), meta(1, "A", &["dsu"], Some(1200))];
        let statements: BTreeMap<_, _> =
            metas.iter().map(|m| ((m.contest_id, m.index.clone()), format!("text {}", m.id()))).collect();
        let (records, summary) = assemble_records(&metas, &statements);
        assert_eq!(records.len(), 2);
        assert_eq!(summary.dropped_tagless, 1);
        assert_eq!(records[0].id, "1A");
        assert_eq!(records[0].tags, vec!["DSU"]);
        assert_eq!(records[1].rating, None);
        assert_eq!(records[1].tags, vec!["DP", "Math"]);
    }

    #[test]
    fn empty_input() {
        let (records, summary) = assemble_records(&[], &BTreeMap::new());
        assert!(records.is_empty());
        assert_eq!(summary, AssembleSummary::default());
    }
}
