use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{scale::DifficultyScale, CorpusError};

/// One algorithm problem as stored in the JSONL dataset files.
///
/// `rating` is the provider's difficulty rating, taken as given. Problems
/// without a rating keep `None` and are masked out of the difficulty task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contest_id: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<String>,
    #[serde(default)]
    pub title: String,
    pub statement: String,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub rating: Option<i64>,
    #[serde(default)]
    pub source: String,
}

impl ProblemRecord {
    /// Checks the per-record invariants and removes duplicate tags, keeping
    /// the first occurrence of each.
    pub fn validate(&mut self) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if self.statement.trim().is_empty() {
            return Err(CorpusError::EmptyStatement(self.id.clone()));
        }
        if let Some(contest_id) = self.contest_id {
            if contest_id < 1 {
                return Err(CorpusError::InvalidContestId { id: self.id.clone(), contest_id });
            }
        }
        if let Some(rating) = self.rating {
            DifficultyScale::AMT.index_of(rating)?;
        }
        let mut seen = BTreeSet::new();
        self.tags.retain(|t| seen.insert(t.clone()));
        Ok(())
    }
}

/// Validates a whole record list: per-record invariants plus id uniqueness.
pub(crate) fn validate_all(records: &mut [ProblemRecord]) -> Result<(), CorpusError> {
    let mut ids = BTreeSet::new();
    for record in records.iter_mut() {
        record.validate()?;
        if !ids.insert(record.id.as_str()) {
            return Err(CorpusError::DuplicateId(record.id.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn record(rating: Option<i64>) -> ProblemRecord {
        ProblemRecord {
            id: "1A".to_string(),
            contest_id: Some(1),
            index: Some("A".to_string()),
            title: "Theatre Square".to_string(),
            statement: "Cover the square with flagstones.".to_string(),
            tags: vec!["math".to_string(), "math".to_string()],
            rating,
            source: "codeforces".to_string(),
        }
    }

    #[test]
    fn rejects_off_grid_rating() {
        assert_eq!(record(Some(850)).validate(), Err(CorpusError::InvalidRating(850)));
        assert_eq!(record(Some(3600)).validate(), Err(CorpusError::InvalidRating(3600)));
        assert!(record(Some(3500)).validate().is_ok());
        assert!(record(None).validate().is_ok());
    }

    #[test]
    fn dedups_tags() {
        let mut r = record(None);
        r.validate().unwrap();
        assert_eq!(r.tags, vec!["math".to_string()]);
    }

    #[test]
    fn rejects_blank_statement_and_bad_contest() {
        let mut r = record(None);
        r.statement = "  \n".to_string();
        assert!(matches!(r.validate(), Err(CorpusError::EmptyStatement(_))));
        let mut r = record(None);
        r.contest_id = Some(0);
        assert!(matches!(r.validate(), Err(CorpusError::InvalidContestId { .. })));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut rs = vec![record(None), record(None)];
        assert_eq!(validate_all(&mut rs), Err(CorpusError::DuplicateId("1A".to_string())));
    }
}
