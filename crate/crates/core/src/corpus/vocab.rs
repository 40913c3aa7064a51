use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// The 20 most frequent tags of the AMT dataset, most frequent first.
pub const AMT_TAGS: [&str; 20] = [
    "Implementation",
    "Math",
    "Greedy",
    "DP",
    "Data Structures",
    "Brute Force",
    "Graphs",
    "Sortings",
    "Binary Search",
    "DFS and Similar",
    "Trees",
    "Strings",
    "Number Theory",
    "Combinatorics",
    "Bitmasks",
    "Two Pointers",
    "Geometry",
    "DSU",
    "Shortest Paths",
    "Divide and Conquer",
];

/// Provider spelling (Codeforces, lowercase) to display name.
const PROVIDER_SPELLINGS: [(&str, &str); 20] = [
    ("implementation", "Implementation"),
    ("math", "Math"),
    ("greedy", "Greedy"),
    ("dp", "DP"),
    ("data structures", "Data Structures"),
    ("brute force", "Brute Force"),
    ("graphs", "Graphs"),
    ("sortings", "Sortings"),
    ("binary search", "Binary Search"),
    ("dfs and similar", "DFS and Similar"),
    ("trees", "Trees"),
    ("strings", "Strings"),
    ("number theory", "Number Theory"),
    ("combinatorics", "Combinatorics"),
    ("bitmasks", "Bitmasks"),
    ("two pointers", "Two Pointers"),
    ("geometry", "Geometry"),
    ("dsu", "DSU"),
    ("shortest paths", "Shortest Paths"),
    ("divide and conquer", "Divide and Conquer"),
];

/// Maps a provider tag string onto its display name. Unknown tags are
/// returned trimmed but otherwise unchanged.
pub fn canonical_tag(tag: &str) -> String {
    let trimmed = tag.trim();
    let lower = trimmed.to_lowercase();
    PROVIDER_SPELLINGS
        .iter()
        .find(|(provider, _)| *provider == lower)
        .map(|(_, display)| display.to_string())
        .unwrap_or_else(|| trimmed.to_string())
}

/// Ordered label space for the tag task. Label `k` of a label vector refers
/// to `labels[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TagVocabulary {
    labels: Vec<String>,
}

impl TagVocabulary {
    pub fn new<I, S>(labels: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(CorpusError::EmptyVocabulary);
        }
        for (i, label) in labels.iter().enumerate() {
            let key = label.to_lowercase();
            if labels[..i].iter().any(|l| l.to_lowercase() == key) {
                return Err(CorpusError::DuplicateTag(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// The full 20-tag AMT vocabulary.
    pub fn amt() -> Self {
        Self { labels: AMT_TAGS.iter().map(|s| s.to_string()).collect() }
    }

    /// The 10-tag AMT10 vocabulary.
    pub fn amt10() -> Self {
        Self { labels: AMT_TAGS[..10].iter().map(|s| s.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Position of a tag, accepting either provider or display spelling.
    pub fn position(&self, tag: &str) -> Option<usize> {
        let key = canonical_tag(tag).to_lowercase();
        self.labels.iter().position(|l| l.to_lowercase() == key)
    }
}

impl TryFrom<Vec<String>> for TagVocabulary {
    type Error = CorpusError;

    fn try_from(labels: Vec<String>) -> Result<Self, Self::Error> {
        Self::new(labels)
    }
}

impl From<TagVocabulary> for Vec<String> {
    fn from(vocab: TagVocabulary) -> Self {
        vocab.labels
    }
}
