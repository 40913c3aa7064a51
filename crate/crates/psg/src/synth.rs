//! Deterministic synthetic corpora.
//!
//! [`learnability`] builds a corpus whose labels are a known function of the
//! text, for checking that training actually learns. [`amt_fixture`] builds
//! an offline stand-in for the AMT crawl whose tag and rating histograms
//! match the published distribution exactly.

use psg_core::corpus::{ProblemRecord, TagVocabulary, AMT_TAGS};
use psg_core::rng::{self, Rng};

pub const LEARNABILITY_TAGS: [&str; 5] = ["Alpha", "Beta", "Gamma", "Delta", "Epsilon"];
pub const SIGNATURE_TOKENS: usize = 20;
const LEARNABILITY_DOC_LEN: usize = 40;
const FILLER_WORDS: usize = 200;

pub fn learnability_vocab() -> TagVocabulary {
    TagVocabulary::new(LEARNABILITY_TAGS).expect("static vocabulary")
}

/// Signature token `j` of tag `t`.
pub fn signature_token(t: usize, j: usize) -> String {
    format!("s{t}k{j:02}")
}

fn pick_distinct(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    rng::shuffle(rng, &mut all);
    all.truncate(k);
    all
}

/// `n` records over [`LEARNABILITY_TAGS`]. Each tag is active with
/// probability 0.4 (at least one per record); an active tag contributes 1 to
/// 4 distinct tokens from its 20 signature tokens. The difficulty index is
/// the total signature count plus uniform noise in {-1, 0, 1}, clamped to the
/// 28 levels. Every document has 40 tokens, padded with filler words.
pub fn learnability(n: usize, seed: u64) -> Vec<ProblemRecord> {
    let mut rng = rng::stream(seed, 0x5359_4e54);
    let tags = LEARNABILITY_TAGS.len();
    (0..n)
        .map(|i| {
            let mut active: Vec<usize> = (0..tags).filter(|_| rng::unit(&mut rng) < 0.4).collect();
            if active.is_empty() {
                active.push(rng::below(&mut rng, tags as u64) as usize);
            }
            let mut words = Vec::with_capacity(LEARNABILITY_DOC_LEN);
            let mut total = 0i64;
            for &t in &active {
                let count = 1 + rng::below(&mut rng, 4) as usize;
                total += count as i64;
                words.extend(pick_distinct(&mut rng, SIGNATURE_TOKENS, count).into_iter().map(|j| signature_token(t, j)));
            }
            while words.len() < LEARNABILITY_DOC_LEN {
                words.push(format!("w{}", rng::below(&mut rng, FILLER_WORDS as u64)));
            }
            rng::shuffle(&mut rng, &mut words);
            let noise = rng::below(&mut rng, 3) as i64 - 1;
            let level = (total + noise).clamp(0, 27);
            ProblemRecord {
                id: format!("S{i:05}"),
                contest_id: None,
                index: None,
                title: String::new(),
                statement: words.join(" "),
                tags: active.iter().map(|&t| LEARNABILITY_TAGS[t].to_string()).collect(),
                rating: Some(800 + 100 * level),
                source: "synthetic-learnability".to_string(),
            }
        })
        .collect()
}

/// Problems per tag, in vocabulary order.
pub const AMT_TAG_COUNTS: [usize; 20] =
    [2394, 2363, 2302, 1732, 1429, 1370, 890, 869, 862, 776, 663, 617, 613, 544, 459, 438, 344, 292, 231, 227];

/// Problems per rating 800, 900, ..., 3500.
pub const AMT_RATING_COUNTS: [usize; 28] = [
    686, 255, 306, 305, 333, 325, 329, 357, 397, 381, 348, 371, 363, 330, 362, 297, 347, 306, 242, 222, 177, 165, 137,
    107, 105, 86, 63, 112,
];

pub const AMT_PROBLEMS: usize = 7976;
pub const AMT_UNRATED: usize = 162;
/// Extra records carrying only tags outside the vocabulary; dataset
/// construction drops them.
pub const AMT_OUT_OF_VOCAB: usize = 24;

const OOV_TAGS: [&str; 6] = ["constructive algorithms", "interactive", "games", "probabilities", "hashing", "matrices"];

const TAG_WORDS: [[&str; 6]; 20] = [
    ["simulate", "process", "operations", "follow", "instructions", "carefully"],
    ["formula", "divisible", "modulo", "sum", "integer", "equation"],
    ["choose", "maximize", "optimal", "always", "pick", "best"],
    ["subsequence", "ways", "state", "transition", "count", "prefix"],
    ["queries", "update", "segment", "range", "structure", "efficiently"],
    ["try", "all", "possible", "enumerate", "combination", "check"],
    ["vertices", "edges", "graph", "connected", "undirected", "directed"],
    ["sorted", "order", "ascending", "descending", "arrange", "permutation"],
    ["minimum", "search", "monotonic", "answer", "bound", "smallest"],
    ["traverse", "visit", "component", "reachable", "depth", "explore"],
    ["tree", "rooted", "subtree", "leaf", "parent", "child"],
    ["string", "characters", "substring", "letters", "palindrome", "lowercase"],
    ["prime", "gcd", "divisor", "factor", "coprime", "lcm"],
    ["binomial", "arrangements", "choose", "ways", "modulo", "factorial"],
    ["bits", "xor", "mask", "binary", "subset", "bitwise"],
    ["pointers", "window", "contiguous", "segment", "length", "shrink"],
    ["points", "plane", "polygon", "coordinates", "area", "segment"],
    ["union", "merge", "sets", "groups", "join", "belong"],
    ["shortest", "path", "distance", "weighted", "route", "cost"],
    ["split", "halves", "recursively", "merge", "divide", "combine"],
];

const BAND_WORDS: [[&str; 4]; 7] = [
    ["small", "single", "simple", "easy"],
    ["several", "few", "hundred", "pairs"],
    ["thousand", "multiple", "testcases", "arrays"],
    ["large", "efficient", "million", "fast"],
    ["huge", "online", "dynamic", "tricky"],
    ["intricate", "amortized", "persistent", "offline"],
    ["extremely", "challenging", "advanced", "lemma"],
];

const GENERAL_WORDS: [&str; 24] = [
    "given", "array", "integers", "output", "print", "each", "test", "case", "input", "line", "number", "first",
    "second", "value", "find", "determine", "contains", "elements", "answer", "if", "exists", "otherwise", "the", "of",
];

/// 8,000 records: 7,976 whose in-vocabulary tags reproduce
/// [`AMT_TAG_COUNTS`] and whose ratings reproduce [`AMT_RATING_COUNTS`] with
/// [`AMT_UNRATED`] left null, plus [`AMT_OUT_OF_VOCAB`] records tagged only
/// outside the vocabulary. Statements mix generic words with words tied to
/// the record's tags and difficulty band. Tags use display spelling, as the
/// fetcher writes them.
pub fn amt_fixture(seed: u64) -> Vec<ProblemRecord> {
    let mut rng = rng::stream(seed, 0x414d_5446);
    let total = AMT_PROBLEMS + AMT_OUT_OF_VOCAB;

    let mut tag_sets: Vec<Vec<usize>> = vec![Vec::new(); AMT_PROBLEMS];
    for (t, &count) in AMT_TAG_COUNTS.iter().enumerate() {
        let mut order: Vec<(usize, u64, usize)> =
            (0..AMT_PROBLEMS).map(|i| (tag_sets[i].len(), rng::below(&mut rng, u64::MAX), i)).collect();
        order.sort_unstable();
        for &(_, _, i) in order.iter().take(count) {
            tag_sets[i].push(t);
        }
    }
    for set in &mut tag_sets {
        set.sort_unstable();
    }

    let mut ratings: Vec<Option<i64>> = AMT_RATING_COUNTS
        .iter()
        .enumerate()
        .flat_map(|(level, &n)| std::iter::repeat_n(Some(800 + 100 * level as i64), n))
        .chain(std::iter::repeat_n(None, AMT_UNRATED))
        .collect();
    rng::shuffle(&mut rng, &mut ratings);

    let mut slots: Vec<usize> = (0..total).collect();
    rng::shuffle(&mut rng, &mut slots);
    let mut records = Vec::with_capacity(total);
    for (n, &slot) in slots.iter().enumerate() {
        let (mut tags, rating) = if slot < AMT_PROBLEMS {
            let tags: Vec<String> = tag_sets[slot].iter().map(|&t| AMT_TAGS[t].to_string()).collect();
            (tags, ratings[slot])
        } else {
            let level = rng::below(&mut rng, 28) as i64;
            (Vec::new(), Some(800 + 100 * level))
        };
        if tags.is_empty() || rng::unit(&mut rng) < 0.2 {
            tags.push(OOV_TAGS[rng::below(&mut rng, OOV_TAGS.len() as u64) as usize].to_string());
        }
        let statement = amt_statement(&mut rng, &tags, rating);
        let contest_id = 1 + (n / 5) as i64;
        let index = ["A", "B", "C", "D", "E"][n % 5];
        records.push(ProblemRecord {
            id: format!("{contest_id}{index}"),
            contest_id: Some(contest_id),
            index: Some(index.to_string()),
            title: format!("Synthetic problem {contest_id}{index}"),
            statement,
            tags: std::mem::take(&mut tags),
            rating,
            source: "synthetic-fixture".to_string(),
        });
    }
    records
}

fn amt_statement(rng: &mut Rng, tags: &[String], rating: Option<i64>) -> String {
    let mut words: Vec<&str> = Vec::new();
    for _ in 0..(12 + rng::below(rng, 9)) {
        words.push(GENERAL_WORDS[rng::below(rng, GENERAL_WORDS.len() as u64) as usize]);
    }
    for tag in tags {
        if let Some(t) = AMT_TAGS.iter().position(|a| a == tag) {
            if rng::unit(rng) < 0.85 {
                for j in pick_distinct(rng, 6, 3) {
                    words.push(TAG_WORDS[t][j]);
                }
            }
        }
    }
    let band = match rating {
        Some(r) if rng::unit(rng) < 0.7 => ((r - 800) / 100 / 4) as usize,
        _ => rng::below(rng, BAND_WORDS.len() as u64) as usize,
    };
    for j in pick_distinct(rng, 4, 2) {
        words.push(BAND_WORDS[band][j]);
    }
    rng::shuffle(rng, &mut words);
    let mut text = words.join(" ");
    if let Some(first) = text.get(..1) {
        text.replace_range(..1, &first.to_uppercase());
    }
    text.push('.');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sums() {
        assert_eq!(AMT_RATING_COUNTS.iter().sum::<usize>() + AMT_UNRATED, AMT_PROBLEMS);
        assert_eq!(AMT_RATING_COUNTS.len(), 28);
    }

    #[test]
    fn learnability_shape() {
        let recs = learnability(300, 1);
        assert_eq!(recs.len(), 300);
        for r in &recs {
            assert_eq!(r.statement.split(' ').count(), LEARNABILITY_DOC_LEN);
            let sig: i64 = r.statement.split(' ').filter(|w| w.starts_with('s')).count() as i64;
            let level = (r.rating.unwrap() - 800) / 100;
            assert!((level - sig).abs() <= 1, "{level} vs {sig}");
            assert!(!r.tags.is_empty());
        }
        assert_eq!(recs, learnability(300, 1));
    }
}
