use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{CorpusError, Dataset};
use crate::rng;

pub const DEFAULT_SPLIT_SEED: u64 = 42;
pub const DEFAULT_TEST_FRACTION: f64 = 0.1;

/// A train/test partition of dataset ids. Id sets are kept sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub test_fraction: f64,
    pub train_ids: BTreeSet<String>,
    pub test_ids: BTreeSet<String>,
}

/// Sorts ids, shuffles them with the `SPLIT` stream of `seed` and sends the
/// first `ceil(n * test_fraction)` to the test side. The product is taken
/// with a 1e-9 slack so that e.g. `10 * 0.1` does not round up to 2, and the
/// test side is clamped to `1..n`.
pub fn split(dataset: &Dataset, seed: u64, test_fraction: f64) -> Result<SplitAssignment, CorpusError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CorpusError::InvalidTestFraction(test_fraction));
    }
    let n = dataset.len();
    if n < 2 {
        return Err(CorpusError::TooFewRecords(n));
    }
    let mut ids: Vec<&str> = dataset.ids().collect();
    ids.sort_unstable();
    let mut rng = rng::stream(seed, rng::streams::SPLIT);
    rng::shuffle(&mut rng, &mut ids);
    let n_test = (libm::ceil(n as f64 * test_fraction - 1e-9) as usize).clamp(1, n - 1);
    Ok(SplitAssignment {
        seed,
        test_fraction,
        test_ids: ids[..n_test].iter().map(|s| String::from(*s)).collect(),
        train_ids: ids[n_test..].iter().map(|s| String::from(*s)).collect(),
    })
}
