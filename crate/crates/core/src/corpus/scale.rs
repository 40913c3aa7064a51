use serde::{Deserialize, Serialize};

use super::CorpusError;

/// The ordinal difficulty scale: ratings 800..=3500 in steps of 100, i.e. 28
/// classes indexed `0..28`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifficultyScale {
    pub min_rating: i64,
    pub max_rating: i64,
    pub step: i64,
}

impl DifficultyScale {
    pub const AMT: DifficultyScale = DifficultyScale { min_rating: 800, max_rating: 3500, step: 100 };

    /// Number of classes.
    pub const fn levels(&self) -> usize {
        ((self.max_rating - self.min_rating) / self.step + 1) as usize
    }

    pub fn index_of(&self, rating: i64) -> Result<usize, CorpusError> {
        if rating < self.min_rating || rating > self.max_rating || (rating - self.min_rating) % self.step != 0 {
            return Err(CorpusError::InvalidRating(rating));
        }
        Ok(((rating - self.min_rating) / self.step) as usize)
    }

    pub fn rating_of(&self, index: usize) -> Result<i64, CorpusError> {
        if index >= self.levels() {
            return Err(CorpusError::InvalidIndex(index));
        }
        Ok(self.min_rating + index as i64 * self.step)
    }
}

impl Default for DifficultyScale {
    fn default() -> Self {
        Self::AMT
    }
}

pub fn difficulty_to_index(rating: i64) -> Result<usize, CorpusError> {
    DifficultyScale::AMT.index_of(rating)
}

pub fn index_to_difficulty(index: usize) -> Result<i64, CorpusError> {
    DifficultyScale::AMT.rating_of(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(DifficultyScale::AMT.levels(), 28);
        assert_eq!(difficulty_to_index(800), Ok(0));
        assert_eq!(difficulty_to_index(3500), Ok(27));
        assert_eq!(index_to_difficulty(difficulty_to_index(1700).unwrap()), Ok(1700));
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(difficulty_to_index(700), Err(CorpusError::InvalidRating(700)));
        assert_eq!(difficulty_to_index(1750), Err(CorpusError::InvalidRating(1750)));
        assert_eq!(index_to_difficulty(28), Err(CorpusError::InvalidIndex(28)));
    }

    #[test]
    fn bijection() {
        for i in 0..28 {
            assert_eq!(difficulty_to_index(index_to_difficulty(i).unwrap()), Ok(i));
        }
    }
}
