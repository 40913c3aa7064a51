use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_TOKENS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Tokens beyond this count are discarded.
    pub max_tokens: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self { lowercase: true, max_tokens: DEFAULT_MAX_TOKENS }
    }
}

/// Splits text into maximal runs of Unicode letters and digits.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if tokens.len() == config.max_tokens {
            return tokens;
        }
        if ch.is_alphanumeric() {
            if config.lowercase {
                current.extend(ch.to_lowercase());
            } else {
                current.push(ch);
            }
        } else if !current.is_empty() {
            tokens.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() && tokens.len() < config.max_tokens {
        tokens.push(current);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn toks(text: &str) -> Vec<String> {
        tokenize(text, &TokenizerConfig::default())
    }

    #[test]
    fn basic_rules() {
        assert_eq!(toks("Given n integers"), vec!["given", "n", "integers"]);
        assert!(toks("").is_empty());
        assert_eq!(toks("a-b c3"), vec!["a", "b", "c3"]);
        assert_eq!(toks("Ünïcode ПРИВЕТ 12x"), vec!["ünïcode", "привет", "12x"]);
    }

    #[test]
    fn case_preserved_when_asked() {
        let cfg = TokenizerConfig { lowercase: false, ..Default::default() };
        assert_eq!(tokenize("Given N", &cfg), vec!["Given", "N"]);
    }

    #[test]
    fn truncates() {
        let cfg = TokenizerConfig { max_tokens: 2, ..Default::default() };
        assert_eq!(tokenize("a b c d", &cfg), vec!["a", "b"]);
        assert_eq!(tokenize("a b", &cfg), vec!["a", "b"]);
        let cfg = TokenizerConfig { max_tokens: 0, ..Default::default() };
        assert!(tokenize("a", &cfg).is_empty());
    }
}
