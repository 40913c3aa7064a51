use proptest::prelude::*;
use psg_core::text::{tokenize, FeatureMode, TokenizerConfig, Vectorizer};

fn docs() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec("[a-e]{1,3}( [a-e0-9]{1,3}){0,30}", 1..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unit_or_zero_norm(corpus in docs(), probe in "[a-f ]{0,40}") {
        let cfg = TokenizerConfig::default();
        let tokens: Vec<Vec<String>> = corpus.iter().map(|d| tokenize(d, &cfg)).collect();
        for mode in [FeatureMode::Vocabulary, FeatureMode::Hashed { dim: 64 }] {
            let v = Vectorizer::fit(&tokens, mode, cfg).unwrap();
            let norm = v.transform(&probe).norm();
            prop_assert!(norm == 0.0 || (norm - 1.0).abs() <= 1e-12);
            prop_assert!(v.idf().iter().all(|&w| w >= 1.0 - 1e-12));
        }
    }

    #[test]
    fn hashed_df_never_exceeds_vocabulary_df(corpus in docs()) {
        let cfg = TokenizerConfig::default();
        let tokens: Vec<Vec<String>> = corpus.iter().map(|d| tokenize(d, &cfg)).collect();
        let vocab = Vectorizer::fit(&tokens, FeatureMode::Vocabulary, cfg).unwrap();
        let hashed = Vectorizer::fit(&tokens, FeatureMode::Hashed { dim: 16 }, cfg).unwrap();
        let distinct: u64 = tokens.iter().map(|t| t.iter().collect::<std::collections::BTreeSet<_>>().len() as u64).sum();
        prop_assert_eq!(vocab.document_frequencies().iter().sum::<u64>(), distinct);
        prop_assert!(hashed.document_frequencies().iter().sum::<u64>() <= distinct);
    }

    #[test]
    fn truncation_equals_prefix(text in "[a-z]{1,4}( [a-z]{1,4}){0,60}", max in 1usize..20) {
        let cfg = TokenizerConfig { max_tokens: max, ..Default::default() };
        let full = TokenizerConfig { max_tokens: usize::MAX, ..Default::default() };
        let all = tokenize(&text, &full);
        let v = Vectorizer::fit(std::slice::from_ref(&all), FeatureMode::Hashed { dim: 256 }, cfg).unwrap();
        let prefix: Vec<String> = all.iter().take(max).cloned().collect();
        prop_assert_eq!(v.transform(&text), v.vectorize(&prefix));
    }

    #[test]
    fn fit_is_deterministic(corpus in docs()) {
        let cfg = TokenizerConfig::default();
        let tokens: Vec<Vec<String>> = corpus.iter().map(|d| tokenize(d, &cfg)).collect();
        let a = Vectorizer::fit(&tokens, FeatureMode::Hashed { dim: 128 }, cfg).unwrap();
        let b = Vectorizer::fit(&tokens, FeatureMode::Hashed { dim: 128 }, cfg).unwrap();
        prop_assert_eq!(&a, &b);
        for doc in &tokens {
            let x = a.vectorize(doc);
            prop_assert!(x.entries.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(x, b.vectorize(doc));
        }
    }
}
