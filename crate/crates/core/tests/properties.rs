//! Property tests over the pure pipeline stages: normalization,
//! tokenization, padding, features, and splitting.

use proptest::prelude::*;

use textclass_core::corpus::{Corpus, Document, LabelMode, LabelSchema};
use textclass_core::features::{
    build_vocabulary, tfidf_transform, vectorize, vectorize_counts, FeatureMode, VectorizerConfig,
};
use textclass_core::textnorm::{
    normalize, pad_truncate, tokenize, CharClassTable, NormalizationConfig, PASHTO_LETTERS,
};

/// Strings mixing Pashto letters, digits of both scripts, Latin, URLs, and
/// punctuation — the kind of noise normalization has to survive.
fn messy_text() -> impl Strategy<Value = String> {
    let fragment = prop_oneof![
        proptest::sample::select(PASHTO_LETTERS.to_vec()).prop_map(|c| c.to_string()),
        proptest::sample::select(vec![
            " ", "  ", "\t", "\n", "123", "۴۵۶", "٧٨٩", "abc", "XYZ", "،", "؟", "!", ".", "://",
            "https://ex.am/x", "www.site.com", "🙂", "—", "(", ")",
        ])
        .prop_map(str::to_string),
    ];
    proptest::collection::vec(fragment, 0..40).prop_map(|parts| parts.concat())
}

proptest! {
    #[test]
    fn normalize_is_idempotent(text in messy_text()) {
        let config = NormalizationConfig::default();
        let once = normalize(&text, &config);
        prop_assert_eq!(normalize(&once, &config), once);
    }

    #[test]
    fn normalize_is_idempotent_with_lenient_flags(text in messy_text(), strip_digits in any::<bool>(), strip_latin in any::<bool>(), strip_symbols in any::<bool>()) {
        let config = NormalizationConfig {
            strip_digits,
            strip_latin,
            strip_symbols,
            ..NormalizationConfig::default()
        };
        let once = normalize(&text, &config);
        prop_assert_eq!(normalize(&once, &config), once);
    }

    #[test]
    fn normalized_tokens_contain_no_stripped_classes(text in messy_text()) {
        let normalized = normalize(&text, &NormalizationConfig::default());
        for token in tokenize(&normalized) {
            prop_assert!(!token.is_empty());
            for c in token.chars() {
                prop_assert!(!c.is_whitespace());
                prop_assert!(!CharClassTable::is_digit(c), "digit {c:?} survived");
                prop_assert!(!c.is_ascii_alphabetic(), "latin {c:?} survived");
                prop_assert!(
                    CharClassTable::is_kept(c),
                    "non-kept {c:?} survived normalization"
                );
            }
        }
    }

    #[test]
    fn tokenize_preserves_non_whitespace_characters(text in "\\PC{0,60}") {
        let tokens = tokenize(&text);
        let rebuilt: String = tokens.concat();
        let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(rebuilt, stripped);
        for token in &tokens {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.chars().any(char::is_whitespace));
        }
    }

    #[test]
    fn pad_truncate_always_hits_target_length(
        tokens in proptest::collection::vec("[a-z]{1,4}", 0..30),
        max_len in 1usize..40,
    ) {
        let seq = pad_truncate(&tokens, max_len, "<pad>").unwrap();
        prop_assert_eq!(seq.tokens.len(), max_len);
        prop_assert_eq!(seq.fixed_length, Some(max_len));
        // Truncation keeps the head.
        for (a, b) in seq.tokens.iter().zip(&tokens) {
            if a != "<pad>" {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn count_vectors_hold_non_negative_integers(
        docs in proptest::collection::vec(
            proptest::collection::vec("[a-e]", 0..12),
            1..8,
        ),
    ) {
        prop_assume!(docs.iter().any(|d| !d.is_empty()));
        let vocab = build_vocabulary(&docs, &VectorizerConfig::default()).unwrap();
        for doc in &docs {
            let v = vectorize_counts(doc, &vocab);
            for (_, w) in v.iter() {
                prop_assert!(w > 0.0);
                prop_assert_eq!(w.fract(), 0.0);
            }
        }
    }

    #[test]
    fn tfidf_vectors_are_unit_norm_or_zero(
        docs in proptest::collection::vec(
            proptest::collection::vec("[a-e]", 0..12),
            1..8,
        ),
        query in proptest::collection::vec("[a-h]", 0..12),
    ) {
        prop_assume!(docs.iter().any(|d| !d.is_empty()));
        let config = VectorizerConfig {
            mode: FeatureMode::Tfidf,
            ..VectorizerConfig::default()
        };
        let vocab = build_vocabulary(&docs, &config).unwrap();
        let v = vectorize(&query, &vocab);
        let norm = v.norm();
        prop_assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9, "norm {norm}");

        // idf never increases with document frequency.
        let counts = vectorize_counts(&query, &vocab);
        let _ = tfidf_transform(&counts, &vocab);
        for a in 0..vocab.len() as u32 {
            for b in 0..vocab.len() as u32 {
                if vocab.doc_freq()[a as usize] <= vocab.doc_freq()[b as usize] {
                    prop_assert!(vocab.idf(a) >= vocab.idf(b) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn vocabulary_build_is_deterministic(
        docs in proptest::collection::vec(
            proptest::collection::vec("[a-g]", 0..10),
            1..8,
        ),
    ) {
        prop_assume!(docs.iter().any(|d| !d.is_empty()));
        let a = build_vocabulary(&docs, &VectorizerConfig::default()).unwrap();
        let b = build_vocabulary(&docs, &VectorizerConfig::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn split_is_a_seeded_partition(
        n in 2usize..60,
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let schema = LabelSchema::new(
            vec!["A".into(), "B".into()],
            LabelMode::SingleLabel,
        ).unwrap();
        let docs: Vec<Document> = (0..n)
            .map(|i| Document::new(format!("d{i}"), "کور ته ځم".into(), vec![i % 2], &schema).unwrap())
            .collect();
        let corpus = Corpus::new(schema, docs).unwrap();

        let (train, test) = textclass_core::corpus::split(&corpus, fraction, seed, false).unwrap();
        let expected_train = (fraction * n as f64 + 0.5).floor() as usize;
        prop_assert_eq!(train.len(), expected_train);
        prop_assert_eq!(train.len() + test.len(), n);

        let mut ids: Vec<&str> = train
            .documents()
            .iter()
            .chain(test.documents())
            .map(|d| d.id.as_str())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        prop_assert_eq!(ids.len(), n);

        // Same seed, same partition.
        let (train2, _) = textclass_core::corpus::split(&corpus, fraction, seed, false).unwrap();
        let ids1: Vec<&str> = train.documents().iter().map(|d| d.id.as_str()).collect();
        let ids2: Vec<&str> = train2.documents().iter().map(|d| d.id.as_str()).collect();
        prop_assert_eq!(ids1, ids2);
    }
}
