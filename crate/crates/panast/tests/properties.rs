//! Property suite: algebraic laws the pipeline must hold for all inputs,
//! not just the worked examples.

use std::io::Cursor;

use chrono::NaiveDate;
use panast::{
    classify, count_sentiments, is_mood_statement, normalize, panas_score, panas_score_with,
    relative_occurrence, stem, stem_lexicon, tokenize, BaselineTable, Lexicon, PerSentiment,
    Sentiment, SentimentCounts, SignConvention, StemmedLexicon, StopWords, TweetRecord,
};
use proptest::prelude::*;

fn lexicon() -> StemmedLexicon {
    stem_lexicon(Lexicon::load_default(), stem).expect("bundled lexicon stems")
}

fn record(text: &str) -> TweetRecord {
    TweetRecord {
        id: "1".into(),
        created_at: "2009-04-27T12:00:00Z".parse().unwrap(),
        text: text.into(),
        lang: None,
        region: None,
    }
}

/// Counts small enough that merges and f64 conversions stay exact.
fn counts_strategy() -> impl Strategy<Value = SentimentCounts> {
    (
        proptest::array::uniform11(0u64..1_000),
        0u64..1_000,
        0u64..1_000,
    )
        .prop_map(|(per, extra_norm, extra_seen)| {
            let sum: u64 = per.iter().sum();
            SentimentCounts::from_parts(per, sum + extra_norm, sum + extra_norm + extra_seen)
                .expect("constructed consistent")
        })
}

/// One classifying surface form per scale, in ordinal order.
const SCALE_WORDS: [&str; 11] = [
    "scared", "sad", "ashamed", "angry", "shy", "sleepy", "amazed", "happy", "proud", "alert",
    "calm",
];

/// Words that never classify.
const FILLER: [&str; 6] = ["reading", "report", "market", "bus", "today", "news"];

proptest! {
    // --- scoring ----------------------------------------------------------

    #[test]
    fn score_stays_in_range(alpha in 1e-9f64..1.0, beta in 0f64..=1.0) {
        let p = panas_score(alpha, beta).unwrap();
        prop_assert!((-1.0..1.0).contains(&p));
    }

    #[test]
    fn score_sign_tracks_beta_minus_alpha(alpha in 1e-9f64..1.0, beta in 0f64..=1.0) {
        let p = panas_score(alpha, beta).unwrap();
        prop_assert_eq!(p.total_cmp(&0.0), (beta - alpha).total_cmp(&0.0));
        if p == 0.0 {
            prop_assert!(p.is_sign_positive(), "never a negative zero");
        }
    }

    #[test]
    fn conventions_are_exact_mirrors(alpha in 1e-9f64..1.0, beta in 0f64..=1.0) {
        let inc = panas_score_with(SignConvention::IncreasePositive, alpha, beta).unwrap();
        let dec = panas_score_with(SignConvention::DecreasePositive, alpha, beta).unwrap();
        prop_assert_eq!(inc, -dec);
        if dec == 0.0 {
            prop_assert!(dec.is_sign_positive(), "never a negative zero");
        }
    }

    #[test]
    fn score_is_monotone_in_beta(
        alpha in 1e-6f64..1.0,
        b1 in 0f64..=1.0,
        b2 in 0f64..=1.0,
    ) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let p_lo = panas_score(alpha, lo).unwrap();
        let p_hi = panas_score(alpha, hi).unwrap();
        prop_assert!(p_lo <= p_hi);
        if lo < hi {
            prop_assert!(p_lo < p_hi, "strict: {p_lo} !< {p_hi}");
        }
    }

    /// beta is a ratio of counts; scaling both by the same factor cannot
    /// move the score, because IEEE division rounds the same rational to
    /// the same double.
    #[test]
    fn score_is_scale_invariant(
        counts in counts_strategy(),
        factor in 1u64..500,
    ) {
        prop_assume!(counts.total_normalized() > 0);
        let scaled = SentimentCounts::from_parts(
            std::array::from_fn(|i| counts.per_sentiment().as_array()[i] * factor),
            counts.total_normalized() * factor,
            counts.total_seen() * factor,
        ).unwrap();
        let b1 = relative_occurrence(&counts).unwrap();
        let b2 = relative_occurrence(&scaled).unwrap();
        for s in Sentiment::ALL {
            prop_assert_eq!(b1[s], b2[s]);
            let alpha = BaselineTable::bundled().alpha(s);
            prop_assert_eq!(
                panas_score(alpha, b1[s]).unwrap(),
                panas_score(alpha, b2[s]).unwrap()
            );
        }
    }

    #[test]
    fn relative_occurrence_sums_to_at_most_one(counts in counts_strategy()) {
        prop_assume!(counts.total_normalized() > 0);
        let beta = relative_occurrence(&counts).unwrap();
        let sum: f64 = Sentiment::ALL.into_iter().map(|s| beta[s]).sum();
        prop_assert!(sum <= 1.0 + 1e-9);
    }

    // --- merge ------------------------------------------------------------

    #[test]
    fn merge_identity(a in counts_strategy()) {
        prop_assert_eq!(a.merge(&SentimentCounts::new()).unwrap(), a);
        prop_assert_eq!(SentimentCounts::new().merge(&a).unwrap(), a);
    }

    #[test]
    fn merge_commutes(a in counts_strategy(), b in counts_strategy()) {
        prop_assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
    }

    #[test]
    fn merge_associates(
        a in counts_strategy(),
        b in counts_strategy(),
        c in counts_strategy(),
    ) {
        prop_assert_eq!(
            a.merge(&b).unwrap().merge(&c).unwrap(),
            a.merge(&b.merge(&c).unwrap()).unwrap()
        );
    }

    // --- baseline ---------------------------------------------------------

    #[test]
    fn baseline_tsv_round_trips(alphas in proptest::array::uniform11(1e-7f64..0.09)) {
        let table = BaselineTable::from_alpha(
            PerSentiment::from_array(alphas),
            "computed",
        ).unwrap();
        let tsv = table.to_tsv();
        let parsed = BaselineTable::parse(&tsv, "computed").unwrap();
        prop_assert_eq!(parsed.to_tsv(), tsv, "7-decimal TSV is a fixed point");
    }

    // --- normalization ----------------------------------------------------

    #[test]
    fn tokens_are_clean(text in "\\PC{0,120}") {
        for token in tokenize(&text) {
            prop_assert!(!token.is_empty());
            prop_assert!(token.chars().all(char::is_alphanumeric), "{token:?}");
            prop_assert_eq!(&token.to_lowercase(), &token, "already case-folded");
        }
    }

    #[test]
    fn tokenize_is_idempotent(text in "\\PC{0,120}") {
        let once = tokenize(&text);
        let again = tokenize(&once.join(" "));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn first_person_prefix_always_passes_the_filter(text in "\\PC{0,80}") {
        let first_person = format!("I am {text}");
        let feeling = format!("feeling {text}");
        prop_assert!(is_mood_statement(&first_person));
        prop_assert!(is_mood_statement(&feeling));
    }

    #[test]
    fn word_tokens_are_a_subsequence_of_phrase_tokens(text in "[ -~]{0,120}") {
        if let Some(norm) = normalize(&record(&format!("I am {text}")), StopWords::load_default()) {
            let mut phrase = norm.phrase_tokens.iter();
            for word in &norm.word_tokens {
                prop_assert!(
                    phrase.any(|t| t == word),
                    "{word:?} missing or out of order"
                );
            }
            prop_assert_eq!(norm.word_tokens.len(), norm.word_positions.len());
        }
    }

    // --- classification ---------------------------------------------------

    #[test]
    fn first_match_wins_regardless_of_suffix(
        first in 0usize..11,
        second in 0usize..11,
        filler in proptest::sample::select(&FILLER[..]),
    ) {
        let lex = lexicon();
        let text = format!("I am {} {} {}", SCALE_WORDS[first], filler, SCALE_WORDS[second]);
        let norm = normalize(&record(&text), StopWords::load_default()).unwrap();
        prop_assert_eq!(classify(&norm, &lex), Some(Sentiment::ALL[first]));
    }

    #[test]
    fn filler_never_classifies(
        words in proptest::collection::vec(proptest::sample::select(&FILLER[..]), 1..6),
    ) {
        let lex = lexicon();
        let text = format!("I am {}", words.join(" "));
        let norm = normalize(&record(&text), StopWords::load_default()).unwrap();
        prop_assert_eq!(classify(&norm, &lex), None);
    }

    // --- ingestion --------------------------------------------------------

    /// Worker count is a throughput knob, never a result knob.
    #[test]
    fn worker_count_never_changes_counts(
        seed_texts in proptest::collection::vec(
            proptest::sample::select(&SCALE_WORDS[..]),
            0..40,
        ),
    ) {
        let lex = lexicon();
        let mut corpus = String::new();
        for (i, word) in seed_texts.iter().enumerate() {
            let day = NaiveDate::from_ymd_opt(2009, 4, 1 + (i % 28) as u32).unwrap();
            corpus.push_str(&format!(
                "{{\"id\":\"{i}\",\"created_at\":\"{day}T00:00:00Z\",\"text\":\"I am {word}\"}}\n"
            ));
        }
        let (one, _) =
            count_sentiments(Cursor::new(corpus.as_bytes()), &lex, StopWords::load_default(), 1)
                .unwrap();
        for workers in [2usize, 5] {
            let (many, _) = count_sentiments(
                Cursor::new(corpus.as_bytes()),
                &lex,
                StopWords::load_default(),
                workers,
            )
            .unwrap();
            prop_assert_eq!(many, one);
        }
    }

    // --- stemming ---------------------------------------------------------

    #[test]
    fn stemming_lowercase_ascii_stays_lowercase_ascii(word in "[a-z]{1,20}") {
        let stemmed = stem(&word);
        prop_assert!(!stemmed.is_empty());
        prop_assert!(stemmed.chars().all(|c| c.is_ascii_lowercase()));
        prop_assert!(stemmed.len() <= word.len());
        if word.len() <= 2 {
            prop_assert_eq!(&stemmed, &word, "short words never change");
        }
    }

    #[test]
    fn stemming_passes_non_ascii_through(word in "[a-z]{0,6}[à-öA-Z0-9]{1,4}[a-z]{0,6}") {
        prop_assert_eq!(&stem(&word), &word);
    }
}
