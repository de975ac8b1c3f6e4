//! Crate-wide error type.

use crate::lexicon::{Sentiment, Violation};

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A lexicon failed validation; each violation is individually reportable.
    #[error("invalid lexicon: {}", format_violations(.0))]
    InvalidLexicon(Vec<Violation>),

    /// Two scored terms reduced to the same stemmed key.
    #[error("stem collision: {first:?} and {second:?} both stem to [{key}]")]
    StemCollision {
        key: String,
        first: String,
        second: String,
    },

    #[error("lexicon parse error at line {line}: {message}")]
    LexiconParse { line: usize, message: String },

    #[error("baseline parse error at line {line}: {message}")]
    BaselineParse { line: usize, message: String },

    #[error("invalid event spec: {0}")]
    EventSpec(String),

    /// A baseline was requested over a corpus with no mood-filtered tweets.
    #[error("empty corpus: no tweets passed the mood-statement filter")]
    EmptyCorpus,

    /// A baseline corpus never exhibited the named sentiment.
    #[error("degenerate baseline: no {0} tweets in the corpus")]
    DegenerateBaseline(Sentiment),

    /// An event subset contained no mood-filtered tweets.
    #[error("empty event: no mood-filtered tweets matched")]
    EmptyEvent,

    /// A baseline proportion was zero, negative, or not finite.
    #[error("invalid baseline: alpha is {alpha}, must be positive and finite")]
    InvalidBaseline { alpha: f64 },

    /// A baseline table as a whole broke an invariant.
    #[error("invalid baseline: {0}")]
    BaselineInvariant(String),

    /// 64-bit counter overflow while merging counts.
    #[error("counter overflow while merging sentiment counts")]
    Overflow,
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
