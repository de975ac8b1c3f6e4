//! PANAS-based affect measurement for short text streams.
//!
//! The pipeline: normalize each record (mood-statement filter, cleaning,
//! stemming), classify it onto one of eleven affect scales by first
//! occurrence, aggregate per-sentiment counts over a corpus or an
//! event-defined subset, and score the result against a baseline.
//!
//! ```
//! use std::io::Cursor;
//! use panast::{
//!     count_sentiments, score_vector, stem_lexicon, BaselineTable, Lexicon, Sentiment,
//!     StopWords,
//! };
//!
//! let corpus = concat!(
//!     r#"{"id":"1","created_at":"2009-04-27T12:00:00Z","text":"I am so scared about swine flu"}"#,
//!     "\n",
//!     r#"{"id":"2","created_at":"2009-04-27T13:00:00Z","text":"swine flu closes schools"}"#,
//!     "\n",
//! );
//! let lexicon = stem_lexicon(Lexicon::load_default(), panast::stem)?;
//! let (counts, _report) =
//!     count_sentiments(Cursor::new(corpus), &lexicon, StopWords::load_default(), 4)?;
//! assert_eq!(counts.count(Sentiment::Fear), 1); // record 2 is not a mood statement
//!
//! let vector = score_vector(BaselineTable::bundled(), &counts)?;
//! assert_eq!(vector.entries[Sentiment::Fear].beta, 1.0);
//! # Ok::<(), panast::Error>(())
//! ```

pub mod chart;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod events;
pub mod lexicon;
pub mod normalize;
pub mod score;
pub mod stem;

pub use chart::{render_kiviat, render_sparklines, Sparklines};
pub use classify::{classify, match_positions, Match};
pub use corpus::{
    count_sentiments, count_sentiments_filtered, open_corpus, read_stream, term_frequencies,
    IngestReport, LineOutcome, TermFrequencyTable,
};
pub use error::Error;
pub use events::{
    bundled_events, extract_and_score, extract_and_score_with, find_event, matches_event,
    parse_catalog, timeseries, timeseries_by_region, timeseries_by_region_with, timeseries_with,
    EventSpec, TimePoint, TimeSeries,
};
pub use lexicon::{
    stem_lexicon, Lexicon, LexiconTerm, PerSentiment, Sentiment, StemmedLexicon, StemmedTerm,
    TermId, Violation,
};
pub use normalize::{
    is_mood_statement, normalize, tokenize, NormalizedTweet, StopWords, TweetRecord,
};
pub use score::{
    compute_baseline, panas_score, panas_score_with, relative_occurrence, score_vector,
    score_vector_with, BaselineTable, ScoreEntry, ScoreVector, SentimentCounts, SignConvention,
};
pub use stem::stem;
