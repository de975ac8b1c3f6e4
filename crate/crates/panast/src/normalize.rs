//! Cleaning pipeline: mood-statement filter, case-folding, URL and
//! punctuation stripping, stemming, stop-word removal.
//!
//! Two token views come out of [`normalize`]: `phrase_tokens` keeps stop
//! words so multi-word lexicon terms ("at ease", "angry at self") stay
//! matchable as contiguous runs; `word_tokens` drops them for single-word
//! matching.

use std::collections::HashSet;
use std::sync::OnceLock;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::stem::stem;

/// Largest accepted `text` field, in bytes. A defensive bound on record
/// size, far above any real short-text post.
pub const MAX_TEXT_BYTES: usize = 4096;

/// One raw input record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

impl TweetRecord {
    /// Field-level validity beyond what deserialization enforces.
    pub fn check(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.text.len() > MAX_TEXT_BYTES {
            return Err(format!(
                "text exceeds {MAX_TEXT_BYTES} bytes ({})",
                self.text.len()
            ));
        }
        Ok(())
    }
}

/// A record that passed the mood filter, with both token views.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedTweet {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub region: Option<String>,
    /// Cleaned, stemmed tokens, stop words retained.
    pub phrase_tokens: Vec<String>,
    /// `phrase_tokens` with stop words removed.
    pub word_tokens: Vec<String>,
    /// For each word token, its index in `phrase_tokens`.
    pub word_positions: Vec<usize>,
}

/// The stop-word filter. The bundled list is plain words; the set stores
/// their stems, because filtering runs after stemming.
#[derive(Clone, Debug, Default)]
pub struct StopWords {
    stems: HashSet<String>,
}

static BUNDLED_STOPS: OnceLock<StopWords> = OnceLock::new();
const BUNDLED_STOP_DATA: &str = include_str!("../data/stopwords.txt");

impl StopWords {
    /// The bundled English function-word list. It deliberately excludes the
    /// mood markers (i, am, me, myself, feeling) and every token that
    /// appears inside a multi-word lexicon term (at, with, self).
    pub fn load_default() -> &'static StopWords {
        BUNDLED_STOPS.get_or_init(|| StopWords::parse(BUNDLED_STOP_DATA))
    }

    /// One word per line; blank lines and `#` comments ignored. Each word
    /// is stemmed on the way in.
    pub fn parse(data: &str) -> StopWords {
        let stems = data
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|w| stem(&w.to_lowercase()))
            .collect();
        StopWords { stems }
    }

    /// Is this (stemmed) token a stop word?
    pub fn is_stop(&self, stemmed: &str) -> bool {
        self.stems.contains(stemmed)
    }

    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }
}

/// The mood-statement markers, matched as whole tokens on a case-folded,
/// apostrophe-preserving view of the text. "i'm" is one token here; plain
/// "im" is not a marker.
const MOOD_MARKERS: [&str; 6] = ["i'm", "i", "am", "feeling", "me", "myself"];

/// Does the text explicitly state its author's mood? True iff any marker
/// occurs as a whole token.
pub fn is_mood_statement(text: &str) -> bool {
    let folded = text.to_lowercase().replace('\u{2019}', "'");
    folded
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|tok| tok.trim_matches('\''))
        .any(|tok| MOOD_MARKERS.contains(&tok))
}

/// Is this whitespace-separated chunk a URL? Recognizes `scheme://` with an
/// alphanumeric scheme, plus bare `www.` hosts.
fn is_url_chunk(chunk: &str) -> bool {
    if chunk.starts_with("www.") {
        return true;
    }
    match chunk.find("://") {
        Some(p) if p > 0 => chunk[..p]
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.'),
        _ => false,
    }
}

/// Case-fold, drop URL chunks, strip every non-alphanumeric character
/// (splitting where they occur), drop empties. No stemming here.
pub fn tokenize(text: &str) -> Vec<String> {
    let folded = text.to_lowercase();
    let mut out = Vec::new();
    for chunk in folded.split_whitespace() {
        if is_url_chunk(chunk) {
            continue;
        }
        for piece in chunk.split(|c: char| !c.is_alphanumeric()) {
            if !piece.is_empty() {
                out.push(piece.to_owned());
            }
        }
    }
    out
}

/// Run the full pipeline. `None` means the record is not a mood statement
/// and plays no further part in any count.
pub fn normalize(record: &TweetRecord, stopwords: &StopWords) -> Option<NormalizedTweet> {
    if !is_mood_statement(&record.text) {
        return None;
    }
    let phrase_tokens: Vec<String> = tokenize(&record.text).iter().map(|t| stem(t)).collect();
    let mut word_tokens = Vec::with_capacity(phrase_tokens.len());
    let mut word_positions = Vec::with_capacity(phrase_tokens.len());
    for (i, tok) in phrase_tokens.iter().enumerate() {
        if !stopwords.is_stop(tok) {
            word_tokens.push(tok.clone());
            word_positions.push(i);
        }
    }
    Some(NormalizedTweet {
        id: record.id.clone(),
        created_at: record.created_at,
        region: record.region.clone(),
        phrase_tokens,
        word_tokens,
        word_positions,
    })
}

#[cfg(test)]
pub(crate) fn test_record(id: &str, text: &str) -> TweetRecord {
    TweetRecord {
        id: id.to_owned(),
        created_at: "2009-07-01T12:00:00Z".parse().unwrap(),
        text: text.to_owned(),
        lang: None,
        region: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mood_markers_are_whole_tokens() {
        assert!(is_mood_statement("I am so scared about swine flu"));
        assert!(is_mood_statement("Nobody understands me"));
        assert!(is_mood_statement("I'm exhausted"));
        assert!(is_mood_statement("I\u{2019}m exhausted"));
        assert!(is_mood_statement("feeling great today"));
        assert!(is_mood_statement("treated myself to cake"));
        assert!(!is_mood_statement(
            "Breaking news: earthquake hits the coast"
        ));
        assert!(!is_mood_statement("Im happy"));
        assert!(!is_mood_statement("aim higher, madame"));
        assert!(!is_mood_statement("Stock prices fell sharply"));
        assert!(!is_mood_statement(""));
    }

    #[test]
    fn tokenize_strips_urls_and_punctuation() {
        assert_eq!(
            tokenize("I am so scared about swine flu"),
            ["i", "am", "so", "scared", "about", "swine", "flu"]
        );
        assert_eq!(tokenize("check http://t.co/xyz NOW!!"), ["check", "now"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(
            tokenize("Port-au-Prince is devastated"),
            ["port", "au", "prince", "is", "devastated"]
        );
        assert_eq!(tokenize("@user #hope wins"), ["user", "hope", "wins"]);
        assert_eq!(
            tokenize("see www.example.com for more"),
            ["see", "for", "more"]
        );
        assert_eq!(tokenize("ratio 3:2, ok?"), ["ratio", "3", "2", "ok"]);
    }

    #[test]
    fn worked_example_word_tokens() {
        let record = test_record("1", "I am so scared about swine flu");
        let norm = normalize(&record, StopWords::load_default()).unwrap();
        assert_eq!(
            norm.phrase_tokens,
            ["i", "am", "so", "scare", "about", "swine", "flu"]
        );
        assert_eq!(norm.word_tokens, ["i", "am", "scare", "swine", "flu"]);
        assert_eq!(norm.word_positions, [0, 1, 3, 5, 6]);
    }

    #[test]
    fn non_mood_statements_are_rejected() {
        let stops = StopWords::load_default();
        assert_eq!(
            normalize(&test_record("1", "Stock prices fell sharply"), stops),
            None
        );
        assert_eq!(normalize(&test_record("2", ""), stops), None);
    }

    #[test]
    fn word_tokens_are_a_subsequence() {
        let stops = StopWords::load_default();
        let record = test_record("1", "I was feeling very tired after the long, long flight");
        let norm = normalize(&record, stops).unwrap();
        for (w, &p) in norm.word_tokens.iter().zip(&norm.word_positions) {
            assert_eq!(&norm.phrase_tokens[p], w);
        }
        assert!(norm.word_positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn renormalizing_word_tokens_is_stable() {
        let stops = StopWords::load_default();
        let record = test_record("1", "I am so scared about swine flu!!");
        let norm = normalize(&record, stops).unwrap();
        let rejoined = test_record("2", &norm.word_tokens.join(" "));
        let again = normalize(&rejoined, stops).unwrap();
        assert_eq!(again.word_tokens, norm.word_tokens);
    }

    #[test]
    fn record_check_enforces_bounds() {
        let ok = test_record("1", "hello");
        assert!(ok.check().is_ok());
        let mut bad_id = ok.clone();
        bad_id.id.clear();
        assert!(bad_id.check().is_err());
        let mut long = ok.clone();
        long.text = "x".repeat(MAX_TEXT_BYTES + 1);
        assert!(long.check().is_err());
    }

    #[test]
    fn stopword_set_is_stemmed() {
        let stops = StopWords::load_default();
        assert!(stops.is_stop("so"));
        assert!(stops.is_stop("about"));
        assert!(stops.is_stop(&stem("this")));
        assert!(!stops.is_stop("i"));
        assert!(!stops.is_stop("am"));
        assert!(!stops.is_stop("at"));
        assert!(!stops.is_stop("self"));
        assert!(!stops.is_stop("scare"));
    }
}
