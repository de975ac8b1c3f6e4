//! First-occurrence sentiment assignment.
//!
//! A tweet maps to at most one sentiment: the scale of the earliest match.
//! Ties at the same start position are broken by longest term, then lowest
//! sentiment ordinal, so results are a total order and never depend on
//! evaluation order.

use crate::lexicon::{LexiconTerm, Sentiment, StemmedLexicon, TermId};
use crate::normalize::NormalizedTweet;

/// One lexicon hit inside a tweet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match<'a> {
    /// Start index into `phrase_tokens`.
    pub position: usize,
    /// Tokens covered; 1 for single-word terms.
    pub length: usize,
    pub sentiment: Sentiment,
    pub term: &'a LexiconTerm,
    pub term_id: TermId,
}

/// Every lexicon hit, ascending by position (ties: longest first, then
/// sentiment ordinal). Multi-word terms are matched as contiguous runs of
/// `phrase_tokens`; single words against `word_tokens`, with positions
/// mapped back to the phrase view.
pub fn match_positions<'a>(tweet: &NormalizedTweet, lex: &'a StemmedLexicon) -> Vec<Match<'a>> {
    let mut found = Vec::new();
    let phrase = &tweet.phrase_tokens;
    for start in 0..phrase.len() {
        let longest = lex.max_phrase_len().min(phrase.len() - start);
        for len in 2..=longest {
            if let Some(id) = lex.lookup_phrase(&phrase[start..start + len]) {
                let t = lex.term(id);
                found.push(Match {
                    position: start,
                    length: len,
                    sentiment: t.sentiment,
                    term: &t.term,
                    term_id: id,
                });
            }
        }
    }
    for (wi, tok) in tweet.word_tokens.iter().enumerate() {
        if let Some(id) = lex.lookup_single(tok) {
            let t = lex.term(id);
            found.push(Match {
                position: tweet.word_positions[wi],
                length: 1,
                sentiment: t.sentiment,
                term: &t.term,
                term_id: id,
            });
        }
    }
    found.sort_by_key(|m| {
        (
            m.position,
            std::cmp::Reverse(m.length),
            m.sentiment.index(),
            m.term_id,
        )
    });
    found
}

/// The first sentiment that appears in the tweet; `None` when nothing
/// matches and no sentiment can be inferred.
pub fn classify(tweet: &NormalizedTweet, lex: &StemmedLexicon) -> Option<Sentiment> {
    match_positions(tweet, lex).first().map(|m| m.sentiment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{stem_lexicon, Lexicon};
    use crate::normalize::{normalize, test_record, StopWords};
    use crate::stem::stem;

    fn lex() -> StemmedLexicon {
        stem_lexicon(Lexicon::load_default(), stem).unwrap()
    }

    fn norm(text: &str) -> NormalizedTweet {
        normalize(&test_record("t", text), StopWords::load_default()).unwrap()
    }

    #[test]
    fn worked_example_classifies_fear() {
        let lex = lex();
        let tweet = norm("I am so scared about swine flu");
        let matches = match_positions(&tweet, &lex);
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].position, 3);
        assert_eq!(matches[0].length, 1);
        assert_eq!(matches[0].sentiment, Sentiment::Fear);
        assert_eq!(matches[0].term.surface, "scared");
        assert_eq!(classify(&tweet, &lex), Some(Sentiment::Fear));
    }

    #[test]
    fn phrase_terms_match_through_stop_words() {
        let lex = lex();
        let tweet = norm("I feel at ease today");
        let matches = match_positions(&tweet, &lex);
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].sentiment, Sentiment::Serenity);
        assert_eq!(matches[0].term.surface, "at ease");
        assert_eq!(matches[0].length, 2);
    }

    #[test]
    fn first_occurrence_wins() {
        let lex = lex();
        let tweet = norm("I am sad but happy now");
        assert_eq!(classify(&tweet, &lex), Some(Sentiment::Sadness));
        let reversed = norm("I am happy but sad now");
        assert_eq!(classify(&reversed, &lex), Some(Sentiment::Joviality));
    }

    #[test]
    fn same_position_prefers_longest_match() {
        let lex = lex();
        // "angry at self" (Guilt, 3 tokens) and "angry" (Hostility, 1 token)
        // start at the same position; the longer term decides.
        let tweet = norm("I am angry at self");
        let matches = match_positions(&tweet, &lex);
        assert_eq!(matches[0].sentiment, Sentiment::Guilt);
        assert_eq!(matches[0].length, 3);
        assert!(matches
            .iter()
            .any(|m| m.sentiment == Sentiment::Hostility && m.length == 1));
        assert_eq!(classify(&tweet, &lex), Some(Sentiment::Guilt));
    }

    #[test]
    fn unmatched_tweets_are_unclassified() {
        let lex = lex();
        let tweet = norm("I bought a new phone");
        assert!(match_positions(&tweet, &lex).is_empty());
        assert_eq!(classify(&tweet, &lex), None);
    }

    #[test]
    fn matches_are_position_sorted() {
        let lex = lex();
        let tweet = norm("I am tired, angry, and a little sad");
        let matches = match_positions(&tweet, &lex);
        assert!(matches.windows(2).all(|w| w[0].position <= w[1].position));
        assert_eq!(classify(&tweet, &lex), Some(Sentiment::Fatigue));
    }

    #[test]
    fn every_lexicon_term_matches_itself() {
        let lex = lex();
        let stops = StopWords::load_default();
        for term in Lexicon::load_default().terms() {
            let text = format!("I am {}", term.surface);
            let tweet = normalize(&test_record("t", &text), stops).unwrap();
            let got = classify(&tweet, &lex);
            assert_eq!(
                got,
                Some(term.sentiment),
                "term {:?} should classify as its own scale",
                term.surface
            );
        }
    }
}
