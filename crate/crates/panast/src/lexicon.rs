//! The eleven PANAS-x affect scales and their term lists.
//!
//! The bundled lexicon carries the eleven scored scales plus the two
//! general-dimension lists (`positive-affect`, `negative-affect`), which are
//! kept as data but never matched against text. Matching happens through
//! [`StemmedLexicon`], where every term's tokens have been run through the
//! same stemmer that normalization applies to tweets.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One of the eleven scored affect scales. Ordinals are stable: table order,
/// used everywhere an output lists "all sentiments".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sentiment {
    Fear = 0,
    Sadness = 1,
    Guilt = 2,
    Hostility = 3,
    Shyness = 4,
    Fatigue = 5,
    Surprise = 6,
    Joviality = 7,
    SelfAssurance = 8,
    Attentiveness = 9,
    Serenity = 10,
}

impl Sentiment {
    pub const COUNT: usize = 11;

    pub const ALL: [Sentiment; Self::COUNT] = [
        Sentiment::Fear,
        Sentiment::Sadness,
        Sentiment::Guilt,
        Sentiment::Hostility,
        Sentiment::Shyness,
        Sentiment::Fatigue,
        Sentiment::Surprise,
        Sentiment::Joviality,
        Sentiment::SelfAssurance,
        Sentiment::Attentiveness,
        Sentiment::Serenity,
    ];

    /// Canonical lowercase name; the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            Sentiment::Fear => "fear",
            Sentiment::Sadness => "sadness",
            Sentiment::Guilt => "guilt",
            Sentiment::Hostility => "hostility",
            Sentiment::Shyness => "shyness",
            Sentiment::Fatigue => "fatigue",
            Sentiment::Surprise => "surprise",
            Sentiment::Joviality => "joviality",
            Sentiment::SelfAssurance => "self-assurance",
            Sentiment::Attentiveness => "attentiveness",
            Sentiment::Serenity => "serenity",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Sentiment> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sentiment {
    type Err = UnknownSentiment;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| UnknownSentiment(s.to_owned()))
    }
}

/// Parse error for [`Sentiment::from_str`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSentiment(pub String);

impl fmt::Display for UnknownSentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown sentiment name {:?}", self.0)
    }
}

impl std::error::Error for UnknownSentiment {}

/// A value per sentiment, indexable by [`Sentiment`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PerSentiment<T>([T; Sentiment::COUNT]);

impl<T> PerSentiment<T> {
    pub fn from_fn(mut f: impl FnMut(Sentiment) -> T) -> Self {
        PerSentiment(std::array::from_fn(|i| f(Sentiment::ALL[i])))
    }

    pub fn from_array(values: [T; Sentiment::COUNT]) -> Self {
        PerSentiment(values)
    }

    pub fn as_array(&self) -> &[T; Sentiment::COUNT] {
        &self.0
    }

    pub fn into_array(self) -> [T; Sentiment::COUNT] {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Sentiment, &T)> {
        Sentiment::ALL.iter().map(move |&s| (s, &self.0[s.index()]))
    }

    pub fn map<U>(&self, mut f: impl FnMut(Sentiment, &T) -> U) -> PerSentiment<U> {
        PerSentiment(std::array::from_fn(|i| f(Sentiment::ALL[i], &self.0[i])))
    }
}

impl<T> Index<Sentiment> for PerSentiment<T> {
    type Output = T;

    fn index(&self, s: Sentiment) -> &T {
        &self.0[s.index()]
    }
}

impl<T> IndexMut<Sentiment> for PerSentiment<T> {
    fn index_mut(&mut self, s: Sentiment) -> &mut T {
        &mut self.0[s.index()]
    }
}

/// A single scale entry: one word or a short phrase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconTerm {
    /// Tokens joined by single spaces, lowercase.
    pub surface: String,
    /// 1 to 4 whitespace-separated tokens.
    pub tokens: Vec<String>,
    pub sentiment: Sentiment,
}

impl LexiconTerm {
    pub fn new(surface: &str, sentiment: Sentiment) -> LexiconTerm {
        let tokens: Vec<String> = surface
            .split_whitespace()
            .map(|t| t.to_lowercase())
            .collect();
        LexiconTerm {
            surface: tokens.join(" "),
            tokens,
            sentiment,
        }
    }
}

/// Expected term count per scale in the bundled composition.
fn expected_count(s: Sentiment) -> usize {
    match s {
        Sentiment::Fear => 6,
        Sentiment::Sadness => 5,
        Sentiment::Guilt => 6,
        Sentiment::Hostility => 6,
        Sentiment::Shyness => 4,
        Sentiment::Fatigue => 4,
        Sentiment::Surprise => 3,
        Sentiment::Joviality => 8,
        Sentiment::SelfAssurance => 6,
        Sentiment::Attentiveness => 4,
        Sentiment::Serenity => 3,
    }
}

/// An invariant breach found by [`Lexicon::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    CountMismatch {
        sentiment: Sentiment,
        expected: usize,
        found: usize,
    },
    DuplicateTerm {
        surface: String,
        first: Sentiment,
        second: Sentiment,
    },
    MalformedTerm {
        sentiment: Sentiment,
        surface: String,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CountMismatch {
                sentiment,
                expected,
                found,
            } => write!(f, "{sentiment}: expected {expected} terms, found {found}"),
            Violation::DuplicateTerm {
                surface,
                first,
                second,
            } => write!(f, "term {surface:?} appears in both {first} and {second}"),
            Violation::MalformedTerm {
                sentiment,
                surface,
                reason,
            } => write!(f, "{sentiment}: term {surface:?} is malformed ({reason})"),
        }
    }
}

/// The full word-scale table: eleven scored scales plus the two
/// general-dimension lists kept as auxiliary data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    scales: PerSentiment<Vec<LexiconTerm>>,
    positive_affect: Vec<String>,
    negative_affect: Vec<String>,
}

static BUNDLED: OnceLock<Lexicon> = OnceLock::new();
const BUNDLED_DATA: &str = include_str!("../data/lexicon.tsv");

impl Lexicon {
    /// The bundled scale composition. Validated once; the data is part of the
    /// crate, so failure is a build defect, not a runtime condition.
    pub fn load_default() -> &'static Lexicon {
        BUNDLED.get_or_init(|| {
            let lex = Lexicon::parse(BUNDLED_DATA).expect("bundled lexicon parses");
            let violations = lex.validate();
            assert!(
                violations.is_empty(),
                "bundled lexicon invalid: {violations:?}"
            );
            lex
        })
    }

    /// Parse the tab-separated interchange format: one `<scale>\t<term>` per
    /// line, `#` comments and blank lines ignored. Scale names are the
    /// canonical sentiment names plus `positive-affect` / `negative-affect`.
    ///
    /// Structural problems (unknown scale, empty or over-long term) fail the
    /// parse; composition problems are left to [`Lexicon::validate`].
    pub fn parse(data: &str) -> Result<Lexicon, Error> {
        let mut lex = Lexicon {
            scales: PerSentiment::from_fn(|_| Vec::new()),
            positive_affect: Vec::new(),
            negative_affect: Vec::new(),
        };
        for (i, raw) in data.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (scale, term) = trimmed.split_once('\t').ok_or(Error::LexiconParse {
                line,
                message: "expected <scale>\\t<term>".into(),
            })?;
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::LexiconParse {
                    line,
                    message: "empty term".into(),
                });
            }
            match scale {
                "positive-affect" => lex.positive_affect.push(term.to_lowercase()),
                "negative-affect" => lex.negative_affect.push(term.to_lowercase()),
                name => {
                    let sentiment = Sentiment::from_str(name).map_err(|e| Error::LexiconParse {
                        line,
                        message: e.to_string(),
                    })?;
                    let entry = LexiconTerm::new(term, sentiment);
                    if entry.tokens.is_empty() || entry.tokens.len() > 4 {
                        return Err(Error::LexiconParse {
                            line,
                            message: format!("term {:?} must have 1 to 4 tokens", entry.surface),
                        });
                    }
                    lex.scales[sentiment].push(entry);
                }
            }
        }
        Ok(lex)
    }

    /// Parse and require a clean [`Lexicon::validate`] pass. The entry point
    /// for user-supplied lexicon files.
    pub fn parse_validated(data: &str) -> Result<Lexicon, Error> {
        let lex = Lexicon::parse(data)?;
        let violations = lex.validate();
        if violations.is_empty() {
            Ok(lex)
        } else {
            Err(Error::InvalidLexicon(violations))
        }
    }

    pub fn scale(&self, s: Sentiment) -> &[LexiconTerm] {
        &self.scales[s]
    }

    /// All scored terms, scale-ordinal order then list order.
    pub fn terms(&self) -> impl Iterator<Item = &LexiconTerm> {
        Sentiment::ALL
            .into_iter()
            .flat_map(move |s| self.scales[s].iter())
    }

    /// The auxiliary general-dimension lists (not matched against text).
    pub fn positive_affect(&self) -> &[String] {
        &self.positive_affect
    }

    pub fn negative_affect(&self) -> &[String] {
        &self.negative_affect
    }

    /// Report every invariant breach; empty means the lexicon is sound.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for s in Sentiment::ALL {
            let found = self.scales[s].len();
            let expected = expected_count(s);
            if found != expected {
                violations.push(Violation::CountMismatch {
                    sentiment: s,
                    expected,
                    found,
                });
            }
        }
        for term in self.terms() {
            if term.tokens.is_empty() || term.tokens.len() > 4 {
                violations.push(Violation::MalformedTerm {
                    sentiment: term.sentiment,
                    surface: term.surface.clone(),
                    reason: "token count outside 1..=4".into(),
                });
            } else if term.surface != term.tokens.join(" ") {
                violations.push(Violation::MalformedTerm {
                    sentiment: term.sentiment,
                    surface: term.surface.clone(),
                    reason: "surface and tokens disagree".into(),
                });
            }
        }
        let mut seen: HashMap<&str, Sentiment> = HashMap::new();
        for term in self.terms() {
            if let Some(&first) = seen.get(term.surface.as_str()) {
                violations.push(Violation::DuplicateTerm {
                    surface: term.surface.clone(),
                    first,
                    second: term.sentiment,
                });
            } else {
                seen.insert(term.surface.as_str(), term.sentiment);
            }
        }
        violations
    }
}

/// Identifier of a term inside a [`StemmedLexicon`]; stable, dense, in
/// [`Lexicon::terms`] order.
pub type TermId = usize;

/// A scored term with its stemmed lookup key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemmedTerm {
    /// Each original token, stemmed, order preserved.
    pub key: Vec<String>,
    pub sentiment: Sentiment,
    pub term: LexiconTerm,
}

/// Lookup structure used by classification: stemmed key → scored term.
#[derive(Clone, Debug)]
pub struct StemmedLexicon {
    terms: Vec<StemmedTerm>,
    single: HashMap<String, TermId>,
    phrases: HashMap<Vec<String>, TermId>,
    max_phrase_len: usize,
}

/// Stem every scored term with `stemmer`. Two scored terms landing on the
/// same key is a construction error: matching could no longer tell them
/// apart. The auxiliary lists are not entered.
pub fn stem_lexicon(
    lexicon: &Lexicon,
    stemmer: impl Fn(&str) -> String,
) -> Result<StemmedLexicon, Error> {
    let mut out = StemmedLexicon {
        terms: Vec::new(),
        single: HashMap::new(),
        phrases: HashMap::new(),
        max_phrase_len: 1,
    };
    for term in lexicon.terms() {
        let key: Vec<String> = term.tokens.iter().map(|t| stemmer(t)).collect();
        let id = out.terms.len();
        let clash = if key.len() == 1 {
            out.single.insert(key[0].clone(), id)
        } else {
            out.max_phrase_len = out.max_phrase_len.max(key.len());
            out.phrases.insert(key.clone(), id)
        };
        if let Some(prev) = clash {
            return Err(Error::StemCollision {
                key: key.join(" "),
                first: out.terms[prev].term.surface.clone(),
                second: term.surface.clone(),
            });
        }
        out.terms.push(StemmedTerm {
            key,
            sentiment: term.sentiment,
            term: term.clone(),
        });
    }
    Ok(out)
}

impl StemmedLexicon {
    /// Longest key length; the phrase-window bound for matching.
    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn lookup_single(&self, stemmed: &str) -> Option<TermId> {
        self.single.get(stemmed).copied()
    }

    pub fn lookup_phrase(&self, window: &[String]) -> Option<TermId> {
        self.phrases.get(window).copied()
    }

    pub fn term(&self, id: TermId) -> &StemmedTerm {
        &self.terms[id]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (TermId, &StemmedTerm)> {
        self.terms.iter().enumerate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stem::stem;

    #[test]
    fn bundled_composition() {
        let lex = Lexicon::load_default();
        assert!(lex.validate().is_empty());
        let serenity: Vec<&str> = lex
            .scale(Sentiment::Serenity)
            .iter()
            .map(|t| t.surface.as_str())
            .collect();
        assert_eq!(serenity, ["calm", "relaxed", "at ease"]);
        assert_eq!(lex.scale(Sentiment::Fatigue).len(), 4);
        assert_eq!(lex.terms().count(), 55);
        assert_eq!(lex.positive_affect().len(), 10);
        assert_eq!(lex.negative_affect().len(), 10);
    }

    #[test]
    fn sentiment_names_round_trip() {
        for s in Sentiment::ALL {
            assert_eq!(s.name().parse::<Sentiment>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("{:?}", s.name()));
            assert_eq!(serde_json::from_str::<Sentiment>(&json).unwrap(), s);
        }
        assert_eq!(Sentiment::SelfAssurance.name(), "self-assurance");
        assert!("Fear".parse::<Sentiment>().is_err());
    }

    #[test]
    fn duplicate_term_is_reported() {
        let mut lex = Lexicon::load_default().clone();
        lex.scales[Sentiment::Sadness].push(LexiconTerm::new("happy", Sentiment::Sadness));
        let violations = lex.validate();
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::DuplicateTerm { surface, first: Sentiment::Sadness, second: Sentiment::Joviality }
                if surface == "happy"
        )));
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::CountMismatch {
                sentiment: Sentiment::Sadness,
                ..
            }
        )));
    }

    #[test]
    fn truncated_scale_is_reported() {
        let mut lex = Lexicon::load_default().clone();
        lex.scales[Sentiment::Fear].pop();
        let violations = lex.validate();
        assert_eq!(
            violations,
            vec![Violation::CountMismatch {
                sentiment: Sentiment::Fear,
                expected: 6,
                found: 5,
            }]
        );
    }

    #[test]
    fn stemmed_round_trip() {
        let lex = Lexicon::load_default();
        let stemmed = stem_lexicon(lex, stem).unwrap();
        assert_eq!(stemmed.len(), 55);
        for term in lex.terms() {
            let key: Vec<String> = term.tokens.iter().map(|t| stem(t)).collect();
            let id = if key.len() == 1 {
                stemmed.lookup_single(&key[0])
            } else {
                stemmed.lookup_phrase(&key)
            }
            .unwrap_or_else(|| panic!("no entry for {:?}", term.surface));
            assert_eq!(stemmed.term(id).sentiment, term.sentiment);
            assert_eq!(stemmed.term(id).term.surface, term.surface);
        }
    }

    #[test]
    fn stemmed_keys_are_deterministic() {
        let lex = Lexicon::load_default();
        let stemmed = stem_lexicon(lex, stem).unwrap();
        assert_eq!(stemmed.max_phrase_len(), 3);
        let at_ease = stemmed.lookup_phrase(&["at".into(), "eas".into()]).unwrap();
        assert_eq!(stemmed.term(at_ease).sentiment, Sentiment::Serenity);
        assert_eq!(
            stemmed
                .lookup_single("scare")
                .map(|id| stemmed.term(id).sentiment),
            Some(Sentiment::Fear)
        );
        // Rebuilding yields the same entries.
        let again = stem_lexicon(lex, stem).unwrap();
        let a: Vec<_> = stemmed.terms().map(|(i, t)| (i, t.clone())).collect();
        let b: Vec<_> = again.terms().map(|(i, t)| (i, t.clone())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn collision_is_a_construction_error() {
        let mut lex = Lexicon::load_default().clone();
        // "scaring" stems to "scare", same key as Fear's "scared".
        lex.scales[Sentiment::Sadness].push(LexiconTerm::new("scaring", Sentiment::Sadness));
        let err = stem_lexicon(&lex, stem).unwrap_err();
        match err {
            Error::StemCollision { key, first, second } => {
                assert_eq!(key, "scare");
                assert_eq!(first, "scared");
                assert_eq!(second, "scaring");
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_structural_errors() {
        assert!(matches!(
            Lexicon::parse("fear afraid"),
            Err(Error::LexiconParse { line: 1, .. })
        ));
        assert!(matches!(
            Lexicon::parse("dread\tafraid"),
            Err(Error::LexiconParse { line: 1, .. })
        ));
        assert!(matches!(
            Lexicon::parse("fear\tone two three four five"),
            Err(Error::LexiconParse { line: 1, .. })
        ));
        assert!(matches!(
            Lexicon::parse_validated("fear\tafraid"),
            Err(Error::InvalidLexicon(_))
        ));
    }
}
