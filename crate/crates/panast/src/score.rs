//! Baselines, event occurrence, and the score function.
//!
//! All aggregation is integer counting; division happens once, at scoring
//! time, so shard order and worker count can never change a result.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::Error;
use crate::lexicon::{PerSentiment, Sentiment};

/// Per-sentiment tweet counts plus the totals they are measured against.
/// The mergeable aggregation state for both baselines and events.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SentimentCounts {
    per_sentiment: PerSentiment<u64>,
    total_normalized: u64,
    total_seen: u64,
}

impl SentimentCounts {
    pub fn new() -> SentimentCounts {
        SentimentCounts::default()
    }

    /// Build from raw parts; `None` if the counts are inconsistent
    /// (classified tweets cannot outnumber normalized ones, nor normalized
    /// outnumber seen).
    pub fn from_parts(
        per_sentiment: [u64; Sentiment::COUNT],
        total_normalized: u64,
        total_seen: u64,
    ) -> Option<SentimentCounts> {
        let sum = per_sentiment
            .iter()
            .try_fold(0u64, |acc, &n| acc.checked_add(n))?;
        if sum > total_normalized || total_normalized > total_seen {
            return None;
        }
        Some(SentimentCounts {
            per_sentiment: PerSentiment::from_array(per_sentiment),
            total_normalized,
            total_seen,
        })
    }

    /// A raw record was read (parsed or not).
    pub fn record_raw(&mut self) {
        self.total_seen += 1;
    }

    /// A record passed the mood filter; `classified` is its scale, if any.
    pub fn record_normalized(&mut self, classified: Option<Sentiment>) {
        self.total_normalized += 1;
        if let Some(s) = classified {
            self.per_sentiment[s] += 1;
        }
    }

    pub fn count(&self, s: Sentiment) -> u64 {
        self.per_sentiment[s]
    }

    pub fn per_sentiment(&self) -> &PerSentiment<u64> {
        &self.per_sentiment
    }

    /// Tweets that passed the mood filter: |T| for a baseline corpus, |S|
    /// for an event subset.
    pub fn total_normalized(&self) -> u64 {
        self.total_normalized
    }

    pub fn total_seen(&self) -> u64 {
        self.total_seen
    }

    pub fn total_classified(&self) -> u64 {
        Sentiment::ALL.iter().map(|&s| self.per_sentiment[s]).sum()
    }

    /// Component-wise sum. Checked: overflowing a 64-bit counter reports
    /// rather than wrapping.
    pub fn merge(&self, other: &SentimentCounts) -> Result<SentimentCounts, Error> {
        let mut per = [0u64; Sentiment::COUNT];
        for s in Sentiment::ALL {
            per[s.index()] = self.per_sentiment[s]
                .checked_add(other.per_sentiment[s])
                .ok_or(Error::Overflow)?;
        }
        Ok(SentimentCounts {
            per_sentiment: PerSentiment::from_array(per),
            total_normalized: self
                .total_normalized
                .checked_add(other.total_normalized)
                .ok_or(Error::Overflow)?,
            total_seen: self
                .total_seen
                .checked_add(other.total_seen)
                .ok_or(Error::Overflow)?,
        })
    }
}

/// Which sign means "more than baseline".
///
/// The default maps growth above baseline to positive scores, shrinkage to
/// negative, with |P| < 1 whenever any matching tweets exist. The
/// alternative is the exact mirror (every score negated), kept for
/// compatibility with material that uses the opposite orientation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    #[default]
    IncreasePositive,
    DecreasePositive,
}

impl SignConvention {
    pub fn name(self) -> &'static str {
        match self {
            SignConvention::IncreasePositive => "increase-positive",
            SignConvention::DecreasePositive => "decrease-positive",
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "increase-positive" => Ok(SignConvention::IncreasePositive),
            "decrease-positive" => Ok(SignConvention::DecreasePositive),
            other => Err(format!(
                "unknown sign convention {other:?}; use increase-positive or decrease-positive"
            )),
        }
    }
}

/// The score of one sentiment: how far `beta` sits from `alpha`, in (-1, 1)
/// for nonzero beta, exactly -1 when the sentiment never occurred.
///
/// Under the default convention: P = (β−α)/β when β ≥ α, else (β−α)/α.
/// P = 0 iff β = α; sign(P) = sign(β−α); strictly increasing in β.
pub fn panas_score(alpha: f64, beta: f64) -> Result<f64, Error> {
    panas_score_with(SignConvention::IncreasePositive, alpha, beta)
}

/// [`panas_score`] under an explicit sign convention.
pub fn panas_score_with(convention: SignConvention, alpha: f64, beta: f64) -> Result<f64, Error> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidBaseline { alpha });
    }
    let increase_positive = if beta == 0.0 {
        -1.0
    } else if beta >= alpha {
        (beta - alpha) / beta
    } else {
        (beta - alpha) / alpha
    };
    let p = match convention {
        SignConvention::IncreasePositive => increase_positive,
        SignConvention::DecreasePositive => -increase_positive,
    };
    // Never emit a negative zero: beta == alpha must print as 0.0000000
    // under both conventions.
    Ok(if p == 0.0 { 0.0 } else { p })
}

/// Per-sentiment baseline proportions α, with the provenance that produced
/// them ("bundled", "computed", or "computed:<source>").
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineTable {
    alpha: PerSentiment<f64>,
    provenance: String,
}

static BUNDLED_BASELINE: OnceLock<BaselineTable> = OnceLock::new();
const BUNDLED_BASELINE_DATA: &str = include_str!("../data/baseline.tsv");

impl BaselineTable {
    /// The bundled reference baselines, derived from a 479-million-tweet
    /// corpus; the constants every event score is normalized against unless
    /// the caller computes their own.
    pub fn bundled() -> &'static BaselineTable {
        BUNDLED_BASELINE.get_or_init(|| {
            BaselineTable::parse(BUNDLED_BASELINE_DATA, "bundled")
                .expect("bundled baseline is valid")
        })
    }

    /// Parse `<sentiment>\t<alpha>` lines; every sentiment exactly once.
    pub fn parse(data: &str, provenance: &str) -> Result<BaselineTable, Error> {
        let mut alpha: PerSentiment<Option<f64>> = PerSentiment::from_fn(|_| None);
        for (i, raw) in data.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (name, value) = trimmed.split_once('\t').ok_or(Error::BaselineParse {
                line,
                message: "expected <sentiment>\\t<alpha>".into(),
            })?;
            let sentiment: Sentiment = name.trim().parse().map_err(|e| Error::BaselineParse {
                line,
                message: format!("{e}"),
            })?;
            let value: f64 = value.trim().parse().map_err(|e| Error::BaselineParse {
                line,
                message: format!("bad alpha: {e}"),
            })?;
            if alpha[sentiment].replace(value).is_some() {
                return Err(Error::BaselineParse {
                    line,
                    message: format!("duplicate entry for {sentiment}"),
                });
            }
        }
        let mut values = [0f64; Sentiment::COUNT];
        for s in Sentiment::ALL {
            values[s.index()] = alpha[s]
                .ok_or_else(|| Error::BaselineInvariant(format!("missing entry for {s}")))?;
        }
        BaselineTable::from_alpha(PerSentiment::from_array(values), provenance)
    }

    /// Wrap precomputed proportions, enforcing the table invariants: every
    /// α positive and finite, and the αs summing below 1 (some normalized
    /// tweets must be unclassified).
    pub fn from_alpha(alpha: PerSentiment<f64>, provenance: &str) -> Result<BaselineTable, Error> {
        for (_, &a) in alpha.iter() {
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::InvalidBaseline { alpha: a });
            }
        }
        let sum: f64 = alpha.iter().map(|(_, &a)| a).sum();
        if sum >= 1.0 {
            return Err(Error::BaselineInvariant(format!(
                "alphas sum to {sum}, must be below 1"
            )));
        }
        Ok(BaselineTable {
            alpha,
            provenance: provenance.to_owned(),
        })
    }

    pub fn alpha(&self, s: Sentiment) -> f64 {
        self.alpha[s]
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: &str) -> BaselineTable {
        self.provenance = provenance.to_owned();
        self
    }

    /// Serialize in the interchange format, 7 decimal places.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for s in Sentiment::ALL {
            out.push_str(&format!("{s}\t{:.7}\n", self.alpha[s]));
        }
        out
    }
}

/// α over a baseline corpus: each sentiment's share of the mood-filtered
/// tweets. The corpus must exhibit every sentiment; a baseline with a zero
/// entry could never score that sentiment's growth.
pub fn compute_baseline(counts: &SentimentCounts) -> Result<BaselineTable, Error> {
    if counts.total_normalized() == 0 {
        return Err(Error::EmptyCorpus);
    }
    for s in Sentiment::ALL {
        if counts.count(s) == 0 {
            return Err(Error::DegenerateBaseline(s));
        }
    }
    let total = counts.total_normalized() as f64;
    BaselineTable::from_alpha(
        PerSentiment::from_fn(|s| counts.count(s) as f64 / total),
        "computed",
    )
}

/// β over an event subset: each sentiment's share of the event's
/// mood-filtered tweets. Zero entries are fine here.
pub fn relative_occurrence(counts: &SentimentCounts) -> Result<PerSentiment<f64>, Error> {
    if counts.total_normalized() == 0 {
        return Err(Error::EmptyEvent);
    }
    let total = counts.total_normalized() as f64;
    Ok(PerSentiment::from_fn(|s| counts.count(s) as f64 / total))
}

/// One sentiment's inputs and score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreEntry {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

/// The eleven-dimensional result, carrying its inputs for auditability.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVector {
    pub entries: PerSentiment<ScoreEntry>,
    /// |S|: mood-filtered tweets in the scored subset.
    pub event_size: u64,
    /// Provenance of the baseline the scores are relative to.
    pub provenance: String,
}

/// Score `counts` against `baseline` under the default sign convention.
pub fn score_vector(
    baseline: &BaselineTable,
    counts: &SentimentCounts,
) -> Result<ScoreVector, Error> {
    score_vector_with(SignConvention::IncreasePositive, baseline, counts)
}

/// [`score_vector`] under an explicit sign convention.
pub fn score_vector_with(
    convention: SignConvention,
    baseline: &BaselineTable,
    counts: &SentimentCounts,
) -> Result<ScoreVector, Error> {
    let beta = relative_occurrence(counts)?;
    let mut entries = [ScoreEntry {
        alpha: 0.0,
        beta: 0.0,
        p: 0.0,
    }; Sentiment::COUNT];
    for s in Sentiment::ALL {
        let a = baseline.alpha(s);
        let b = beta[s];
        entries[s.index()] = ScoreEntry {
            alpha: a,
            beta: b,
            p: panas_score_with(convention, a, b)?,
        };
    }
    Ok(ScoreVector {
        entries: PerSentiment::from_array(entries),
        event_size: counts.total_normalized(),
        provenance: baseline.provenance().to_owned(),
    })
}
