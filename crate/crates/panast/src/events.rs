//! Event windows, extraction, and per-day time series.
//!
//! An event is a curated keyword list plus an inclusive UTC date window,
//! optionally restricted to a set of region codes. Keyword matching runs on
//! the case-folded, punctuation-stripped token stream without stemming: the
//! curated phrases include proper nouns that stemming would mangle.
//! Event membership looks at the raw text; scoring still goes through the
//! full normalization pipeline.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::sync::OnceLock;
use std::time::Instant;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::classify::classify;
use crate::corpus::{
    count_sentiments_filtered, fold_lines, parse_line, IngestReport, LineOutcome, Shard,
};
use crate::error::Error;
use crate::lexicon::StemmedLexicon;
use crate::normalize::{normalize, tokenize, StopWords, TweetRecord};
use crate::score::{
    score_vector_with, BaselineTable, ScoreVector, SentimentCounts, SignConvention,
};

/// One event: keyword phrases plus an inclusive UTC date window, optionally
/// restricted to a set of region codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSpec {
    name: String,
    description: Option<String>,
    /// Tokenized, unstemmed keyword phrases.
    keywords: Vec<Vec<String>>,
    /// The phrases as written.
    keyword_surfaces: Vec<String>,
    start: NaiveDate,
    end: NaiveDate,
    region_filter: Option<BTreeSet<String>>,
}

impl EventSpec {
    /// Validate and build. Keywords are case-folded and tokenized with the
    /// corpus tokenizer and each phrase must survive tokenization; region
    /// codes are uppercased.
    pub fn new(
        name: impl Into<String>,
        description: Option<String>,
        keywords: Vec<String>,
        start: NaiveDate,
        end: NaiveDate,
        region_filter: Option<Vec<String>>,
    ) -> Result<EventSpec, Error> {
        let name = name.into();
        let name_ok = !name.is_empty()
            && name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
        if !name_ok {
            return Err(Error::EventSpec(format!(
                "name {name:?} must be non-empty ASCII alphanumerics, '-' or '_'"
            )));
        }
        if start > end {
            return Err(Error::EventSpec(format!(
                "window start {start} is after end {end}"
            )));
        }
        if keywords.is_empty() {
            return Err(Error::EventSpec(format!("event {name:?} has no keywords")));
        }
        let mut tokenized = Vec::with_capacity(keywords.len());
        for kw in &keywords {
            let tokens = tokenize(kw);
            if tokens.is_empty() {
                return Err(Error::EventSpec(format!(
                    "keyword {kw:?} has no tokens after normalization"
                )));
            }
            tokenized.push(tokens);
        }
        let region_filter = match region_filter {
            None => None,
            Some(regions) => {
                let set: BTreeSet<String> = regions
                    .iter()
                    .map(|r| r.trim().to_ascii_uppercase())
                    .collect();
                if set.is_empty() || set.contains("") {
                    return Err(Error::EventSpec(
                        "region filter entries must be non-empty".into(),
                    ));
                }
                Some(set)
            }
        };
        Ok(EventSpec {
            name,
            description,
            keywords: tokenized,
            keyword_surfaces: keywords,
            start,
            end,
            region_filter,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    /// Tokenized keyword phrases, in catalog order.
    pub fn keywords(&self) -> &[Vec<String>] {
        &self.keywords
    }

    /// The keyword phrases as written.
    pub fn keyword_surfaces(&self) -> &[String] {
        &self.keyword_surfaces
    }

    /// First day of the window (inclusive, UTC).
    pub fn start(&self) -> NaiveDate {
        self.start
    }

    /// Last day of the window (inclusive, UTC).
    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn region_filter(&self) -> Option<&BTreeSet<String>> {
        self.region_filter.as_ref()
    }

    /// Replace the region filter, revalidating.
    pub fn with_region_filter(self, regions: Vec<String>) -> Result<EventSpec, Error> {
        EventSpec::new(
            self.name,
            self.description,
            self.keyword_surfaces,
            self.start,
            self.end,
            Some(regions),
        )
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    #[serde(default)]
    events: Vec<RawEvent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    name: String,
    #[serde(default)]
    description: Option<String>,
    keywords: Vec<String>,
    start: String,
    end: String,
    #[serde(default)]
    regions: Option<Vec<String>>,
}

fn parse_date(s: &str) -> Result<NaiveDate, Error> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| Error::EventSpec(format!("bad date {s:?}: {e}")))
}

/// Parse an event catalog: TOML with an `[[events]]` array, each entry
/// holding `name`, `keywords`, `start`, `end` (quoted `YYYY-MM-DD`), and
/// optional `description` and `regions`. Names must be unique.
pub fn parse_catalog(text: &str) -> Result<Vec<EventSpec>, Error> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::EventSpec(e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.events.len());
    for ev in raw.events {
        if !seen.insert(ev.name.clone()) {
            return Err(Error::EventSpec(format!(
                "duplicate event name {:?}",
                ev.name
            )));
        }
        out.push(EventSpec::new(
            ev.name,
            ev.description,
            ev.keywords,
            parse_date(&ev.start)?,
            parse_date(&ev.end)?,
            ev.regions,
        )?);
    }
    Ok(out)
}

static BUNDLED_EVENTS: OnceLock<Vec<EventSpec>> = OnceLock::new();
const BUNDLED_EVENTS_DATA: &str = include_str!("../data/events.toml");

/// The bundled catalog: ten notable 2008-2010 events with curated keyword
/// lists and windows.
pub fn bundled_events() -> &'static [EventSpec] {
    BUNDLED_EVENTS
        .get_or_init(|| parse_catalog(BUNDLED_EVENTS_DATA).expect("bundled event catalog is valid"))
}

/// Look up a bundled event by name.
pub fn find_event(name: &str) -> Option<&'static EventSpec> {
    bundled_events().iter().find(|e| e.name == name)
}

fn contains_phrase(tokens: &[String], phrase: &[String]) -> bool {
    phrase.len() <= tokens.len() && tokens.windows(phrase.len()).any(|w| w == phrase)
}

/// Event membership: created_at inside the window, some keyword phrase
/// contiguous in the raw token stream, and the region filter (if any)
/// satisfied. Membership does not consult the mood filter.
pub fn matches_event(record: &TweetRecord, event: &EventSpec) -> bool {
    let date = record.created_at.date_naive();
    if date < event.start || date > event.end {
        return false;
    }
    if let Some(filter) = &event.region_filter {
        let ok = record
            .region
            .as_deref()
            .is_some_and(|r| filter.contains(&r.trim().to_ascii_uppercase()));
        if !ok {
            return false;
        }
    }
    let tokens = tokenize(&record.text);
    event.keywords.iter().any(|kw| contains_phrase(&tokens, kw))
}

/// Score the subset of a stream matching `event` against `baseline`, under
/// the default sign convention.
///
/// Fails with `EmptyEvent` when no matching tweet passes the mood filter.
/// A small-but-nonzero match count is the caller's concern; see the
/// reported `total_mood_filtered`.
pub fn extract_and_score<R: BufRead>(
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(ScoreVector, IngestReport), Error> {
    extract_and_score_with(
        SignConvention::IncreasePositive,
        reader,
        event,
        baseline,
        lexicon,
        stopwords,
        workers,
    )
}

/// [`extract_and_score`] under an explicit sign convention.
pub fn extract_and_score_with<R: BufRead>(
    convention: SignConvention,
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(ScoreVector, IngestReport), Error> {
    let (counts, report) = count_sentiments_filtered(reader, lexicon, stopwords, workers, |r| {
        matches_event(r, event)
    })?;
    let vector = score_vector_with(convention, baseline, &counts)?;
    Ok((vector, report))
}

/// One scored day of an event.
#[derive(Clone, Debug, PartialEq)]
pub struct TimePoint {
    pub date: NaiveDate,
    /// The day's raw counts; `vector` is exactly these counts scored.
    pub counts: SentimentCounts,
    pub vector: ScoreVector,
}

/// Daily scores for one event. Dates are strictly increasing and lie inside
/// the event window; days with no mood-filtered match are omitted rather
/// than scored.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub event: String,
    /// Present when the series was split by region.
    pub region: Option<String>,
    pub points: Vec<TimePoint>,
}

struct DayShard {
    days: BTreeMap<(Option<String>, NaiveDate), SentimentCounts>,
    totals: SentimentCounts,
    malformed: u64,
}

impl Shard for DayShard {
    fn empty() -> DayShard {
        DayShard {
            days: BTreeMap::new(),
            totals: SentimentCounts::new(),
            malformed: 0,
        }
    }

    fn merge(mut self, other: DayShard) -> Result<DayShard, Error> {
        for (key, counts) in other.days {
            match self.days.entry(key) {
                Entry::Occupied(mut slot) => {
                    let merged = slot.get().merge(&counts)?;
                    slot.insert(merged);
                }
                Entry::Vacant(slot) => {
                    slot.insert(counts);
                }
            }
        }
        Ok(DayShard {
            days: self.days,
            totals: self.totals.merge(&other.totals)?,
            malformed: self
                .malformed
                .checked_add(other.malformed)
                .ok_or(Error::Overflow)?,
        })
    }
}

fn day_step(
    shard: &mut DayShard,
    line_no: usize,
    line: &str,
    event: &EventSpec,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    split_regions: bool,
) {
    shard.totals.record_raw();
    match parse_line(line_no, line) {
        LineOutcome::Malformed { .. } => shard.malformed += 1,
        LineOutcome::Record(rec) => {
            if !matches_event(&rec, event) {
                return;
            }
            let Some(norm) = normalize(&rec, stopwords) else {
                return;
            };
            let classified = classify(&norm, lexicon);
            shard.totals.record_normalized(classified);
            let region = if split_regions {
                rec.region.as_deref().map(|r| r.trim().to_ascii_uppercase())
            } else {
                None
            };
            let day = shard
                .days
                .entry((region, rec.created_at.date_naive()))
                .or_default();
            day.record_raw();
            day.record_normalized(classified);
        }
    }
}

#[allow(clippy::too_many_arguments)] // private plumbing shared by the four public entry points
fn run_timeseries<R: BufRead>(
    convention: SignConvention,
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
    split_regions: bool,
) -> Result<(Vec<TimeSeries>, IngestReport), Error> {
    let start = Instant::now();
    let shard: DayShard = fold_lines(reader, workers, |shard, line_no, line| {
        day_step(
            shard,
            line_no,
            line,
            event,
            lexicon,
            stopwords,
            split_regions,
        )
    })?;
    let report = IngestReport::from_counts(&shard.totals, shard.malformed, start.elapsed());
    if shard.totals.total_normalized() == 0 {
        return Err(Error::EmptyEvent);
    }
    let mut series: Vec<TimeSeries> = Vec::new();
    for ((region, date), counts) in shard.days {
        let vector = score_vector_with(convention, baseline, &counts)?;
        let point = TimePoint {
            date,
            counts,
            vector,
        };
        match series.last_mut() {
            Some(last) if last.region == region => last.points.push(point),
            _ => series.push(TimeSeries {
                event: event.name.clone(),
                region,
                points: vec![point],
            }),
        }
    }
    Ok((series, report))
}

/// Per-day scores for one event, one point per UTC day with at least one
/// mood-filtered matching tweet.
pub fn timeseries<R: BufRead>(
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(TimeSeries, IngestReport), Error> {
    timeseries_with(
        SignConvention::IncreasePositive,
        reader,
        event,
        baseline,
        lexicon,
        stopwords,
        workers,
    )
}

/// [`timeseries`] under an explicit sign convention.
pub fn timeseries_with<R: BufRead>(
    convention: SignConvention,
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(TimeSeries, IngestReport), Error> {
    let (mut series, report) = run_timeseries(
        convention, reader, event, baseline, lexicon, stopwords, workers, false,
    )?;
    debug_assert_eq!(series.len(), 1);
    Ok((series.remove(0), report))
}

/// [`timeseries`] split into one series per region (uppercased), ordered
/// with region-less records first. Pair this with a region filter on the
/// event to bound which regions appear.
pub fn timeseries_by_region<R: BufRead>(
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(Vec<TimeSeries>, IngestReport), Error> {
    timeseries_by_region_with(
        SignConvention::IncreasePositive,
        reader,
        event,
        baseline,
        lexicon,
        stopwords,
        workers,
    )
}

/// [`timeseries_by_region`] under an explicit sign convention.
pub fn timeseries_by_region_with<R: BufRead>(
    convention: SignConvention,
    reader: R,
    event: &EventSpec,
    baseline: &BaselineTable,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(Vec<TimeSeries>, IngestReport), Error> {
    run_timeseries(
        convention, reader, event, baseline, lexicon, stopwords, workers, true,
    )
}
