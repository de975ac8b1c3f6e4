//! Streaming ingestion and parallel aggregation.
//!
//! The reader thread batches raw lines onto a bounded channel; workers
//! parse and fold into worker-local state; the states merge once at the
//! end, in worker order. Aggregation is integer-only and the fold is
//! insensitive to how lines are partitioned, so results are bit-identical
//! for any worker count.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::time::{Duration, Instant};

use flate2::read::MultiGzDecoder;

use crate::classify::{classify, match_positions};
use crate::error::Error;
use crate::lexicon::{LexiconTerm, Sentiment, StemmedLexicon, TermId};
use crate::normalize::{normalize, NormalizedTweet, StopWords, TweetRecord};
use crate::score::SentimentCounts;

/// Lines per channel message. Large enough to amortize channel overhead,
/// small enough to keep workers busy near end-of-stream.
const BATCH_LINES: usize = 256;

/// One line's fate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineOutcome {
    Record(TweetRecord),
    Malformed { line: usize, message: String },
}

/// Parse one non-blank line into a record, enforcing field bounds.
pub fn parse_line(line_no: usize, line: &str) -> LineOutcome {
    match serde_json::from_str::<TweetRecord>(line) {
        Ok(rec) => match rec.check() {
            Ok(()) => LineOutcome::Record(rec),
            Err(message) => LineOutcome::Malformed {
                line: line_no,
                message,
            },
        },
        Err(e) => LineOutcome::Malformed {
            line: line_no,
            message: e.to_string(),
        },
    }
}

/// Lazily parse newline-delimited records. Whitespace-only lines are
/// skipped entirely; malformed lines are reported in order, never fatal.
/// Only an unreadable source yields `Err`.
pub fn read_stream<R: BufRead>(reader: R) -> impl Iterator<Item = Result<LineOutcome, Error>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) if l.trim().is_empty() => None,
            Ok(l) => Some(Ok(parse_line(i + 1, &l))),
        })
}

/// Open a corpus file, transparently decoding gzip by `.gz` suffix.
pub fn open_corpus(path: &Path) -> Result<Box<dyn BufRead + Send>, Error> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Worker-local fold state: constructible empty, mergeable at the end.
pub(crate) trait Shard: Send {
    fn empty() -> Self;
    fn merge(self, other: Self) -> Result<Self, Error>
    where
        Self: Sized;
}

/// Fan a line stream across `workers` threads, folding each line with
/// `step` into worker-local shards, then merge shards in worker order.
pub(crate) fn fold_lines<R, S, F>(reader: R, workers: usize, step: F) -> Result<S, Error>
where
    R: BufRead,
    S: Shard,
    F: Fn(&mut S, usize, &str) + Sync,
{
    let workers = workers.max(1);
    let (tx, rx) = crossbeam_channel::bounded::<Vec<(usize, String)>>(workers * 2);
    let step = &step;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let rx = rx.clone();
                scope.spawn(move || {
                    let mut shard = S::empty();
                    for batch in rx {
                        for (line_no, line) in &batch {
                            step(&mut shard, *line_no, line);
                        }
                    }
                    shard
                })
            })
            .collect();
        drop(rx);

        let mut read_error = None;
        let mut batch = Vec::with_capacity(BATCH_LINES);
        for (i, line) in reader.lines().enumerate() {
            match line {
                Err(e) => {
                    read_error = Some(Error::Io(e));
                    break;
                }
                Ok(l) => {
                    if l.trim().is_empty() {
                        continue;
                    }
                    batch.push((i + 1, l));
                    if batch.len() == BATCH_LINES {
                        if tx.send(std::mem::take(&mut batch)).is_err() {
                            break;
                        }
                        batch = Vec::with_capacity(BATCH_LINES);
                    }
                }
            }
        }
        if read_error.is_none() && !batch.is_empty() {
            let _ = tx.send(batch);
        }
        drop(tx);

        let mut merged = S::empty();
        for handle in handles {
            let shard = handle.join().expect("worker panicked");
            merged = merged.merge(shard)?;
        }
        match read_error {
            Some(e) => Err(e),
            None => Ok(merged),
        }
    })
}

/// Ingestion statistics for one run.
#[derive(Clone, Debug)]
pub struct IngestReport {
    /// Non-blank lines read.
    pub total_seen: u64,
    /// Lines that parsed into valid records.
    pub total_parsed: u64,
    /// Records that passed the mood-statement filter.
    pub total_mood_filtered: u64,
    /// Mood-filtered records that matched some scale.
    pub total_classified: u64,
    pub per_sentiment: [u64; Sentiment::COUNT],
    pub elapsed: Duration,
}

impl IngestReport {
    pub(crate) fn from_counts(
        counts: &SentimentCounts,
        malformed: u64,
        elapsed: Duration,
    ) -> IngestReport {
        let mut per_sentiment = [0u64; Sentiment::COUNT];
        for s in Sentiment::ALL {
            per_sentiment[s.index()] = counts.count(s);
        }
        IngestReport {
            total_seen: counts.total_seen(),
            total_parsed: counts.total_seen() - malformed,
            total_mood_filtered: counts.total_normalized(),
            total_classified: counts.total_classified(),
            per_sentiment,
            elapsed,
        }
    }

    pub fn malformed(&self) -> u64 {
        self.total_seen - self.total_parsed
    }

    pub fn records_per_second(&self) -> f64 {
        let secs = self.elapsed.as_secs_f64();
        if secs > 0.0 {
            self.total_seen as f64 / secs
        } else {
            0.0
        }
    }
}

struct CountShard {
    counts: SentimentCounts,
    malformed: u64,
}

impl Shard for CountShard {
    fn empty() -> CountShard {
        CountShard {
            counts: SentimentCounts::new(),
            malformed: 0,
        }
    }

    fn merge(self, other: CountShard) -> Result<CountShard, Error> {
        Ok(CountShard {
            counts: self.counts.merge(&other.counts)?,
            malformed: self
                .malformed
                .checked_add(other.malformed)
                .ok_or(Error::Overflow)?,
        })
    }
}

/// Fold one line into count state: parse, mood-filter, classify, count.
fn count_step(
    shard: &mut CountShard,
    line_no: usize,
    line: &str,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    accept: &(impl Fn(&TweetRecord) -> bool + Sync),
) {
    shard.counts.record_raw();
    match parse_line(line_no, line) {
        LineOutcome::Malformed { .. } => shard.malformed += 1,
        LineOutcome::Record(rec) => {
            if !accept(&rec) {
                return;
            }
            if let Some(norm) = normalize(&rec, stopwords) {
                shard.counts.record_normalized(classify(&norm, lexicon));
            }
        }
    }
}

/// Classify every record and aggregate per-sentiment counts.
pub fn count_sentiments<R: BufRead>(
    reader: R,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(SentimentCounts, IngestReport), Error> {
    count_sentiments_filtered(reader, lexicon, stopwords, workers, |_| true)
}

/// [`count_sentiments`] over the subset of records passing `accept`.
/// Rejected records still count as seen and parsed; they are simply not
/// part of the measured set.
pub fn count_sentiments_filtered<R: BufRead>(
    reader: R,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
    accept: impl Fn(&TweetRecord) -> bool + Sync,
) -> Result<(SentimentCounts, IngestReport), Error> {
    let start = Instant::now();
    let accept = &accept;
    let shard: CountShard = fold_lines(reader, workers, |shard, line_no, line| {
        count_step(shard, line_no, line, lexicon, stopwords, accept)
    })?;
    let report = IngestReport::from_counts(&shard.counts, shard.malformed, start.elapsed());
    Ok((shard.counts, report))
}

/// Per-term tweet counts: how many mood-filtered tweets contained each
/// scale term. A tweet with two different terms increments both; repeats of
/// one term within a tweet count once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFrequencyTable {
    per_term: Vec<u64>,
}

impl TermFrequencyTable {
    fn empty(terms: usize) -> TermFrequencyTable {
        TermFrequencyTable {
            per_term: vec![0; terms],
        }
    }

    pub fn count(&self, id: TermId) -> u64 {
        self.per_term[id]
    }

    /// Rows in scale-ordinal, then scale-list order.
    pub fn rows<'a>(
        &'a self,
        lexicon: &'a StemmedLexicon,
    ) -> impl Iterator<Item = (Sentiment, &'a LexiconTerm, u64)> + 'a {
        lexicon
            .terms()
            .map(move |(id, t)| (t.sentiment, &t.term, self.per_term[id]))
    }
}

/// Record the distinct matched terms of one normalized tweet.
fn tally_terms(table: &mut TermFrequencyTable, tweet: &NormalizedTweet, lexicon: &StemmedLexicon) {
    let mut ids: Vec<TermId> = match_positions(tweet, lexicon)
        .iter()
        .map(|m| m.term_id)
        .collect();
    ids.sort_unstable();
    ids.dedup();
    for id in ids {
        table.per_term[id] += 1;
    }
}

struct TermFreqShard {
    table: TermFrequencyTable,
    counts: SentimentCounts,
    malformed: u64,
    terms: usize,
}

impl Shard for TermFreqShard {
    fn empty() -> TermFreqShard {
        TermFreqShard {
            table: TermFrequencyTable::empty(0),
            counts: SentimentCounts::new(),
            malformed: 0,
            terms: 0,
        }
    }

    fn merge(self, other: TermFreqShard) -> Result<TermFreqShard, Error> {
        let terms = self.terms.max(other.terms);
        let mut per_term = vec![0u64; terms];
        for (i, slot) in per_term.iter_mut().enumerate() {
            let a = self.table.per_term.get(i).copied().unwrap_or(0);
            let b = other.table.per_term.get(i).copied().unwrap_or(0);
            *slot = a.checked_add(b).ok_or(Error::Overflow)?;
        }
        Ok(TermFreqShard {
            table: TermFrequencyTable { per_term },
            counts: self.counts.merge(&other.counts)?,
            malformed: self
                .malformed
                .checked_add(other.malformed)
                .ok_or(Error::Overflow)?,
            terms,
        })
    }
}

/// Count per-term tweet matches over all mood-filtered records.
pub fn term_frequencies<R: BufRead>(
    reader: R,
    lexicon: &StemmedLexicon,
    stopwords: &StopWords,
    workers: usize,
) -> Result<(TermFrequencyTable, IngestReport), Error> {
    let start = Instant::now();
    let shard = fold_lines(
        reader,
        workers,
        |shard: &mut TermFreqShard, line_no, line| {
            if shard.terms == 0 {
                shard.terms = lexicon.len();
                shard.table = TermFrequencyTable::empty(lexicon.len());
            }
            shard.counts.record_raw();
            match parse_line(line_no, line) {
                LineOutcome::Malformed { .. } => shard.malformed += 1,
                LineOutcome::Record(rec) => {
                    if let Some(norm) = normalize(&rec, stopwords) {
                        shard.counts.record_normalized(classify(&norm, lexicon));
                        tally_terms(&mut shard.table, &norm, lexicon);
                    }
                }
            }
        },
    )?;
    let mut table = shard.table;
    table.per_term.resize(lexicon.len(), 0);
    let report = IngestReport::from_counts(&shard.counts, shard.malformed, start.elapsed());
    Ok((table, report))
}
