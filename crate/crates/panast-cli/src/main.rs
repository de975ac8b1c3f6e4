//! Command-line surface for the panast pipeline.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 domain failure (empty corpus, empty event, no classification),
//! 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, BufReader, Cursor, Read, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use chrono::{DateTime, NaiveDate, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};

use panast::corpus::{count_sentiments, term_frequencies, IngestReport, TermFrequencyTable};
use panast::events::{
    bundled_events, extract_and_score_with, find_event, parse_catalog, timeseries_by_region_with,
    timeseries_with, EventSpec, TimeSeries,
};
use panast::lexicon::{stem_lexicon, Lexicon, Sentiment, StemmedLexicon};
use panast::normalize::{normalize, StopWords, TweetRecord};
use panast::score::{compute_baseline, BaselineTable, ScoreVector, SignConvention};
use panast::{classify, open_corpus, render_kiviat, render_sparklines};

#[derive(Parser)]
#[command(
    name = "panast",
    version,
    about = "PANAS-based affect measurement over short-text corpora",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a baseline table from a corpus (interchange TSV on stdout)
    Baseline(BaselineCmd),
    /// Classify one text from the arguments or stdin
    Classify(ClassifyCmd),
    /// Score an event subset of a corpus against a baseline
    Score(ScoreCmd),
    /// Per-day score series for an event
    Timeseries(TimeseriesCmd),
    /// Per-term tweet counts, grouped by scale
    Termfreq(TermfreqCmd),
    /// Render charts as SVG on stdout
    #[command(subcommand)]
    Chart(ChartCmd),
}

#[derive(Subcommand)]
enum ChartCmd {
    /// Eleven-axis profile of an event's score vector
    Kiviat(KiviatCmd),
    /// Per-day sparklines for selected scales
    Sparkline(SparklineCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Corpus files (JSON Lines, `.gz` decoded transparently); `-` reads
    /// stdin; repeat for several inputs
    #[arg(long = "input", value_name = "PATH", default_value = "-")]
    input: Vec<PathBuf>,
    /// Worker threads for ingestion
    #[arg(long, value_name = "N", default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct PipelineArgs {
    /// Lexicon TSV overriding the bundled scales
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Stop-word list overriding the bundled one
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArg {
    /// Baseline source: `bundled` or a TSV path
    #[arg(long, value_name = "bundled|PATH", default_value = "bundled")]
    baseline: String,
}

#[derive(Args)]
struct EventArgs {
    /// Bundled event name, a catalog TOML path, or `PATH#NAME`
    #[arg(long, value_name = "NAME|PATH")]
    event: String,
    /// Keep only records from these region codes; repeatable
    #[arg(long = "region", value_name = "CODE")]
    regions: Vec<String>,
    /// Which sign means growth above baseline
    #[arg(
        long,
        value_name = "CONVENTION",
        default_value = "increase-positive",
        value_parser = SignConvention::from_str
    )]
    sign_convention: SignConvention,
    /// Warn when fewer mood-filtered tweets matched the event
    #[arg(long, value_name = "N", default_value_t = 100)]
    min_event_size: u64,
}

#[derive(Args)]
struct BaselineCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct ClassifyCmd {
    /// Text to classify; reads stdin when absent
    text: Option<String>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Args)]
struct ScoreCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    baseline: BaselineArg,
    #[command(flatten)]
    event: EventArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Args)]
struct TimeseriesCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    baseline: BaselineArg,
    #[command(flatten)]
    event: EventArgs,
    /// `csv` or `json`
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct TermfreqCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Include zero-count terms
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Args)]
struct KiviatCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    baseline: BaselineArg,
    #[command(flatten)]
    event: EventArgs,
}

#[derive(Args)]
struct SparklineCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    baseline: BaselineArg,
    #[command(flatten)]
    event: EventArgs,
    /// Scales to draw, comma-separated; all eleven when absent
    #[arg(long, value_name = "SCALES", value_delimiter = ',')]
    sentiments: Vec<Sentiment>,
    /// Vertical marker line at this date; repeatable
    #[arg(long = "marker", value_name = "YYYY-MM-DD")]
    markers: Vec<NaiveDate>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            if e.downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            {
                std::process::exit(0);
            }
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Baseline(cmd) => cmd_baseline(cmd),
        Command::Classify(cmd) => cmd_classify(cmd),
        Command::Score(cmd) => cmd_score(cmd),
        Command::Timeseries(cmd) => cmd_timeseries(cmd),
        Command::Termfreq(cmd) => cmd_termfreq(cmd),
        Command::Chart(ChartCmd::Kiviat(cmd)) => cmd_kiviat(cmd),
        Command::Chart(ChartCmd::Sparkline(cmd)) => cmd_sparkline(cmd),
    }
}

// ---- shared plumbing ----

fn open_inputs(paths: &[PathBuf]) -> Result<Box<dyn BufRead>> {
    let mut readers: Vec<Box<dyn BufRead>> = Vec::new();
    for p in paths {
        if p.as_os_str() == "-" {
            readers.push(Box::new(BufReader::new(io::stdin())));
        } else {
            let r = open_corpus(p).with_context(|| format!("opening {}", p.display()))?;
            readers.push(r);
        }
    }
    let mut iter = readers.into_iter();
    let mut acc: Box<dyn BufRead> = match iter.next() {
        Some(r) => r,
        None => Box::new(io::empty()),
    };
    for r in iter {
        // A separator guards against a first file without a trailing
        // newline; blank lines are skipped upstream.
        acc = Box::new(acc.chain(Cursor::new(&b"\n"[..])).chain(r));
    }
    Ok(acc)
}

fn load_lexicon(args: &PipelineArgs) -> Result<StemmedLexicon> {
    let lexicon: &Lexicon = match &args.lexicon {
        None => Lexicon::load_default(),
        Some(path) => {
            let data =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Box::leak(Box::new(Lexicon::parse_validated(&data)?))
        }
    };
    Ok(stem_lexicon(lexicon, panast::stem)?)
}

fn load_stopwords(args: &PipelineArgs) -> Result<&'static StopWords> {
    match &args.stopwords {
        None => Ok(StopWords::load_default()),
        Some(path) => {
            let data =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Box::leak(Box::new(StopWords::parse(&data))))
        }
    }
}

fn load_baseline(arg: &BaselineArg) -> Result<BaselineTable> {
    if arg.baseline == "bundled" {
        return Ok(BaselineTable::bundled().clone());
    }
    let path = Path::new(&arg.baseline);
    let data = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(BaselineTable::parse(
        &data,
        &format!("file:{}", path.display()),
    )?)
}

/// Resolve `--event`: a bundled name, a catalog path holding one event, or
/// `PATH#NAME` to pick from a larger catalog.
fn resolve_event(spec: &str, regions: &[String]) -> Result<EventSpec> {
    let base = if let Some(event) = find_event(spec) {
        event.clone()
    } else if Path::new(spec).is_file() {
        let data = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        let mut events = parse_catalog(&data)?;
        match events.len() {
            1 => events.remove(0),
            n => {
                let names: Vec<&str> = events.iter().map(|e| e.name()).collect();
                bail!(
                    "catalog {spec} holds {n} events ({}); select one with {spec}#NAME",
                    names.join(", ")
                );
            }
        }
    } else if let Some((path, name)) = spec.rsplit_once('#') {
        let data = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let events = parse_catalog(&data)?;
        events
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| anyhow!("no event named {name:?} in {path}"))?
    } else {
        let names: Vec<&str> = bundled_events().iter().map(|e| e.name()).collect();
        bail!(
            "unknown event {spec:?}; bundled events: {}",
            names.join(", ")
        );
    };
    if regions.is_empty() {
        Ok(base)
    } else {
        Ok(base.with_region_filter(regions.to_vec())?)
    }
}

fn print_report(report: &IngestReport) {
    eprintln!(
        "read {} lines in {:.2}s ({:.0} lines/s): {} parsed, {} malformed; \
         {} mood statements; {} classified",
        report.total_seen,
        report.elapsed.as_secs_f64(),
        report.records_per_second(),
        report.total_parsed,
        report.malformed(),
        report.total_mood_filtered,
        report.total_classified,
    );
}

fn warn_if_degenerate(event: &EventSpec, n: u64, min: u64) {
    if n < min {
        eprintln!(
            "warning: only {n} mood-filtered tweets matched event {:?} \
             (minimum {min}); scores will be noisy",
            event.name()
        );
    }
}

fn emit(data: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(data.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Round to the 7 decimal places every numeric output carries.
fn round7(x: f64) -> f64 {
    (x * 1e7).round() / 1e7
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

// ---- score formatting ----

fn score_table(v: &ScoreVector, convention: SignConvention) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<14} {:>10} {:>10} {:>10}",
        "sentiment", "alpha", "beta", "p"
    )
    .unwrap();
    for (s, e) in v.entries.iter() {
        writeln!(
            out,
            "{:<14} {:>10.7} {:>10.7} {:>10.7}",
            s.name(),
            e.alpha,
            e.beta,
            e.p
        )
        .unwrap();
    }
    writeln!(
        out,
        "n = {}; baseline: {}; sign convention: {}",
        v.event_size, v.provenance, convention
    )
    .unwrap();
    out
}

fn score_csv(v: &ScoreVector) -> String {
    let mut out = String::from("sentiment,alpha,beta,p\n");
    for (s, e) in v.entries.iter() {
        writeln!(out, "{},{:.7},{:.7},{:.7}", s.name(), e.alpha, e.beta, e.p).unwrap();
    }
    out
}

fn score_entries_json(v: &ScoreVector) -> Vec<serde_json::Value> {
    v.entries
        .iter()
        .map(|(s, e)| {
            serde_json::json!({
                "sentiment": s.name(),
                "alpha": round7(e.alpha),
                "beta": round7(e.beta),
                "p": round7(e.p),
            })
        })
        .collect()
}

fn score_json(v: &ScoreVector, event: &str, convention: SignConvention) -> String {
    let doc = serde_json::json!({
        "event": event,
        "n": v.event_size,
        "baseline": v.provenance,
        "sign_convention": convention.name(),
        "scores": score_entries_json(v),
    });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
}

// ---- timeseries formatting ----

fn timeseries_csv(list: &[TimeSeries], with_region: bool) -> String {
    let mut out = String::new();
    if with_region {
        out.push_str("region,date,sentiment,alpha,beta,p,n\n");
    } else {
        out.push_str("date,sentiment,alpha,beta,p,n\n");
    }
    for series in list {
        for point in &series.points {
            for (s, e) in point.vector.entries.iter() {
                if with_region {
                    write!(
                        out,
                        "{},",
                        csv_field(series.region.as_deref().unwrap_or(""))
                    )
                    .unwrap();
                }
                writeln!(
                    out,
                    "{},{},{:.7},{:.7},{:.7},{}",
                    point.date,
                    s.name(),
                    e.alpha,
                    e.beta,
                    e.p,
                    point.vector.event_size
                )
                .unwrap();
            }
        }
    }
    out
}

fn timeseries_json(list: &[TimeSeries], event: &str, convention: SignConvention) -> String {
    let series: Vec<serde_json::Value> = list
        .iter()
        .map(|ts| {
            let points: Vec<serde_json::Value> = ts
                .points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "date": p.date.to_string(),
                        "n": p.vector.event_size,
                        "scores": score_entries_json(&p.vector),
                    })
                })
                .collect();
            serde_json::json!({ "region": ts.region, "points": points })
        })
        .collect();
    let baseline = list
        .first()
        .and_then(|ts| ts.points.first())
        .map(|p| p.vector.provenance.clone())
        .unwrap_or_default();
    let doc = serde_json::json!({
        "event": event,
        "baseline": baseline,
        "sign_convention": convention.name(),
        "series": series,
    });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
}

// ---- termfreq formatting ----

fn termfreq_table(table: &TermFrequencyTable, lex: &StemmedLexicon, all: bool) -> String {
    let mut out = String::new();
    for scale in Sentiment::ALL {
        let rows: Vec<(String, u64)> = table
            .rows(lex)
            .filter(|(s, _, n)| *s == scale && (all || *n > 0))
            .map(|(_, t, n)| (t.surface.clone(), n))
            .collect();
        if rows.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "{}", scale.name()).unwrap();
        for (surface, n) in rows {
            writeln!(out, "  {surface:<18} {n:>8}").unwrap();
        }
    }
    if out.is_empty() {
        out.push_str("(no scale terms matched)\n");
    }
    out
}

fn termfreq_csv(table: &TermFrequencyTable, lex: &StemmedLexicon, all: bool) -> String {
    let mut out = String::from("sentiment,term,count\n");
    for (s, t, n) in table.rows(lex).filter(|(_, _, n)| all || *n > 0) {
        writeln!(out, "{},{},{}", s.name(), csv_field(&t.surface), n).unwrap();
    }
    out
}

fn termfreq_json(table: &TermFrequencyTable, lex: &StemmedLexicon, all: bool) -> String {
    let terms: Vec<serde_json::Value> = table
        .rows(lex)
        .filter(|(_, _, n)| all || *n > 0)
        .map(
            |(s, t, n)| serde_json::json!({ "sentiment": s.name(), "term": t.surface, "count": n }),
        )
        .collect();
    let doc = serde_json::json!({ "terms": terms });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
}

// ---- commands ----

fn cmd_baseline(cmd: BaselineCmd) -> Result<i32> {
    let lex = load_lexicon(&cmd.pipeline)?;
    let stops = load_stopwords(&cmd.pipeline)?;
    let reader = open_inputs(&cmd.input.input)?;
    let (counts, report) = count_sentiments(reader, &lex, stops, cmd.input.workers)?;
    print_report(&report);
    let table = compute_baseline(&counts)?;
    emit(&table.to_tsv())?;
    Ok(0)
}

fn cmd_classify(cmd: ClassifyCmd) -> Result<i32> {
    let lex = load_lexicon(&cmd.pipeline)?;
    let stops = load_stopwords(&cmd.pipeline)?;
    let text = match cmd.text {
        Some(t) => t,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            buf
        }
    };
    let record = TweetRecord {
        id: "cli".to_owned(),
        created_at: DateTime::<Utc>::UNIX_EPOCH,
        text,
        lang: None,
        region: None,
    };
    let (mood, sentiment) = match normalize(&record, stops) {
        None => (false, None),
        Some(norm) => (true, classify(&norm, &lex)),
    };
    if cmd.format == OutputFormat::Json {
        let doc = serde_json::json!({
            "mood_statement": mood,
            "sentiment": sentiment.map(|s| s.name()),
        });
        emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ))?;
    } else if let Some(s) = sentiment {
        emit(&format!("{}\n", s.name()))?;
    }
    match (mood, sentiment) {
        (false, _) => {
            eprintln!("not a mood statement (no first-person marker)");
            Ok(1)
        }
        (true, None) => {
            eprintln!("no scale term matched");
            Ok(1)
        }
        (true, Some(_)) => Ok(0),
    }
}

fn run_score(
    input: &InputArgs,
    pipeline: &PipelineArgs,
    baseline: &BaselineArg,
    event_args: &EventArgs,
) -> Result<(EventSpec, ScoreVector)> {
    let lex = load_lexicon(pipeline)?;
    let stops = load_stopwords(pipeline)?;
    let baseline = load_baseline(baseline)?;
    let event = resolve_event(&event_args.event, &event_args.regions)?;
    let reader = open_inputs(&input.input)?;
    let (vector, report) = extract_and_score_with(
        event_args.sign_convention,
        reader,
        &event,
        &baseline,
        &lex,
        stops,
        input.workers,
    )?;
    print_report(&report);
    warn_if_degenerate(&event, vector.event_size, event_args.min_event_size);
    Ok((event, vector))
}

fn cmd_score(cmd: ScoreCmd) -> Result<i32> {
    let (event, vector) = run_score(&cmd.input, &cmd.pipeline, &cmd.baseline, &cmd.event)?;
    let rendered = match cmd.format {
        OutputFormat::Table => score_table(&vector, cmd.event.sign_convention),
        OutputFormat::Csv => score_csv(&vector),
        OutputFormat::Json => score_json(&vector, event.name(), cmd.event.sign_convention),
    };
    emit(&rendered)?;
    Ok(0)
}

fn run_timeseries(
    input: &InputArgs,
    pipeline: &PipelineArgs,
    baseline: &BaselineArg,
    event_args: &EventArgs,
) -> Result<(EventSpec, Vec<TimeSeries>)> {
    let lex = load_lexicon(pipeline)?;
    let stops = load_stopwords(pipeline)?;
    let baseline = load_baseline(baseline)?;
    let event = resolve_event(&event_args.event, &event_args.regions)?;
    let reader = open_inputs(&input.input)?;
    let split = !event_args.regions.is_empty();
    let (list, report) = if split {
        timeseries_by_region_with(
            event_args.sign_convention,
            reader,
            &event,
            &baseline,
            &lex,
            stops,
            input.workers,
        )?
    } else {
        let (series, report) = timeseries_with(
            event_args.sign_convention,
            reader,
            &event,
            &baseline,
            &lex,
            stops,
            input.workers,
        )?;
        (vec![series], report)
    };
    print_report(&report);
    warn_if_degenerate(
        &event,
        report.total_mood_filtered,
        event_args.min_event_size,
    );
    Ok((event, list))
}

fn cmd_timeseries(cmd: TimeseriesCmd) -> Result<i32> {
    let (event, list) = run_timeseries(&cmd.input, &cmd.pipeline, &cmd.baseline, &cmd.event)?;
    let with_region = !cmd.event.regions.is_empty();
    let rendered = match cmd.format {
        OutputFormat::Csv => timeseries_csv(&list, with_region),
        OutputFormat::Json => timeseries_json(&list, event.name(), cmd.event.sign_convention),
        OutputFormat::Table => bail!("timeseries supports --format csv or json"),
    };
    emit(&rendered)?;
    Ok(0)
}

fn cmd_termfreq(cmd: TermfreqCmd) -> Result<i32> {
    let lex = load_lexicon(&cmd.pipeline)?;
    let stops = load_stopwords(&cmd.pipeline)?;
    let reader = open_inputs(&cmd.input.input)?;
    let (table, report) = term_frequencies(reader, &lex, stops, cmd.input.workers)?;
    print_report(&report);
    let rendered = match cmd.format {
        OutputFormat::Table => termfreq_table(&table, &lex, cmd.all),
        OutputFormat::Csv => termfreq_csv(&table, &lex, cmd.all),
        OutputFormat::Json => termfreq_json(&table, &lex, cmd.all),
    };
    emit(&rendered)?;
    Ok(0)
}

fn cmd_kiviat(cmd: KiviatCmd) -> Result<i32> {
    let (_, vector) = run_score(&cmd.input, &cmd.pipeline, &cmd.baseline, &cmd.event)?;
    emit(&render_kiviat(&vector))?;
    Ok(0)
}

fn cmd_sparkline(cmd: SparklineCmd) -> Result<i32> {
    if cmd.event.regions.len() > 1 {
        bail!("chart sparkline draws one series; pass at most one --region");
    }
    let (_, mut list) = run_timeseries(&cmd.input, &cmd.pipeline, &cmd.baseline, &cmd.event)?;
    debug_assert_eq!(list.len(), 1);
    let series = list.remove(0);
    let chart = render_sparklines(&series, &cmd.sentiments, &cmd.markers)?;
    for m in &chart.ignored_markers {
        eprintln!("warning: marker {m} lies outside the plotted span; ignored");
    }
    emit(&chart.svg)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn round7_truncates_noise() {
        assert_eq!(round7(0.96810451234), 0.9681045);
        assert_eq!(round7(0.12345675), 0.1234568);
        assert_eq!(round7(-1.0), -1.0);
        assert_eq!(round7(0.0), 0.0);
    }

    #[test]
    fn csv_fields_escape_only_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
