use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use actionsieve::metrics::{
    caption_stats, category_counts, parse_caption_doc, parse_qa_item, shuffle_options,
    validate_caption_doc, CaptionStats,
};
use actionsieve::pipeline::{
    detect_scene_boundaries, emit_stats_report, read_histograms, run_pipeline, ReportFormat,
    DEFAULT_DIFF_THRESHOLD,
};
use actionsieve::{Cascade, FilterConfig, VerbLexicon};
use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "actionsieve", version, about = "Curate human-action video clips from pose detections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the filter cascade over a detection JSONL file.
    Run {
        #[arg(long)]
        input: PathBuf,
        /// Decision records, one JSON object per input line.
        #[arg(long)]
        output: PathBuf,
        /// Stage-yield statistics as JSON.
        #[arg(long)]
        stats: PathBuf,
        /// Flat `key = value` threshold file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        workers: Option<u32>,
        /// Override one threshold, e.g. `--threshold l1_threshold=0.1`. Repeatable.
        #[arg(long = "threshold", value_name = "KEY=VALUE")]
        thresholds: Vec<String>,
        /// Verb lexicon, one form per line, replacing the bundled one.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Print the attrition table to stdout.
        #[arg(long)]
        report: bool,
    },
    /// Detect scene changes in a per-frame colour histogram JSONL file.
    Scenes {
        #[arg(long)]
        histograms: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIFF_THRESHOLD)]
        diff_threshold: f64,
    },
    /// Validate caption documents and print their size statistics.
    Captions {
        #[arg(long)]
        input: PathBuf,
    },
    /// Validate a QA file, optionally writing it back with shuffled options.
    Qa {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, requires = "output")]
        shuffle_seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_config(config: Option<&Path>, overrides: &[String]) -> Result<FilterConfig> {
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            FilterConfig::from_kv_str(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => FilterConfig::default(),
    };
    for o in overrides {
        cfg.apply_override(o).with_context(|| format!("--threshold {o}"))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    input: &Path,
    output: &Path,
    stats_path: &Path,
    config: Option<&Path>,
    workers: Option<u32>,
    thresholds: &[String],
    lexicon: Option<&Path>,
    report: bool,
) -> Result<()> {
    let cfg = load_config(config, thresholds)?;
    let lexicon = match lexicon {
        Some(p) => VerbLexicon::from_reader(open(p)?).with_context(|| format!("reading {}", p.display()))?,
        None => VerbLexicon::bundled(),
    };
    let cascade = Cascade::new(cfg, lexicon)?;
    let workers = match workers {
        Some(n) => n as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let reader = open(input)?;
    let mut writer = create(output)?;
    let stats = run_pipeline(reader, &mut writer, &cascade, workers)?;
    fs::write(stats_path, emit_stats_report(&stats, ReportFormat::Json))
        .with_context(|| format!("cannot write {}", stats_path.display()))?;
    if report {
        io::stdout().write_all(&emit_stats_report(&stats, ReportFormat::Text))?;
    }
    Ok(())
}

fn cmd_scenes(path: &Path, diff_threshold: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&diff_threshold) {
        bail!("--diff-threshold must lie in [0, 1], got {diff_threshold}");
    }
    let hists = read_histograms(open(path)?)?;
    let report = detect_scene_boundaries(&hists, diff_threshold)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn non_blank_lines(reader: impl BufRead) -> impl Iterator<Item = io::Result<(usize, Vec<u8>)>> {
    reader
        .split(b'\n')
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|r| !matches!(r, Ok((_, l)) if l.iter().all(u8::is_ascii_whitespace)))
}

fn cmd_captions(path: &Path) -> Result<()> {
    let mut out = io::stdout().lock();
    let (mut docs, mut invalid) = (0usize, 0usize);
    let mut total = CaptionStats::default();
    for line in non_blank_lines(open(path)?) {
        let (n, line) = line?;
        docs += 1;
        let doc = match parse_caption_doc(&line, n) {
            Ok(d) => d,
            Err(e) => {
                invalid += 1;
                writeln!(out, "{e}")?;
                continue;
            }
        };
        if let Err(violations) = validate_caption_doc(&doc) {
            invalid += 1;
            for v in violations {
                writeln!(out, "line {n}: {v}")?;
            }
            continue;
        }
        let s = caption_stats(&doc);
        total.subjects += s.subjects;
        total.events += s.events;
        total.words += s.words;
    }
    let valid = docs - invalid;
    let mean = |x: usize| if valid == 0 { 0.0 } else { x as f64 / valid as f64 };
    writeln!(out, "documents {docs} valid {valid} invalid {invalid}")?;
    writeln!(
        out,
        "mean subjects {:.2} events {:.2} words {:.2}",
        mean(total.subjects),
        mean(total.events),
        mean(total.words)
    )?;
    Ok(())
}

fn cmd_qa(path: &Path, shuffle_seed: Option<u64>, output: Option<&Path>) -> Result<()> {
    let mut items = Vec::new();
    let mut out = io::stdout().lock();
    let mut invalid = 0usize;
    for line in non_blank_lines(open(path)?) {
        let (n, line) = line?;
        match parse_qa_item(&line, n) {
            Ok(it) => items.push(it),
            Err(e) => {
                invalid += 1;
                writeln!(out, "{e}")?;
            }
        }
    }
    writeln!(out, "items {} invalid {invalid}", items.len())?;
    for (cat, n) in category_counts(&items) {
        writeln!(out, "{:<16} {n}", cat.as_str())?;
    }
    if let (Some(seed), Some(path)) = (shuffle_seed, output) {
        let mut w = create(path)?;
        for (i, it) in items.iter().enumerate() {
            let s = shuffle_options(it, seed.wrapping_add(i as u64));
            serde_json::to_writer(&mut w, &s)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            input,
            output,
            stats,
            config,
            workers,
            thresholds,
            lexicon,
            report,
        } => cmd_run(
            &input,
            &output,
            &stats,
            config.as_deref(),
            workers,
            &thresholds,
            lexicon.as_deref(),
            report,
        ),
        Command::Scenes {
            histograms,
            diff_threshold,
        } => cmd_scenes(&histograms, diff_threshold),
        Command::Captions { input } => cmd_captions(&input),
        Command::Qa {
            input,
            shuffle_seed,
            output,
        } => cmd_qa(&input, shuffle_seed, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
