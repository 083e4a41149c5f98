use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use super::{DecisionRecord, PipelineStats};
use crate::filters::Cascade;
use crate::wire::parse_clip_record_at;

/// Lines handed to the worker pool at a time.
const CHUNK_LINES: usize = 512;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("decision record serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn decide(cascade: &Cascade, line_no: u64, raw: &[u8]) -> DecisionRecord {
    match parse_clip_record_at(line_no as usize, raw) {
        Ok(clip) => DecisionRecord::from_outcome(
            line_no,
            &clip.meta.video_id,
            &clip.meta.clip_id,
            cascade.evaluate(&clip),
        ),
        Err(e) => DecisionRecord::parse_error(line_no, raw, e.to_string()),
    }
}

fn trim_line(buf: &[u8]) -> &[u8] {
    let mut end = buf.len();
    while end > 0 && matches!(buf[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    &buf[..end]
}

/// Stream clip records from `input` through the cascade and write one
/// decision record per non-blank line to `output`, in input order.
///
/// Clips are evaluated on a pool of `workers` threads (at least one); the
/// output bytes do not depend on the worker count. Malformed lines produce a
/// parse-error record and never abort the run.
pub fn run_pipeline<R: BufRead, W: Write>(
    mut input: R,
    output: &mut W,
    cascade: &Cascade,
    workers: usize,
) -> Result<PipelineStats, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    let mut stats = PipelineStats::default();
    let mut line_no: u64 = 0;
    let mut eof = false;
    let mut chunk: Vec<(u64, Vec<u8>)> = Vec::with_capacity(CHUNK_LINES);

    while !eof {
        chunk.clear();
        while chunk.len() < CHUNK_LINES {
            let mut buf = Vec::new();
            if input.read_until(b'\n', &mut buf)? == 0 {
                eof = true;
                break;
            }
            line_no += 1;
            let line = trim_line(&buf);
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            let len = line.len();
            buf.truncate(len);
            chunk.push((line_no, buf));
        }

        let records: Vec<DecisionRecord> = pool.install(|| {
            chunk
                .par_iter()
                .map(|(n, raw)| decide(cascade, *n, raw))
                .collect()
        });

        for rec in &records {
            stats.record(rec);
            serde_json::to_writer(&mut *output, rec)?;
            output.write_all(b"\n")?;
        }
    }
    output.flush()?;
    Ok(stats)
}

/// Convenience wrapper collecting decisions in memory.
pub fn run_pipeline_to_vec(
    input: &[u8],
    cascade: &Cascade,
    workers: usize,
) -> Result<(Vec<DecisionRecord>, PipelineStats), RunError> {
    let mut out = Vec::new();
    let stats = run_pipeline(input, &mut out, cascade, workers)?;
    let records = out
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .map(serde_json::from_slice)
        .collect::<Result<_, _>>()?;
    Ok((records, stats))
}
