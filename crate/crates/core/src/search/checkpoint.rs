//! Resumable searches.
//!
//! The rank space is processed in chunks. After each chunk the emitted
//! solutions are appended to a spool file (`<checkpoint>.spool.jsonl`) and
//! the state file is replaced atomically. The state records the spool length
//! it vouches for, so bytes written after the last checkpoint are discarded
//! on resume.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    merge_results, partition_space, run_ranges, ConfigEcho, CountReport, Counts, SearchConfig, SearchError,
    SearchOutput,
};
use crate::pythagorean::RatioPool;
use crate::solver::Solution;

const STATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointState {
    pub version: u32,
    pub config: ConfigEcho,
    pub heads_total: u64,
    pub next_rank: u64,
    pub counts: Counts,
    /// Bytes of the spool covered by this state.
    pub spool_offset: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointOptions {
    /// Heads per chunk.
    pub chunk_size: u64,
    /// Stop after this many chunks in this invocation, as if interrupted.
    pub stop_after_chunks: Option<u64>,
}

impl Default for CheckpointOptions {
    fn default() -> Self {
        CheckpointOptions { chunk_size: 1 << 20, stop_after_chunks: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointRun {
    Complete(SearchOutput),
    Stopped { next_rank: u64, heads_total: u64 },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SearchError + '_ {
    move |source| SearchError::Io { path: path.to_path_buf(), source }
}

fn corrupt(path: &Path, reason: impl ToString) -> SearchError {
    SearchError::CheckpointCorrupt { path: path.to_path_buf(), reason: reason.to_string() }
}

pub fn spool_path(checkpoint: &Path) -> PathBuf {
    let mut name = checkpoint.as_os_str().to_owned();
    name.push(".spool.jsonl");
    PathBuf::from(name)
}

fn load_state(path: &Path) -> Result<Option<CheckpointState>, SearchError> {
    match fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text).map(Some).map_err(|e| corrupt(path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io_err(path)(e)),
    }
}

fn store_state(path: &Path, state: &CheckpointState) -> Result<(), SearchError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let text = serde_json::to_string_pretty(state).expect("state serializes");
    {
        let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(text.as_bytes()).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn read_spool(path: &Path) -> Result<Vec<Solution>, SearchError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    BufReader::new(file)
        .lines()
        .map(|line| {
            let line = line.map_err(io_err(path))?;
            serde_json::from_str(&line).map_err(|e| corrupt(path, e))
        })
        .collect()
}

/// Runs or resumes the search recorded at `config.checkpoint_path`.
pub fn search_with_checkpoint(
    config: &SearchConfig,
    pool: &RatioPool,
    options: CheckpointOptions,
) -> Result<CheckpointRun, SearchError> {
    let started = Instant::now();
    let path = config
        .checkpoint_path
        .as_deref()
        .ok_or_else(|| SearchError::ConfigMismatch("no checkpoint path given".into()))?;
    let space = config.validate(pool)?;
    let total = space.total().expect("validated");
    let echo = config.echo();
    let spool = spool_path(path);

    let mut state = match load_state(path)? {
        Some(state) => {
            if state.version != STATE_VERSION {
                return Err(corrupt(path, format!("unsupported version {}", state.version)));
            }
            if state.config != echo || state.heads_total != total {
                return Err(SearchError::ConfigMismatch(format!(
                    "checkpoint {} was written for {:?}",
                    path.display(),
                    state.config
                )));
            }
            state
        }
        None => CheckpointState {
            version: STATE_VERSION,
            config: echo,
            heads_total: total,
            next_rank: 0,
            counts: Counts::default(),
            spool_offset: 0,
        },
    };

    let out = OpenOptions::new().create(true).write(true).truncate(false).open(&spool).map_err(io_err(&spool))?;
    let len = out.metadata().map_err(io_err(&spool))?.len();
    if len < state.spool_offset {
        return Err(corrupt(&spool, format!("spool has {len} bytes, checkpoint expects {}", state.spool_offset)));
    }
    out.set_len(state.spool_offset).map_err(io_err(&spool))?;
    drop(out);
    let mut out = OpenOptions::new().append(true).open(&spool).map_err(io_err(&spool))?;

    let chunk = options.chunk_size.max(1);
    let mut chunks_done = 0;
    while state.next_rank < total {
        if options.stop_after_chunks.is_some_and(|limit| chunks_done >= limit) {
            return Ok(CheckpointRun::Stopped { next_rank: state.next_rank, heads_total: total });
        }
        let start = state.next_rank;
        let end = total.min(start.saturating_add(chunk));
        let ranges =
            partition_space(end - start, config.workers).into_iter().map(|r| start + r.start..start + r.end).collect();
        let merged = merge_results(run_ranges(config, pool, space, ranges, true)?)?;
        let mut buf = Vec::new();
        for s in merged.solutions.into_iter().flatten() {
            serde_json::to_writer(&mut buf, &s).expect("solution serializes");
            buf.push(b'\n');
        }
        out.write_all(&buf).map_err(io_err(&spool))?;
        out.sync_data().map_err(io_err(&spool))?;
        state.counts.absorb(merged.counts);
        state.spool_offset += buf.len() as u64;
        state.next_rank = end;
        store_state(path, &state)?;
        chunks_done += 1;
    }

    let mut solutions = read_spool(&spool)?;
    solutions.sort_by_key(Solution::key);
    let report = CountReport::from_counts(config, pool, total, state.counts, started.elapsed());
    Ok(CheckpointRun::Complete(SearchOutput { report, solutions }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pythagorean::build_pool;
    use crate::search::search;

    #[test]
    fn interrupted_run_resumes_to_the_same_result() {
        let dir = tempfile::tempdir().unwrap();
        let pool = build_pool(29, true);
        let mut config = SearchConfig::new(3, 29).with_workers(2);
        let reference = search(&config, &pool).unwrap();
        config.checkpoint_path = Some(dir.path().join("state.json"));
        let opts = CheckpointOptions { chunk_size: 97, stop_after_chunks: Some(3) };
        let first = search_with_checkpoint(&config, &pool, opts).unwrap();
        assert_eq!(first, CheckpointRun::Stopped { next_rank: 291, heads_total: 9261 });
        // Garbage past the recorded offset, as left by a crash mid-append.
        let spool = spool_path(config.checkpoint_path.as_ref().unwrap());
        OpenOptions::new().append(true).open(&spool).unwrap().write_all(b"{\"trunc").unwrap();
        let opts = CheckpointOptions { stop_after_chunks: None, ..opts };
        let CheckpointRun::Complete(done) = search_with_checkpoint(&config, &pool, opts).unwrap() else {
            panic!("expected completion");
        };
        assert_eq!(done.solutions, reference.solutions);
        assert_eq!(done.report.theta_all, reference.report.theta_all);
        assert_eq!(done.report.theta_gp, reference.report.theta_gp);
    }

    #[test]
    fn resume_rejects_other_configs() {
        let dir = tempfile::tempdir().unwrap();
        let pool = build_pool(25, true);
        let mut config = SearchConfig::new(3, 25);
        config.checkpoint_path = Some(dir.path().join("state.json"));
        let opts = CheckpointOptions { chunk_size: 100, stop_after_chunks: Some(1) };
        search_with_checkpoint(&config, &pool, opts).unwrap();
        let other = config.clone().with_mode(super::super::EnumerationMode::SubsetOnly);
        assert!(matches!(search_with_checkpoint(&other, &pool, opts), Err(SearchError::ConfigMismatch(_))));
        fs::write(config.checkpoint_path.as_ref().unwrap(), "not json").unwrap();
        assert!(matches!(search_with_checkpoint(&config, &pool, opts), Err(SearchError::CheckpointCorrupt { .. })));
    }
}
