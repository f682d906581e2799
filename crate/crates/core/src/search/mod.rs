//! Exhaustive search for rational distance sets over a bounded ratio pool.
//!
//! Every head (a tuple of `n` pool ratios admitted by the enumeration mode)
//! is solved, its dependent entries are tested for membership (tail ratios
//! are not bounded by Γ), and the resulting point set is kept when its
//! abscissae are distinct. A point set reachable from several heads is
//! emitted only from the head of smallest rank, so work items never need to
//! share state: any partition of the rank space yields the same results.

mod checkpoint;
mod eval;
mod space;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checkpoint::{search_with_checkpoint, spool_path, CheckpointOptions, CheckpointRun, CheckpointState};
pub use space::HeadSpace;

use crate::number::Rat;
use crate::pythagorean::{primitive_triplets, RatioPool};
use crate::solver::{general_position_with, Solution, SolutionKey, ThreePointRule};
use eval::{evaluate, Outcome, Plan, PoolView, Scalar, Small};

/// Largest supported point count; relabeling checks cost `n!` per solution.
pub const MAX_N: usize = 8;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("checkpoint {path} is corrupt: {reason}")]
    CheckpointCorrupt { path: PathBuf, reason: String },
    #[error("partial results cover overlapping rank ranges {0:?} and {1:?}")]
    OverlappingRanges(Range<u64>, Range<u64>),
    #[error("search needs 3 <= n <= {MAX_N}; got {0}")]
    BadN(usize),
    #[error("head space does not fit in 64-bit ranks")]
    SpaceTooLarge,
    #[error("oracle rejected emitted point set {0}")]
    OracleRejected(SolutionKey),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Every ordered head; point sets deduplicated.
    #[default]
    OrderedDedup,
    /// Non-decreasing heads only.
    MultisetDedup,
    /// Strictly increasing heads only.
    SubsetOnly,
}

impl EnumerationMode {
    pub const ALL: [EnumerationMode; 3] =
        [EnumerationMode::OrderedDedup, EnumerationMode::MultisetDedup, EnumerationMode::SubsetOnly];

    pub fn short_name(self) -> &'static str {
        match self {
            EnumerationMode::OrderedDedup => "ordered",
            EnumerationMode::MultisetDedup => "multiset",
            EnumerationMode::SubsetOnly => "subset",
        }
    }
}

impl fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for EnumerationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ordered" | "ordered_dedup" => Ok(EnumerationMode::OrderedDedup),
            "multiset" | "multiset_dedup" => Ok(EnumerationMode::MultisetDedup),
            "subset" | "subset_only" => Ok(EnumerationMode::SubsetOnly),
            _ => Err(format!("unknown mode {s:?} (expected ordered, multiset or subset)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GpFilter {
    Off,
    #[default]
    Annotate,
    Require,
}

impl FromStr for GpFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(GpFilter::Off),
            "annotate" => Ok(GpFilter::Annotate),
            "require" => Ok(GpFilter::Require),
            _ => Err(format!("unknown gp filter {s:?} (expected off, annotate or require)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub gamma_bound: u64,
    pub include_zero: bool,
    pub mode: EnumerationMode,
    pub gp_filter: GpFilter,
    /// Which three-point sets count as degenerate when `n = 3`.
    pub three_point_rule: ThreePointRule,
    pub workers: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(n: usize, gamma_bound: u64) -> Self {
        SearchConfig {
            n,
            gamma_bound,
            include_zero: true,
            mode: EnumerationMode::default(),
            gp_filter: GpFilter::default(),
            three_point_rule: ThreePointRule::default(),
            workers: 1,
            checkpoint_path: None,
        }
    }

    pub fn with_mode(mut self, mode: EnumerationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_gp(mut self, gp_filter: GpFilter) -> Self {
        self.gp_filter = gp_filter;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// The settings that determine the result; worker count and paths are
    /// deliberately absent so outputs compare equal across runs.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            gamma_max: self.gamma_bound,
            include_zero: self.include_zero,
            mode: self.mode,
            gp: self.gp_filter,
            three_point_rule: self.three_point_rule,
        }
    }

    fn validate(&self, pool: &RatioPool) -> Result<HeadSpace, SearchError> {
        if !(3..=MAX_N).contains(&self.n) {
            return Err(SearchError::BadN(self.n));
        }
        if pool.gamma_bound != self.gamma_bound || pool.include_zero != self.include_zero {
            return Err(SearchError::ConfigMismatch(format!(
                "pool built for gamma {} (zero: {}) but config asks for gamma {} (zero: {})",
                pool.gamma_bound, pool.include_zero, self.gamma_bound, self.include_zero
            )));
        }
        let space = HeadSpace { mode: self.mode, m: pool.len(), n: self.n };
        space.total().ok_or(SearchError::SpaceTooLarge)?;
        Ok(space)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub gamma_max: u64,
    pub include_zero: bool,
    pub mode: EnumerationMode,
    pub gp: GpFilter,
    pub three_point_rule: ThreePointRule,
}

/// Tallies for a rank range. All counts are over distinct point sets except
/// `heads_visited` and `heads_valid`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub heads_visited: u64,
    /// Heads passing existence and distinctness, before deduplication.
    pub heads_valid: u64,
    pub theta_all: u64,
    pub theta_gp: u64,
    /// `n = 3`: sets of the form `{a, −a, 0}`.
    pub symmetric_with_vertex: u64,
    /// `n = 3`: sets with `x₁ + x₂ + x₃ = 0`.
    pub concyclic_with_vertex: u64,
    /// `n = 3`: sets excluded by the concyclic rule but not the symmetric one.
    pub concyclic_only: BTreeSet<SolutionKey>,
}

impl Counts {
    fn absorb(&mut self, other: Counts) {
        self.heads_visited += other.heads_visited;
        self.heads_valid += other.heads_valid;
        self.theta_all += other.theta_all;
        self.theta_gp += other.theta_gp;
        self.symmetric_with_vertex += other.symmetric_with_vertex;
        self.concyclic_with_vertex += other.concyclic_with_vertex;
        self.concyclic_only.extend(other.concyclic_only);
    }
}

/// The `n = 3` exclusion rules side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePointBreakdown {
    pub symmetric_with_vertex: u64,
    pub concyclic_with_vertex: u64,
    pub concyclic_only: Vec<SolutionKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub gamma_bound: u64,
    pub mode: EnumerationMode,
    pub theta_all: u64,
    /// Absent when the general-position filter is off.
    pub theta_gp: Option<u64>,
    pub pool_size: usize,
    pub heads_total: u64,
    pub heads_visited: u64,
    pub heads_valid: u64,
    pub three_point: Option<ThreePointBreakdown>,
    pub elapsed: Duration,
}

impl CountReport {
    fn from_counts(config: &SearchConfig, pool: &RatioPool, total: u64, counts: Counts, elapsed: Duration) -> Self {
        let three_point = (config.n == 3 && config.gp_filter != GpFilter::Off).then(|| ThreePointBreakdown {
            symmetric_with_vertex: counts.symmetric_with_vertex,
            concyclic_with_vertex: counts.concyclic_with_vertex,
            concyclic_only: counts.concyclic_only.iter().cloned().collect(),
        });
        CountReport {
            n: config.n,
            gamma_bound: config.gamma_bound,
            mode: config.mode,
            theta_all: counts.theta_all,
            theta_gp: (config.gp_filter != GpFilter::Off).then_some(counts.theta_gp),
            pool_size: pool.len(),
            heads_total: total,
            heads_visited: counts.heads_visited,
            heads_valid: counts.heads_valid,
            three_point,
            elapsed,
        }
    }
}

/// The result of one work item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partial {
    pub range: Range<u64>,
    pub counts: Counts,
    /// Emitted solutions in key order; `None` for count-only runs.
    pub solutions: Option<Vec<Solution>>,
}

/// Splits `0..total` into `workers` contiguous ranges whose sizes differ by
/// at most one, larger ranges first.
pub fn partition_space(total: u64, workers: usize) -> Vec<Range<u64>> {
    let workers = workers.max(1) as u64;
    let (base, extra) = (total / workers, total % workers);
    let mut start = 0;
    (0..workers)
        .map(|w| {
            let len = base + u64::from(w < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

struct Worker<'a> {
    config: &'a SearchConfig,
    pool: &'a RatioPool,
    space: HeadSpace,
    plan: Plan,
    fast: Option<PoolView<Small>>,
    exact: PoolView<Rat>,
}

impl<'a> Worker<'a> {
    fn new(config: &'a SearchConfig, pool: &'a RatioPool, space: HeadSpace) -> Self {
        Worker {
            config,
            pool,
            space,
            plan: Plan::new(config.n),
            fast: PoolView::new(&pool.ratios),
            exact: PoolView::new(&pool.ratios).expect("Rat never overflows"),
        }
    }

    fn outcome(&self, idx: &[usize], rank: u64) -> Outcome<Rat> {
        if let Some(fast) = &self.fast {
            if let Some(out) = evaluate(&self.plan, fast, &self.space, idx, rank) {
                return match out {
                    Outcome::Accepted(x) => Outcome::Accepted(x.iter().map(Small::to_rat).collect()),
                    Outcome::Rejected { slot0_free } => Outcome::Rejected { slot0_free },
                    Outcome::NotDistinct => Outcome::NotDistinct,
                    Outcome::Duplicate => Outcome::Duplicate,
                };
            }
        }
        evaluate(&self.plan, &self.exact, &self.space, idx, rank).expect("Rat never overflows")
    }

    fn run(&self, range: Range<u64>, keep: bool) -> Result<Partial, SearchError> {
        let mut counts = Counts::default();
        let mut solutions = keep.then(Vec::new);
        if range.is_empty() {
            return Ok(Partial { range, counts, solutions });
        }
        let ordered = self.space.mode == EnumerationMode::OrderedDedup;
        let m = self.pool.len();
        let mut idx = self.space.unrank(range.start);
        let mut rank = range.start;
        while rank < range.end {
            counts.heads_visited += 1;
            match self.outcome(&idx, rank) {
                Outcome::Rejected { slot0_free: true } if ordered => {
                    // Every remaining value of slot 0 fails the same entry.
                    let skip = ((m - 1 - idx[0]) as u64).min(range.end - rank - 1);
                    counts.heads_visited += skip;
                    idx[0] += skip as usize;
                    rank += skip;
                }
                Outcome::Rejected { .. } | Outcome::NotDistinct => {}
                Outcome::Duplicate => counts.heads_valid += 1,
                Outcome::Accepted(x) => {
                    counts.heads_valid += 1;
                    self.accept(x, &mut counts, solutions.as_mut())?;
                }
            }
            rank += 1;
            if rank < range.end && !self.space.advance(&mut idx) {
                break;
            }
        }
        if let Some(s) = solutions.as_mut() {
            s.sort_by_key(Solution::key);
        }
        Ok(Partial { range, counts, solutions })
    }

    fn accept(&self, x: Vec<Rat>, counts: &mut Counts, out: Option<&mut Vec<Solution>>) -> Result<(), SearchError> {
        let key = SolutionKey::of(&x);
        let annotate = self.config.gp_filter != GpFilter::Off;
        let mut solution =
            Solution::from_x(x, false).ok().flatten().ok_or_else(|| SearchError::OracleRejected(key.clone()))?;
        counts.theta_all += 1;
        let gp = general_position_with(&solution.x, self.config.three_point_rule);
        if annotate {
            solution.general_position = Some(gp);
            counts.theta_gp += u64::from(gp);
            if self.config.n == 3 {
                let sym = ThreePointRule::SymmetricWithVertex.excludes(&solution.x);
                let conc = ThreePointRule::ConcyclicWithVertex.excludes(&solution.x);
                counts.symmetric_with_vertex += u64::from(sym);
                counts.concyclic_with_vertex += u64::from(conc);
                if conc && !sym {
                    counts.concyclic_only.insert(key);
                }
            }
        }
        if let Some(out) = out {
            if self.config.gp_filter != GpFilter::Require || gp {
                out.push(solution);
            }
        }
        Ok(())
    }
}

/// Runs `ranges` on up to `workers` threads.
fn run_ranges(
    config: &SearchConfig,
    pool: &RatioPool,
    space: HeadSpace,
    ranges: Vec<Range<u64>>,
    keep: bool,
) -> Result<Vec<Partial>, SearchError> {
    let worker = Worker::new(config, pool, space);
    if ranges.len() <= 1 {
        return ranges.into_iter().map(|r| worker.run(r, keep)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let worker = &worker;
                scope.spawn(move || worker.run(r, keep))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    })
}

/// Combined tallies and the deduplicated, key-sorted solution stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merged {
    pub counts: Counts,
    pub solutions: Option<Vec<Solution>>,
}

/// Folds partials from disjoint rank ranges of one configuration. The result
/// does not depend on the order of `partials`.
pub fn merge_results(mut partials: Vec<Partial>) -> Result<Merged, SearchError> {
    partials.sort_by_key(|p| (p.range.start, p.range.end));
    for w in partials.windows(2) {
        if !w[0].range.is_empty() && !w[1].range.is_empty() && w[0].range.end > w[1].range.start {
            return Err(SearchError::OverlappingRanges(w[0].range.clone(), w[1].range.clone()));
        }
    }
    let keep = partials.iter().all(|p| p.solutions.is_some());
    let mut counts = Counts::default();
    let mut by_key: BTreeMap<SolutionKey, Solution> = BTreeMap::new();
    let mut duplicates = 0u64;
    let mut duplicate_gp = 0u64;
    for p in partials {
        counts.absorb(p.counts);
        for s in p.solutions.into_iter().flatten() {
            let gp = s.general_position == Some(true);
            if by_key.insert(s.key(), s).is_some() {
                duplicates += 1;
                duplicate_gp += u64::from(gp);
            }
        }
    }
    counts.theta_all -= duplicates;
    counts.theta_gp -= duplicate_gp;
    Ok(Merged { counts, solutions: keep.then(|| by_key.into_values().collect()) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutput {
    pub report: CountReport,
    /// Sorted by canonical key.
    pub solutions: Vec<Solution>,
}

fn run(
    config: &SearchConfig,
    pool: &RatioPool,
    keep: bool,
) -> Result<(CountReport, Option<Vec<Solution>>), SearchError> {
    let started = Instant::now();
    let space = config.validate(pool)?;
    let total = space.total().expect("validated");
    let partials = run_ranges(config, pool, space, partition_space(total, config.workers), keep)?;
    let merged = merge_results(partials)?;
    let report = CountReport::from_counts(config, pool, total, merged.counts, started.elapsed());
    Ok((report, merged.solutions))
}

/// Every distinct rational distance set reachable from the pool, verified by
/// the oracle and sorted by canonical key.
pub fn search(config: &SearchConfig, pool: &RatioPool) -> Result<SearchOutput, SearchError> {
    let (report, solutions) = run(config, pool, true)?;
    Ok(SearchOutput { report, solutions: solutions.unwrap_or_default() })
}

/// Like [`search`] but only tallies.
pub fn count_solutions(config: &SearchConfig, pool: &RatioPool) -> Result<CountReport, SearchError> {
    Ok(run(config, pool, false)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolGrowthRow {
    pub gamma: u64,
    /// Primitive triplets with hypotenuse at most `gamma`.
    pub primitive_count: usize,
    pub pool_size: usize,
    /// `gamma / 2π`.
    pub asymptotic: f64,
}

pub fn pool_growth_report(gammas: &[u64]) -> Vec<PoolGrowthRow> {
    gammas
        .iter()
        .map(|&gamma| {
            let t = primitive_triplets(gamma).len();
            PoolGrowthRow {
                gamma,
                primitive_count: t,
                pool_size: 4 * t + 1,
                asymptotic: gamma as f64 / (2.0 * std::f64::consts::PI),
            }
        })
        .collect()
}
