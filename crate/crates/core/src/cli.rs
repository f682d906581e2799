//! The `rds` command line.
//!
//! Data goes to the output stream and diagnostics to the error stream. Exit
//! codes: 0 on success, 1 when a verification or regression finds a failure,
//! 2 on usage errors.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::number::{format_list, parse_list, Rat};
use crate::pythagorean::{classify_ratio, nu, primitive_triplets, ratios_of, IntervalProbe};
use crate::search::{
    count_solutions, pool_growth_report, search, search_with_checkpoint, CheckpointOptions, CheckpointRun, CountReport,
    EnumerationMode, GpFilter, SearchConfig,
};
use crate::solver::{complete_psi, solve, verify_rds, ThreePointRule};
use crate::store::{
    config_echo, write_records, CountRow, Format, Payload, PayloadKind, RatioRecord, RecordEnvelope, RecordWriter,
};
use crate::tables::{examples_suite, four_point_suite, three_point_suite, RowStatus, COUNT_ROWS};

#[derive(Debug, Parser)]
#[command(name = "rds", version, about = "Rational distance sets on the parabola y = x²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List primitive Pythagorean triplets with hypotenuse at most G.
    Triplets {
        #[arg(long, value_name = "G")]
        gamma_max: u64,
        /// Print pool growth rows (Γ, T, pool size, Γ/2π) for these bounds instead.
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        growth: Vec<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the ratio pool built from triplets with hypotenuse at most G.
    Ratios {
        #[arg(long, value_name = "G")]
        gamma_max: u64,
        /// Leave the zero ratio out of the pool.
        #[arg(long)]
        no_zero: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve a head of n ratios for the abscissae and check every condition.
    Solve {
        #[arg(long)]
        n: usize,
        /// Comma-separated head ratios, in pair order (1,2), (1,3), ..., (1,n), (2,3).
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// Free abscissa x₁ (n = 2 only).
        #[arg(long, allow_hyphen_values = true)]
        free: Option<String>,
        /// Print the solution as a JSONL record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Complete a head to the full pair-sum vector.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
    },
    /// Check that abscissae form a rational distance set, directly from coordinates.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Exhaustively search a bounded ratio pool for rational distance sets.
    Search {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_name = "G")]
        gamma_max: u64,
        /// Resumable state file; an existing one is resumed.
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        /// Heads per checkpoint chunk.
        #[arg(long, default_value_t = 1 << 20)]
        chunk_size: u64,
        #[arg(long, hide = true)]
        stop_after_chunks: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count solutions for a list of hypotenuse bounds (CSV: gamma,theta_gp,theta_all).
    Count {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
        gamma_list: Vec<u64>,
        /// Also report the three-point exclusion rules side by side (to stderr).
        #[arg(long)]
        breakdown: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Hinson's counting function ν(p/q) for 0 < p < q.
    Nu {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Find a Pythagorean ratio in an interval, or sweep a range of intervals.
    DensityProbe {
        #[arg(long, allow_hyphen_values = true, requires = "hi")]
        lo: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "lo")]
        hi: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "-3")]
        from: String,
        #[arg(long, allow_hyphen_values = true, default_value = "3")]
        to: String,
        #[arg(long, default_value = "1/50")]
        width: String,
        #[arg(long, default_value_t = 100_000)]
        gamma_cap: u64,
    },
    /// Regression against the published example rows and counts.
    Tables {
        /// Print every discrepancy with its recomputed value.
        #[arg(long)]
        errata: bool,
        /// Skip the three-point count suite.
        #[arg(long)]
        skip_counts: bool,
        /// Also compare four-point counts in every mode for bounds up to G.
        #[arg(long, value_name = "G")]
        four_point_max: Option<u64>,
        #[arg(long, env = "RDS_WORKERS", default_value_t = default_workers())]
        workers: usize,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Ordered)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = GpArg::Annotate)]
    gp: GpArg,
    /// Which three-point sets count as degenerate.
    #[arg(long, value_enum, default_value_t = RuleArg::Symmetric)]
    three_point_rule: RuleArg,
    /// Leave the zero ratio out of the pool.
    #[arg(long)]
    no_zero: bool,
    #[arg(long, env = "RDS_WORKERS", default_value_t = default_workers())]
    workers: usize,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,
    /// Write records here instead of the output stream.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Ordered,
    Multiset,
    Subset,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GpArg {
    Off,
    Annotate,
    Require,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    /// Exclude {a, −a, 0}.
    Symmetric,
    /// Exclude x₁ + x₂ + x₃ = 0.
    Vertex,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Csv => Format::Csv,
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl SearchArgs {
    fn config(&self, gamma_bound: u64) -> SearchConfig {
        let mut c = SearchConfig::new(self.n, gamma_bound)
            .with_mode(match self.mode {
                ModeArg::Ordered => EnumerationMode::OrderedDedup,
                ModeArg::Multiset => EnumerationMode::MultisetDedup,
                ModeArg::Subset => EnumerationMode::SubsetOnly,
            })
            .with_gp(match self.gp {
                GpArg::Off => GpFilter::Off,
                GpArg::Annotate => GpFilter::Annotate,
                GpArg::Require => GpFilter::Require,
            })
            .with_workers(self.workers);
        c.include_zero = !self.no_zero;
        c.three_point_rule = match self.three_point_rule {
            RuleArg::Symmetric => ThreePointRule::SymmetricWithVertex,
            RuleArg::Vertex => ThreePointRule::ConcyclicWithVertex,
        };
        c
    }
}

/// A failure carrying its exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Display) -> Self {
        Exit { code: 2, message: message.to_string() }
    }

    fn failure(message: impl Display) -> Self {
        Exit { code: 1, message: message.to_string() }
    }
}

/// Maps I/O and library errors to a runtime failure.
fn fail<E: Display>(e: E) -> Exit {
    Exit::failure(e)
}

type CliResult = Result<i32, Exit>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Ctx<'_> {
    fn status(&self, s: RowStatus) -> String {
        if !self.color {
            return s.to_string();
        }
        let code = match s {
            RowStatus::Pass => "32",
            RowStatus::Erratum => "33",
            RowStatus::Fail => "31",
        };
        format!("\x1b[{code}m{s}\x1b[0m")
    }
}

/// Runs the CLI without color.
pub fn run_cli<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    run_cli_with_color(argv, out, err, false)
}

/// Runs the CLI; `color` is ignored when `NO_COLOR` is set.
pub fn run_cli_with_color<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32 {
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                2
            };
        }
    };
    let mut ctx = Ctx { out, err, color: color && !no_color };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx) -> CliResult {
    match command {
        Command::Triplets { gamma_max, growth, output } => cmd_triplets(ctx, gamma_max, &growth, &output),
        Command::Ratios { gamma_max, no_zero, output } => cmd_ratios(ctx, gamma_max, !no_zero, &output),
        Command::Solve { n, psi, free, json } => cmd_solve(ctx, n, &psi, free.as_deref(), json),
        Command::Complete { n, psi } => cmd_complete(ctx, n, &psi),
        Command::Verify { x } => cmd_verify(ctx, &x),
        Command::Search { search, gamma_max, checkpoint, chunk_size, stop_after_chunks, output } => {
            let mut config = search.config(gamma_max);
            config.checkpoint_path = checkpoint;
            cmd_search(ctx, &config, CheckpointOptions { chunk_size, stop_after_chunks }, &output)
        }
        Command::Count { search, gamma_list, breakdown, format } => {
            cmd_count(ctx, &search, &gamma_list, breakdown, format.into())
        }
        Command::Nu { p, q } => cmd_nu(ctx, p, q),
        Command::DensityProbe { lo, hi, from, to, width, gamma_cap } => {
            cmd_density(ctx, lo.zip(hi), (&from, &to, &width), gamma_cap)
        }
        Command::Tables { errata, skip_counts, four_point_max, workers } => {
            cmd_tables(ctx, errata, skip_counts, four_point_max, workers)
        }
    }
}

fn parse_rats(text: &str, what: &str) -> Result<Vec<Rat>, Exit> {
    parse_list(text).map_err(|e| Exit::usage(format!("--{what}: {e}")))
}

fn parse_rat(text: &str, what: &str) -> Result<Rat, Exit> {
    text.parse().map_err(|e| Exit::usage(format!("--{what}: {e}")))
}

fn parse_head(n: usize, psi: &str) -> Result<Vec<Rat>, Exit> {
    let head = parse_rats(psi, "psi")?;
    if n < 2 {
        return Err(Exit::usage(format!("--n must be at least 2; got {n}")));
    }
    if head.len() != n {
        return Err(Exit::usage(format!("--psi has {} entries, expected n = {n}", head.len())));
    }
    Ok(head)
}

/// Writes records to `--out` or the output stream.
fn emit(
    ctx: &mut Ctx,
    output: &OutputArgs,
    kind: PayloadKind,
    records: impl IntoIterator<Item = RecordEnvelope>,
) -> Result<usize, Exit> {
    let format = output.format.into();
    match &output.out {
        Some(path) => write_records(records, path, format, kind).map_err(fail),
        None => {
            let mut w = RecordWriter::new(&mut *ctx.out, format, kind, Path::new("<stdout>")).map_err(fail)?;
            for r in records {
                w.write(&r).map_err(fail)?;
            }
            Ok(w.written())
        }
    }
}

fn cmd_triplets(ctx: &mut Ctx, gamma_max: u64, growth: &[u64], output: &OutputArgs) -> CliResult {
    if !growth.is_empty() {
        writeln!(ctx.out, "gamma,primitive_count,pool_size,asymptotic").map_err(fail)?;
        for r in pool_growth_report(growth) {
            writeln!(ctx.out, "{},{},{},{:.1}", r.gamma, r.primitive_count, r.pool_size, r.asymptotic).map_err(fail)?;
        }
        return Ok(0);
    }
    let echo = config_echo(&json!({ "gamma_max": gamma_max }));
    let records = primitive_triplets(gamma_max).into_iter().map(|t| RecordEnvelope::new(&echo, Payload::Triplet(t)));
    emit(ctx, output, PayloadKind::Triplet, records)?;
    Ok(0)
}

fn cmd_ratios(ctx: &mut Ctx, gamma_max: u64, include_zero: bool, output: &OutputArgs) -> CliResult {
    let echo = config_echo(&json!({ "gamma_max": gamma_max, "include_zero": include_zero }));
    let mut entries: Vec<(Rat, Option<u64>)> = primitive_triplets(gamma_max)
        .iter()
        .flat_map(|t| ratios_of(t).into_iter().map(move |r| (r, Some(t.gamma as u64))))
        .collect();
    if include_zero {
        entries.push((Rat::zero(), None));
    }
    entries.sort();
    let records = entries.into_iter().map(|(psi, gamma)| {
        let class = classify_ratio(&psi).expect("pool entries are ratios").to_string();
        RecordEnvelope::new(&echo, Payload::Ratio(RatioRecord { psi, gamma, class }))
    });
    emit(ctx, output, PayloadKind::Ratio, records)?;
    Ok(0)
}

fn cmd_solve(ctx: &mut Ctx, n: usize, psi: &str, free: Option<&str>, json: bool) -> CliResult {
    let head = parse_head(n, psi)?;
    let free = free.map(|f| parse_rat(f, "free")).transpose()?;
    let outcome = solve(&head, free.as_ref()).map_err(Exit::usage)?;
    if json {
        let Some(solution) = outcome.solution else {
            return Err(Exit::failure("head does not yield a rational distance set"));
        };
        let echo = config_echo(&json!({ "n": n, "psi": format_list(&head) }));
        let line = serde_json::to_string(&RecordEnvelope::new(&echo, Payload::Solution(solution))).map_err(fail)?;
        writeln!(ctx.out, "{line}").map_err(fail)?;
        return Ok(0);
    }
    let o = &outcome;
    let failing: Vec<String> = o.existence.failing.iter().map(ToString::to_string).collect();
    let text = format!(
        "x: {}\ntail: {}\nexistence: {}\ndistinct: {}\ngeneral_position: {}\nrational_distance_set: {}\n",
        format_list(&o.x),
        format_list(&o.existence.tail),
        if o.existence.ok { "ok".to_string() } else { format!("fails at {}", failing.join(",")) },
        o.distinct,
        o.general_position,
        o.solution.is_some(),
    );
    ctx.out.write_all(text.as_bytes()).map_err(fail)?;
    if let Some(s) = &o.solution {
        writeln!(ctx.out, "distances: {}", format_list(&s.distances)).map_err(fail)?;
    }
    Ok(0)
}

fn cmd_complete(ctx: &mut Ctx, n: usize, psi: &str) -> CliResult {
    let head = parse_head(n, psi)?;
    if n < 3 {
        return Err(Exit::usage("completion needs n >= 3"));
    }
    let full = complete_psi(&head).map_err(Exit::usage)?;
    writeln!(ctx.out, "psi: {}", format_list(&full.entries)).map_err(fail)?;
    writeln!(ctx.out, "tail: {}", format_list(full.tail())).map_err(fail)?;
    writeln!(ctx.out, "all_ratios: {}", full.all_ratios()).map_err(fail)?;
    Ok(0)
}

fn cmd_verify(ctx: &mut Ctx, x: &str) -> CliResult {
    let x = parse_rats(x, "x")?;
    if x.len() < 2 {
        return Err(Exit::usage("--x needs at least two abscissae"));
    }
    let check = verify_rds(&x).map_err(Exit::failure)?;
    for p in &check.pairs {
        match &p.distance {
            Some(d) => writeln!(ctx.out, "pair ({},{}): distance {d}", p.i, p.j),
            None => writeln!(
                ctx.out,
                "pair ({},{}): irrational, sum {} with a²+b² = {} not a square",
                p.i, p.j, p.sum, p.leg_square_sum
            ),
        }
        .map_err(fail)?;
    }
    if let Some(d) = check.distances() {
        writeln!(ctx.out, "distances: {}", format_list(&d)).map_err(fail)?;
        Ok(0)
    } else {
        let pairs: Vec<String> = check.failing_pairs().iter().map(|(i, j)| format!("({i},{j})")).collect();
        Err(Exit::failure(format!("not a rational distance set; failing pairs {}", pairs.join(" "))))
    }
}

fn summary(report: &CountReport) -> String {
    let gp = report.theta_gp.map_or("-".to_string(), |g| g.to_string());
    format!(
        "n={} gamma_max={} mode={} pool={} heads={} visited={} valid={} theta_all={} theta_gp={} elapsed={:.2?}",
        report.n,
        report.gamma_bound,
        report.mode,
        report.pool_size,
        report.heads_total,
        report.heads_visited,
        report.heads_valid,
        report.theta_all,
        gp,
        report.elapsed
    )
}

fn cmd_search(ctx: &mut Ctx, config: &SearchConfig, options: CheckpointOptions, output: &OutputArgs) -> CliResult {
    let pool = crate::pythagorean::build_pool(config.gamma_bound, config.include_zero);
    let result = if config.checkpoint_path.is_some() {
        match search_with_checkpoint(config, &pool, options).map_err(fail)? {
            CheckpointRun::Complete(out) => out,
            CheckpointRun::Stopped { next_rank, heads_total } => {
                writeln!(ctx.err, "stopped at rank {next_rank} of {heads_total}; rerun to resume").map_err(fail)?;
                return Ok(0);
            }
        }
    } else {
        search(config, &pool).map_err(fail)?
    };
    let echo = config_echo(&config.echo());
    let records = result.solutions.into_iter().map(|s| RecordEnvelope::new(&echo, Payload::Solution(s)));
    emit(ctx, output, PayloadKind::Solution, records)?;
    writeln!(ctx.err, "{}", summary(&result.report)).map_err(fail)?;
    Ok(0)
}

fn cmd_count(ctx: &mut Ctx, args: &SearchArgs, gammas: &[u64], breakdown: bool, format: Format) -> CliResult {
    let mut w = RecordWriter::new(&mut *ctx.out, format, PayloadKind::Count, Path::new("<stdout>")).map_err(fail)?;
    for &gamma in gammas {
        let config = args.config(gamma);
        let pool = crate::pythagorean::build_pool(gamma, config.include_zero);
        let report = count_solutions(&config, &pool).map_err(fail)?;
        let mut echo = config_echo(&config.echo());
        echo.remove("gamma_max");
        let row = CountRow { gamma, theta_gp: report.theta_gp, theta_all: report.theta_all };
        w.write(&RecordEnvelope::new(&echo, Payload::Count(row))).map_err(fail)?;
        writeln!(ctx.err, "{}", summary(&report)).map_err(fail)?;
        if breakdown {
            if let Some(b) = &report.three_point {
                let extra: Vec<String> = b.concyclic_only.iter().map(|k| format!("{{{k}}}")).collect();
                writeln!(
                    ctx.err,
                    "  gamma={gamma} excluded {{a,-a,0}}: {}  excluded x1+x2+x3=0: {}  vertex rule only: {}",
                    b.symmetric_with_vertex,
                    b.concyclic_with_vertex,
                    if extra.is_empty() { "none".to_string() } else { extra.join(" ") }
                )
                .map_err(fail)?;
            }
        }
    }
    Ok(0)
}

fn cmd_nu(ctx: &mut Ctx, p: i64, q: i64) -> CliResult {
    let v = nu(p, q).map_err(Exit::usage)?;
    match v.triplet {
        Some(t) => writeln!(ctx.out, "{} {t}", v.value),
        None => writeln!(ctx.out, "{}", v.value),
    }
    .map_err(fail)?;
    Ok(0)
}

fn cmd_density(ctx: &mut Ctx, single: Option<(String, String)>, sweep: (&str, &str, &str), cap: u64) -> CliResult {
    let probe = IntervalProbe::new(cap);
    let intervals = match single {
        Some((lo, hi)) => vec![(parse_rat(&lo, "lo")?, parse_rat(&hi, "hi")?)],
        None => {
            let (from, to, width) =
                (parse_rat(sweep.0, "from")?, parse_rat(sweep.1, "to")?, parse_rat(sweep.2, "width")?);
            if !width.is_positive() || from >= to {
                return Err(Exit::usage("sweep needs --from < --to and a positive --width"));
            }
            let mut v = Vec::new();
            let mut lo = from;
            while lo < to {
                let hi = &lo + &width;
                v.push((lo, hi.clone()));
                lo = hi;
            }
            v
        }
    };
    writeln!(ctx.out, "lo,hi,psi,gamma").map_err(fail)?;
    let mut missing = 0;
    for (lo, hi) in &intervals {
        let found = probe.find(lo, hi).map_err(Exit::usage)?;
        let (psi, gamma) = match &found {
            Some(q) if q.is_zero() => ("0".to_string(), String::new()),
            Some(q) => (q.to_string(), crate::pythagorean::min_hypotenuse(q).map_err(fail)?.to_string()),
            None => {
                missing += 1;
                (String::new(), String::new())
            }
        };
        writeln!(ctx.out, "{lo},{hi},{psi},{gamma}").map_err(fail)?;
    }
    writeln!(ctx.err, "{} intervals, {missing} without a ratio of hypotenuse <= {cap}", intervals.len())
        .map_err(fail)?;
    Ok(0)
}

fn cmd_tables(
    ctx: &mut Ctx,
    errata: bool,
    skip_counts: bool,
    four_point_max: Option<u64>,
    workers: usize,
) -> CliResult {
    let mut ok = true;
    let mut notes = Vec::new();
    for r in examples_suite() {
        ok &= r.as_expected();
        let mark = if r.as_expected() { "" } else { " (unexpected)" };
        writeln!(ctx.out, "examples {}: {}{mark}", r.row.label, ctx.status(r.status)).map_err(fail)?;
        notes.extend(r.notes);
    }
    if !skip_counts {
        for r in three_point_suite(COUNT_ROWS, workers).map_err(fail)? {
            let (all, gp) = (r.all_status(), r.gp_status());
            ok &= all == RowStatus::Pass && gp != RowStatus::Fail;
            writeln!(
                ctx.out,
                "counts n=3 gamma={}: theta_all {} (search {}, closed form {}, printed {}); theta_gp {} (search {}, printed {}, vertex rule {})",
                r.row.gamma,
                ctx.status(all),
                r.searched_all,
                r.closed_form_all,
                r.row.theta3_all,
                ctx.status(gp),
                r.searched_gp,
                r.row.theta3_gp,
                r.vertex_rule_gp,
            )
            .map_err(fail)?;
            if gp == RowStatus::Erratum {
                let sets: Vec<String> = r.extra.iter().map(|k| format!("{{{k}}}")).collect();
                writeln!(ctx.out, "  +{} sets with x1+x2+x3=0: {}", r.extra.len(), sets.join(" ")).map_err(fail)?;
            }
        }
    }
    if let Some(limit) = four_point_max {
        let rows: Vec<_> = COUNT_ROWS.iter().copied().filter(|r| r.gamma <= limit).collect();
        for r in four_point_suite(&rows, workers).map_err(fail)? {
            let (all, gp) = r.matches();
            writeln!(
                ctx.out,
                "counts n=4 gamma={} mode={}: theta_all {} (printed {}, {}), theta_gp {} (printed {}, {})",
                r.row.gamma,
                r.mode,
                r.theta_all,
                r.row.theta4_all,
                if all { "match" } else { "differs" },
                r.theta_gp,
                r.row.theta4_gp,
                if gp { "match" } else { "differs" },
            )
            .map_err(fail)?;
        }
    }
    if errata {
        writeln!(ctx.out, "errata:").map_err(fail)?;
        for n in &notes {
            writeln!(
                ctx.out,
                "  {} {}: printed {} -> recomputed {} ({})",
                n.row, n.entry, n.printed, n.recomputed, n.detail
            )
            .map_err(fail)?;
        }
    }
    if ok {
        Ok(0)
    } else {
        Err(Exit::failure("regression results differ from expectations"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("rds").chain(args.iter().copied()).collect();
        let code = run_cli(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_examples() {
        let (code, out, _) = run(&["verify", "--x", "-4/15,8/5,4/5"]);
        assert_eq!(code, 0);
        assert!(out.contains("distances: 28/9,272/225,52/25"), "{out}");
        let (code, out, err) = run(&["verify", "--x", "38/15,-6/15,-2/15"]);
        assert_eq!(code, 1);
        assert!(out.contains("pair (1,2): irrational, sum 32/15") && out.contains("1249"));
        assert!(err.contains("(1,2)"));
    }

    #[test]
    fn nu_and_usage_errors() {
        assert_eq!(run(&["nu", "--p", "1", "--q", "2"]), (0, "1 (3,4,5)\n".into(), String::new()));
        assert_eq!(run(&["nu", "--p", "2", "--q", "1"]).0, 2);
        assert_eq!(run(&["verify", "--x", "1/0,2"]).0, 2);
        assert_eq!(run(&["solve", "--n", "3", "--psi", "1,2"]).0, 2);
        assert_eq!(run(&["triplets", "--gamma-max", "5", "--bogus"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        let (code, out, _) = run(&["--help"]);
        assert!(code == 0 && out.contains("density-probe"));
    }

    #[test]
    fn solve_and_complete() {
        let (code, out, _) = run(&["solve", "--n", "4", "--psi", "-35/12,-4/3,-7/24,-3/4"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("x: -7/4,-7/6,5/12,35/24\ntail: 7/24,15/8\n"), "{out}");
        assert!(out.contains("rational_distance_set: true"));
        let (_, out, _) = run(&["complete", "--n", "3", "--psi", "4/3,8/15,12/5"]);
        assert!(out.contains("all_ratios: true"));
        let (code, out, _) = run(&["solve", "--n", "4", "--psi", "-35/12,-4/3,-7/24,-3/4", "--json"]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""kind":"solution""#));
    }

    #[test]
    fn triplets_and_ratios() {
        let (_, out, _) = run(&["triplets", "--gamma-max", "13"]);
        assert_eq!(out.lines().count(), 2);
        assert!(out.lines().next().unwrap().ends_with(r#""kind":"triplet","payload":{"alpha":3,"beta":4,"gamma":5}}"#));
        let (_, out, _) = run(&["triplets", "--gamma-max", "13", "--format", "csv"]);
        assert_eq!(out, "alpha,beta,gamma\n3,4,5\n5,12,13\n");
        let (_, out, _) = run(&["ratios", "--gamma-max", "5", "--format", "csv"]);
        assert_eq!(
            out,
            "psi,gamma,class\n-4/3,5,negative/naturally_ordered\n-3/4,5,negative/oppositely_ordered\n0,,zero/none\n3/4,5,positive/oppositely_ordered\n4/3,5,positive/naturally_ordered\n"
        );
        let (_, out, _) = run(&["ratios", "--gamma-max", "5", "--no-zero"]);
        assert_eq!(out.lines().count(), 4);
        assert!(out.contains(r#""psi":"4/3","gamma":5,"class":"positive/naturally_ordered""#));
    }

    #[test]
    fn count_csv() {
        let (code, out, _) = run(&["count", "--n", "3", "--gamma-list", "25,29", "--workers", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "gamma,theta_gp,theta_all\n25,672,680\n29,1320,1330\n");
    }

    #[test]
    fn density_probe_single() {
        let (code, out, _) = run(&["density-probe", "--lo", "1/2", "--hi", "1", "--gamma-cap", "100"]);
        assert_eq!(code, 0);
        assert_eq!(out, "lo,hi,psi,gamma\n1/2,1,3/4,5\n");
    }

    #[test]
    fn tables_examples_only() {
        let (code, out, _) = run(&["tables", "--skip-counts", "--errata"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("examples N=4 row 1: PASS"));
        assert!(out.contains("examples N=3 row 2: ERRATUM"));
        assert!(out.contains("printed 15/5 -> recomputed 12/5"));
    }
}
