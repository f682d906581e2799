//! Independent oracles and property checks shared by the integration tests
//! and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rds_core::cli::run_cli;
use rds_core::linalg::RatMatrix;
use rds_core::number::Rat;
use rds_core::pythagorean::{build_pool, nu, RatioPool};
use rds_core::search::{partition_space, search, SearchConfig};
use rds_core::solver::{
    check_distinct, check_existence, coefficient_matrix, complete_psi, head_inverse, indices_set, psi_from_x, solve_x,
    verify_rds,
};

pub const CASES: u32 = 10_000;

pub type PropResult = Result<(), String>;

fn run_prop<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> PropResult
where
    S::Value: std::fmt::Debug,
{
    let mut config = Config::with_cases(cases);
    config.failure_persistence = None;
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

/// Runs the CLI in-process: `(exit code, stdout, stderr)`.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<&str> = std::iter::once("rds").chain(args.iter().copied()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn rat(s: &str) -> Rat {
    s.parse().unwrap()
}

pub fn rats(s: &str) -> Vec<Rat> {
    s.split(',').map(rat).collect()
}

/// A fraction that is never reduced; equality by cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Naive {
    pub num: i128,
    pub den: i128,
}

impl Naive {
    pub fn add(self, o: Naive) -> Naive {
        Naive { num: self.num * o.den + o.num * self.den, den: self.den * o.den }
    }
    pub fn sub(self, o: Naive) -> Naive {
        Naive { num: self.num * o.den - o.num * self.den, den: self.den * o.den }
    }
    pub fn mul(self, o: Naive) -> Naive {
        Naive { num: self.num * o.num, den: self.den * o.den }
    }
    pub fn div(self, o: Naive) -> Naive {
        Naive { num: self.num * o.den, den: self.den * o.num }
    }
    pub fn same_as(self, r: &Rat) -> bool {
        // num/den == p/q  <=>  num·q == p·den, with den possibly negative.
        BigInt::from(self.num) * r.denom() == r.numer() * BigInt::from(self.den)
    }
    /// Sign of `self − o`.
    pub fn cmp(self, o: Naive) -> std::cmp::Ordering {
        let lhs = self.num * o.den;
        let rhs = o.num * self.den;
        if (self.den < 0) ^ (o.den < 0) {
            rhs.cmp(&lhs)
        } else {
            lhs.cmp(&rhs)
        }
    }
}

/// Perfect-square test by scanning roots.
pub fn square_by_scan(n: u128) -> bool {
    let mut r: u128 = 0;
    while r * r < n {
        r += 1;
    }
    r * r == n
}

/// Pair sums computed directly, in lexicographic pair order.
pub fn pair_sums(x: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            out.push(&x[i] + &x[j]);
        }
    }
    out
}

/// `ν(p/q)` by scanning `α = 1, 2, ...` until `α² + (α + p)² − (α + q)²`
/// turns positive; it is increasing past its vertex, so no root lies beyond.
pub fn nu_scan(p: i64, q: i64) -> Option<(i64, i64, i64)> {
    for alpha in 1..=1_000_000i64 {
        let f = alpha * alpha + (alpha + p) * (alpha + p) - (alpha + q) * (alpha + q);
        if f == 0 {
            return Some((alpha, alpha + p, alpha + q));
        }
        if f > 0 && alpha > q {
            return None;
        }
    }
    None
}

/// Every 3-subset of the pool that the distance oracle accepts, as sorted
/// abscissae. Uses no solver or search code.
pub fn brute_three_sets(pool: &RatioPool) -> BTreeSet<Vec<Rat>> {
    let r = &pool.ratios;
    let mut out = BTreeSet::new();
    // Any three points with pair sums a, b, c from the pool:
    // x = ((a + b − c)/2, (a − b + c)/2, (−a + b + c)/2).
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            for k in j + 1..r.len() {
                let (a, b, c) = (&r[i], &r[j], &r[k]);
                let mut x = vec![(a + b - c).half(), (a - b + c).half(), (-a + b + c).half()];
                if x[0] == x[1] || x[0] == x[2] || x[1] == x[2] {
                    continue;
                }
                if verify_rds(&x).unwrap().ok() {
                    x.sort();
                    out.insert(x);
                }
            }
        }
    }
    out
}

pub fn pool145() -> &'static RatioPool {
    static POOL: OnceLock<RatioPool> = OnceLock::new();
    POOL.get_or_init(|| build_pool(145, true))
}

/// Known four-point sets, used to seed heads that pass every condition.
fn known_sets() -> &'static Vec<Vec<Rat>> {
    static SETS: OnceLock<Vec<Vec<Rat>>> = OnceLock::new();
    SETS.get_or_init(|| {
        let pool = build_pool(29, true);
        search(&SearchConfig::new(4, 29), &pool).unwrap().solutions.into_iter().map(|s| s.x).collect()
    })
}

fn pool_head() -> impl Strategy<Value = Vec<Rat>> {
    let m = pool145().len();
    (3usize..=8)
        .prop_flat_map(move |n| vec(0..m, n))
        .prop_map(|idx| idx.into_iter().map(|i| pool145().ratios[i].clone()).collect())
}

/// Heads from the pool, plus heads of known solutions under random relabeling.
fn mixed_head() -> impl Strategy<Value = Vec<Rat>> {
    let known = known_sets().len();
    prop_oneof![
        3 => pool_head(),
        1 => (0..known, Just((0..4).collect::<Vec<usize>>()).prop_shuffle()).prop_map(|(s, perm)| {
            let x: Vec<Rat> = perm.iter().map(|&i| known_sets()[s][i].clone()).collect();
            psi_from_x(&x)[..4].to_vec()
        }),
    ]
}

pub fn prop_pair_sum_identity() -> PropResult {
    run_prop(CASES, pool_head(), |head| {
        let n = head.len();
        let x = solve_x(&head, None).unwrap();
        let sums = pair_sums(&x);
        let pairs = indices_set(n).unwrap();
        // Head positions hold the first n pairs.
        for (k, h) in head.iter().enumerate() {
            let (i, j) = pairs.pairs()[k];
            prop_assert_eq!(&(&x[i - 1] + &x[j - 1]), h);
        }
        let c = coefficient_matrix(n).unwrap();
        let cx = c.matrix().mul_vec(&x);
        prop_assert_eq!(&cx, &sums);
        prop_assert_eq!(&complete_psi(&head).unwrap().entries, &sums);
        Ok(())
    })
}

pub fn prop_oracle_equivalence() -> PropResult {
    run_prop(CASES, mixed_head(), |head| {
        let x = solve_x(&head, None).unwrap();
        let distinct = check_distinct(&x);
        let exists = check_existence(&head).unwrap().ok;
        let oracle = distinct && verify_rds(&x).unwrap().ok();
        prop_assert_eq!(exists && distinct, oracle, "head {:?} x {:?}", head, x);
        Ok(())
    })
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-500i64..500, 1i64..200).prop_map(|(a, b)| Rat::new(a, b).unwrap())
}

/// Deterministic checks for `3 ≤ n ≤ 12`, then `head_inverse · v = solve_x(v)`
/// on random vectors.
pub fn prop_inverse_det_rank() -> PropResult {
    for n in 3..=12 {
        let c = coefficient_matrix(n).map_err(|e| e.to_string())?;
        let top = c.top_block();
        let inv = head_inverse(n).map_err(|e| e.to_string())?;
        if &inv * &top != RatMatrix::identity(n) {
            return Err(format!("head_inverse({n}) is not a left inverse"));
        }
        if &top * &inv != RatMatrix::identity(n) {
            return Err(format!("head_inverse({n}) is not a right inverse"));
        }
        let det = top.determinant();
        let expected = Rat::from(if n % 2 == 0 { 2 } else { -2 });
        if det != expected {
            return Err(format!("det of top block for n={n} is {det}, expected {expected}"));
        }
        if c.rank() != n {
            return Err(format!("rank for n={n} is {}", c.rank()));
        }
    }
    if coefficient_matrix(2).map_err(|e| e.to_string())?.rank() != 1 {
        return Err("rank for n=2 is not 1".into());
    }
    run_prop(CASES, (3usize..=12).prop_flat_map(|n| vec(small_rat(), n)), |v| {
        let inv = head_inverse(v.len()).unwrap();
        prop_assert_eq!(inv.mul_vec(&v), solve_x(&v, None).unwrap());
        Ok(())
    })
}

/// Closed form against the scan for every `0 < p < q ≤ 200`.
pub fn prop_nu_closed_form() -> PropResult {
    for q in 2..=200i64 {
        for p in 1..q {
            let v = nu(p, q).map_err(|e| e.to_string())?;
            let scanned = nu_scan(p, q);
            let got = v.triplet.map(|t| (t.alpha, t.beta, t.gamma));
            if u8::from(scanned.is_some()) != v.value || got != scanned {
                return Err(format!("nu({p}, {q}) = {} {:?}, scan found {:?}", v.value, got, scanned));
            }
        }
    }
    Ok(())
}

pub fn prop_round_trip() -> PropResult {
    let distinct_x = (3usize..=8).prop_flat_map(|n| vec(small_rat(), n)).prop_filter("distinct", |x| check_distinct(x));
    run_prop(CASES, distinct_x, |x| {
        let head = &psi_from_x(&x)[..x.len()];
        prop_assert_eq!(solve_x(head, None).unwrap(), x);
        Ok(())
    })
}

pub fn prop_relabeling_invariance() -> PropResult {
    run_prop(CASES, mixed_head(), |head| {
        let x = solve_x(&head, None).unwrap();
        prop_assume!(check_distinct(&x));
        let ok = verify_rds(&x).unwrap().ok();
        let mut reversed = x.clone();
        reversed.reverse();
        let mut rotated = x.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(verify_rds(&reversed).unwrap().ok(), ok);
        prop_assert_eq!(verify_rds(&rotated).unwrap().ok(), ok);
        Ok(())
    })
}

/// `(r, ψ − r)` is a rational distance set for every ratio ψ and rational r.
pub fn prop_two_point_family() -> PropResult {
    let pool = build_pool(145, false);
    for psi in &pool.ratios {
        let result = run_prop(100, small_rat(), |r| {
            let x = solve_x(std::slice::from_ref(psi), Some(&r)).unwrap();
            prop_assume!(x[0] != x[1]);
            prop_assert!(verify_rds(&x).unwrap().ok());
            Ok(())
        });
        result.map_err(|e| format!("psi {psi}: {e}"))?;
    }
    Ok(())
}

pub fn prop_partition() -> PropResult {
    run_prop(CASES, (0u64..1_000_000, 1usize..64), |(total, workers)| {
        let parts = partition_space(total, workers);
        prop_assert_eq!(parts.len(), workers);
        prop_assert_eq!(parts.first().unwrap().start, 0);
        prop_assert_eq!(parts.last().unwrap().end, total);
        for w in parts.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
        let sizes: Vec<u64> = parts.iter().map(|r| r.end - r.start).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        Ok(())
    })
}

/// Runs `search` through the CLI, writing to `out`.
pub fn cli_search(n: usize, gamma: u64, workers: usize, extra: &[&str], out: &Path) -> (i32, String) {
    let (n, gamma, workers) = (n.to_string(), gamma.to_string(), workers.to_string());
    let mut args = vec!["search", "--n", &n, "--gamma-max", &gamma, "--workers", &workers, "--out"];
    let out = out.to_str().unwrap();
    args.push(out);
    args.extend_from_slice(extra);
    let (code, _, err) = cli(&args);
    (code, err)
}

/// Byte-identical search output for each worker count.
pub fn prop_worker_determinism(n: usize, gamma: u64, workers: &[usize]) -> PropResult {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for &w in workers {
        let path = dir.path().join(format!("w{w}.jsonl"));
        let (code, err) = cli_search(n, gamma, w, &[], &path);
        if code != 0 {
            return Err(format!("search with {w} workers failed: {err}"));
        }
        outputs.push((w, std::fs::read(&path).map_err(|e| e.to_string())?));
    }
    for (w, bytes) in &outputs[1..] {
        if bytes != &outputs[0].1 {
            return Err(format!("output with {w} workers differs from {} workers", outputs[0].0));
        }
    }
    if outputs[0].1.is_empty() {
        return Err("search produced no output".into());
    }
    Ok(())
}

/// Interrupt at random chunk boundaries, resume, and compare with an
/// uninterrupted run.
pub fn prop_checkpoint_resume(cases: u32) -> PropResult {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let reference = dir.path().join("reference.jsonl");
    let (code, err) = cli_search(4, 25, 1, &[], &reference);
    if code != 0 {
        return Err(err);
    }
    let expected = std::fs::read(&reference).map_err(|e| e.to_string())?;
    let counter = std::sync::atomic::AtomicUsize::new(0);
    run_prop(cases, (500u64..20_000, 1u64..6, 1usize..4), |(chunk, stops, workers)| {
        let case = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let state = dir.path().join(format!("case{case}.json"));
        let out = dir.path().join(format!("case{case}.jsonl"));
        let (state_s, chunk_s, stops_s) = (state.to_str().unwrap(), chunk.to_string(), stops.to_string());
        // Each interrupted invocation advances `stops` chunks.
        let mut rounds = 0;
        loop {
            let (code, err) = cli_search(
                4,
                25,
                workers,
                &["--checkpoint", state_s, "--chunk-size", &chunk_s, "--stop-after-chunks", &stops_s],
                &out,
            );
            prop_assert_eq!(code, 0, "{}", err);
            rounds += 1;
            if !err.contains("stopped at rank") {
                break;
            }
            prop_assert!(rounds < 10_000);
        }
        prop_assert_eq!(std::fs::read(&out).unwrap(), expected.clone());
        Ok(())
    })
}
