mod common;

use std::collections::BTreeSet;

use rds_core::pythagorean::build_pool;
use rds_core::search::{count_solutions, search, EnumerationMode, GpFilter, SearchConfig};
use rds_core::solver::verify_rds;

#[test]
fn three_point_search_is_complete() {
    let pool = build_pool(25, true);
    let found: BTreeSet<_> =
        search(&SearchConfig::new(3, 25), &pool).unwrap().solutions.into_iter().map(|s| s.key().0).collect();
    let brute = common::brute_three_sets(&pool);
    assert_eq!(brute.len(), 680);
    assert_eq!(found, brute);
}

#[test]
fn every_emitted_solution_passes_the_oracle() {
    let pool = build_pool(41, true);
    for mode in EnumerationMode::ALL {
        let out = search(&SearchConfig::new(4, 41).with_mode(mode), &pool).unwrap();
        assert_eq!(out.solutions.len() as u64, out.report.theta_all);
        for s in &out.solutions {
            assert!(verify_rds(&s.x).unwrap().ok(), "{:?}", s.x);
        }
    }
}

#[test]
fn counts_grow_with_the_pool() {
    for n in [3, 4] {
        let mut last = 0;
        for gamma in [5, 13, 17, 25, 29, 37, 41] {
            let c = count_solutions(&SearchConfig::new(n, gamma), &build_pool(gamma, true)).unwrap();
            assert!(c.theta_all >= last, "n={n} gamma={gamma}");
            last = c.theta_all;
        }
    }
}

#[test]
fn modes_nest() {
    // Subset heads are multiset heads are ordered heads.
    let pool = build_pool(29, true);
    let sets = |mode| -> BTreeSet<_> {
        let config = SearchConfig::new(4, 29).with_mode(mode).with_gp(GpFilter::Off);
        search(&config, &pool).unwrap().solutions.into_iter().map(|s| s.key()).collect()
    };
    let (o, m, s) =
        (sets(EnumerationMode::OrderedDedup), sets(EnumerationMode::MultisetDedup), sets(EnumerationMode::SubsetOnly));
    assert!(s.is_subset(&m) && m.is_subset(&o));
}

#[test]
fn partition_covers_the_space() {
    common::prop_partition().unwrap();
}

#[test]
fn output_is_identical_across_worker_counts() {
    common::prop_worker_determinism(4, 25, &[1, 2, 8]).unwrap();
    common::prop_worker_determinism(3, 29, &[1, 8]).unwrap();
}

#[test]
fn interrupted_searches_resume_to_identical_output() {
    common::prop_checkpoint_resume(12).unwrap();
}
