//! Search against the brute-force oracle and the tiling-core validators.

use num_integer::Integer;

use sl2_core::catalog::Z36_BLOCK;
use sl2_core::search::{
    brute_force_oracle, brute_force_oracle_for, canonical_translation, is_fully_wild_block,
    search_fully_wild, validate_block, SearchConfig, SearchResult, SearchTarget,
};
use sl2_core::tiling::{corner_audit, dodgson_audit, verify_sl2, wildness_report, TilingModel};

fn config(n: u64, rows: usize, cols: usize, prune: bool) -> SearchConfig {
    let mut c = SearchConfig::new(n);
    c.rows = rows;
    c.cols = cols;
    c.prune_nonunits = prune;
    c
}

fn z36() -> Vec<u64> {
    Z36_BLOCK.iter().flatten().map(|&x| x as u64).collect()
}

fn seeded_z36() -> SearchResult {
    let mut c = config(36, 4, 4, true);
    c.first_row = Some(vec![3, 2, 33, 34]);
    search_fully_wild(&c).unwrap()
}

#[test]
fn fully_wild_search_matches_oracle() {
    let mut cases: Vec<(u64, usize, usize)> = (2..=6).map(|n| (n, 2, 2)).collect();
    cases.extend([(2, 4, 4), (3, 4, 4), (4, 3, 3), (6, 3, 3), (4, 3, 4)]);
    for (n, h, w) in cases {
        let oracle = brute_force_oracle(n, h, w, false).unwrap();
        for prune in [false, true] {
            let s = search_fully_wild(&config(n, h, w, prune)).unwrap();
            assert_eq!(
                s.solutions, oracle.solutions,
                "N = {n}, {h}x{w}, prune = {prune}"
            );
            assert!(!s.stats.budget_exhausted);
        }
    }
}

#[test]
fn propagation_matches_oracle_on_nonempty_sets() {
    for (n, h, w, expected) in [
        (2, 2, 2, 2),
        (4, 3, 3, 8),
        (6, 3, 3, 20),
        (2, 4, 4, 10),
        (3, 4, 4, 70),
    ] {
        let oracle = brute_force_oracle_for(SearchTarget::AnySl2, n, h, w, false).unwrap();
        let mut c = config(n, h, w, false);
        c.target = SearchTarget::AnySl2;
        let s = search_fully_wild(&c).unwrap();
        assert_eq!(s.solutions, oracle.solutions, "N = {n}, {h}x{w}");
        assert_eq!(s.solutions.len(), expected);
    }
}

#[test]
fn prime_moduli_have_no_fully_wild_blocks() {
    for n in [2, 3, 5, 7, 11] {
        assert!(search_fully_wild(&config(n, 4, 4, false))
            .unwrap()
            .solutions
            .is_empty());
        assert!(brute_force_oracle(n, 2, 2, false)
            .unwrap()
            .solutions
            .is_empty());
    }
    assert!(search_fully_wild(&config(13, 3, 4, false))
        .unwrap()
        .solutions
        .is_empty());
}

#[test]
fn z36_block_passes_the_validator() {
    assert!(validate_block(&z36(), 4, 4, 36));
    assert!(is_fully_wild_block(
        &sl2_core::catalog::z36_tiling()
            .extract_window(0, 0, 4, 4)
            .matrix
    ));
    let r = seeded_z36();
    assert!(r.solutions.contains(&canonical_translation(&z36(), 4, 4)));
}

#[test]
fn emitted_solutions_reverify_and_are_non_units() {
    let r = seeded_z36();
    assert!(!r.solutions.is_empty());
    for k in 0..r.solutions.len().min(200) {
        let t = TilingModel::periodic(r.block_matrix(k));
        assert!(verify_sl2(&t).is_ok());
        assert_eq!(wildness_report(&t, 0, 0, 4, 4).wild_count(), 16);
        assert!(dodgson_audit(&t, 0, 0, 8, 8).is_ok());
        assert!(corner_audit(&t, 0, 0, 8, 8).is_ok());
        assert!(r.solutions[k].iter().all(|x| x.gcd(&36) != 1));
    }
}

#[test]
fn output_is_independent_of_worker_count() {
    let run = |jobs| {
        let mut c = config(6, 3, 4, false);
        c.worker_count = jobs;
        c.target = SearchTarget::AnySl2;
        let r = search_fully_wild(&c).unwrap();
        (r.solutions, r.stats.nodes)
    };
    let one = run(1);
    assert!(!one.0.is_empty());
    assert_eq!(one, run(2));
    assert_eq!(one, run(4));
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(search_fully_wild(&config(1, 4, 4, false)).is_err());
    assert!(search_fully_wild(&config(6, 1, 4, false)).is_err());
    let mut c = config(6, 2, 2, false);
    c.worker_count = 0;
    assert!(search_fully_wild(&c).is_err());
    c.worker_count = 1;
    c.first_row = Some(vec![1, 2, 3]);
    assert!(search_fully_wild(&c).is_err());
    c.first_row = Some(vec![1, 6]);
    assert!(search_fully_wild(&c).is_err());
}
