//! Exhaustive search for periodic blocks over `Z/NZ` in which every entry is
//! wild, with a brute-force enumeration as an oracle.
//!
//! A block is an `h x w` array of residues read as the period of a tiling.
//! Row 0 and column 0 are chosen freely; every other cell `x` satisfies
//! `nw * x = 1 + ne * sw (mod N)` for its 2x2 window, so the branching there
//! is `gcd(nw, N)`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{solve_linear_congruence, CongruenceSolutions, Matrix, RingSpec, RingValue};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("{0}")]
    TooLarge(String),
}

/// The solutions `x` of `nw * x = 1 + ne * sw (mod n)`.
pub fn propagate_cell(nw: u64, ne: u64, sw: u64, n: u64) -> CongruenceSolutions {
    let c = ((1 + ne as u128 * sw as u128) % n as u128) as u64;
    solve_linear_congruence(nw, c, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub modulus: u64,
    pub rows: usize,
    pub cols: usize,
    /// Restrict every cell to non-units of `Z/N`.
    pub prune_nonunits: bool,
    /// Upper bound on the number of cells assigned.
    pub node_budget: Option<u64>,
    pub worker_count: usize,
    /// Fixes row 0 instead of enumerating it.
    pub first_row: Option<Vec<u64>>,
    pub target: SearchTarget,
}

/// Which blocks count as solutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchTarget {
    /// SL2 blocks in which every entry is wild.
    #[default]
    FullyWild,
    /// Every SL2 block; exercises the propagation on non-empty solution sets.
    AnySl2,
}

impl SearchConfig {
    pub fn new(modulus: u64) -> Self {
        SearchConfig {
            modulus,
            rows: 4,
            cols: 4,
            prune_nonunits: false,
            node_budget: None,
            worker_count: 1,
            first_row: None,
            target: SearchTarget::FullyWild,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        if self.modulus < 2 || self.modulus > u32::MAX as u64 {
            return bad(format!(
                "modulus must lie in [2, 2^32), got {}",
                self.modulus
            ));
        }
        if self.rows < 2 || self.cols < 2 {
            return bad(format!(
                "block must be at least 2x2, got {}x{}",
                self.rows, self.cols
            ));
        }
        if self.worker_count == 0 {
            return bad("worker count must be at least 1".into());
        }
        if let Some(row) = &self.first_row {
            if row.len() != self.cols {
                return bad(format!(
                    "first row has {} entries, expected {}",
                    row.len(),
                    self.cols
                ));
            }
            if let Some(v) = row.iter().find(|&&v| v >= self.modulus) {
                return bad(format!(
                    "first-row entry {v} is not a residue mod {}",
                    self.modulus
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub budget_exhausted: bool,
}

/// Canonical solutions, each a row-major block, in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub modulus: u64,
    pub rows: usize,
    pub cols: usize,
    pub solutions: Vec<Vec<u64>>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn block_matrix(&self, k: usize) -> Matrix {
        block_to_matrix(&self.solutions[k], self.rows, self.cols, self.modulus)
    }
}

pub fn block_to_matrix(block: &[u64], rows: usize, cols: usize, n: u64) -> Matrix {
    let spec = RingSpec::modular(n).expect("modulus at least 2");
    Matrix::from_fn(rows, cols, |i, j| {
        RingValue::from_int(spec, block[i * cols + j])
    })
    .unwrap()
}

/// Shape and modulus of a block, with wrapped index arithmetic.
#[derive(Clone, Copy)]
struct Torus {
    h: usize,
    w: usize,
    n: u64,
}

impl Torus {
    fn at(&self, b: &[u64], i: usize, j: usize) -> u64 {
        b[(i % self.h) * self.w + (j % self.w)]
    }

    fn det2_is_one(&self, b: &[u64], i: usize, j: usize) -> bool {
        let (a, c) = (self.at(b, i, j) as u128, self.at(b, i, j + 1) as u128);
        let (d, e) = (
            self.at(b, i + 1, j) as u128,
            self.at(b, i + 1, j + 1) as u128,
        );
        let n = self.n as u128;
        (a * e % n + n - c * d % n) % n == 1 % n
    }

    /// 3x3 determinant centred at `(i, j)`, indices taken mod the shape.
    fn det3(&self, b: &[u64], i: usize, j: usize) -> u64 {
        let (h, w) = (self.h, self.w);
        let g = |di: usize, dj: usize| self.at(b, i + h + di - 1, j + w + dj - 1) as u128;
        let n = self.n as u128;
        let minor = |a: u128, b: u128, c: u128, d: u128| (a * d % n + n - b * c % n) % n;
        let t0 = g(0, 0) * minor(g(1, 1), g(1, 2), g(2, 1), g(2, 2)) % n;
        let t1 = g(0, 1) * minor(g(1, 0), g(1, 2), g(2, 0), g(2, 2)) % n;
        let t2 = g(0, 2) * minor(g(1, 0), g(1, 1), g(2, 0), g(2, 1)) % n;
        ((t0 + n - t1 + t2) % n) as u64
    }
}

/// Whether a block is the period of an SL2-tiling over `Z/N` in which every
/// entry is wild.
pub fn validate_block(block: &[u64], rows: usize, cols: usize, n: u64) -> bool {
    let t = Torus {
        h: rows,
        w: cols,
        n,
    };
    is_sl2_block(block, rows, cols, n)
        && (0..rows).all(|i| (0..cols).all(|j| t.det3(block, i, j) != 0))
}

/// Whether every wrapped 2x2 minor of the block equals 1 mod `n`.
pub fn is_sl2_block(block: &[u64], rows: usize, cols: usize, n: u64) -> bool {
    let t = Torus {
        h: rows,
        w: cols,
        n,
    };
    assert_eq!(block.len(), rows * cols);
    (0..rows).all(|i| (0..cols).all(|j| t.det2_is_one(block, i, j)))
}

fn accepts(target: SearchTarget, block: &[u64], rows: usize, cols: usize, n: u64) -> bool {
    match target {
        SearchTarget::FullyWild => validate_block(block, rows, cols, n),
        SearchTarget::AnySl2 => is_sl2_block(block, rows, cols, n),
    }
}

/// [`validate_block`] for a matrix over `Z/N`.
pub fn is_fully_wild_block(m: &Matrix) -> bool {
    let RingSpec::Modular(n) = m.spec() else {
        return false;
    };
    let block: Vec<u64> = m
        .entries()
        .iter()
        .map(|v| match v {
            RingValue::Mod(r) => r.value(),
            _ => unreachable!(),
        })
        .collect();
    validate_block(&block, m.rows(), m.cols(), n.get())
}

/// Least row-major block among the `h * w` torus translations.
pub fn canonical_translation(block: &[u64], rows: usize, cols: usize) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for di in 0..rows {
        for dj in 0..cols {
            let shifted: Vec<u64> = (0..rows * cols)
                .map(|k| block[((k / cols + di) % rows) * cols + (k % cols + dj) % cols])
                .collect();
            if best.as_ref().is_none_or(|b| shifted < *b) {
                best = Some(shifted);
            }
        }
    }
    best.unwrap()
}

fn is_nonunit(x: u64, n: u64) -> bool {
    x.gcd(&n) != 1
}

struct Worker<'a> {
    t: Torus,
    prune: bool,
    wild: bool,
    budget: Option<u64>,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
    block: Vec<u64>,
    found: BTreeSet<Vec<u64>>,
}

impl Worker<'_> {
    /// Claims one node; false once the budget is spent.
    fn step(&mut self) -> bool {
        let prev = self.nodes.fetch_add(1, Ordering::Relaxed);
        if self.budget.is_some_and(|b| prev >= b) {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn free_values(&self) -> impl Iterator<Item = u64> + use<> {
        let (n, prune) = (self.t.n, self.prune);
        (0..n).filter(move |&x| !prune || is_nonunit(x, n))
    }

    fn dfs(&mut self, k: usize) {
        let (h, w) = (self.t.h, self.t.w);
        if k == h * w {
            self.finish();
            return;
        }
        let (i, j) = (k / w, k % w);
        let candidates: Vec<u64> = if i == 0 || j == 0 {
            self.free_values().collect()
        } else {
            let b = &self.block;
            propagate_cell(b[k - w - 1], b[k - w], b[k - 1], self.t.n)
                .iter()
                .filter(|&x| !self.prune || is_nonunit(x, self.t.n))
                .collect()
        };
        for x in candidates {
            if self.exhausted.load(Ordering::Relaxed) || !self.step() {
                return;
            }
            self.block[k] = x;
            if self.consistent(i, j) {
                self.dfs(k + 1);
            }
        }
    }

    /// Constraints that became decidable when `(i, j)` was filled.
    fn consistent(&self, i: usize, j: usize) -> bool {
        let (t, b) = (self.t, &self.block);
        if self.wild && i >= 2 && j >= 2 && t.det3(b, i - 1, j - 1) == 0 {
            return false;
        }
        if j == t.w - 1 && i >= 1 {
            // Row i is complete: wrapped window across the last column.
            if !t.det2_is_one(b, i - 1, t.w - 1) {
                return false;
            }
            if self.wild && i >= 2 && (t.det3(b, i - 1, 0) == 0 || t.det3(b, i - 1, t.w - 1) == 0) {
                return false;
            }
        }
        true
    }

    fn finish(&mut self) {
        let t = self.t;
        let target = if self.wild {
            SearchTarget::FullyWild
        } else {
            SearchTarget::AnySl2
        };
        if accepts(target, &self.block, t.h, t.w, t.n) {
            self.found
                .insert(canonical_translation(&self.block, t.h, t.w));
        }
    }
}

/// Depth-first search over all blocks of the configured shape. The forest is
/// split by the value of the top-left cell across `worker_count` threads;
/// the merged solution set is sorted, so without a budget the output does not
/// depend on the number of workers. With a budget, up to `worker_count - 1`
/// claims beyond it may be counted but are never explored.
pub fn search_fully_wild(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    let start = Instant::now();
    let t = Torus {
        h: config.rows,
        w: config.cols,
        n: config.modulus,
    };
    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let make_worker = || Worker {
        t,
        prune: config.prune_nonunits,
        wild: config.target == SearchTarget::FullyWild,
        budget: config.node_budget,
        nodes: &nodes,
        exhausted: &exhausted,
        block: vec![0; t.h * t.w],
        found: BTreeSet::new(),
    };

    let found: BTreeSet<Vec<u64>> = if let Some(row) = &config.first_row {
        let mut wk = make_worker();
        let fits = row.iter().all(|&x| !wk.prune || is_nonunit(x, t.n));
        if fits {
            wk.block[..t.w].copy_from_slice(row);
            let claimed = (0..t.w).all(|_| wk.step());
            if claimed {
                wk.dfs(t.w);
            }
        }
        wk.found
    } else {
        let roots: Vec<u64> = make_worker().free_values().collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.worker_count)
            .build()
            .map_err(|e| SearchError::Config(e.to_string()))?;
        let parts: Vec<BTreeSet<Vec<u64>>> = pool.install(|| {
            roots
                .par_iter()
                .map(|&x| {
                    let mut wk = make_worker();
                    if wk.step() {
                        wk.block[0] = x;
                        wk.dfs(1);
                    }
                    wk.found
                })
                .collect()
        });
        parts.into_iter().flatten().collect()
    };

    let budget_exhausted = exhausted.load(Ordering::Relaxed);
    let nodes = match config.node_budget {
        Some(b) => nodes.load(Ordering::Relaxed).min(b),
        None => nodes.load(Ordering::Relaxed),
    };
    Ok(SearchResult {
        modulus: t.n,
        rows: t.h,
        cols: t.w,
        stats: SearchStats {
            nodes,
            solutions: found.len() as u64,
            elapsed: start.elapsed(),
            budget_exhausted,
        },
        solutions: found.into_iter().collect(),
    })
}

/// Largest `N^(h*w)` the oracle enumerates without an override.
pub const ORACLE_LIMIT: u64 = 1 << 28;

/// Enumerates all `N^(h*w)` blocks and keeps the fully wild ones, canonicalized
/// like [`search_fully_wild`].
pub fn brute_force_oracle(
    n: u64,
    rows: usize,
    cols: usize,
    allow_large: bool,
) -> Result<SearchResult, SearchError> {
    brute_force_oracle_for(SearchTarget::FullyWild, n, rows, cols, allow_large)
}

/// [`brute_force_oracle`] with a chosen target.
pub fn brute_force_oracle_for(
    target: SearchTarget,
    n: u64,
    rows: usize,
    cols: usize,
    allow_large: bool,
) -> Result<SearchResult, SearchError> {
    let mut probe = SearchConfig::new(n);
    probe.rows = rows;
    probe.cols = cols;
    probe.validate()?;
    let cells = (rows * cols) as u32;
    let total = n.checked_pow(cells);
    if !allow_large && total.is_none_or(|x| x > ORACLE_LIMIT) {
        return Err(SearchError::TooLarge(format!(
            "{n}^{cells} blocks exceed the oracle limit of 2^28; pass the override to run anyway"
        )));
    }
    let start = Instant::now();
    let mut block = vec![0u64; rows * cols];
    let mut found = BTreeSet::new();
    let mut nodes = 0u64;
    'outer: loop {
        nodes += 1;
        if accepts(target, &block, rows, cols, n) {
            found.insert(canonical_translation(&block, rows, cols));
        }
        // Odometer increment, last cell fastest.
        for k in (0..block.len()).rev() {
            block[k] += 1;
            if block[k] < n {
                continue 'outer;
            }
            block[k] = 0;
        }
        break;
    }
    Ok(SearchResult {
        modulus: n,
        rows,
        cols,
        stats: SearchStats {
            nodes,
            solutions: found.len() as u64,
            elapsed: start.elapsed(),
            budget_exhausted: false,
        },
        solutions: found.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Z36_BLOCK;

    fn z36() -> Vec<u64> {
        Z36_BLOCK.iter().flatten().map(|&x| x as u64).collect()
    }

    #[test]
    fn propagation_examples() {
        assert_eq!(
            propagate_cell(3, 2, 4, 36).iter().collect::<Vec<_>>(),
            vec![3, 15, 27]
        );
        assert_eq!(
            propagate_cell(1, 0, 0, 10).iter().collect::<Vec<_>>(),
            vec![1]
        );
        assert_eq!(
            propagate_cell(2, 1, 1, 4).iter().collect::<Vec<_>>(),
            vec![1, 3]
        );
    }

    #[test]
    fn z36_block_is_fully_wild() {
        assert!(validate_block(&z36(), 4, 4, 36));
        let mut broken = z36();
        broken[0] = 4;
        assert!(!validate_block(&broken, 4, 4, 36));
    }

    #[test]
    fn seeded_search_recovers_z36() {
        let mut c = SearchConfig::new(36);
        c.first_row = Some(vec![3, 2, 33, 34]);
        let r = search_fully_wild(&c).unwrap();
        assert!(r.solutions.contains(&canonical_translation(&z36(), 4, 4)));
        assert!(r.solutions.iter().all(|b| validate_block(b, 4, 4, 36)));
    }

    #[test]
    fn canonical_translation_is_a_class_invariant() {
        let b = z36();
        let c = canonical_translation(&b, 4, 4);
        let shifted: Vec<u64> = (0..16)
            .map(|k| b[((k / 4 + 1) % 4) * 4 + (k % 4 + 3) % 4])
            .collect();
        assert_eq!(canonical_translation(&shifted, 4, 4), c);
    }

    #[test]
    fn budget_stops_early() {
        let mut c = SearchConfig::new(12);
        c.node_budget = Some(100);
        let r = search_fully_wild(&c).unwrap();
        assert!(r.stats.budget_exhausted);
        assert!(r.stats.nodes <= 100);
    }

    #[test]
    fn oracle_guard() {
        assert!(matches!(
            brute_force_oracle(36, 4, 4, false),
            Err(SearchError::TooLarge(_))
        ));
        assert!(brute_force_oracle(2, 1, 4, false).is_err());
    }
}
