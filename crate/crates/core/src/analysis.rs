//! Equivalence classes of square blocks in a patched tiling and their rank
//! deficiency over the field of fractions of the parameter ring.
//!
//! Two blocks are equivalent when one becomes the other after a rotation or
//! reflection, negation of some rows and columns and a renaming of the
//! parameters. Each of these preserves rank over the fraction field.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraError, Matrix, RingSpec, RingValue, Var};
use crate::tiling::{ParameterAssignment, TilingBody, TilingError, TilingModel, Window};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("entry {value} at ({row}, {col}) is not 0, 1, -1 or a bare parameter")]
    ForeignEntry {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("block analysis needs a patched tiling with formal parameters")]
    NotFormal,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Tiling(#[from] TilingError),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tok {
    Zero,
    Plus,
    Minus,
    Param(Var),
}

type Grid = Vec<Vec<Tok>>;

fn tokenize(w: &Window) -> Result<Grid, AnalysisError> {
    (0..w.rows())
        .map(|r| {
            (0..w.cols())
                .map(|c| {
                    let v = w.get(r, c);
                    if v.is_zero() {
                        return Ok(Tok::Zero);
                    }
                    if v.equals_int(1) {
                        return Ok(Tok::Plus);
                    }
                    if v.equals_int(-1) {
                        return Ok(Tok::Minus);
                    }
                    match v {
                        RingValue::Poly(p) if p.as_variable().is_some() => {
                            Ok(Tok::Param(p.as_variable().unwrap()))
                        }
                        _ => Err(AnalysisError::ForeignEntry {
                            row: r,
                            col: c,
                            value: v.to_string(),
                        }),
                    }
                })
                .collect()
        })
        .collect()
}

fn rotate(g: &Grid) -> Grid {
    let (h, w) = (g.len(), g[0].len());
    (0..w)
        .map(|c| (0..h).map(|r| g[h - 1 - r][c]).collect())
        .collect()
}

fn transpose(g: &Grid) -> Grid {
    let (h, w) = (g.len(), g[0].len());
    (0..w).map(|c| (0..h).map(|r| g[r][c]).collect()).collect()
}

/// Negates rows and columns so that the `+-1` entries along a spanning forest
/// of the row/column incidence graph all become `+`. Two grids that differ by
/// row and column negations normalize to the same grid.
fn normalize_signs(g: &Grid) -> Grid {
    let (h, w) = (g.len(), g[0].len());
    let unit = |r: usize, c: usize| match g[r][c] {
        Tok::Plus => Some(false),
        Tok::Minus => Some(true),
        _ => None,
    };
    // Nodes 0..h are rows, h..h+w columns; `true` means negated.
    let mut neg: Vec<Option<bool>> = vec![None; h + w];
    for root in 0..h + w {
        if neg[root].is_some() {
            continue;
        }
        neg[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let nx = neg[x].unwrap();
            let neighbours: Vec<(usize, bool)> = if x < h {
                (0..w)
                    .filter_map(|c| unit(x, c).map(|s| (h + c, s)))
                    .collect()
            } else {
                (0..h)
                    .filter_map(|r| unit(r, x - h).map(|s| (r, s)))
                    .collect()
            };
            for (y, s) in neighbours {
                if neg[y].is_none() {
                    neg[y] = Some(nx ^ s);
                    queue.push_back(y);
                }
            }
        }
    }
    (0..h)
        .map(|r| {
            (0..w)
                .map(|c| match g[r][c] {
                    Tok::Plus | Tok::Minus => {
                        let flipped = unit(r, c).unwrap() ^ neg[r].unwrap() ^ neg[h + c].unwrap();
                        if flipped {
                            Tok::Minus
                        } else {
                            Tok::Plus
                        }
                    }
                    t => t,
                })
                .collect()
        })
        .collect()
}

fn serialize(g: &Grid) -> String {
    let mut names: HashMap<Var, usize> = HashMap::new();
    let rows: Vec<String> = g
        .iter()
        .map(|row| {
            let toks: Vec<String> = row
                .iter()
                .map(|t| match t {
                    Tok::Zero => "0".to_string(),
                    Tok::Plus => "+".to_string(),
                    Tok::Minus => "-".to_string(),
                    Tok::Param(v) => {
                        let next = names.len() + 1;
                        format!("p{}", names.entry(*v).or_insert(next))
                    }
                })
                .collect();
            toks.join(",")
        })
        .collect();
    format!("{}x{}:{}", g.len(), g[0].len(), rows.join(";"))
}

/// Canonical encoding of a block: the least serialization over the eight
/// rotations and reflections, after normalizing signs by row and column
/// negations and renaming parameters `p1, p2, ...` in row-major order of first
/// occurrence.
///
/// Row and column negations include the global sign flip, and turn a
/// parameter `a` into `-a`, which is again a renaming over the fraction
/// field. All of these preserve rank.
pub fn canonical_block_form(w: &Window) -> Result<String, AnalysisError> {
    let mut g = tokenize(w)?;
    let mut best: Option<String> = None;
    for _ in 0..4 {
        for h in [g.clone(), transpose(&g)] {
            let s = serialize(&normalize_signs(&h));
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
        g = rotate(&g);
    }
    Ok(best.unwrap())
}

/// One equivalence class of `n x n` blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockClass {
    pub encoding: String,
    /// First block met in the scan, parameters renamed `a1, a2, ...`.
    #[serde(skip)]
    pub representative: Window,
    /// Number of scanned corners whose block falls in this class.
    pub orbit_size: usize,
}

fn formal_lattice(t: &TilingModel) -> Result<crate::tiling::Sublattice, AnalysisError> {
    match t.body() {
        TilingBody::Patched(p) if *p.params() == ParameterAssignment::Formal => Ok(p.lattice()),
        _ => Err(AnalysisError::NotFormal),
    }
}

/// Representatives of the translations that preserve the tame/wild pattern
/// up to sign and renaming: `(i, j)` and `(i', j')` are identified when
/// `u i + v j = u i' + v j' (mod m)` and `j - i = j' - i' (mod 2)`. The first
/// cell of each class in a row-major scan of the period rectangle is kept.
pub fn translation_corners(t: &TilingModel) -> Result<Vec<(i64, i64)>, AnalysisError> {
    let l = formal_lattice(t)?;
    let (pi, pj) = t.period();
    let mut seen = BTreeMap::new();
    for i in 0..pi as i64 {
        for j in 0..pj as i64 {
            let key = ((l.u * i + l.v * j).rem_euclid(l.m), (j - i).rem_euclid(2));
            seen.entry(key).or_insert((i, j));
        }
    }
    let mut corners: Vec<(i64, i64)> = seen.into_values().collect();
    corners.sort_unstable();
    Ok(corners)
}

/// Classes of all `n x n` blocks of a formal patched tiling, sorted by
/// encoding.
pub fn enumerate_block_classes(
    t: &TilingModel,
    n: usize,
) -> Result<Vec<BlockClass>, AnalysisError> {
    let corners = translation_corners(t)?;
    classes_from_corners(t, n, &corners)
}

/// Classes of the `n x n` blocks with the given top-left corners.
pub fn classes_from_corners(
    t: &TilingModel,
    n: usize,
    corners: &[(i64, i64)],
) -> Result<Vec<BlockClass>, AnalysisError> {
    formal_lattice(t)?;
    if n == 0 {
        return Err(AnalysisError::Unsupported(
            "block size must be positive".into(),
        ));
    }
    let mut classes: BTreeMap<String, BlockClass> = BTreeMap::new();
    for &(i, j) in corners {
        let w = t.extract_window(i, j, n, n);
        let encoding = canonical_block_form(&w)?;
        classes
            .entry(encoding.clone())
            .or_insert_with(|| BlockClass {
                encoding,
                representative: w.relabeled(),
                orbit_size: 0,
            })
            .orbit_size += 1;
    }
    Ok(classes.into_values().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMode {
    Symbolic,
    Probe,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    /// Exact rank over the fraction field.
    Symbolic,
    /// Rank after substituting random integers; the deficiency is an upper bound.
    EvaluationBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub mode: RankMode,
    pub seed: u64,
    pub trials: u32,
    /// Lifts the `n <= 9` limit on symbolic elimination.
    pub allow_large: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            mode: RankMode::Symbolic,
            seed: 0,
            trials: 5,
            allow_large: false,
        }
    }
}

pub const SYMBOLIC_LIMIT: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDeficiency {
    pub class: BlockClass,
    pub deficiency: usize,
    pub method: RankMethod,
    /// Per-trial deficiency bounds (probe only).
    pub trials: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub n: usize,
    /// Sorted by encoding; with both modes the symbolic entry comes first.
    pub classes: Vec<ClassDeficiency>,
}

impl RankReport {
    pub fn max_deficiency(&self) -> Option<usize> {
        self.classes.iter().map(|c| c.deficiency).max()
    }
}

/// Rank deficiency of every block class of size `n`.
pub fn rank_deficiency_report(
    t: &TilingModel,
    n: usize,
    opts: RankOptions,
) -> Result<RankReport, AnalysisError> {
    let symbolic = matches!(opts.mode, RankMode::Symbolic | RankMode::Both);
    let probe = matches!(opts.mode, RankMode::Probe | RankMode::Both);
    if symbolic && n > SYMBOLIC_LIMIT && !opts.allow_large {
        return Err(AnalysisError::Unsupported(format!(
            "symbolic rank for n = {n} > {SYMBOLIC_LIMIT} needs the override flag"
        )));
    }
    if probe && opts.trials == 0 {
        return Err(AnalysisError::Unsupported(
            "probe mode needs at least one trial".into(),
        ));
    }
    let classes = enumerate_block_classes(t, n)?;
    let per_class: Vec<Result<Vec<ClassDeficiency>, AnalysisError>> = classes
        .into_par_iter()
        .map(|class| {
            let mut out = Vec::new();
            if symbolic {
                let rank = class.representative.matrix.bareiss_rank()?;
                out.push(ClassDeficiency {
                    class: class.clone(),
                    deficiency: n - rank,
                    method: RankMethod::Symbolic,
                    trials: Vec::new(),
                });
            }
            if probe {
                let trials = (0..opts.trials)
                    .map(|k| {
                        let seed = opts.seed.wrapping_add(k as u64);
                        probe_rank(&class.representative, seed).map(|r| n - r)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(ClassDeficiency {
                    class,
                    deficiency: *trials.iter().min().unwrap(),
                    method: RankMethod::EvaluationBound,
                    trials,
                });
            }
            Ok(out)
        })
        .collect();
    let mut classes = Vec::new();
    for r in per_class {
        classes.extend(r?);
    }
    Ok(RankReport { n, classes })
}

/// Rank over `Z` after giving each parameter a distinct random value in
/// `[2, 2^16]`.
fn probe_rank(w: &Window, seed: u64) -> Result<usize, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = w.variables();
    let mut values: BTreeMap<Var, BigInt> = BTreeMap::new();
    let mut used = std::collections::BTreeSet::new();
    for v in vars {
        let x = loop {
            let x: u32 = rng.random_range(2..=1 << 16);
            if used.insert(x) {
                break x;
            }
        };
        values.insert(v, BigInt::from(x));
    }
    let m = w.matrix.try_map(|e| e.eval(|v| values.get(&v).cloned()))?;
    debug_assert_eq!(m.spec(), RingSpec::Integers);
    Ok(m.bareiss_rank()?)
}

/// Whether every row and every column of the block holds exactly one parameter.
pub fn one_parameter_per_line(m: &Matrix) -> bool {
    let is_param = |v: &RingValue| matches!(v, RingValue::Poly(p) if p.as_variable().is_some());
    let rows = (0..m.rows()).all(|r| (0..m.cols()).filter(|&c| is_param(m.get(r, c))).count() == 1);
    let cols = (0..m.cols()).all(|c| (0..m.rows()).filter(|&r| is_param(m.get(r, c))).count() == 1);
    rows && cols
}

/// Expected class count for `n x n` blocks: four for odd `n`, three for even.
pub fn stated_class_count(n: usize) -> usize {
    if n.is_odd() {
        4
    } else {
        3
    }
}
