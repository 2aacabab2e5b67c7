//! Local identities that hold at every cell of an SL2-tiling.
//!
//! Each audit scans the interior of a window and stops at the first cell that
//! breaks the identity. On a verified tiling a counterexample means a bug.

use std::fmt;

use crate::algebra::{corner_det3, det3, RingSpec, RingValue};

use super::model::{TilingModel, Window};
use super::TilingError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditKind {
    /// `e * det3 = 0`, and over a domain a wild entry is zero.
    Dodgson,
    /// `det3 = (a + c + g + i) + (cg - ai)e`.
    Corner,
    /// Zeros sit in a +-1 cross; wild zeros have a nonzero diagonal neighbour.
    Cross,
}

impl fmt::Display for AuditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditKind::Dodgson => "dodgson",
            AuditKind::Corner => "corner",
            AuditKind::Cross => "cross",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: AuditKind,
    pub i: i64,
    pub j: i64,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} audit fails at ({}, {}): {}",
            self.kind, self.i, self.j, self.detail
        )
    }
}

/// Outcome of one audit: how many centres were examined and the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditOutcome {
    pub kind: AuditKind,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl AuditOutcome {
    pub fn is_ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Neighbourhood<'a> {
    cells: [&'a RingValue; 9],
}

impl<'a> Neighbourhood<'a> {
    fn at(w: &'a Window, r: usize, c: usize) -> Self {
        let g = |dr: usize, dc: usize| w.get(r + dr - 1, c + dc - 1);
        Neighbourhood {
            cells: [
                g(0, 0),
                g(0, 1),
                g(0, 2),
                g(1, 0),
                g(1, 1),
                g(1, 2),
                g(2, 0),
                g(2, 1),
                g(2, 2),
            ],
        }
    }

    fn owned(&self) -> Vec<RingValue> {
        self.cells.iter().map(|v| (*v).clone()).collect()
    }

    fn centre(&self) -> &RingValue {
        self.cells[4]
    }
}

fn scan<F>(w: &Window, kind: AuditKind, mut check: F) -> AuditOutcome
where
    F: FnMut(&Neighbourhood) -> Option<String>,
{
    let mut checked = 0;
    for r in 1..w.rows().saturating_sub(1) {
        for c in 1..w.cols().saturating_sub(1) {
            checked += 1;
            if let Some(detail) = check(&Neighbourhood::at(w, r, c)) {
                return AuditOutcome {
                    kind,
                    checked,
                    counterexample: Some(Counterexample {
                        kind,
                        i: w.origin.0 + r as i64,
                        j: w.origin.1 + c as i64,
                        detail,
                    }),
                };
            }
        }
    }
    AuditOutcome {
        kind,
        checked,
        counterexample: None,
    }
}

pub fn dodgson_window(w: &Window) -> AuditOutcome {
    let domain = w.ring().is_domain();
    scan(w, AuditKind::Dodgson, |n| {
        let d = det3(&n.owned());
        let e = n.centre();
        let product = e * &d;
        if !product.is_zero() {
            return Some(format!("e = {e}, det3 = {d}, product = {product}"));
        }
        if domain && !d.is_zero() && !e.is_zero() {
            return Some(format!("wild entry {e} is nonzero (det3 = {d})"));
        }
        None
    })
}

pub fn corner_window(w: &Window) -> AuditOutcome {
    scan(w, AuditKind::Corner, |n| {
        let cells = n.owned();
        let (d, c) = (det3(&cells), corner_det3(&cells));
        (d != c).then(|| format!("det3 = {d}, corner formula = {c}"))
    })
}

/// Cross-pattern audit. Only meaningful over `Z` or `Z[a]`.
pub fn cross_window(w: &Window) -> Result<AuditOutcome, TilingError> {
    if matches!(w.ring(), RingSpec::Modular(_)) {
        return Err(TilingError::Unsupported(
            "cross audit needs an integral domain".into(),
        ));
    }
    Ok(scan(w, AuditKind::Cross, |n| {
        if !n.centre().is_zero() {
            return None;
        }
        // up, left, right, down
        let sides = [n.cells[1], n.cells[3], n.cells[5], n.cells[7]];
        let matches = |p: [i64; 4]| sides.iter().zip(p).all(|(v, k)| v.equals_int(k));
        if !matches([1, -1, 1, -1]) && !matches([-1, 1, -1, 1]) {
            let shown: Vec<String> = sides.iter().map(|v| v.to_string()).collect();
            return Some(format!(
                "zero with neighbours up/left/right/down = {}",
                shown.join(" ")
            ));
        }
        let wild = !det3(&n.owned()).is_zero();
        let diagonals = [n.cells[0], n.cells[2], n.cells[6], n.cells[8]];
        if wild && diagonals.iter().all(|v| v.is_zero()) {
            return Some("wild zero with four zero diagonal neighbours".into());
        }
        None
    }))
}

/// Runs an audit on the centres of the `rows x cols` rectangle at `(i0, j0)`.
pub fn audit_model(
    t: &TilingModel,
    kind: AuditKind,
    i0: i64,
    j0: i64,
    rows: usize,
    cols: usize,
) -> Result<AuditOutcome, TilingError> {
    let w = t.extract_window(i0 - 1, j0 - 1, rows + 2, cols + 2);
    match kind {
        AuditKind::Dodgson => Ok(dodgson_window(&w)),
        AuditKind::Corner => Ok(corner_window(&w)),
        AuditKind::Cross => cross_window(&w),
    }
}

pub fn dodgson_audit(t: &TilingModel, i0: i64, j0: i64, rows: usize, cols: usize) -> AuditOutcome {
    audit_model(t, AuditKind::Dodgson, i0, j0, rows, cols).unwrap()
}

pub fn corner_audit(t: &TilingModel, i0: i64, j0: i64, rows: usize, cols: usize) -> AuditOutcome {
    audit_model(t, AuditKind::Corner, i0, j0, rows, cols).unwrap()
}

pub fn zero_cross_audit(
    t: &TilingModel,
    i0: i64,
    j0: i64,
    rows: usize,
    cols: usize,
) -> Result<AuditOutcome, TilingError> {
    audit_model(t, AuditKind::Cross, i0, j0, rows, cols)
}
