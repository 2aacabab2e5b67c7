use num_integer::Roots;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{det2, det3, RingValue};

use super::model::{TilingBody, TilingModel, Window};
use super::TilingError;

/// Position where a 2x2 minor differs from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub i: i64,
    pub j: i64,
    pub det: RingValue,
}

/// Checks that every adjacent 2x2 minor equals 1.
///
/// One period of the model suffices. Patched tilings are checked with formal
/// parameters, so a pass covers every numeric assignment; for a numeric model
/// a reported violation carries the determinant under its own assignment.
pub fn verify_sl2(t: &TilingModel) -> Result<(), Violation> {
    let formal;
    let (checked, numeric) = match t.body() {
        TilingBody::RuleBased(_) => {
            // Four offset classes of (j - i) mod 4 along the first row.
            for d in 0..4 {
                check_minor(t, 0, d)?;
            }
            return Ok(());
        }
        TilingBody::Periodic(_) => (t, None),
        TilingBody::Patched(_) => {
            formal = t.formal_version().unwrap();
            let numeric = (t.ring() != formal.ring()).then_some(t);
            (&formal, numeric)
        }
    };
    let (pi, pj) = checked.period();
    for i in 0..pi as i64 {
        for j in 0..pj as i64 {
            if let Err(mut v) = check_minor(checked, i, j) {
                if let Some(n) = numeric {
                    v.det = v
                        .det
                        .eval(|var| n.numeric_value_of(var))
                        .expect("numeric assignment covers every parameter");
                }
                return Err(v);
            }
        }
    }
    Ok(())
}

fn check_minor(t: &TilingModel, i: i64, j: i64) -> Result<(), Violation> {
    let d = det2(
        &t.entry(i, j),
        &t.entry(i, j + 1),
        &t.entry(i + 1, j),
        &t.entry(i + 1, j + 1),
    );
    if d.equals_int(1) {
        Ok(())
    } else {
        Err(Violation { i, j, det: d })
    }
}

/// Every 2x2 minor lying inside a finite window, in row-major order.
pub fn window_violations(w: &Window) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in 0..w.rows().saturating_sub(1) {
        for c in 0..w.cols().saturating_sub(1) {
            let d = det2(
                w.get(r, c),
                w.get(r, c + 1),
                w.get(r + 1, c),
                w.get(r + 1, c + 1),
            );
            if !d.equals_int(1) {
                out.push(Violation {
                    i: w.origin.0 + r as i64,
                    j: w.origin.1 + c as i64,
                    det: d,
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EntryClass {
    Tame,
    Wild,
}

/// Display classes for rendered cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ColorClass {
    PlusOne,
    MinusOne,
    ZeroTame,
    /// Any wild entry. Over an integral domain these are exactly the wild zeros.
    ZeroWild,
    Parameter,
    OtherNonzero,
}

impl ColorClass {
    pub fn of(value: &RingValue, class: EntryClass, parameter: bool) -> ColorClass {
        if class == EntryClass::Wild {
            ColorClass::ZeroWild
        } else if parameter || matches!(value, RingValue::Poly(p) if p.as_constant().is_none()) {
            ColorClass::Parameter
        } else if value.is_zero() {
            ColorClass::ZeroTame
        } else if value.equals_int(1) {
            ColorClass::PlusOne
        } else if value.equals_int(-1) {
            ColorClass::MinusOne
        } else {
            ColorClass::OtherNonzero
        }
    }
}

fn centered_det3(w: &Window, r: usize, c: usize) -> RingValue {
    let cells: Vec<RingValue> = (0..3)
        .flat_map(|dr| (0..3).map(move |dc| (dr, dc)))
        .map(|(dr, dc)| w.get(r + dr - 1, c + dc - 1).clone())
        .collect();
    det3(&cells)
}

/// Tame or wild, with the determinant of the 3x3 block centred at `(i, j)`.
pub fn classify_entry(t: &TilingModel, i: i64, j: i64) -> (EntryClass, RingValue) {
    let w = t.extract_window(i - 1, j - 1, 3, 3);
    let d = centered_det3(&w, 1, 1);
    let class = if d.is_zero() {
        EntryClass::Tame
    } else {
        EntryClass::Wild
    };
    (class, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellReport {
    pub value: RingValue,
    pub det3: RingValue,
    pub class: EntryClass,
    pub color: ColorClass,
}

/// Per-cell classification of a rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildnessReport {
    pub origin: (i64, i64),
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub cells: Vec<CellReport>,
    pub violations: Vec<Violation>,
}

impl WildnessReport {
    pub fn cell(&self, r: usize, c: usize) -> &CellReport {
        &self.cells[r * self.cols + c]
    }

    pub fn wild_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.class == EntryClass::Wild)
            .count()
    }

    pub fn count_color(&self, color: ColorClass) -> usize {
        self.cells.iter().filter(|c| c.color == color).count()
    }
}

/// Classifies the `rows x cols` rectangle at `(i0, j0)`. Violations list the
/// failing 2x2 minors whose top-left corner lies in the rectangle.
pub fn wildness_report(
    t: &TilingModel,
    i0: i64,
    j0: i64,
    rows: usize,
    cols: usize,
) -> WildnessReport {
    let w = t.extract_window(i0 - 1, j0 - 1, rows + 2, cols + 2);
    let inner = t.extract_window(i0, j0, rows + 1, cols + 1);
    let violations = window_violations(&inner)
        .into_iter()
        .filter(|v| v.i < i0 + rows as i64 && v.j < j0 + cols as i64)
        .collect();
    report_interior(&w, violations, |r, c| t.is_parameter(r, c))
}

/// Classifies the interior of a finite window (every cell with a full 3x3
/// neighbourhood inside it).
pub fn window_report(w: &Window) -> Result<WildnessReport, TilingError> {
    if w.rows() < 3 || w.cols() < 3 {
        return Err(TilingError::Invalid(
            "window needs at least 3x3 entries".into(),
        ));
    }
    Ok(report_interior(w, window_violations(w), |_, _| false))
}

fn report_interior<F>(w: &Window, violations: Vec<Violation>, is_param: F) -> WildnessReport
where
    F: Fn(i64, i64) -> bool,
{
    let (rows, cols) = (w.rows() - 2, w.cols() - 2);
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 1..=rows {
        for c in 1..=cols {
            let value = w.get(r, c).clone();
            let det3 = centered_det3(w, r, c);
            let class = if det3.is_zero() {
                EntryClass::Tame
            } else {
                EntryClass::Wild
            };
            let param = is_param(w.origin.0 + r as i64, w.origin.1 + c as i64);
            cells.push(CellReport {
                color: ColorClass::of(&value, class, param),
                value,
                det3,
                class,
            });
        }
    }
    WildnessReport {
        origin: (w.origin.0 + 1, w.origin.1 + 1),
        rows,
        cols,
        cells,
        violations,
    }
}

/// Exact wild density: wild cells in one period rectangle over its area.
///
/// Numeric patched tilings are classified through their formal version; this
/// is only accepted when every formal 3x3 determinant is zero or a single
/// term, which no nonzero assignment can annihilate.
pub fn wild_density_exact(t: &TilingModel) -> Result<Ratio<u64>, TilingError> {
    let (pi, pj) = t.period();
    let formal = t.formal_version();
    let numeric = formal.is_some() && formal.as_ref().map(|f| f.ring()) != Some(t.ring());
    let source = formal.as_ref().unwrap_or(t);
    let report = wildness_report(source, 0, 0, pi, pj);
    if numeric {
        let generic = report.cells.iter().all(|c| match &c.det3 {
            RingValue::Poly(p) => p.num_terms() <= 1,
            _ => true,
        });
        if !generic {
            return Err(TilingError::Unsupported(
                "wildness of this numeric assignment is not periodic".into(),
            ));
        }
    }
    Ok(Ratio::new(report.wild_count() as u64, (pi * pj) as u64))
}

/// Wild and total counts over the lattice points within Euclidean distance
/// `radius` of the origin, boundary included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensitySample {
    pub radius: u64,
    pub wild: u64,
    pub total: u64,
}

impl DensitySample {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.wild, self.total)
    }

    /// `|wild/total - target| <= tol`, decided in exact arithmetic.
    pub fn within(&self, target: Ratio<u64>, tol: Ratio<u64>) -> bool {
        let r = self.ratio();
        let diff = if r > target { r - target } else { target - r };
        diff <= tol
    }
}

/// Counts wild cells in discs of the given radii. Rows are processed in
/// parallel on the current rayon pool; the sums are order independent, so
/// the result does not depend on the number of workers.
pub fn wild_density_windows(t: &TilingModel, radii: &[u64]) -> Vec<DensitySample> {
    let Some(&max_r) = radii.iter().max() else {
        return Vec::new();
    };
    let r = max_r as i64;
    // For every row: squared distances of wild cells and of all cells in the disc.
    let rows: Vec<(Vec<u64>, Vec<u64>)> = (-r..=r)
        .into_par_iter()
        .map(|i| {
            let half = ((r * r - i * i) as u64).sqrt() as i64;
            let w = t.extract_window(i - 1, -half - 1, 3, (2 * half + 3) as usize);
            let mut wild = Vec::new();
            let mut all = Vec::with_capacity((2 * half + 1) as usize);
            for j in -half..=half {
                let d2 = (i * i + j * j) as u64;
                all.push(d2);
                if !centered_det3(&w, 1, (j + half + 1) as usize).is_zero() {
                    wild.push(d2);
                }
            }
            (wild, all)
        })
        .collect();
    radii
        .iter()
        .map(|&radius| {
            let lim = radius * radius;
            let (mut wild, mut total) = (0u64, 0u64);
            for (w, a) in &rows {
                wild += w.iter().filter(|&&d| d <= lim).count() as u64;
                total += a.iter().filter(|&&d| d <= lim).count() as u64;
            }
            DensitySample {
                radius,
                wild,
                total,
            }
        })
        .collect()
}
