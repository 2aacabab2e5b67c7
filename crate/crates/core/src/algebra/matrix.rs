use std::fmt;

use super::ring::{RingSpec, RingValue};
use super::AlgebraError;

/// Dense row-major matrix whose entries share one ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    spec: RingSpec,
    entries: Vec<RingValue>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RingValue>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(AlgebraError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let spec = entries[0].spec();
        if let Some(bad) = entries.iter().find(|e| e.spec() != spec) {
            return Err(AlgebraError::RingMismatch {
                left: spec,
                right: bad.spec(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            spec,
            entries,
        })
    }

    /// Builds a matrix by evaluating `f` at every position; all results must
    /// share a ring.
    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self, AlgebraError>
    where
        F: FnMut(usize, usize) -> RingValue,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    pub fn from_ints(spec: RingSpec, rows: &[&[i64]]) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        Matrix::from_fn(r, c, |i, j| RingValue::from_int(spec, rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> &RingValue {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[RingValue] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[RingValue] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(i0 + rows <= self.rows && j0 + cols <= self.cols);
        Matrix::from_fn(rows, cols, |i, j| self.get(i0 + i, j0 + j).clone()).unwrap()
    }

    /// Applies `f` entrywise; the results must share a ring.
    pub fn try_map<F>(&self, f: F) -> Result<Matrix, AlgebraError>
    where
        F: FnMut(&RingValue) -> Result<RingValue, AlgebraError>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Matrix::new(self.rows, self.cols, entries)
    }

    fn to_rows(&self) -> Vec<Vec<RingValue>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    /// Exact determinant. Direct expansion up to 3x3, fraction-free
    /// elimination above that (integral domains only).
    pub fn det(&self) -> Result<RingValue, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let m = |i, j| self.get(i, j);
        match self.rows {
            1 => Ok(m(0, 0).clone()),
            2 => Ok(det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1))),
            3 => Ok(det3(&self.entries)),
            n if !self.spec.is_domain() => Err(AlgebraError::Unsupported(format!(
                "{n}x{n} determinant over {}",
                self.spec
            ))),
            _ => Ok(bareiss_det(self.to_rows())?),
        }
    }

    /// `(a + c + g + i) + (c*g - a*i)*e` for a 3x3 matrix `[a b c; d e f; g h i]`.
    /// Agrees with [`Matrix::det`] on every 3x3 window of an SL2-tiling.
    pub fn corner_det3(&self) -> Result<RingValue, AlgebraError> {
        if self.rows != 3 || self.cols != 3 {
            return Err(AlgebraError::Shape(format!(
                "corner formula needs 3x3, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(corner_det3(&self.entries))
    }

    /// Rank over the fraction field, by fraction-free elimination with full
    /// pivoting. Integral domains only.
    pub fn bareiss_rank(&self) -> Result<usize, AlgebraError> {
        if !self.spec.is_domain() {
            return Err(AlgebraError::Unsupported(format!(
                "rank over {}",
                self.spec
            )));
        }
        let mut a = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = RingValue::one(self.spec);
        let mut rank = 0;
        for k in 0..rows.min(cols) {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].weight());
            let Some((pi, pj)) = pivot else { break };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            }
            eliminate(&mut a, k, rows, cols, &prev)?;
            prev = a[k][k].clone();
            rank += 1;
        }
        Ok(rank)
    }
}

fn eliminate(
    a: &mut [Vec<RingValue>],
    k: usize,
    rows: usize,
    cols: usize,
    prev: &RingValue,
) -> Result<(), AlgebraError> {
    let (top, rest) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[k];
    for row in rest.iter_mut().take(rows - k - 1) {
        let lead = row[k].clone();
        for j in k + 1..cols {
            let num = &(pivot * &row[j]) - &(&lead * &pivot_row[j]);
            row[j] = num.div_exact(prev)?;
        }
    }
    Ok(())
}

fn bareiss_det(mut a: Vec<Vec<RingValue>>) -> Result<RingValue, AlgebraError> {
    let n = a.len();
    let spec = a[0][0].spec();
    let mut prev = RingValue::one(spec);
    let mut negate = false;
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].weight());
        let Some(p) = pivot else {
            return Ok(RingValue::zero(spec));
        };
        if p != k {
            a.swap(k, p);
            negate = !negate;
        }
        eliminate(&mut a, k, n, n, &prev)?;
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.negate() } else { d })
}

pub(crate) fn det2(a: &RingValue, b: &RingValue, c: &RingValue, d: &RingValue) -> RingValue {
    &(a * d) - &(b * c)
}

/// Cofactor expansion of a row-major 3x3 slice.
pub(crate) fn det3(m: &[RingValue]) -> RingValue {
    let [a, b, c, d, e, f, g, h, i] = [
        &m[0], &m[1], &m[2], &m[3], &m[4], &m[5], &m[6], &m[7], &m[8],
    ];
    let t1 = a * &det2(e, f, h, i);
    let t2 = b * &det2(d, f, g, i);
    let t3 = c * &det2(d, e, g, h);
    &(&t1 - &t2) + &t3
}

pub(crate) fn corner_det3(m: &[RingValue]) -> RingValue {
    let (a, c, e, g, i) = (&m[0], &m[2], &m[4], &m[6], &m[8]);
    let corners = &(&(a + c) + g) + i;
    let cross = &(c * g) - &(a * i);
    &corners + &(&cross * e)
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
