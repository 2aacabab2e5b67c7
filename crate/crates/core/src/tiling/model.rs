use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Zero;

use crate::algebra::{Matrix, Polynomial, RingSpec, RingValue, Var};

use super::TilingError;

/// Positions `(i, j)` with `u*i + v*j = t (mod m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    pub u: i64,
    pub v: i64,
    pub m: i64,
    pub t: i64,
}

impl Sublattice {
    pub fn new(u: i64, v: i64, m: i64, t: i64) -> Result<Self, TilingError> {
        if m < 1 {
            return Err(TilingError::Invalid(format!(
                "lattice modulus must be positive, got {m}"
            )));
        }
        Ok(Sublattice { u, v, m, t })
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        (self.u * i + self.v * j - self.t).rem_euclid(self.m) == 0
    }

    /// Smallest row and column translations fixing the selected set.
    pub fn periods(&self) -> (usize, usize) {
        let m = self.m;
        ((m / self.u.gcd(&m)) as usize, (m / self.v.gcd(&m)) as usize)
    }
}

/// How the parameter positions of a patched tiling are filled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParameterAssignment {
    /// Each position carries its own formal variable; see [`formal_variable`].
    Formal,
    Numeric(NumericParams),
}

/// Explicit nonzero values at some positions and a nonzero default elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericParams {
    default: BigInt,
    overrides: BTreeMap<(i64, i64), BigInt>,
}

impl NumericParams {
    pub fn new(
        default: impl Into<BigInt>,
        overrides: impl IntoIterator<Item = ((i64, i64), BigInt)>,
    ) -> Result<Self, TilingError> {
        let default = default.into();
        if default.is_zero() {
            return Err(TilingError::Invalid(
                "parameter values must be nonzero".into(),
            ));
        }
        let overrides: BTreeMap<_, _> = overrides.into_iter().collect();
        if let Some(((i, j), _)) = overrides.iter().find(|(_, v)| v.is_zero()) {
            return Err(TilingError::Invalid(format!(
                "parameter at ({i}, {j}) must be nonzero"
            )));
        }
        Ok(NumericParams { default, overrides })
    }

    pub fn constant(value: impl Into<BigInt>) -> Result<Self, TilingError> {
        Self::new(value, [])
    }

    pub fn default_value(&self) -> &BigInt {
        &self.default
    }

    pub fn overrides(&self) -> &BTreeMap<(i64, i64), BigInt> {
        &self.overrides
    }

    pub fn value_at(&self, i: i64, j: i64) -> &BigInt {
        self.overrides.get(&(i, j)).unwrap_or(&self.default)
    }
}

/// An integer rule tiling with the positions of a sublattice overwritten by
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patched {
    base: [BigInt; 4],
    lattice: Sublattice,
    params: ParameterAssignment,
}

impl Patched {
    pub fn base(&self) -> &[BigInt; 4] {
        &self.base
    }

    pub fn lattice(&self) -> Sublattice {
        self.lattice
    }

    pub fn params(&self) -> &ParameterAssignment {
        &self.params
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilingBody {
    /// `entry(i, j) = table[(j - i) mod 4]`.
    RuleBased([RingValue; 4]),
    /// `entry(i, j) = block[i mod h][j mod w]`.
    Periodic(Matrix),
    Patched(Patched),
}

/// A finite description of a bi-infinite matrix. `entry` is total on `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingModel {
    ring: RingSpec,
    body: TilingBody,
}

impl TilingModel {
    pub fn rule_based(table: [RingValue; 4]) -> Result<Self, TilingError> {
        let ring = table[0].spec();
        if table.iter().any(|v| v.spec() != ring) {
            return Err(TilingError::Invalid("rule table mixes rings".into()));
        }
        Ok(TilingModel {
            ring,
            body: TilingBody::RuleBased(table),
        })
    }

    pub fn periodic(block: Matrix) -> Self {
        TilingModel {
            ring: block.spec(),
            body: TilingBody::Periodic(block),
        }
    }

    /// Overwrites the rule tiling `base` on `lattice`. Every selected position
    /// must hold a zero of the base pattern.
    pub fn patched(
        base: [i64; 4],
        lattice: Sublattice,
        params: ParameterAssignment,
    ) -> Result<Self, TilingError> {
        let base = base.map(BigInt::from);
        let probe = Patched {
            base: base.clone(),
            lattice,
            params: ParameterAssignment::Formal,
        };
        let (pi, pj) = patched_period(&probe);
        for i in 0..pi as i64 {
            for j in 0..pj as i64 {
                if lattice.contains(i, j) && !base[offset(i, j)].is_zero() {
                    return Err(TilingError::Invalid(format!(
                        "lattice position ({i}, {j}) covers a nonzero base entry"
                    )));
                }
            }
        }
        if let ParameterAssignment::Numeric(p) = &params {
            if let Some(&(i, j)) = p.overrides.keys().find(|&&(i, j)| !lattice.contains(i, j)) {
                return Err(TilingError::Invalid(format!(
                    "({i}, {j}) is not a parameter position"
                )));
            }
        }
        let ring = match params {
            ParameterAssignment::Formal => RingSpec::Polynomial,
            ParameterAssignment::Numeric(_) => RingSpec::Integers,
        };
        Ok(TilingModel {
            ring,
            body: TilingBody::Patched(Patched {
                base,
                lattice,
                params,
            }),
        })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn body(&self) -> &TilingBody {
        &self.body
    }

    pub fn entry(&self, i: i64, j: i64) -> RingValue {
        match &self.body {
            TilingBody::RuleBased(table) => table[offset(i, j)].clone(),
            TilingBody::Periodic(block) => {
                let r = i.rem_euclid(block.rows() as i64) as usize;
                let c = j.rem_euclid(block.cols() as i64) as usize;
                block.get(r, c).clone()
            }
            TilingBody::Patched(p) => {
                if p.lattice.contains(i, j) {
                    match &p.params {
                        ParameterAssignment::Formal => RingValue::variable(formal_variable(i, j)),
                        ParameterAssignment::Numeric(n) => RingValue::Int(n.value_at(i, j).clone()),
                    }
                } else {
                    RingValue::from_int(self.ring, p.base[offset(i, j)].clone())
                }
            }
        }
    }

    /// Whether `(i, j)` is a parameter slot of a patched tiling.
    pub fn is_parameter(&self, i: i64, j: i64) -> bool {
        match &self.body {
            TilingBody::Patched(p) => p.lattice.contains(i, j),
            _ => false,
        }
    }

    /// A rectangle `rows x cols` whose translations map the tiling to itself up
    /// to global sign and renaming (or negating) parameters. Both the SL2
    /// condition and the tame/wild pattern are invariant under them.
    pub fn period(&self) -> (usize, usize) {
        match &self.body {
            TilingBody::RuleBased(_) => (4, 4),
            TilingBody::Periodic(b) => (b.rows(), b.cols()),
            TilingBody::Patched(p) => patched_period(p),
        }
    }

    /// The same patched tiling with formal parameters.
    pub fn formal_version(&self) -> Option<TilingModel> {
        match &self.body {
            TilingBody::Patched(p) => Some(TilingModel {
                ring: RingSpec::Polynomial,
                body: TilingBody::Patched(Patched {
                    params: ParameterAssignment::Formal,
                    ..p.clone()
                }),
            }),
            _ => None,
        }
    }

    /// Value the numeric assignment gives to the formal variable `v`.
    pub(crate) fn numeric_value_of(&self, v: Var) -> Option<BigInt> {
        match &self.body {
            TilingBody::Patched(Patched {
                params: ParameterAssignment::Numeric(n),
                ..
            }) => {
                let (i, j) = position_of_variable(v);
                Some(n.value_at(i, j).clone())
            }
            _ => None,
        }
    }

    pub fn extract_window(&self, i0: i64, j0: i64, rows: usize, cols: usize) -> Window {
        assert!(rows >= 1 && cols >= 1, "window must be non-empty");
        let matrix = Matrix::from_fn(rows, cols, |r, c| self.entry(i0 + r as i64, j0 + c as i64))
            .expect("model entries share the model ring");
        Window {
            origin: (i0, j0),
            matrix,
        }
    }

    pub fn describe(&self) -> String {
        match &self.body {
            TilingBody::RuleBased(_) => format!("rule-based over {}", self.ring),
            TilingBody::Periodic(b) => {
                format!("periodic {}x{} over {}", b.rows(), b.cols(), self.ring)
            }
            TilingBody::Patched(p) => {
                let l = p.lattice;
                let mode = match p.params {
                    ParameterAssignment::Formal => "formal",
                    ParameterAssignment::Numeric(_) => "numeric",
                };
                format!(
                    "patched ({}i + {}j = {} mod {}, {mode}) over {}",
                    l.u, l.v, l.t, l.m, self.ring
                )
            }
        }
    }
}

fn patched_period(p: &Patched) -> (usize, usize) {
    // Even translations keep (j - i) mod 2 and so map the rule tiling to +-itself.
    let (a, b) = p.lattice.periods();
    (a.lcm(&2), b.lcm(&2))
}

pub(crate) fn offset(i: i64, j: i64) -> usize {
    (j - i).rem_euclid(4) as usize
}

fn zigzag(x: i64) -> u64 {
    ((x << 1) ^ (x >> 63)) as u64
}

fn unzigzag(z: u64) -> i64 {
    ((z >> 1) as i64) ^ -((z & 1) as i64)
}

/// The formal variable attached to position `(i, j)`: one plus the Cantor
/// pairing of the zigzag-encoded coordinates. Injective on `Z^2`; windows are
/// usually renumbered with [`Window::relabeled`] before display.
pub fn formal_variable(i: i64, j: i64) -> Var {
    let (x, y) = (zigzag(i), zigzag(j));
    let s = x.checked_add(y).expect("coordinate too large");
    s.checked_mul(s + 1)
        .and_then(|t| (t / 2).checked_add(y + 1))
        .expect("coordinate too large")
}

/// Inverse of [`formal_variable`].
pub fn position_of_variable(v: Var) -> (i64, i64) {
    let z = v - 1;
    // Largest s with s(s+1)/2 <= z.
    let s = ((8 * z + 1).sqrt() - 1) / 2;
    let y = z - s * (s + 1) / 2;
    let x = s - y;
    (unzigzag(x), unzigzag(y))
}

/// A finite rectangle of entries together with the tiling coordinates of its
/// top-left cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub origin: (i64, i64),
    pub matrix: Matrix,
}

impl Window {
    pub fn new(origin: (i64, i64), matrix: Matrix) -> Self {
        Window { origin, matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn ring(&self) -> RingSpec {
        self.matrix.spec()
    }

    pub fn get(&self, r: usize, c: usize) -> &RingValue {
        self.matrix.get(r, c)
    }

    /// Renames variables to `a1, a2, ...` in row-major order of first
    /// occurrence.
    pub fn relabeled(&self) -> Window {
        let mut names: BTreeMap<Var, Var> = BTreeMap::new();
        for v in self.matrix.entries() {
            if let RingValue::Poly(p) = v {
                // Leading-term order inside one entry, row-major across entries.
                for (m, _) in p.terms() {
                    for &(x, _) in m.factors() {
                        let next = names.len() as Var + 1;
                        names.entry(x).or_insert(next);
                    }
                }
            }
        }
        let matrix = self
            .matrix
            .try_map(|v| {
                Ok(match v {
                    RingValue::Poly(p) => RingValue::Poly(p.rename(|x| names[&x])),
                    other => other.clone(),
                })
            })
            .unwrap();
        Window {
            origin: self.origin,
            matrix,
        }
    }

    /// Number of cells holding a non-constant polynomial.
    pub fn parameter_count(&self) -> usize {
        self.matrix
            .entries()
            .iter()
            .filter(|v| matches!(v, RingValue::Poly(p) if p.as_constant().is_none()))
            .count()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .matrix
            .entries()
            .iter()
            .filter_map(RingValue::as_poly)
            .flat_map(Polynomial::variables)
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_numbering_round_trips() {
        let mut seen = std::collections::HashSet::new();
        for i in -30..30 {
            for j in -30..30 {
                let v = formal_variable(i, j);
                assert!(v >= 1);
                assert!(seen.insert(v));
                assert_eq!(position_of_variable(v), (i, j));
            }
        }
    }

    #[test]
    fn lattice_membership_and_periods() {
        let l = Sublattice::new(3, 1, 10, 6).unwrap();
        assert!(l.contains(0, 6) && l.contains(1, 3) && l.contains(2, 0) && l.contains(2, 10));
        assert!(!l.contains(0, 0));
        assert_eq!(l.periods(), (10, 10));
        assert!(Sublattice::new(1, 1, 0, 0).is_err());
    }

    #[test]
    fn patched_rejects_bad_configuration() {
        let l = Sublattice::new(3, 1, 10, 6).unwrap();
        // Lattice lands on +-1 entries of a shifted rule.
        assert!(TilingModel::patched([1, 0, -1, 0], l, ParameterAssignment::Formal).is_err());
        assert!(NumericParams::constant(0).is_err());
        assert!(NumericParams::new(1, [((0, 6), BigInt::from(0))]).is_err());
        let off = NumericParams::new(1, [((0, 0), BigInt::from(2))]).unwrap();
        assert!(TilingModel::patched([0, -1, 0, 1], l, ParameterAssignment::Numeric(off)).is_err());
    }

    #[test]
    fn relabel_follows_row_major_first_occurrence() {
        let l = Sublattice::new(3, 1, 10, 6).unwrap();
        let t = TilingModel::patched([0, -1, 0, 1], l, ParameterAssignment::Formal).unwrap();
        let w = t.extract_window(0, 0, 12, 12).relabeled();
        assert_eq!(w.get(0, 6), &RingValue::variable(1));
        assert_eq!(w.get(1, 3), &RingValue::variable(2));
        assert_eq!(w.get(2, 0), &RingValue::variable(3));
        assert_eq!(w.get(2, 10), &RingValue::variable(4));
        assert_eq!(w.get(11, 3), &RingValue::variable(14));
        assert_eq!(w.parameter_count(), 14);
    }
}
