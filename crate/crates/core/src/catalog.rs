//! Constructors for the four reference tilings.
//!
//! Each construction is anchored so its reference block starts at `(0, 0)`.

use std::collections::BTreeSet;

use crate::algebra::{det3, Matrix, Modulus, RingSpec, RingValue};
use crate::tiling::{ParameterAssignment, Sublattice, TilingError, TilingModel};

/// Rule table of the 2x2 identity tiling, indexed by `(j - i) mod 4`.
pub const UNIT_RULE: [i64; 4] = [0, 1, 0, -1];

/// The same pattern shifted by two columns, as drawn underneath the
/// parameters of the density-2/5 tiling.
pub const WILDEST_BASE_RULE: [i64; 4] = [0, -1, 0, 1];

/// Parameter positions of the density-2/5 tiling: `3i + j = 6 (mod 10)`.
pub const WILDEST_LATTICE: Sublattice = Sublattice {
    u: 3,
    v: 1,
    m: 10,
    t: 6,
};

/// The anti-periodic tame tiling by the 2x2 identity matrix.
pub fn unit_tiling() -> TilingModel {
    TilingModel::rule_based(UNIT_RULE.map(RingValue::int)).unwrap()
}

/// Integer tiling with wild density 2/5: the identity tiling with an
/// index-10 sublattice of its zeros replaced by arbitrary nonzero values.
pub fn wildest_integer_tiling(assignment: ParameterAssignment) -> TilingModel {
    TilingModel::patched(WILDEST_BASE_RULE, WILDEST_LATTICE, assignment)
        .expect("lattice positions are zeros of the base rule")
}

/// Integers `p, q, r, s >= 2` with `ps - qr = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PqrsParams {
    p: u64,
    q: u64,
    r: u64,
    s: u64,
}

impl PqrsParams {
    pub fn new(p: u64, q: u64, r: u64, s: u64) -> Result<Self, TilingError> {
        if p < 2 || q < 2 || r < 2 || s < 2 {
            return Err(TilingError::Invalid(format!(
                "p, q, r, s must all exceed 1, got ({p}, {q}, {r}, {s})"
            )));
        }
        if (p * s) as i128 - (q * r) as i128 != 1 {
            return Err(TilingError::Invalid(format!(
                "ps - qr must equal 1, got {}",
                (p * s) as i128 - (q * r) as i128
            )));
        }
        Ok(PqrsParams { p, q, r, s })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn modulus(&self) -> u64 {
        self.p * self.q * self.r * self.s
    }

    pub fn alpha(&self) -> u64 {
        self.q * self.r - 1
    }

    pub fn beta(&self) -> u64 {
        self.p * self.s - 1
    }

    /// `{pqr, pqs, prs, qrs}` reduced mod `N`.
    pub fn triple_products(&self) -> BTreeSet<u64> {
        let (p, q, r, s) = (self.p, self.q, self.r, self.s);
        let n = self.modulus();
        [p * q * r, p * q * s, p * r * s, q * r * s]
            .into_iter()
            .map(|x| x % n)
            .collect()
    }

    /// Every valid parameter set with `pqrs <= max_n`, ordered by `(N, p, q, r, s)`.
    pub fn all_up_to(max_n: u64) -> Vec<PqrsParams> {
        let mut out = Vec::new();
        for p in 2..=max_n / 8 {
            for q in 2..=max_n / (4 * p) {
                for r in 2..=max_n / (2 * p * q) {
                    let num = q * r + 1;
                    if !num.is_multiple_of(p) {
                        continue;
                    }
                    let s = num / p;
                    if s >= 2 && p * q * r * s <= max_n {
                        out.push(PqrsParams { p, q, r, s });
                    }
                }
            }
        }
        out.sort_by_key(|x| (x.modulus(), *x));
        out
    }
}

/// The 4x4 block of the pqrs family, reduced mod `N = pqrs`.
pub fn pqrs_block(params: &PqrsParams) -> Matrix {
    let n = Modulus::new(params.modulus()).unwrap();
    let (p, q, r, s) = (
        params.p as i64,
        params.q as i64,
        params.r as i64,
        params.s as i64,
    );
    let (a, b) = (params.alpha() as i64, params.beta() as i64);
    let rows: [[i64; 4]; 4] = [
        [p, q, -p, -q],
        [r, s, -r, -s],
        [a * p, b * q, p, q],
        [b * r, a * s, r, s],
    ];
    Matrix::from_fn(4, 4, |i, j| RingValue::residue(rows[i][j], n)).unwrap()
}

/// Periodic tiling over `Z/pqrsZ` in which every entry is wild.
pub fn pqrs_tiling(params: &PqrsParams) -> TilingModel {
    TilingModel::periodic(pqrs_block(params))
}

pub const Z36_BLOCK: [[i64; 4]; 4] = [[3, 2, 33, 34], [4, 3, 32, 33], [9, 16, 3, 2], [14, 9, 4, 3]];

/// Periodic fully-wild tiling over `Z/36Z`.
pub fn z36_tiling() -> TilingModel {
    let n = RingSpec::modular(36).unwrap();
    TilingModel::periodic(
        Matrix::from_fn(4, 4, |i, j| RingValue::from_int(n, Z36_BLOCK[i][j])).unwrap(),
    )
}

/// The distinct 3x3 determinants over one wrapped period of a pqrs tiling.
///
/// Panics if a determinant falls outside `{pqr, pqs, prs, qrs}` or vanishes.
pub fn pqrs_det3_spectrum(params: &PqrsParams) -> BTreeSet<u64> {
    let t = pqrs_tiling(params);
    let allowed = params.triple_products();
    let mut out = BTreeSet::new();
    for i in 0..4 {
        for j in 0..4 {
            let cells: Vec<RingValue> = (0..9)
                .map(|k| t.entry(i + k / 3 - 1, j + k % 3 - 1))
                .collect();
            let d = match det3(&cells) {
                RingValue::Mod(r) => r.value(),
                _ => unreachable!(),
            };
            assert!(
                d != 0 && allowed.contains(&d),
                "det3 {d} at ({i}, {j}) not in {allowed:?} for {params:?}"
            );
            out.insert(d);
        }
    }
    out
}
