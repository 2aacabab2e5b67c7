use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::poly::{Polynomial, Var};
use super::AlgebraError;

/// The ring a tiling lives in.
///
/// `Polynomial` is `Z[a1, a2, ...]` with countably many variables; concrete
/// values only ever mention finitely many of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Modular(Modulus),
    Polynomial,
}

impl RingSpec {
    pub fn modular(n: u64) -> Result<Self, AlgebraError> {
        Ok(RingSpec::Modular(Modulus::new(n)?))
    }

    /// Z and Z[a] are integral domains; Z/N is treated as having zero divisors
    /// even for prime N, since determinants there are restricted anyway.
    pub fn is_domain(&self) -> bool {
        !matches!(self, RingSpec::Modular(_))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Modular(n) => write!(f, "Z/{}", n.get()),
            RingSpec::Polynomial => write!(f, "Z[a]"),
        }
    }
}

/// A modulus `N >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn reduce_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    pub fn reduce_big(self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.0)).to_u64().unwrap()
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.0 as u128 - b as u128) % self.0 as u128) as u64
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn is_unit(self, a: u64) -> bool {
        a.gcd(&self.0) == 1
    }
}

/// A residue class kept in canonical form `0 <= value < N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce_i64(value),
            modulus,
        }
    }

    pub fn from_big(value: &BigInt, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce_big(value),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    /// Representative in `(-N/2, N/2]`.
    pub fn signed(self) -> i64 {
        let n = self.modulus.get();
        if self.value > n / 2 {
            self.value as i64 - n as i64
        } else {
            self.value as i64
        }
    }
}

/// An exact ring element tagged with its ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingValue {
    Int(BigInt),
    Mod(Residue),
    Poly(Polynomial),
}

impl RingValue {
    pub fn int(v: impl Into<BigInt>) -> Self {
        RingValue::Int(v.into())
    }

    pub fn residue(v: i64, n: Modulus) -> Self {
        RingValue::Mod(Residue::new(v, n))
    }

    pub fn variable(v: Var) -> Self {
        RingValue::Poly(Polynomial::var(v))
    }

    /// Embeds an integer into `spec`.
    pub fn from_int(spec: RingSpec, v: impl Into<BigInt>) -> Self {
        let v = v.into();
        match spec {
            RingSpec::Integers => RingValue::Int(v),
            RingSpec::Modular(n) => RingValue::Mod(Residue::from_big(&v, n)),
            RingSpec::Polynomial => RingValue::Poly(Polynomial::constant(v)),
        }
    }

    pub fn zero(spec: RingSpec) -> Self {
        Self::from_int(spec, 0)
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn spec(&self) -> RingSpec {
        match self {
            RingValue::Int(_) => RingSpec::Integers,
            RingValue::Mod(r) => RingSpec::Modular(r.modulus),
            RingValue::Poly(_) => RingSpec::Polynomial,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Int(v) => v.is_zero(),
            RingValue::Mod(r) => r.value == 0,
            RingValue::Poly(p) => p.is_zero(),
        }
    }

    /// Value as an integer constant, if it is one. Residues map to their
    /// canonical representative.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self {
            RingValue::Int(v) => Some(v.clone()),
            RingValue::Mod(r) => Some(BigInt::from(r.value)),
            RingValue::Poly(p) => p.as_constant(),
        }
    }

    /// Whether the value equals the integer `k` embedded in its ring.
    pub fn equals_int(&self, k: i64) -> bool {
        match self {
            RingValue::Int(v) => *v == BigInt::from(k),
            RingValue::Mod(r) => r.value == r.modulus.reduce_i64(k),
            RingValue::Poly(p) => p.as_constant() == Some(BigInt::from(k)),
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            RingValue::Poly(p) => Some(p),
            _ => None,
        }
    }

    fn check(&self, other: &RingValue) -> Result<(), AlgebraError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch {
                left: self.spec(),
                right: other.spec(),
            })
        }
    }

    pub fn try_add(&self, other: &RingValue) -> Result<RingValue, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a + b),
            (RingValue::Mod(a), RingValue::Mod(b)) => RingValue::Mod(Residue {
                value: a.modulus.add(a.value, b.value),
                modulus: a.modulus,
            }),
            (RingValue::Poly(a), RingValue::Poly(b)) => RingValue::Poly(a.add(b)),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &RingValue) -> Result<RingValue, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a - b),
            (RingValue::Mod(a), RingValue::Mod(b)) => RingValue::Mod(Residue {
                value: a.modulus.sub(a.value, b.value),
                modulus: a.modulus,
            }),
            (RingValue::Poly(a), RingValue::Poly(b)) => RingValue::Poly(a.sub(b)),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &RingValue) -> Result<RingValue, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a * b),
            (RingValue::Mod(a), RingValue::Mod(b)) => RingValue::Mod(Residue {
                value: a.modulus.mul(a.value, b.value),
                modulus: a.modulus,
            }),
            (RingValue::Poly(a), RingValue::Poly(b)) => RingValue::Poly(a.mul(b)),
            _ => unreachable!(),
        })
    }

    pub fn negate(&self) -> RingValue {
        match self {
            RingValue::Int(a) => RingValue::Int(-a),
            RingValue::Mod(a) => RingValue::Mod(Residue {
                value: a.modulus.neg(a.value),
                modulus: a.modulus,
            }),
            RingValue::Poly(a) => RingValue::Poly(a.neg()),
        }
    }

    /// Exact division in an integral domain.
    pub fn div_exact(&self, other: &RingValue) -> Result<RingValue, AlgebraError> {
        self.check(other)?;
        match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => {
                if b.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                let (q, r) = a.div_rem(b);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                Ok(RingValue::Int(q))
            }
            (RingValue::Poly(a), RingValue::Poly(b)) => Ok(RingValue::Poly(a.div_exact(b)?)),
            (RingValue::Mod(_), _) => Err(AlgebraError::Unsupported(
                "exact division over a residue ring".into(),
            )),
            _ => unreachable!(),
        }
    }

    /// Substitutes integers for every variable of a polynomial value.
    /// Integer values pass through unchanged.
    pub fn eval<F>(&self, assignment: F) -> Result<RingValue, AlgebraError>
    where
        F: Fn(Var) -> Option<BigInt>,
    {
        match self {
            RingValue::Poly(p) => Ok(RingValue::Int(p.eval(assignment)?)),
            RingValue::Int(_) => Ok(self.clone()),
            RingValue::Mod(_) => Err(AlgebraError::Unsupported(
                "evaluating a residue as a polynomial".into(),
            )),
        }
    }

    pub(crate) fn weight(&self) -> (usize, u64, u64) {
        match self {
            RingValue::Int(v) => (usize::from(!v.is_zero()), 0, v.bits()),
            RingValue::Mod(r) => (
                usize::from(r.value != 0),
                0,
                64 - r.value.leading_zeros() as u64,
            ),
            RingValue::Poly(p) => p.weight(),
        }
    }
}

/// Evaluates a polynomial value under an explicit variable assignment.
pub fn poly_eval(
    value: &RingValue,
    assignment: &std::collections::BTreeMap<Var, BigInt>,
) -> Result<RingValue, AlgebraError> {
    match value {
        RingValue::Poly(_) => value.eval(|v| assignment.get(&v).cloned()),
        other => Err(AlgebraError::RingMismatch {
            left: other.spec(),
            right: RingSpec::Polynomial,
        }),
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Int(v) => write!(f, "{v}"),
            RingValue::Mod(r) => write!(f, "{}", r.value),
            RingValue::Poly(p) => write!(f, "{p}"),
        }
    }
}

// Operator forms panic on mismatched rings; callers that cannot guarantee a
// shared ring use the `try_*` methods.
impl Add for &RingValue {
    type Output = RingValue;
    fn add(self, rhs: &RingValue) -> RingValue {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &RingValue {
    type Output = RingValue;
    fn sub(self, rhs: &RingValue) -> RingValue {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl Mul for &RingValue {
    type Output = RingValue;
    fn mul(self, rhs: &RingValue) -> RingValue {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        self.negate()
    }
}

impl From<i64> for RingValue {
    fn from(v: i64) -> Self {
        RingValue::Int(v.into())
    }
}
