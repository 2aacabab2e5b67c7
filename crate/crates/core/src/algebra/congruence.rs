use num_integer::Integer;

/// Solution set of a linear congruence `a*x = c (mod N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceSolutions {
    modulus: u64,
    family: Option<Family>,
}

/// `base, base + step, ..., base + (count - 1)*step` with `step * count = N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub base: u64,
    pub step: u64,
    pub count: u64,
}

impl CongruenceSolutions {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_none()
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn len(&self) -> u64 {
        self.family.map_or(0, |f| f.count)
    }

    /// Solutions in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let (base, step, count) = self.family.map_or((0, 0, 0), |f| (f.base, f.step, f.count));
        (0..count).map(move |k| base + k * step)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.family
            .is_some_and(|f| x < self.modulus && x % f.step == f.base)
    }
}

/// Solves `a*x = c (mod n)` for residues `a, c`.
///
/// There are exactly `gcd(a, n)` solutions when that gcd divides `c`, and
/// none otherwise.
pub fn solve_linear_congruence(a: u64, c: u64, n: u64) -> CongruenceSolutions {
    assert!(n >= 2, "modulus must be at least 2");
    let (a, c) = (a % n, c % n);
    let g = a.gcd(&n);
    if c % g != 0 {
        return CongruenceSolutions {
            modulus: n,
            family: None,
        };
    }
    let step = n / g;
    let base = if step == 1 {
        0
    } else {
        let inv = inverse(a / g, step).expect("a/g is a unit modulo n/g");
        ((c / g) as u128 * inv as u128 % step as u128) as u64
    };
    CongruenceSolutions {
        modulus: n,
        family: Some(Family {
            base,
            step,
            count: g,
        }),
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}
