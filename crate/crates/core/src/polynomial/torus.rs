use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Largest supported precision exponent.
pub const MAX_PREC: u32 = 62;

/// An element `num / 2^prec` of the dyadic part of `R/Z`, stored in lowest
/// terms: either `(0, 0)` or `num` odd with `num < 2^prec`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicTorus {
    num: u64,
    prec: u32,
}

#[inline]
pub(crate) fn mask(prec: u32) -> u64 {
    (1u64 << prec) - 1
}

impl DyadicTorus {
    pub const ZERO: DyadicTorus = DyadicTorus { num: 0, prec: 0 };

    /// `num / 2^prec mod 1`, reduced to lowest terms.
    pub fn new(num: u64, prec: u32) -> Self {
        assert!(prec <= MAX_PREC, "precision {prec} exceeds {MAX_PREC}");
        let num = num & mask(prec);
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros();
        DyadicTorus {
            num: num >> tz,
            prec: prec - tz,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    /// Exponent of the reduced denominator; the value lies in `U_prec`.
    pub fn prec(self) -> u32 {
        self.prec
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Numerator over the common denominator `2^p`, `p >= self.prec()`.
    pub fn numerator_at(self, p: u32) -> u64 {
        debug_assert!(p >= self.prec);
        self.num << (p - self.prec)
    }

    /// True iff the value lies in `U_k = 2^-k Z / Z`.
    pub fn in_group(self, k: u32) -> bool {
        self.prec <= k
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u64 << self.prec) as f64
    }

    /// `m · self` for an integer `m`.
    pub fn scale(self, m: i64) -> Self {
        let p = self.prec;
        Self::new(self.num.wrapping_mul(m as u64), p)
    }
}

impl Add for DyadicTorus {
    type Output = DyadicTorus;
    fn add(self, rhs: DyadicTorus) -> DyadicTorus {
        let p = self.prec.max(rhs.prec);
        DyadicTorus::new(self.numerator_at(p).wrapping_add(rhs.numerator_at(p)), p)
    }
}

impl AddAssign for DyadicTorus {
    fn add_assign(&mut self, rhs: DyadicTorus) {
        *self = *self + rhs;
    }
}

impl Neg for DyadicTorus {
    type Output = DyadicTorus;
    fn neg(self) -> DyadicTorus {
        DyadicTorus::new(self.num.wrapping_neg(), self.prec)
    }
}

impl Sub for DyadicTorus {
    type Output = DyadicTorus;
    fn sub(self, rhs: DyadicTorus) -> DyadicTorus {
        self + (-rhs)
    }
}

impl std::iter::Sum for DyadicTorus {
    fn sum<I: Iterator<Item = DyadicTorus>>(iter: I) -> Self {
        iter.fold(DyadicTorus::ZERO, Add::add)
    }
}

/// Written as `num/prec`, i.e. the exponent rather than the denominator.
impl fmt::Display for DyadicTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.prec)
    }
}
