use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;

/// `m` linear forms in `ℓ` variables over `F_2`. Row `j` is a bitmask whose
/// bit `i` is the coefficient of variable `x_{i+1}` in `L_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFormSystem {
    ell: usize,
    rows: Vec<u64>,
}

impl LinearFormSystem {
    pub fn new(ell: usize, rows: Vec<u64>) -> Result<Self> {
        if ell > 63 {
            return Err(Error::parameter("at most 63 variables"));
        }
        for (j, &r) in rows.iter().enumerate() {
            if r == 0 {
                return Err(Error::parameter(format!("form {} is zero", j + 1)));
            }
            if r >> ell != 0 {
                return Err(Error::parameter(format!(
                    "form {} uses a variable beyond {ell}",
                    j + 1
                )));
            }
            if rows[..j].contains(&r) {
                return Err(Error::parameter(format!(
                    "form {} repeats an earlier form",
                    j + 1
                )));
            }
        }
        Ok(LinearFormSystem { ell, rows })
    }

    /// Number of variables `ℓ`.
    pub fn vars(&self) -> usize {
        self.ell
    }

    /// Number of forms `m`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `L_j(X)` for `X = (x_1, …, x_ℓ)`.
    pub fn eval(&self, j: usize, xs: &[u64]) -> u64 {
        let mut r = self.rows[j];
        let mut acc = 0;
        while r != 0 {
            acc ^= xs[r.trailing_zeros() as usize];
            r &= r - 1;
        }
        acc
    }

    /// Two copies of the system sharing only the first form, which must be
    /// `x_1`. The second copy keeps `x_1` and replaces `x_2, …, x_ℓ` by new
    /// variables `y_2, …, y_ℓ` (numbered `ℓ+1, …, 2ℓ-1`).
    pub fn glue_double(&self) -> Result<Self> {
        if self.rows.first() != Some(&1) {
            return Err(Error::contract("gluing needs the first form to be x_1"));
        }
        let l = self.ell;
        let mut rows = self.rows.clone();
        rows.extend(self.rows[1..].iter().map(|&r| (r & 1) | ((r >> 1) << l)));
        Self::new(2 * l - 1, rows)
    }
}

/// One form per element of `N`, in increasing bitmask order.
pub fn linear_forms_of(n: &Matroid) -> LinearFormSystem {
    LinearFormSystem::new(n.rank(), n.points()).expect("matroid elements are distinct and nonzero")
}
