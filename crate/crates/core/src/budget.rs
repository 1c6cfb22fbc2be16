use crate::error::{Error, Result};

/// Upper bound on the number of inner operations an exhaustive routine may
/// perform. Exceeding it is reported as [`Error::Budget`], never truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_ops: f64,
}

impl Budget {
    /// Default cap of `2^34` inner terms.
    pub const DEFAULT_LOG2: f64 = 34.0;

    pub fn from_log2(log2: f64) -> Self {
        Budget {
            max_ops: log2.exp2(),
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_ops: f64::INFINITY,
        }
    }

    pub fn log2_limit(&self) -> f64 {
        self.max_ops.log2()
    }

    /// Checks an operation count given as a base-2 logarithm.
    pub fn check_log2(&self, what: &'static str, log2_required: f64) -> Result<()> {
        if log2_required <= self.log2_limit() + 1e-9 {
            Ok(())
        } else {
            Err(Error::Budget {
                what,
                log2_required,
                log2_limit: self.log2_limit(),
            })
        }
    }

    pub fn check(&self, what: &'static str, ops: f64) -> Result<()> {
        self.check_log2(what, ops.max(1.0).log2())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_log2(Self::DEFAULT_LOG2)
    }
}
