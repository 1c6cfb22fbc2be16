use serde::Serialize;

use super::extbb::{greedy_indexed, StarCertificate};
use super::group::{CoordinateSubgroup, DyadicGroup};
use crate::error::{Error, Result};
use crate::gf2::rank_of_bits;
use crate::matroid::{apply_map, LinearInjection, Matroid};
use crate::Rational;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BoseBurtonOutcome {
    /// `c` independent points whose nonzero combinations all lie in `M`.
    Witness {
        points: Vec<u64>,
        certificate: Vec<StarCertificate>,
    },
    /// `|M|` does not exceed `2^r - 2^{r-c+1}`.
    Refusal { size: usize, bound: u64 },
}

impl BoseBurtonOutcome {
    pub fn points(&self) -> Option<&[u64]> {
        match self {
            BoseBurtonOutcome::Witness { points, .. } => Some(points),
            BoseBurtonOutcome::Refusal { .. } => None,
        }
    }

    /// The witness as an injection of `PG(c-1,2)` into `F_2^r`.
    pub fn injection(&self, rank: usize) -> Option<LinearInjection> {
        self.points().map(|p| {
            LinearInjection::new(p.to_vec(), rank).expect("witness points are independent")
        })
    }
}

/// A copy of `PG(c-1,2)` in a matroid above the Bose–Burton density, found
/// with the greedy procedure over `F_2^r` (trivial subgroup, every set equal
/// to `M`) and checked by the integrality argument: the count at step `i`
/// is an integer above `2^{i-1} - 1`, hence every combination is in `M`.
pub fn bose_burton_witness(m: &Matroid, c: usize) -> Result<BoseBurtonOutcome> {
    let r = m.rank();
    if c == 0 || c > r {
        return Err(Error::parameter(format!("c must be in 1..={r}, got {c}")));
    }
    let bound = (1u64 << r) - (1u64 << (r + 1 - c));
    if m.len() as u64 <= bound {
        return Ok(BoseBurtonOutcome::Refusal {
            size: m.len(),
            bound,
        });
    }
    let g = DyadicGroup::boolean(r)?;
    let h = CoordinateSubgroup::trivial(&g);
    let points = m.points();
    let out = greedy_indexed(&g, &h, &vec![points; (1 << c) - 1])?;
    for s in &out.certificate {
        if !s.star_holds || s.lhs != Rational::from_integer(1 << (s.i - 1)) {
            return Err(Error::contract(format!(
                "step {} reached {} instead of {}",
                s.i,
                s.lhs,
                1u64 << (s.i - 1)
            )));
        }
    }
    let hs: Vec<u64> = out
        .cosets
        .iter()
        .map(|t| g.index_of(t))
        .collect::<Result<_>>()?;
    let all_in = (1..1u64 << c).all(|x| m.contains(apply_map(&hs, x)));
    if !all_in || rank_of_bits(hs.iter().copied()) != c {
        return Err(Error::contract("witness failed verification"));
    }
    Ok(BoseBurtonOutcome::Witness {
        points: hs,
        certificate: out.certificate,
    })
}
