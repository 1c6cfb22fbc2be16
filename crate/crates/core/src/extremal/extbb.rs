use serde::{Serialize, Serializer};

use super::group::{CoordinateSubgroup, DyadicGroup};
use crate::error::{Error, Result};
use crate::Rational;

fn ratio_string<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Both sides of the inequality at step `i`, for the chosen coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarCertificate {
    pub i: usize,
    /// Canonical representative of `H_i`.
    pub coset: Vec<u64>,
    #[serde(serialize_with = "ratio_string")]
    pub lhs: Rational,
    #[serde(serialize_with = "ratio_string")]
    pub rhs: Rational,
    pub star_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtbbOutcome {
    pub c: usize,
    pub cosets: Vec<Vec<u64>>,
    pub certificate: Vec<StarCertificate>,
}

impl ExtbbOutcome {
    pub fn all_hold(&self) -> bool {
        self.certificate.iter().all(|s| s.star_holds)
    }
}

/// Index of the set paired with `H_i + Σ x_j H_j`: `2^{i-1} + Σ x_j 2^{j-1}`,
/// with `x` packed as bits (`x_j` is bit `j-1`). One-based.
pub fn set_index(i: usize, x: u64) -> usize {
    (1 << (i - 1)) + x as usize
}

/// `c` from the number of sets `2^c - 1`.
pub(crate) fn levels(num_sets: usize) -> Result<usize> {
    let c = (num_sets + 1).trailing_zeros() as usize;
    if num_sets == 0 || (num_sets + 1) != 1 << c {
        return Err(Error::parameter(format!(
            "expected 2^c - 1 sets, got {num_sets}"
        )));
    }
    Ok(c)
}

/// Greedy choice of cosets `H_1, …, H_c` of `H`, each maximizing
/// `(1/|H|) Σ_x |M_{2^{i-1}+Σ x_j 2^{j-1}} ∩ (H_i + Σ x_j H_j)|` given the
/// earlier ones (ties go to the smallest canonical representative). Sets
/// are given as element indices of `g`; duplicates are ignored.
pub(crate) fn greedy_indexed(
    g: &DyadicGroup,
    h: &CoordinateSubgroup,
    sets: &[Vec<u64>],
) -> Result<ExtbbOutcome> {
    let c = levels(sets.len())?;
    let q = h.quotient();
    let nq = q.order() as usize;
    let mut sizes = Vec::with_capacity(sets.len());
    // Per set, the number of its elements in each coset.
    let mut hist: Vec<Vec<u64>> = Vec::with_capacity(sets.len());
    for s in sets {
        let mut seen = vec![false; g.order() as usize];
        let mut counts = vec![0u64; nq];
        let mut size = 0u64;
        for &x in s {
            if x >= g.order() {
                return Err(Error::parameter(format!(
                    "element index {x} outside the group"
                )));
            }
            if !std::mem::replace(&mut seen[x as usize], true) {
                counts[h.coset_of(g, x) as usize] += 1;
                size += 1;
            }
        }
        sizes.push(size);
        hist.push(counts);
    }

    let mut chosen: Vec<u64> = Vec::with_capacity(c);
    let mut certificate = Vec::with_capacity(c);
    for i in 1..=c {
        // Σ_j x_j H_j for every x ∈ {0,1}^{i-1}, in the quotient.
        let offsets: Vec<u64> = (0..1u64 << (i - 1))
            .map(|x| {
                (0..i - 1)
                    .filter(|j| x >> j & 1 == 1)
                    .fold(0, |acc, j| q.add(acc, chosen[j]))
            })
            .collect();
        let mut best = (0u64, 0u64);
        for t in 0..nq as u64 {
            let lhs: u64 = offsets
                .iter()
                .enumerate()
                .map(|(x, &off)| hist[set_index(i, x as u64) - 1][q.add(t, off) as usize])
                .sum();
            if t == 0 || lhs > best.1 {
                best = (t, lhs);
            }
        }
        let rhs_num: u64 = (1 << (i - 1)..1 << i).map(|j| sizes[j - 1]).sum();
        let lhs = Rational::new(best.1, h.order());
        let rhs = Rational::new(rhs_num, g.order());
        chosen.push(best.0);
        certificate.push(StarCertificate {
            i,
            coset: h.representative(best.0),
            lhs,
            rhs,
            star_holds: lhs >= rhs,
        });
    }
    Ok(ExtbbOutcome {
        c,
        cosets: chosen.iter().map(|&t| h.representative(t)).collect(),
        certificate,
    })
}

/// Greedy extended Bose–Burton: sets `M_1, …, M_{2^c-1}` of group elements
/// (tuples) in, cosets and a per-step certificate out.
pub fn extbb_greedy(
    g: &DyadicGroup,
    h: &CoordinateSubgroup,
    sets: &[Vec<Vec<u64>>],
) -> Result<ExtbbOutcome> {
    if h.orders().len() != g.moduli().len() {
        return Err(Error::DimensionMismatch {
            expected: g.moduli().len(),
            found: h.orders().len(),
        });
    }
    let indexed = sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|x| g.index_of(x))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    greedy_indexed(g, h, &indexed)
}
