use std::collections::BTreeMap;

use serde::Serialize;

use super::Decomposition;
use crate::error::{Error, Result};
use crate::gf2::PointSet;

const TOL: f64 = 1e-12;

/// Union of the atoms on which `f3` is small in mean square and `M` is
/// dense.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedMatroid {
    pub epsilon: f64,
    pub zeta: f64,
    /// Included atom labels, ascending.
    pub atoms: Vec<u64>,
    /// Label of the atom containing the zero vector.
    pub zero_atom: u64,
    #[serde(skip)]
    points: PointSet,
    #[serde(skip)]
    atom_of_point: Vec<u64>,
}

impl ReducedMatroid {
    /// All points of the included atoms, the zero vector among them when
    /// its atom qualifies.
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn includes_zero_atom(&self) -> bool {
        self.atoms.binary_search(&self.zero_atom).is_ok()
    }

    /// The point set with the whole zero atom removed.
    pub fn points_excluding_zero_atom(&self) -> PointSet {
        let mut p = self.points.clone();
        if self.includes_zero_atom() {
            for (x, &a) in self.atom_of_point.iter().enumerate() {
                if a == self.zero_atom {
                    p.remove(x as u64);
                }
            }
        }
        p
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Default, Clone, Copy)]
struct AtomStats {
    count: u64,
    f_sum: f64,
    f3_sq_sum: f64,
}

fn atom_stats(m: &PointSet, dec: &Decomposition) -> Result<(Vec<u64>, BTreeMap<u64, AtomStats>)> {
    let n = dec.factor.dim();
    if m.dim() != n || dec.f3.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    let atoms = dec.factor.atom_table();
    let mut stats: BTreeMap<u64, AtomStats> = BTreeMap::new();
    for (x, &a) in atoms.iter().enumerate() {
        let s = stats.entry(a).or_default();
        s.count += 1;
        if m.contains(x as u64) {
            s.f_sum += 1.0;
        }
        let v = dec.f3.values()[x];
        s.f3_sq_sum += v * v;
    }
    Ok((atoms, stats))
}

/// `R_{ε,ζ}`: atoms `b` with `E[f3² | b] <= ε²` and `E[1_M | b] >= ζ`.
pub fn reduced_matroid(
    m: &PointSet,
    dec: &Decomposition,
    epsilon: f64,
    zeta: f64,
) -> Result<ReducedMatroid> {
    let (atom_of_point, stats) = atom_stats(m, dec)?;
    let atoms: Vec<u64> = stats
        .iter()
        .filter(|(_, s)| {
            let c = s.count as f64;
            s.f3_sq_sum / c <= epsilon * epsilon + TOL && s.f_sum / c >= zeta - TOL
        })
        .map(|(&a, _)| a)
        .collect();
    let points = PointSet::from_fn(m.dim(), |x| {
        atoms.binary_search(&atom_of_point[x as usize]).is_ok()
    });
    Ok(ReducedMatroid {
        epsilon,
        zeta,
        zero_atom: atom_of_point[0],
        atoms,
        points,
        atom_of_point,
    })
}

/// Points lying in atoms with `E[f3² | b] > ε²`, against the Markov bound
/// `‖f3‖_2² / ε² · 2^n`.
#[derive(Debug, Clone, Serialize)]
pub struct RemovalBookkeeping {
    pub failing_points: u64,
    pub bound: f64,
    pub holds: bool,
}

pub fn removal_bookkeeping(
    m: &PointSet,
    dec: &Decomposition,
    epsilon: f64,
) -> Result<RemovalBookkeeping> {
    let (_, stats) = atom_stats(m, dec)?;
    let failing_points = stats
        .values()
        .filter(|s| s.f3_sq_sum / s.count as f64 > epsilon * epsilon + TOL)
        .map(|s| s.count)
        .sum();
    let total: f64 = stats.values().map(|s| s.f3_sq_sum).sum();
    let bound = total / (epsilon * epsilon);
    Ok(RemovalBookkeeping {
        failing_points,
        bound,
        holds: failing_points as f64 <= bound + TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::super::decompose_linear;
    use super::*;
    use crate::matroid::{make_geometry, Geometry};
    use crate::RealTable;

    #[test]
    fn affine_keeps_its_own_atom() {
        let m = make_geometry(Geometry::Affine { rank: 5 }).unwrap();
        let (dec, _) = decompose_linear(&m.indicator(), 0.1).unwrap();
        let r = reduced_matroid(m.elements(), &dec, 0.1, 0.9).unwrap();
        assert_eq!(r.atoms.len(), 1);
        assert_eq!(r.points(), m.elements());
        assert!(!r.includes_zero_atom());
        let none = reduced_matroid(m.elements(), &dec, 0.1, 1.5).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn zero_atom_flag() {
        let m = make_geometry(Geometry::Projective { rank: 4 }).unwrap();
        let (dec, _) = decompose_linear(&m.indicator(), 0.5).unwrap();
        let r = reduced_matroid(m.elements(), &dec, 0.1, 0.5).unwrap();
        assert!(r.includes_zero_atom());
        assert!(r.points().contains(0));
        assert!(r.points_excluding_zero_atom().is_empty());
    }

    #[test]
    fn markov_bound_on_planted_f3() {
        let m = make_geometry(Geometry::BoseBurton { rank: 6, c: 2 }).unwrap();
        let (mut dec, _) = decompose_linear(&m.indicator(), 0.05).unwrap();
        dec.f3 = RealTable::from_fn(6, |x| if x % 5 == 0 { 0.3 } else { 0.0 });
        for eps in [0.05, 0.1, 0.2] {
            let r = removal_bookkeeping(m.elements(), &dec, eps).unwrap();
            assert!(r.holds, "{r:?}");
        }
        // With f3 = 0 every atom passes condition (1).
        dec.f3 = RealTable::zeros(6);
        assert_eq!(
            removal_bookkeeping(m.elements(), &dec, 0.01)
                .unwrap()
                .failing_points,
            0
        );
    }
}
