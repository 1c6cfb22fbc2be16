//! Decompositions `f = f1 + f2 + f3` relative to a polynomial factor, their
//! verification, and reduced matroids.

mod bundle;
mod reduced;
mod schedule;
mod verify;

use serde::{Deserialize, Serialize};

pub use bundle::{parse_table, read_bundle, write_bundle, write_table};
pub use reduced::{reduced_matroid, removal_bookkeeping, ReducedMatroid, RemovalBookkeeping};
pub use schedule::EtaSchedule;
pub use verify::{verify_partition, ConditionCheck, PartitionReport};

use crate::error::{Error, Result};
use crate::factor::PolynomialFactor;
use crate::gf2::walsh_hadamard;
use crate::gowers::fourier_bias;
use crate::polynomial::NonclassicalPoly;
use crate::RealTable;

/// Parameters a decomposition was produced for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionParams {
    pub delta: f64,
    pub eta: f64,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub f1: RealTable,
    pub f2: RealTable,
    pub f3: RealTable,
    pub factor: PolynomialFactor,
    pub params: DecompositionParams,
}

/// `E[f | B]`: the mean of `f` over the atom of each point.
pub fn conditional_expectation(f: &RealTable, b: &PolynomialFactor) -> Result<RealTable> {
    if f.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: f.dim(),
        });
    }
    let atoms = b.atom_table();
    let mut sums = std::collections::HashMap::<u64, (f64, u64)>::new();
    for (x, &a) in atoms.iter().enumerate() {
        let e = sums.entry(a).or_insert((0.0, 0));
        e.0 += f.values()[x];
        e.1 += 1;
    }
    Ok(RealTable::from_fn(f.dim(), |x| {
        let (s, c) = sums[&atoms[x as usize]];
        s / c as f64
    }))
}

/// Degree-1 decomposition by energy increment: while `g = f - E[f|B]` has
/// a Fourier coefficient above `η'` in absolute value, add the linear form
/// of the largest one (smallest index on ties) to `B`.
///
/// Returns the decomposition (with `f3 = 0`) and the number of forms added.
/// The recorded `η` is `√η'`, the resulting bound on `‖f2‖_{U^2}`.
pub fn decompose_linear(f: &RealTable, eta_prime: f64) -> Result<(Decomposition, usize)> {
    if eta_prime.is_nan() || eta_prime <= 0.0 {
        return Err(Error::parameter("η' must be positive"));
    }
    if f.values().iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::parameter("decompose_linear needs 0 <= f <= 1"));
    }
    let n = f.dim();
    let max_iter = (eta_prime.powi(-2)).ceil() as usize;
    let mut b = PolynomialFactor::empty(n);
    let mut iterations = 0;
    loop {
        let f1 = conditional_expectation(f, &b)?;
        let g = f.zip_with(&f1, |a, c| a - c)?;
        if fourier_bias(&g) <= eta_prime {
            let params = DecompositionParams {
                delta: 0.0,
                eta: eta_prime.sqrt(),
                d: 1,
            };
            let f3 = RealTable::zeros(n);
            return Ok((
                Decomposition {
                    f1,
                    f2: g,
                    f3,
                    factor: b,
                    params,
                },
                iterations,
            ));
        }
        if iterations >= max_iter {
            return Err(Error::contract(format!(
                "energy increment did not stop within {max_iter} steps"
            )));
        }
        let spec = walsh_hadamard(&g);
        let (xi, _) =
            spec.values()
                .iter()
                .enumerate()
                .skip(1)
                .fold((0usize, -1.0f64), |best, (i, v)| {
                    if v.abs() > best.1 {
                        (i, v.abs())
                    } else {
                        best
                    }
                });
        b.push(NonclassicalPoly::linear(n, xi as u64))?;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{make_geometry, Geometry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_indicator_is_one_atom_split() {
        let f = make_geometry(Geometry::Affine { rank: 5 })
            .unwrap()
            .indicator();
        let (d, it) = decompose_linear(&f, 0.1).unwrap();
        assert_eq!(it, 1);
        assert_eq!(d.factor.complexity(), 1);
        assert_eq!(d.f1, f);
        assert!(d.f2.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_needs_no_factor() {
        let f = RealTable::constant(4, 0.3);
        let (d, it) = decompose_linear(&f, 0.05).unwrap();
        assert_eq!(it, 0);
        assert_eq!(d.factor.complexity(), 0);
        assert!(d.f1.values().iter().all(|&v| (v - 0.3).abs() < 1e-15));
    }

    #[test]
    fn iteration_bound_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let f = RealTable::from_fn(6, |_| if rng.gen_bool(0.4) { 1.0 } else { 0.0 });
            let eta = rng.gen_range(0.05..0.3);
            let (_, it) = decompose_linear(&f, eta).unwrap();
            assert!(it as f64 <= (eta * eta).recip().ceil());
        }
    }

    #[test]
    fn conditional_expectation_is_constant_on_atoms() {
        let f = RealTable::from_fn(4, |x| (x % 3) as f64 / 2.0);
        let b = PolynomialFactor::new(4, vec![NonclassicalPoly::linear(4, 0b0101)]).unwrap();
        let e = conditional_expectation(&f, &b).unwrap();
        let atoms = b.atom_table();
        for x in 0..16 {
            for y in 0..16 {
                if atoms[x] == atoms[y] {
                    assert_eq!(e.values()[x], e.values()[y]);
                }
            }
        }
        assert!((e.mean() - f.mean()).abs() < 1e-15);
    }
}
