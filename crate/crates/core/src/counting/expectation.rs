use rayon::prelude::*;

use super::LinearFormSystem;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{PointSet, Table};
use crate::Scalar;

struct Engine<'a, T> {
    fs: &'a [&'a Table<T>],
    rows: &'a [u64],
    ell: usize,
    size: u64,
    /// Forms whose highest variable is `t`, for each `t`.
    closing: Vec<Vec<usize>>,
    /// Forms that use variable `t` and a later one.
    passing: Vec<Vec<usize>>,
}

impl<'a, T: Scalar> Engine<'a, T> {
    /// Sum over `x_t, …, x_{ℓ-1}` with partial form values `partial` and
    /// the product of already closed forms `acc`.
    fn sum_from(&self, t: usize, partial: &mut [u64], acc: T) -> T {
        let last = t + 1 == self.ell;
        let mut total = T::zero();
        for x in 0..self.size {
            let mut prod = acc;
            for &j in &self.closing[t] {
                prod *= self.fs[j].get(partial[j] ^ x);
                if prod == T::zero() {
                    break;
                }
            }
            if prod == T::zero() {
                continue;
            }
            if last {
                total += prod;
            } else {
                for &j in &self.passing[t] {
                    partial[j] ^= x;
                }
                total += self.sum_from(t + 1, partial, prod);
                for &j in &self.passing[t] {
                    partial[j] ^= x;
                }
            }
        }
        total
    }
}

/// `E_X Π_j f_j(L_j(X))` over `X ∈ (F_2^n)^ℓ`, exactly. The sum over the
/// first variable is split across threads; the per-thread partial sums are
/// added in a fixed order so the result does not depend on scheduling.
pub fn product_expectation<T: Scalar>(
    fs: &[&Table<T>],
    l: &LinearFormSystem,
    budget: &Budget,
) -> Result<T> {
    if fs.len() != l.len() {
        return Err(Error::DimensionMismatch {
            expected: l.len(),
            found: fs.len(),
        });
    }
    let Some(first) = fs.first() else {
        return Ok(T::one());
    };
    let n = first.dim();
    if let Some(f) = fs.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    budget.check_log2("product_expectation", (n * l.vars()) as f64)?;
    let ell = l.vars();
    if ell == 0 {
        return Ok(T::one());
    }
    let mut closing = vec![Vec::new(); ell];
    let mut passing = vec![Vec::new(); ell];
    for (j, &r) in l.rows().iter().enumerate() {
        let top = 63 - r.leading_zeros() as usize;
        closing[top].push(j);
        for (t, p) in passing.iter_mut().enumerate().take(top) {
            if r >> t & 1 == 1 {
                p.push(j);
            }
        }
    }
    let eng = Engine {
        fs,
        rows: l.rows(),
        ell,
        size: 1 << n,
        closing,
        passing,
    };
    let parts: Vec<T> = (0..eng.size)
        .into_par_iter()
        .map(|x0| {
            let mut partial = vec![0u64; eng.rows.len()];
            let mut prod = T::one();
            for &j in &eng.closing[0] {
                prod *= eng.fs[j].get(x0);
            }
            if prod == T::zero() {
                return T::zero();
            }
            if ell == 1 {
                return prod;
            }
            for &j in &eng.passing[0] {
                partial[j] = x0;
            }
            eng.sum_from(1, &mut partial, prod)
        })
        .collect();
    let total: T = parts.into_iter().sum();
    Ok(total / T::from_f64(2f64.powi((n * ell) as i32)).unwrap())
}

/// As [`product_expectation`], with `f_j` replaced by `f_j · 1_{mask_j}`.
pub fn product_expectation_masked<T: Scalar>(
    fs: &[&Table<T>],
    masks: &[&PointSet],
    l: &LinearFormSystem,
    budget: &Budget,
) -> Result<T> {
    if masks.len() != fs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: masks.len(),
        });
    }
    let restricted: Vec<Table<T>> = fs
        .iter()
        .zip(masks)
        .map(|(f, m)| {
            Table::from_fn(
                f.dim(),
                |x| if m.contains(x) { f.get(x) } else { T::zero() },
            )
        })
        .collect();
    let refs: Vec<&Table<T>> = restricted.iter().collect();
    product_expectation(&refs, l, budget)
}

/// Number of `X` with every `L_j(X) ∈ sets_j`, i.e. the homomorphism count
/// when all sets are equal.
pub fn homomorphism_count(
    sets: &[&PointSet],
    l: &LinearFormSystem,
    budget: &Budget,
) -> Result<u128> {
    let tables: Vec<Table<f64>> = sets
        .iter()
        .map(|s| Table::new(s.indicator()).unwrap())
        .collect();
    let refs: Vec<&Table<f64>> = tables.iter().collect();
    let n = sets.first().map_or(0, |s| s.dim());
    if n * l.vars() > 52 {
        return Err(Error::parameter(
            "count too large to be exact in double precision",
        ));
    }
    let e = product_expectation(&refs, l, budget)?;
    Ok((e * 2f64.powi((n * l.vars()) as i32)).round() as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{make_geometry, Geometry};

    fn triangle() -> LinearFormSystem {
        LinearFormSystem::new(2, vec![1, 2, 3]).unwrap()
    }

    #[test]
    fn examples() {
        let b = Budget::default();
        let pg = make_geometry(Geometry::Projective { rank: 2 }).unwrap();
        let f = pg.indicator();
        assert!(
            (product_expectation(&[&f, &f, &f], &triangle(), &b).unwrap() - 0.375).abs() < 1e-15
        );
        let ag = make_geometry(Geometry::Affine { rank: 4 })
            .unwrap()
            .indicator();
        assert_eq!(
            product_expectation(&[&ag, &ag, &ag], &triangle(), &b).unwrap(),
            0.0
        );
        let z = Table::<f64>::zeros(2);
        assert_eq!(
            product_expectation(&[&f, &z, &f], &triangle(), &b).unwrap(),
            0.0
        );
    }

    #[test]
    fn nested_loop_oracle() {
        let b = Budget::default();
        let sys = LinearFormSystem::new(3, vec![1, 2, 4, 3, 7, 6]).unwrap();
        let tabs: Vec<Table<f64>> = (0..sys.len())
            .map(|j| Table::from_fn(3, |x| ((x * 7 + j as u64 * 3) % 5) as f64 / 4.0))
            .collect();
        let refs: Vec<&Table<f64>> = tabs.iter().collect();
        let mut direct = 0.0;
        for code in 0..1u64 << 9 {
            let xs = [code & 7, (code >> 3) & 7, code >> 6];
            direct += (0..sys.len())
                .map(|j| tabs[j].get(sys.eval(j, &xs)))
                .product::<f64>();
        }
        direct /= 512.0;
        assert!((product_expectation(&refs, &sys, &b).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn masks_and_counts() {
        let b = Budget::default();
        let pg = make_geometry(Geometry::Projective { rank: 3 }).unwrap();
        let s = pg.elements();
        // Homomorphisms of the triangle into PG(2,2): ordered pairs of
        // distinct nonzero points.
        assert_eq!(homomorphism_count(&[s, s, s], &triangle(), &b).unwrap(), 42);
        let f = pg.indicator();
        let half = crate::gf2::PointSet::from_fn(3, |x| x & 1 == 1);
        let full = product_expectation(&[&f, &f, &f], &triangle(), &b).unwrap();
        let masked =
            product_expectation_masked(&[&f, &f, &f], &[&half, s, s], &triangle(), &b).unwrap();
        assert!(masked <= full);
    }
}
