use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::counting::homomorphism_exists;
use crate::error::{Error, Result};
use crate::gf2::PointSet;
use crate::matroid::{
    count_copies, critical_number, double, find_map, random_matroid, MapQuery, Matroid,
};
use crate::regularity::{
    decompose_linear, reduced_matroid, removal_bookkeeping, Decomposition, ReducedMatroid,
};

fn contains(set: &PointSet, n: &Matroid) -> bool {
    find_map(&MapQuery::injective(set, n)).is_some()
}

/// `M' = M ∩ R_{ε,ζ'}` and the size of `M \ M'`.
fn prune(
    m: &Matroid,
    dec: &Decomposition,
    epsilon: f64,
    zeta_prime: f64,
) -> Result<(ReducedMatroid, PointSet, usize)> {
    let r = reduced_matroid(m.elements(), dec, epsilon, zeta_prime)?;
    let kept = m.elements().intersection(r.points());
    let removed = m.len() - kept.len();
    Ok((r, kept, removed))
}

/// The pruning step of the removal argument on one matroid: decompose with
/// `ζ' = ζ/4`, keep `M' = M ∩ R_{ε,ζ'}`, and compare `E|1_M - 1_{M'}|`
/// with `ζ/2`.
#[derive(Debug, Clone, Serialize)]
pub struct RemovalReport {
    pub rank: usize,
    pub zeta: f64,
    pub zeta_prime: f64,
    pub epsilon: f64,
    pub eta_prime: f64,
    pub complexity: usize,
    /// Points of atoms where `f3` is large in mean square.
    pub s_points: u64,
    /// `|M \ M'|`.
    pub removed: usize,
    pub distance: f64,
    pub bound: f64,
    pub holds: bool,
    pub pruned_contains_n: bool,
    pub copies: Option<u128>,
    /// `α = 2^{-dC|N|}` with `d = |N| - 2`.
    pub alpha: f64,
    pub lower_bound: f64,
}

pub fn removal_check(
    m: &Matroid,
    n: &Matroid,
    zeta: f64,
    eta_prime: f64,
    budget: &Budget,
) -> Result<RemovalReport> {
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::parameter("ζ must lie in (0, 1]"));
    }
    let zeta_prime = zeta / 4.0;
    let epsilon = zeta_prime;
    let (dec, _) = decompose_linear(&m.indicator(), eta_prime)?;
    let (_, kept, removed) = prune(m, &dec, epsilon, zeta_prime)?;
    let book = removal_bookkeeping(m.elements(), &dec, epsilon)?;
    let size = 2f64.powi(m.rank() as i32);
    let distance = removed as f64 / size;
    let copies = match count_copies(m, n, budget) {
        Ok(c) => Some(c.copies),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    let d = n.len().saturating_sub(2);
    let c = dec.factor.complexity();
    let alpha = 2f64.powf(-((d * c * n.len()) as f64));
    Ok(RemovalReport {
        rank: m.rank(),
        zeta,
        zeta_prime,
        epsilon,
        eta_prime,
        complexity: c,
        s_points: book.failing_points,
        removed,
        distance,
        bound: zeta / 2.0,
        holds: distance < zeta / 2.0,
        pruned_contains_n: contains(&kept, n),
        copies,
        alpha,
        lower_bound: alpha * size.powi(n.rank() as i32),
    })
}

/// Copy densities of `N` and `2N` in `M`, and the step of the doubling
/// argument: once `M' = M ∩ R` contains `N`, `2N` maps homomorphically into
/// `R` by contracting each pair.
#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub copies: u128,
    /// `copies / (2^n)^{r(N)}`.
    pub alpha: f64,
    pub copies_double: u128,
    /// `copies_double / (2^n)^{r(N)+1}`.
    pub alpha_double: f64,
    pub zeta_prime: f64,
    pub complexity: usize,
    pub pruned_contains_n: bool,
    pub double_maps_into_r: bool,
    /// `pruned_contains_n` implies `double_maps_into_r`.
    pub consistent: bool,
}

pub fn doubling_check(m: &Matroid, n: &Matroid, budget: &Budget) -> Result<DoublingReport> {
    let nn = double(n);
    let copies = count_copies(m, n, budget)?.copies;
    let copies_double = count_copies(m, &nn, budget)?.copies;
    let size = 2f64.powi(m.rank() as i32);
    let alpha = copies as f64 / size.powi(n.rank() as i32);
    let alpha_double = copies_double as f64 / size.powi(nn.rank() as i32);
    if copies == 0 {
        return Ok(DoublingReport {
            copies,
            alpha,
            copies_double,
            alpha_double,
            zeta_prime: 0.0,
            complexity: 0,
            pruned_contains_n: false,
            double_maps_into_r: false,
            consistent: true,
        });
    }
    let zeta_prime = alpha / n.len() as f64 / 4.0;
    let (dec, _) = decompose_linear(&m.indicator(), zeta_prime)?;
    let (r, kept, _) = prune(m, &dec, zeta_prime, zeta_prime)?;
    let pruned_contains_n = contains(&kept, n);
    let double_maps_into_r = homomorphism_exists(r.points(), &nn).is_some();
    Ok(DoublingReport {
        copies,
        alpha,
        copies_double,
        alpha_double,
        zeta_prime,
        complexity: dec.factor.complexity(),
        pruned_contains_n,
        double_maps_into_r,
        consistent: !pruned_contains_n || double_maps_into_r,
    })
}

/// One density level of a copy-count scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub density: f64,
    /// `1 - 2^{1-χ(N)}`.
    pub threshold: f64,
    pub trials: usize,
    pub mean_size: f64,
    pub mean_copies: f64,
    pub min_copies: u128,
    /// Fraction of samples containing `N`.
    pub contains_fraction: f64,
}

/// Random matroids of rank `n` at each density, with exact copy counts of
/// `N`.
pub fn erdos_stone_scan(
    n: usize,
    target: &Matroid,
    densities: &[f64],
    trials: usize,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<ScanRow>> {
    if trials == 0 {
        return Err(Error::parameter("at least one trial per density"));
    }
    let threshold = 1.0 - 2f64.powi(1 - critical_number(target) as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(densities.len());
    for &density in densities {
        let (mut sizes, mut total, mut min_copies, mut hits) = (0usize, 0u128, u128::MAX, 0usize);
        for _ in 0..trials {
            let m = random_matroid(n, density, &mut rng)?;
            let c = count_copies(&m, target, budget)?.copies;
            sizes += m.len();
            total += c;
            min_copies = min_copies.min(c);
            hits += usize::from(c > 0);
        }
        rows.push(ScanRow {
            density,
            threshold,
            trials,
            mean_size: sizes as f64 / trials as f64,
            mean_copies: total as f64 / trials as f64,
            min_copies,
            contains_fraction: hits as f64 / trials as f64,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{make_geometry, Geometry};
    use rand::SeedableRng;

    fn triangle() -> Matroid {
        make_geometry(Geometry::Projective { rank: 2 }).unwrap()
    }

    #[test]
    fn removal_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..5 {
            let m = random_matroid(8, 0.6, &mut rng).unwrap();
            let rep = removal_check(&m, &triangle(), 0.2, 0.05, &Budget::default()).unwrap();
            assert!(rep.holds, "{rep:?}");
            assert!(rep.pruned_contains_n);
        }
    }

    #[test]
    fn removal_prunes_the_sparse_atom() {
        // Affine part plus a few points of the hyperplane.
        let ag = make_geometry(Geometry::Affine { rank: 7 }).unwrap();
        let m = Matroid::from_points(7, ag.points().into_iter().chain([1, 2, 3])).unwrap();
        let rep = removal_check(&m, &triangle(), 0.4, 0.05, &Budget::default()).unwrap();
        assert_eq!(rep.removed, 3);
        assert!(rep.holds);
        assert!(!rep.pruned_contains_n);
        assert_eq!(rep.copies, Some(97));
    }

    #[test]
    fn doubling_projective() {
        let m = make_geometry(Geometry::Projective { rank: 5 }).unwrap();
        let rep = doubling_check(&m, &triangle(), &Budget::default()).unwrap();
        assert_eq!(rep.copies, 155);
        assert!(rep.copies_double > 0 && rep.consistent && rep.double_maps_into_r);
    }

    #[test]
    fn scan_rows() {
        let rows = erdos_stone_scan(6, &triangle(), &[0.3, 0.9], 3, 1, &Budget::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].threshold, 0.5);
        assert_eq!(rows[1].contains_fraction, 1.0);
    }
}
