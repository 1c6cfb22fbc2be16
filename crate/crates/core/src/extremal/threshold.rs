use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{Gf2Subspace, PointSet};
use crate::matroid::{
    apply_map, find_map, make_geometry, Geometry, LinearInjection, MapQuery, Matroid,
};
use crate::regularity::{decompose_linear, reduced_matroid};

/// Shift centers tried before giving up.
const MAX_CENTERS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdCase {
    /// `D = R_{ε,1/2+ζ}` is nonempty.
    DenseAtom,
    /// `D` is empty.
    NoDenseAtom,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalCertificate {
    /// Basis of a subspace disjoint from `M`.
    pub basis: Vec<u64>,
    pub codim: usize,
    /// Complexity of the factor, which bounds the codimension.
    pub complexity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub rank: usize,
    pub ell: usize,
    pub delta: f64,
    pub zeta: f64,
    pub eta_prime: f64,
    pub complexity: usize,
    pub case: ThresholdCase,
    pub r_size: usize,
    pub d_size: usize,
    /// `(1/2 + 2(δ - 2ζ)) 2^n`.
    pub r_bound: f64,
    /// A copy of `PG(1,2)` in `R` minus the origin, as basis images.
    pub triangle_in_r: Option<Vec<u64>>,
    pub centers_tried: usize,
    pub h: Option<u64>,
    /// Basis images of a copy of `N(ℓ,2,1)` in `M`.
    pub copy: Option<Vec<u64>>,
    pub certificate: Option<CriticalCertificate>,
    /// The copy or certificate was checked point by point.
    pub validated: bool,
}

impl ThresholdReport {
    pub fn resolved(&self) -> bool {
        self.validated && (self.copy.is_some() || self.certificate.is_some())
    }
}

/// Copy of `N(ℓ,2,1)` with `e_1 ↦ h`: an affine geometry `AG(ℓ-2,2)` in
/// `M_h` independent of `h`, placed on the remaining coordinates.
fn copy_through(m: &Matroid, h: u64, ell: usize) -> Option<Vec<u64>> {
    let mh = m.elements().intersection(&m.elements().translate(h));
    let ag = make_geometry(Geometry::Affine { rank: ell - 1 }).ok()?;
    let images = find_map(&MapQuery::injective(&mh, &ag).avoiding([h]))?;
    Some(std::iter::once(h).chain(images).collect())
}

fn validate_copy(m: &Matroid, n: &Matroid, images: &[u64]) -> bool {
    let Ok(inj) = LinearInjection::new(images.to_vec(), m.rank()) else {
        return false;
    };
    if !inj.maps_into(n, m.elements()) {
        return false;
    }
    let image = PointSet::from_points(m.rank(), n.points().iter().map(|&x| apply_map(images, x)));
    image.is_ok_and(|s| find_map(&MapQuery::injective(&s, n)).is_some())
}

/// The two-case search for `N(ℓ,2,1)` in a matroid of density at least
/// `1/4 + δ`, run on a degree-1 decomposition with `ζ = δ/2`.
///
/// With a dense atom, shifts `h` from the zero atom are tried; if the zero
/// atom misses `M` it is returned as a subspace certifying `χ(M) <= C`.
/// Without one, shifts are tried in decreasing order of the number of
/// triangles through them.
pub fn threshold_demo_n21(
    m: &Matroid,
    delta: f64,
    ell: usize,
    budget: &Budget,
) -> Result<ThresholdReport> {
    threshold_demo_n21_with(m, delta, ell, delta / 4.0, budget)
}

/// As [`threshold_demo_n21`] with an explicit Fourier threshold `η'` for
/// the decomposition (the default is `ζ/2`).
pub fn threshold_demo_n21_with(
    m: &Matroid,
    delta: f64,
    ell: usize,
    eta_prime: f64,
    budget: &Budget,
) -> Result<ThresholdReport> {
    let r = m.rank();
    if ell < 2 || ell > r {
        return Err(Error::parameter(format!("ℓ must be in 2..={r}, got {ell}")));
    }
    if !(delta > 0.0 && delta < 0.75) {
        return Err(Error::parameter("δ must lie in (0, 3/4)"));
    }
    let size = 2f64.powi(r as i32);
    if (m.len() as f64) < (0.25 + delta) * size {
        return Err(Error::contract(format!(
            "|M| = {} is below (1/4 + δ) 2^r = {:.1}",
            m.len(),
            (0.25 + delta) * size
        )));
    }
    // Rank-(ℓ-1) map search per center.
    budget.check_log2(
        "threshold_demo_n21",
        (r * (ell - 1)) as f64 + (MAX_CENTERS as f64).log2(),
    )?;
    let n = make_geometry(Geometry::Extended { ell, c: 2, k: 1 })?;
    let zeta = delta / 2.0;
    let epsilon = zeta;
    let (dec, _) = decompose_linear(&m.indicator(), eta_prime)?;
    let rm = reduced_matroid(m.elements(), &dec, epsilon, zeta)?;
    let dm = reduced_matroid(m.elements(), &dec, epsilon, 0.5 + zeta)?;
    let complexity = dec.factor.complexity();

    let mut report = ThresholdReport {
        rank: r,
        ell,
        delta,
        zeta,
        eta_prime,
        complexity,
        case: ThresholdCase::DenseAtom,
        r_size: rm.points().len(),
        d_size: dm.points().len(),
        r_bound: (0.5 + 2.0 * (delta - 2.0 * zeta)) * size,
        triangle_in_r: None,
        centers_tried: 0,
        h: None,
        copy: None,
        certificate: None,
        validated: false,
    };

    let centers: Vec<u64> = if !dm.is_empty() {
        let zero = dec.factor.atom_of_bits(0);
        let atoms = dec.factor.atom_table();
        let b0: Vec<u64> = (0..1u64 << r)
            .filter(|&x| atoms[x as usize] == zero.0)
            .collect();
        let hits: Vec<u64> = b0.iter().copied().filter(|&x| m.contains(x)).collect();
        if hits.is_empty() {
            let sub = Gf2Subspace::span(r, b0.iter().copied())?;
            report.validated =
                sub.elements().iter().all(|&x| !m.contains(x)) && sub.codim() <= complexity;
            report.certificate = Some(CriticalCertificate {
                basis: sub.basis().to_vec(),
                codim: sub.codim(),
                complexity,
            });
            return Ok(report);
        }
        hits
    } else {
        report.case = ThresholdCase::NoDenseAtom;
        let tri = make_geometry(Geometry::Projective { rank: 2 })?;
        let mut r_star = rm.points().clone();
        r_star.remove(0);
        report.triangle_in_r = find_map(&MapQuery::injective(&r_star, &tri));
        let mut by_load: Vec<(usize, u64)> = m
            .elements()
            .iter()
            .map(|h| {
                (
                    m.elements().intersection(&m.elements().translate(h)).len(),
                    h,
                )
            })
            .collect();
        by_load.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        by_load.into_iter().map(|(_, h)| h).collect()
    };

    for &h in centers.iter().take(MAX_CENTERS) {
        report.centers_tried += 1;
        if let Some(images) = copy_through(m, h, ell) {
            report.validated = validate_copy(m, &n, &images);
            report.h = Some(h);
            report.copy = Some(images);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::random_matroid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projective_geometry_gives_a_copy() {
        let m = make_geometry(Geometry::Projective { rank: 8 }).unwrap();
        let rep = threshold_demo_n21(&m, 0.2, 3, &Budget::default()).unwrap();
        assert_eq!(rep.case, ThresholdCase::DenseAtom);
        assert!(rep.copy.is_some() && rep.validated);
    }

    #[test]
    fn affine_geometry_gives_a_certificate() {
        let m = make_geometry(Geometry::Affine { rank: 8 }).unwrap();
        let rep = threshold_demo_n21(&m, 0.2, 3, &Budget::default()).unwrap();
        let cert = rep.certificate.as_ref().unwrap();
        assert_eq!((cert.codim, cert.complexity), (1, 1));
        assert!(rep.validated);
    }

    #[test]
    fn sparse_random_set_takes_the_second_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = random_matroid(10, 0.3, &mut rng).unwrap();
        let rep = threshold_demo_n21_with(&m, 0.03, 3, 0.1, &Budget::default()).unwrap();
        assert_eq!(rep.case, ThresholdCase::NoDenseAtom);
        assert_eq!(rep.complexity, 0);
        assert!(rep.resolved());
        let fine = threshold_demo_n21(&m, 0.03, 3, &Budget::default()).unwrap();
        assert!(fine.resolved(), "{fine:?}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let m = make_geometry(Geometry::Projective { rank: 4 }).unwrap();
        assert!(matches!(
            threshold_demo_n21(&m, 0.1, 5, &Budget::default()),
            Err(Error::Parameter(_))
        ));
        let a = make_geometry(Geometry::BoseBurton { rank: 6, c: 1 }).unwrap();
        let sparse =
            Matroid::from_points(6, a.points().into_iter().take(12).chain([1, 2, 4, 8, 16]))
                .unwrap();
        assert!(matches!(
            threshold_demo_n21(&sparse, 0.1, 3, &Budget::default()),
            Err(Error::Contract(_))
        ));
    }
}
