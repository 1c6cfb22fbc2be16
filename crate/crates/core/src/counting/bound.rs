use serde::Serialize;

use super::{linear_forms_of, product_expectation, product_expectation_masked, LinearFormSystem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factor::{factor_uniformity, groups_for, k_product};
use crate::gf2::PointSet;
use crate::gowers::{gowers_norm_real, GowersStrategy};
use crate::matroid::{apply_map, count_copies, count_maps, find_map, MapQuery, Matroid};
use crate::regularity::{reduced_matroid, Decomposition, EtaSchedule};
use crate::RealTable;

const TOL: f64 = 1e-9;

/// A linear map (basis images) sending every element of `n` into `r`.
/// Injectivity is not required, so `0 ∈ r` always yields the zero map.
pub fn homomorphism_exists(r: &PointSet, n: &Matroid) -> Option<Vec<u64>> {
    if r.contains(0) {
        return Some(vec![0; n.rank()]);
    }
    find_map(&MapQuery::homomorphism(r, n))
}

#[derive(Debug, Clone, Serialize)]
pub struct GowersCountReport {
    pub s: usize,
    /// `|E_X Π f_j(L_j(X))|`.
    pub lhs: f64,
    /// `min_j ‖f_j‖_{U^{s+1}}`.
    pub rhs: f64,
    pub holds: bool,
}

/// Compares a product expectation with the smallest `U^{s+1}` norm among
/// its inputs.
pub fn gowers_count_bound_check(
    fs: &[&RealTable],
    l: &LinearFormSystem,
    s: usize,
    budget: &Budget,
) -> Result<GowersCountReport> {
    let m = l.len();
    if s + 2 < m {
        return Err(Error::contract(format!(
            "the bound needs s >= m - 2 = {}, got s = {s}",
            m - 2
        )));
    }
    if fs.iter().any(|f| f.max_abs() > 1.0 + TOL) {
        return Err(Error::parameter(
            "all inputs must be bounded by 1 in absolute value",
        ));
    }
    let lhs = product_expectation(fs, l, budget)?.abs();
    let d = s + 1;
    let mut rhs = f64::INFINITY;
    for f in fs {
        rhs = rhs.min(gowers_norm_real(
            f,
            d,
            GowersStrategy::fastest_for(d),
            budget,
        )?);
    }
    if fs.is_empty() {
        rhs = 1.0;
    }
    Ok(GowersCountReport {
        s,
        lhs,
        rhs,
        holds: lhs <= rhs + TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "hypotheses unmet")]
    HypothesesUnmet,
}

/// Exact copy count of `N` in `M` next to the lower bound
/// `β (2^n)^ℓ / ‖B‖^m`, `β = ζ^m / (5·2^{ℓ²})`, with the measured
/// quantities the bound relies on.
#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub bound: f64,
    /// Distinct copies of `N` in `M`.
    pub count: u128,
    pub injections: u128,
    pub aut: u128,
    pub beta: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "alphaC")]
    pub alpha_c: f64,
    /// `‖f2‖_{U^{d+1}}`.
    pub eta_measured: f64,
    /// `η(C) = (ζ/3)^m 2^{-dCm-3}`.
    pub eta_bound: f64,
    pub uniformity_measured: f64,
    /// `E_X[Π f1(L_j(X)) 1_{B(L_j(X)) = b_j}]` for the atoms of the
    /// homomorphism witness, against `(1/K - α) ζ^m`.
    pub main_term: Option<f64>,
    pub main_term_bound: f64,
    /// Linear maps sending `N` into `M` that are not injective, against
    /// `ℓ (2^n)^{ℓ-1} 2^{ℓ-1}`.
    pub degenerate_maps: u128,
    pub degenerate_bound: f64,
    pub order: u64,
    pub complexity: usize,
    pub unmet: Vec<String>,
    pub verdict: Verdict,
}

pub fn counting_bound_check(
    m: &Matroid,
    dec: &Decomposition,
    n: &Matroid,
    epsilon: f64,
    zeta: f64,
    budget: &Budget,
) -> Result<CountingReport> {
    let dim = m.rank();
    if dec.factor.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: dec.factor.dim(),
        });
    }
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::parameter("ζ must lie in (0, 1]"));
    }
    let l = linear_forms_of(n);
    let (mm, ell) = (l.len(), l.vars());
    let d = dec.params.d;
    let c = dec.factor.complexity();
    let order = dec.factor.order();
    let mut unmet = Vec::new();

    if d + 2 < mm {
        unmet.push(format!("d = {d} is below |N| - 2 = {}", mm - 2));
    }
    let r = reduced_matroid(m.elements(), dec, epsilon, zeta)?;
    let witness = homomorphism_exists(r.points(), n);
    if witness.is_none() {
        unmet.push("no homomorphism from N into the reduced matroid".into());
    }

    let alpha_c = 2f64.powf(-2.0 * (d * c * mm) as f64);
    let eta_bound = EtaSchedule::counting_default(zeta, mm, d).eval(c);
    let du = d + 1;
    let eta_measured = gowers_norm_real(&dec.f2, du, GowersStrategy::fastest_for(du), budget)?;
    if eta_measured > eta_bound + TOL {
        unmet.push(format!(
            "‖f2‖_(U^{du}) = {eta_measured:.3e} exceeds η(C) = {eta_bound:.3e}"
        ));
    }
    let uniformity_measured = factor_uniformity(&dec.factor, budget)?;
    if uniformity_measured > alpha_c + TOL {
        unmet.push(format!(
            "factor uniformity {uniformity_measured:.3e} exceeds α(C) = {alpha_c:.3e}"
        ));
    }
    let k = k_product(&groups_for(&dec.factor, &l, budget)?);

    let main_term = match &witness {
        Some(images) => {
            let atoms = dec.factor.atom_table();
            let masks: Vec<PointSet> = l
                .rows()
                .iter()
                .map(|&row| {
                    let target = dec.factor.atom_of_bits(apply_map(images, row));
                    PointSet::from_fn(dim, |x| atoms[x as usize] == target.0)
                })
                .collect();
            let fs = vec![&dec.f1; mm];
            let mask_refs: Vec<&PointSet> = masks.iter().collect();
            Some(product_expectation_masked(&fs, &mask_refs, &l, budget)?)
        }
        None => None,
    };
    let main_term_bound = (1.0 / k - alpha_c) * zeta.powi(mm as i32);

    let copies = count_copies(m, n, budget)?;
    budget.check_log2("counting_bound_check", (dim * ell) as f64)?;
    let homs = count_maps(&MapQuery::homomorphism(m.elements(), n));
    let scale = 2f64.powi(dim as i32);
    let degenerate_bound = ell as f64 * scale.powi(ell as i32 - 1) * 2f64.powi(ell as i32 - 1);

    let beta = zeta.powi(mm as i32) / (5.0 * 2f64.powi((ell * ell) as i32));
    let bound = beta * scale.powi(ell as i32) / (order as f64).powi(mm as i32);
    let verdict = if !unmet.is_empty() {
        Verdict::HypothesesUnmet
    } else if copies.copies as f64 >= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CountingReport {
        bound,
        count: copies.copies,
        injections: copies.injections,
        aut: copies.aut,
        beta,
        k,
        alpha_c,
        eta_measured,
        eta_bound,
        uniformity_measured,
        main_term,
        main_term_bound,
        degenerate_maps: homs - copies.injections,
        degenerate_bound,
        order,
        complexity: c,
        unmet,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::PolynomialFactor;
    use crate::matroid::{make_geometry, Geometry};
    use crate::polynomial::NonclassicalPoly;
    use crate::regularity::{conditional_expectation, decompose_linear, DecompositionParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Matroid {
        make_geometry(Geometry::Projective { rank: 2 }).unwrap()
    }

    fn exact_decomposition(f: &RealTable, factor: PolynomialFactor) -> Decomposition {
        let f1 = conditional_expectation(f, &factor).unwrap();
        let f2 = f.zip_with(&f1, |a, b| a - b).unwrap();
        let f3 = RealTable::zeros(f.dim());
        Decomposition {
            f1,
            f2,
            f3,
            factor,
            params: DecompositionParams {
                delta: 0.0,
                eta: 0.0,
                d: 1,
            },
        }
    }

    #[test]
    fn homomorphism_basics() {
        let n = triangle();
        assert_eq!(
            homomorphism_exists(&PointSet::from_points(3, [0, 5]).unwrap(), &n),
            Some(vec![0, 0])
        );
        assert_eq!(homomorphism_exists(&PointSet::empty(3), &n), None);
        let bb = make_geometry(Geometry::BoseBurton { rank: 4, c: 2 }).unwrap();
        let pg = PointSet::from_points(3, [1, 2, 3]).unwrap();
        let images = homomorphism_exists(&pg, &bb).unwrap();
        assert!(bb
            .points()
            .iter()
            .all(|&x| pg.contains(apply_map(&images, x))));
    }

    #[test]
    fn gowers_count_contract_and_zero() {
        let l = linear_forms_of(&triangle());
        let f = RealTable::constant(3, 0.5);
        let z = RealTable::zeros(3);
        let err = gowers_count_bound_check(&[&f, &f, &f], &l, 0, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        let rep = gowers_count_bound_check(&[&f, &z, &f], &l, 1, &Budget::default()).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
    }

    #[test]
    fn gowers_count_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let l = linear_forms_of(&triangle());
        for _ in 0..50 {
            let ts: Vec<RealTable> = (0..3)
                .map(|_| RealTable::from_fn(3, |_| rng.gen_range(-1.0..1.0)))
                .collect();
            let refs: Vec<&RealTable> = ts.iter().collect();
            assert!(
                gowers_count_bound_check(&refs, &l, 1, &Budget::default())
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn characters_reach_one() {
        let l = linear_forms_of(&triangle());
        let chi = RealTable::from_fn(3, |x| {
            if (x & 0b101).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let rep = gowers_count_bound_check(&[&chi, &chi, &chi], &l, 1, &Budget::default()).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12 && (rep.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bose_burton_with_exact_factor_passes() {
        let m = make_geometry(Geometry::BoseBurton { rank: 8, c: 2 }).unwrap();
        let factor = PolynomialFactor::new(
            8,
            vec![
                NonclassicalPoly::linear(8, 1 << 6),
                NonclassicalPoly::linear(8, 1 << 7),
            ],
        )
        .unwrap();
        let dec = exact_decomposition(&m.indicator(), factor);
        let rep =
            counting_bound_check(&m, &dec, &triangle(), 0.1, 0.9, &Budget::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.unmet);
        assert_eq!(rep.order, 4);
        assert_eq!(rep.k, 16.0);
        assert!(rep.main_term.unwrap() >= rep.main_term_bound);
        assert!((rep.degenerate_maps as f64) <= rep.degenerate_bound);
    }

    #[test]
    fn affine_target_has_no_homomorphism() {
        let m = make_geometry(Geometry::Affine { rank: 6 }).unwrap();
        let (dec, _) = decompose_linear(&m.indicator(), 0.1).unwrap();
        let rep =
            counting_bound_check(&m, &dec, &triangle(), 0.1, 0.9, &Budget::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesUnmet);
        assert_eq!(rep.count, 0);
    }

    #[test]
    fn trivial_factor_on_projective_geometry() {
        let n = 11;
        let m = make_geometry(Geometry::Projective { rank: n }).unwrap();
        let dec = exact_decomposition(&m.indicator(), PolynomialFactor::empty(n));
        let rep =
            counting_bound_check(&m, &dec, &triangle(), 0.1, 0.9, &Budget::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.unmet);
        let size = 1u128 << n;
        assert_eq!(rep.count, (size - 1) * (size - 2) / 6);
        assert_eq!(rep.order, 1);
    }
}
