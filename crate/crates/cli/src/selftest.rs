//! Built-in examples behind `--selftest`.

use matcount::counting::{homomorphism_exists, linear_forms_of, product_expectation};
use matcount::extremal::{
    bose_burton_witness, doubling_check, erdos_stone_scan, exhaustive_extremal, extbb_greedy,
    removal_check, threshold_demo_n21, CoordinateSubgroup, DyadicGroup, ExtremalMode,
};
use matcount::factor::{consistency_group, factor_uniformity, PolynomialFactor};
use matcount::gf2::{max_subspace_avoiding, walsh_hadamard, XorBasis};
use matcount::gowers::{fourier_bias, gowers_norm};
use matcount::matroid::{
    contains_copy, count_copies, count_injections, critical_number, double, make_geometry,
    parse_matroid, write_matroid,
};
use matcount::regularity::{decompose_linear, reduced_matroid, verify_partition, EtaSchedule};
use matcount::{
    Budget, CTable, Geometry, GowersStrategy, Matroid, NonclassicalPoly, PointSet, RealTable,
    Result,
};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Selftest {
    pub command: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Case = (&'static str, fn() -> Result<bool>);

fn geom(g: Geometry) -> Matroid {
    make_geometry(g).expect("valid geometry")
}

fn pg(rank: usize) -> Matroid {
    geom(Geometry::Projective { rank })
}

fn ag(rank: usize) -> Matroid {
    geom(Geometry::Affine { rank })
}

fn budget() -> Budget {
    Budget::default()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn rank(vs: &[u64]) -> usize {
    let mut b = XorBasis::new();
    vs.iter().filter(|&&v| b.insert(v)).count()
}

fn linear_factor(n: usize, xis: &[u64]) -> Result<PolynomialFactor> {
    PolynomialFactor::new(
        n,
        xis.iter()
            .map(|&x| NonclassicalPoly::linear(n, x))
            .collect(),
    )
}

const MATROID_INFO: &[Case] = &[
    ("rank of two unit vectors is 2", || {
        Ok(rank(&[0b001, 0b010]) == 2)
    }),
    ("rank of the empty set is 0", || Ok(rank(&[]) == 0)),
    ("rank of 110, 011, 101 is 2", || {
        Ok(rank(&[0b110, 0b011, 0b101]) == 2)
    }),
    ("BB(4,2) has 12 elements", || {
        Ok(geom(Geometry::BoseBurton { rank: 4, c: 2 }).len() == 12)
    }),
    ("N(3,2,1) has 5 elements", || {
        Ok(geom(Geometry::Extended { ell: 3, c: 2, k: 1 }).len() == 5)
    }),
    ("text format round trip", || {
        Ok(parse_matroid(&write_matroid(&pg(3)))? == pg(3))
    }),
];

const CRITICAL: &[Case] = &[
    ("empty set avoided by the whole space", || {
        Ok(max_subspace_avoiding(&PointSet::empty(3)).dim() == 3)
    }),
    ("all nonzero points leave only zero", || {
        Ok(max_subspace_avoiding(pg(3).elements()).dim() == 0)
    }),
    ("BB(3,1) is avoided by a plane", || {
        Ok(max_subspace_avoiding(ag(3).elements()).dim() == 2)
    }),
    ("PG(2,2) has critical number 3", || {
        Ok(critical_number(&pg(3)) == 3)
    }),
    ("AG(3,2) has critical number 1", || {
        Ok(critical_number(&ag(4)) == 1)
    }),
];

const CONTAINS: &[Case] = &[
    ("no triangle in AG(2,2)", || {
        Ok(contains_copy(&ag(3), &pg(2)).is_none())
    }),
    ("triangle in PG(2,2)", || {
        Ok(contains_copy(&pg(3), &pg(2)).is_some())
    }),
    ("N(3,2,1) in PG(2,2)", || {
        Ok(contains_copy(&pg(3), &geom(Geometry::Extended { ell: 3, c: 2, k: 1 })).is_some())
    }),
];

const COUNT: &[Case] = &[
    ("identity injection of PG(2,2)", || {
        Ok(count_injections(&pg(3), &pg(3), &budget())? >= 1)
    }),
    ("no triangles in AG(2,2)", || {
        Ok(count_injections(&ag(3), &pg(2), &budget())? == 0)
    }),
    ("seven lines in the Fano plane", || {
        let c = count_copies(&pg(3), &pg(2), &budget())?;
        Ok((c.injections, c.aut, c.copies) == (42, 6, 7))
    }),
];

const GOWERS: &[Case] = &[
    ("constant 1 has norm 1", || {
        let f = CTable::from_real(&RealTable::constant(4, 1.0));
        for d in 1..=3 {
            if !close(
                gowers_norm(&f, d, GowersStrategy::fastest_for(d), &budget())?,
                1.0,
            ) {
                return Ok(false);
            }
        }
        Ok(true)
    }),
    ("character has U^2 norm 1", || {
        let f = CTable::exp_of(&NonclassicalPoly::linear(4, 0b1011));
        Ok(close(
            gowers_norm(&f, 2, GowersStrategy::WhtBase, &budget())?,
            1.0,
        ))
    }),
    ("transform of a constant is a delta", || {
        let t = walsh_hadamard(&RealTable::constant(3, 1.0));
        Ok(t.values()
            .iter()
            .enumerate()
            .all(|(i, &v)| close(v, if i == 0 { 1.0 } else { 0.0 })))
    }),
    ("bias of a constant is 0", || {
        Ok(close(fourier_bias(&RealTable::constant(3, 0.7)), 0.0))
    }),
    ("bias of a hyperplane indicator is 1/2", || {
        Ok(close(fourier_bias(&ag(4).indicator()), 0.5))
    }),
];

const DECOMPOSE: &[Case] = &[
    ("affine indicator splits on one form", || {
        let f = ag(5).indicator();
        let (d, _) = decompose_linear(&f, 0.1)?;
        Ok(d.factor.complexity() == 1 && d.f1 == f && d.f2.values().iter().all(|&v| v == 0.0))
    }),
    ("constant needs no factor", || {
        let (d, _) = decompose_linear(&RealTable::constant(4, 0.3), 0.05)?;
        Ok(d.factor.complexity() == 0 && d.f1.values().iter().all(|&v| close(v, 0.3)))
    }),
];

const VERIFY: &[Case] = &[
    ("linear decomposition passes", || {
        let f = pg(5).indicator();
        let (dec, _) = decompose_linear(&f, 0.1)?;
        let eta = EtaSchedule::Constant(dec.params.eta);
        Ok(verify_partition(&f, &dec, 0.0, &eta, 1, 1.0, &budget())?.passed)
    }),
    ("injected error part fails only (iv)", || {
        let f = ag(4).indicator();
        let (mut dec, _) = decompose_linear(&f, 0.1)?;
        let delta = 0.05;
        dec.f3 = dec.f1.map(|v| 2.0 * delta * (1.0 - 2.0 * v));
        dec.f2 = dec.f2.zip_with(&dec.f3, |a, b| a - b)?;
        let eta = EtaSchedule::Constant(1.0);
        let rep = verify_partition(&f, &dec, delta, &eta, 1, 1.0, &budget())?;
        Ok(rep.checks.iter().all(|c| c.passed == (c.condition != "iv")))
    }),
];

const REDUCED: &[Case] = &[
    ("affine atom only at ζ = 0.9", || {
        let m = ag(5);
        let (dec, _) = decompose_linear(&m.indicator(), 0.1)?;
        let r = reduced_matroid(m.elements(), &dec, 0.1, 0.9)?;
        Ok(r.points() == m.elements() && !r.includes_zero_atom())
    }),
    ("ζ > 1 gives nothing", || {
        let m = pg(4);
        let (dec, _) = decompose_linear(&m.indicator(), 0.1)?;
        Ok(reduced_matroid(m.elements(), &dec, 0.1, 1.1)?.is_empty())
    }),
];

const UNIFORMITY: &[Case] = &[
    ("independent linear atoms are equal", || {
        let h = linear_factor(5, &[0b00011, 0b00100, 0b11000])?.atom_histogram();
        Ok(h.atom_count == 8 && h.counts.values().all(|&c| c == 4))
    }),
    ("quadric atoms have sizes 3 and 1", || {
        let b = PolynomialFactor::new(2, vec![NonclassicalPoly::new(2, [(0b11, 0)])?])?;
        let mut sizes: Vec<u64> = b.atom_histogram().counts.into_values().collect();
        sizes.sort_unstable();
        Ok(sizes == [1, 3])
    }),
    ("independent linear factor is 0-uniform", || {
        Ok(close(
            factor_uniformity(&linear_factor(4, &[1, 2, 12])?, &budget())?,
            0.0,
        ))
    }),
    ("duplicated polynomial gives 1", || {
        Ok(close(
            factor_uniformity(&linear_factor(4, &[5, 5])?, &budget())?,
            1.0,
        ))
    }),
];

const PHI: &[Case] = &[
    ("single form gives two values", || {
        let g = consistency_group(&linear_forms_of(&pg(1)), 1, 0, 2, &budget())?;
        Ok(g.size == 2)
    }),
    ("triangle gives four tuples", || {
        let g = consistency_group(&linear_forms_of(&pg(2)), 1, 0, 3, &budget())?;
        Ok(g.size == 4 && g.dependency_set == [vec![0, 0, 0], vec![1, 1, 1]])
    }),
    ("triangle forms are the three nonzero rows", || {
        Ok(linear_forms_of(&pg(2)).rows() == [1, 2, 3])
    }),
];

const EXTBB: &[Case] = &[
    ("one set in F_2^2 beats the average", || {
        let g = DyadicGroup::boolean(2)?;
        let out = extbb_greedy(
            &g,
            &CoordinateSubgroup::trivial(&g),
            &[vec![vec![1, 0], vec![0, 1], vec![1, 1]]],
        )?;
        let cert = &out.certificate[0];
        Ok(cert.star_holds
            && *cert.lhs.numer() == 1
            && *cert.lhs.denom() == 1
            && cert.rhs == (3, 4).into())
    }),
    ("full sets in F_2^3 hold at every level", || {
        let g = DyadicGroup::boolean(3)?;
        let all: Vec<Vec<u64>> = (0..8).map(|x| g.element(x)).collect();
        let out = extbb_greedy(&g, &CoordinateSubgroup::trivial(&g), &vec![all; 3])?;
        Ok(out.all_hold() && out.cosets.len() == 2)
    }),
];

const BOSE_BURTON: &[Case] = &[
    ("PG(2,2) minus a point holds a line", || {
        let m = Matroid::from_points(3, (2..8).map(|x| x as u64))?;
        Ok(bose_burton_witness(&m, 2)?.points().is_some())
    }),
    ("BB(5,2) is too small for c = 3", || {
        let m = geom(Geometry::BoseBurton { rank: 5, c: 2 });
        Ok(bose_burton_witness(&m, 3)?.points().is_none())
    }),
];

const EXTREMAL: &[Case] = &[
    ("triangle-free rank 3 has 4 points", || {
        Ok(exhaustive_extremal(3, &pg(2), ExtremalMode::Exact, &budget())?.value == 4)
    }),
    ("Fano-free rank 3 has 6 points", || {
        Ok(exhaustive_extremal(3, &pg(3), ExtremalMode::Exact, &budget())?.value == 6)
    }),
];

const REMOVAL_CHECK: &[Case] = &[("stray hyperplane points are pruned", || {
    let m = Matroid::from_points(7, ag(7).points().into_iter().chain([1, 2, 3]))?;
    let rep = removal_check(&m, &pg(2), 0.4, 0.05, &budget())?;
    Ok(rep.removed == 3 && rep.holds && !rep.pruned_contains_n)
})];

const DOUBLING_CHECK: &[Case] = &[
    ("doubling adds one to the rank", || {
        Ok(double(&pg(2)).rank() == 3)
    }),
    ("155 lines in PG(4,2)", || {
        let rep = doubling_check(&pg(5), &pg(2), &budget())?;
        Ok(rep.copies == 155 && rep.consistent)
    }),
    ("zero maps everything", || {
        Ok(homomorphism_exists(&PointSet::from_points(3, [0])?, &pg(3)).is_some())
    }),
    ("nothing maps into the empty set", || {
        Ok(homomorphism_exists(&PointSet::empty(3), &pg(2)).is_none())
    }),
];

const ERDOS_STONE_SCAN: &[Case] = &[
    ("triangle threshold is 1/2", || {
        let rows = erdos_stone_scan(5, &pg(2), &[0.9], 2, 1, &budget())?;
        Ok(rows[0].threshold == 0.5 && rows[0].contains_fraction == 1.0)
    }),
    ("affine triangle expectation vanishes", || {
        let f = ag(4).indicator();
        let e = product_expectation(&[&f, &f, &f], &linear_forms_of(&pg(2)), &budget())?;
        Ok(close(e, 0.0))
    }),
];

const THRESHOLD_DEMO: &[Case] = &[
    ("projective geometry holds N(3,2,1)", || {
        let rep = threshold_demo_n21(&pg(7), 0.2, 3, &budget())?;
        Ok(rep.copy.is_some() && rep.validated)
    }),
    ("affine geometry has critical number 1", || {
        let rep = threshold_demo_n21(&ag(7), 0.2, 3, &budget())?;
        Ok(rep.certificate.is_some_and(|c| c.codim == 1) && rep.validated)
    }),
];

fn cases(command: &str) -> &'static [Case] {
    match command {
        "matroid-info" => MATROID_INFO,
        "critical" => CRITICAL,
        "contains" => CONTAINS,
        "count" => COUNT,
        "gowers" => GOWERS,
        "decompose" => DECOMPOSE,
        "verify" => VERIFY,
        "reduced" => REDUCED,
        "uniformity" => UNIFORMITY,
        "phi" => PHI,
        "extbb" => EXTBB,
        "bose-burton" => BOSE_BURTON,
        "extremal" => EXTREMAL,
        "removal-check" => REMOVAL_CHECK,
        "doubling-check" => DOUBLING_CHECK,
        "erdos-stone-scan" => ERDOS_STONE_SCAN,
        "threshold-demo" => THRESHOLD_DEMO,
        _ => &[],
    }
}

pub fn run(command: &'static str) -> Selftest {
    let checks: Vec<Check> = cases(command)
        .iter()
        .map(|(name, f)| match f() {
            Ok(passed) => Check {
                name,
                passed,
                error: None,
            },
            Err(e) => Check {
                name,
                passed: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Selftest {
        command,
        passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
        checks,
    }
}
