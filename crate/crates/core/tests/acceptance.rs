//! End-to-end acceptance checks. Each criterion prints one line with its
//! verdict, a short summary and the wall time against its limit.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use matcount::counting::{
    counting_bound_check, gowers_count_bound_check, linear_forms_of, LinearFormSystem, Verdict,
};
use matcount::extremal::{
    bose_burton_witness, exhaustive_extremal, extbb_greedy, removal_check, set_index,
    threshold_demo_n21, threshold_demo_n21_with, CoordinateSubgroup, DyadicGroup, ExtremalMode,
};
use matcount::factor::{
    consistency_group, equidistribution_report, equidistribution_scan, factor_uniformity,
    PolynomialFactor,
};
use matcount::gf2::XorBasis;
use matcount::gowers::gowers_norm;
use matcount::matroid::{apply_map, make_geometry, random_matroid, Geometry, Matroid};
use matcount::polynomial::catalog;
use matcount::regularity::{decompose_linear, Decomposition, DecompositionParams};
use matcount::{
    Budget, CTable, DyadicTorus, GowersStrategy, NonclassicalPoly, Rational, RealTable,
};
use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn budget() -> Budget {
    Budget::default()
}

fn pg(rank: usize) -> Matroid {
    make_geometry(Geometry::Projective { rank }).unwrap()
}

fn independent(vs: &[u64]) -> bool {
    let mut b = XorBasis::new();
    vs.iter().all(|&v| b.insert(v))
}

fn bose_burton_exact() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=4usize {
        for c in 1..=n {
            let got = exhaustive_extremal(n, &pg(c), ExtremalMode::Exact, &budget())
                .unwrap()
                .value;
            let want = (1usize << n) - (1usize << (n - c + 1));
            cases += 1;
            if got != want {
                bad.push(format!("n={n} c={c}: {got} vs {want}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{cases} (n,c) pairs, mismatches: {bad:?}"),
    )
}

/// `(y - r)` lies in `H` componentwise.
fn in_coset(y: &[u64], rep: &[u64], moduli: &[u64], orders: &[u64]) -> bool {
    y.iter()
        .zip(rep)
        .zip(moduli.iter().zip(orders))
        .all(|((&a, &b), (&m, &o))| ((a + m - b % m) % m) % (m / o) == 0)
}

fn extbb_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    let mut max_order = 0;
    for _ in 0..1000 {
        let coords = rng.gen_range(1..=4);
        let mut depths = Vec::new();
        let mut used = 0;
        for _ in 0..coords {
            let room = 12 - used - (coords - depths.len() - 1);
            let k = rng.gen_range(0..room.min(4));
            used += k + 1;
            depths.push(k as u32);
        }
        let g = DyadicGroup::from_depths(&depths).unwrap();
        let orders: Vec<u64> = g
            .moduli()
            .iter()
            .map(|&m| 1 << rng.gen_range(0..=m.trailing_zeros()))
            .collect();
        let h = CoordinateSubgroup::new(&g, orders.clone()).unwrap();
        max_order = max_order.max(g.order());
        let c = rng.gen_range(1..=3);
        let sets: Vec<Vec<Vec<u64>>> = (0..(1 << c) - 1)
            .map(|_| {
                let p = rng.gen_range(0.0..1.0);
                (0..g.order())
                    .filter(|_| rng.gen_bool(p))
                    .map(|x| g.element(x))
                    .collect()
            })
            .collect();
        let out = extbb_greedy(&g, &h, &sets).unwrap();
        let moduli = g.moduli();
        for (i, cert) in (1..=c).zip(&out.certificate) {
            let mut count = 0u64;
            for x in 0..1u64 << (i - 1) {
                let mut rep = out.cosets[i - 1].clone();
                for j in 0..i - 1 {
                    if x >> j & 1 == 1 {
                        for (k, v) in rep.iter_mut().enumerate() {
                            *v = (*v + out.cosets[j][k]) % moduli[k];
                        }
                    }
                }
                count += sets[set_index(i, x) - 1]
                    .iter()
                    .filter(|y| in_coset(y, &rep, moduli, &orders))
                    .count() as u64;
            }
            let lhs = Rational::new(count, h.order());
            let rhs_num: u64 = (1 << (i - 1)..1 << i)
                .map(|j| sets[j - 1].len() as u64)
                .sum();
            let rhs = Rational::new(rhs_num, g.order());
            if lhs < rhs || lhs != cert.lhs || rhs != cert.rhs || !cert.star_holds {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("1000 instances up to order {max_order}, {failures} failures"),
    )
}

fn bose_burton_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for _ in 0..200 {
        let c = rng.gen_range(1..=3);
        let r = rng.gen_range(c..=6);
        let floor = (1usize << r) - (1usize << (r - c + 1));
        let m = loop {
            let size = rng.gen_range(floor + 1..1 << r);
            let mut pts: Vec<u64> = (1..1u64 << r).collect();
            pts.shuffle(&mut rng);
            if let Ok(m) = Matroid::from_points(r, pts.into_iter().take(size)) {
                break m;
            }
        };
        let ok = bose_burton_witness(&m, c)
            .ok()
            .and_then(|o| o.points().map(<[u64]>::to_vec))
            .is_some_and(|p| {
                p.len() == c
                    && independent(&p)
                    && (1..1u64 << c).all(|x| m.contains(apply_map(&p, x)))
            });
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("200 samples, {failures} failures"))
}

const STRATEGIES: [GowersStrategy; 3] = [
    GowersStrategy::Direct,
    GowersStrategy::Recursive,
    GowersStrategy::WhtBase,
];

fn gowers_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut disagree, mut non_monotone) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let f = CTable::<f64>::from_fn(n, |_| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut prev = 0.0;
        for d in 1..=3 {
            let norms: Vec<f64> = STRATEGIES
                .iter()
                .filter_map(|&s| gowers_norm(&f, d, s, &budget()).ok())
                .collect();
            if norms.iter().any(|v| (v - norms[0]).abs() > TOL) {
                disagree += 1;
            }
            if prev > norms[0] + TOL {
                non_monotone += 1;
            }
            prev = norms[0];
        }
    }
    let polys = catalog(3, 3, 1);
    let mut off_one = 0;
    for p in &polys {
        let d = p.degree() + 1;
        let e = CTable::<f64>::exp_of(p);
        let v = gowers_norm(&e, d, GowersStrategy::fastest_for(d), &budget()).unwrap();
        if (v - 1.0).abs() > TOL {
            off_one += 1;
        }
        if d > 1 {
            let lower =
                gowers_norm(&e, d - 1, GowersStrategy::fastest_for(d - 1), &budget()).unwrap();
            if lower > v + TOL {
                non_monotone += 1;
            }
        }
    }
    outcome(
        disagree + off_one + non_monotone == 0,
        format!(
            "200 tables: {disagree} disagreements; {} catalog phases: {off_one} off 1; {non_monotone} monotonicity violations",
            polys.len()
        ),
    )
}

/// Brute-force `E_X Π f_j(L_j(X))`.
fn brute_expectation(fs: &[RealTable], l: &LinearFormSystem, n: usize) -> f64 {
    let ell = l.vars();
    let total = 1u64 << (n * ell);
    let mut sum = 0.0;
    for packed in 0..total {
        let xs: Vec<u64> = (0..ell)
            .map(|i| (packed >> (i * n)) & ((1 << n) - 1))
            .collect();
        sum += (0..l.len())
            .map(|j| fs[j].get(l.eval(j, &xs)))
            .product::<f64>();
    }
    sum / total as f64
}

fn gowers_count_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut violations, mut mismatches) = (0, 0);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let ell = rng.gen_range(1..=3usize);
        let mut rows: Vec<u64> = (1..1u64 << ell).collect();
        rows.shuffle(&mut rng);
        let m = rng.gen_range(1..=rows.len().min(4));
        rows.truncate(m);
        let l = LinearFormSystem::new(ell, rows).unwrap();
        let s = rng.gen_range(m.saturating_sub(2).max(1)..=3);
        let fs: Vec<RealTable> = (0..m)
            .map(|_| RealTable::from_fn(n, |_| rng.gen_range(-1.0..=1.0)))
            .collect();
        let refs: Vec<&RealTable> = fs.iter().collect();
        let rep = gowers_count_bound_check(&refs, &l, s, &budget()).unwrap();
        let lhs = brute_expectation(&fs, &l, n).abs();
        if (lhs - rep.lhs).abs() > 1e-12 {
            mismatches += 1;
        }
        if lhs > rep.rhs + TOL || !rep.holds {
            violations += 1;
        }
    }
    outcome(
        violations + mismatches == 0,
        format!("10000 trials, {violations} violations, {mismatches} expectation mismatches"),
    )
}

fn counting_pipeline() -> Outcome {
    let m = make_geometry(Geometry::BoseBurton { rank: 8, c: 2 }).unwrap();
    let factor = PolynomialFactor::new(
        8,
        vec![
            NonclassicalPoly::linear(8, 1 << 6),
            NonclassicalPoly::linear(8, 1 << 7),
        ],
    )
    .unwrap();
    let f = m.indicator();
    let dec = Decomposition {
        f1: f.clone(),
        f2: RealTable::zeros(8),
        f3: RealTable::zeros(8),
        factor,
        params: DecompositionParams {
            delta: 0.0,
            eta: 0.0,
            d: 1,
        },
    };
    let zeta: f64 = 0.9;
    let rep = counting_bound_check(&m, &dec, &pg(2), 0.1, zeta, &budget()).unwrap();
    let triangles = {
        let pts = m.points();
        let mut t = 0u64;
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                if a ^ b > b && m.contains(a ^ b) {
                    t += 1;
                }
            }
        }
        t
    };
    let beta = zeta.powi(3) / (5.0 * 16.0);
    let bound = beta * 256f64.powi(2) / 4f64.powi(3);
    let pass = rep.verdict == Verdict::Pass
        && rep.count == triangles as u128
        && (rep.bound - bound).abs() < TOL
        && triangles as f64 >= bound;
    outcome(
        pass,
        format!(
            "{triangles} triangles >= bound {bound:.4}, verdict {:?}",
            rep.verdict
        ),
    )
}

fn removal_bookkeeping() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (zeta, eta_prime) = (0.2, 0.05);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut total_removed = 0;
    for trial in 0..50 {
        let density = rng.gen_range(0.5..0.9);
        let m = if trial % 2 == 0 {
            random_matroid(10, density, &mut rng).unwrap()
        } else {
            // Dense off a hyperplane, sparse noise on it.
            let pts: Vec<u64> = (1..1024u64)
                .filter(|&x| rng.gen_bool(if x >> 9 == 1 { density } else { 0.03 }))
                .collect();
            Matroid::from_points(10, pts).unwrap()
        };
        let rep = removal_check(&m, &pg(2), zeta, eta_prime, &budget()).unwrap();
        // Points in atoms where M has density below ζ/4.
        let (dec, _) = decompose_linear(&m.indicator(), eta_prime).unwrap();
        let atoms = dec.factor.atom_table();
        let mut stats = std::collections::HashMap::<u64, (u64, u64)>::new();
        for (x, &a) in atoms.iter().enumerate() {
            let e = stats.entry(a).or_default();
            e.0 += 1;
            e.1 += u64::from(m.contains(x as u64));
        }
        let removed: u64 = stats
            .values()
            .filter(|(size, hits)| (*hits as f64) < zeta / 4.0 * *size as f64)
            .map(|(_, hits)| hits)
            .sum();
        let distance = removed as f64 / 1024.0;
        worst = worst.max(distance);
        total_removed += removed;
        if removed as usize != rep.removed || distance >= zeta / 2.0 || !rep.holds {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("50 matroids at n=10, worst distance {worst:.5} < {}, {total_removed} points pruned, {failures} failures", zeta / 2.0),
    )
}

fn equidistribution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let l = linear_forms_of(&pg(2));
    let mut failures = 0;
    let mut reports = 0;
    for _ in 0..12 {
        let n = rng.gen_range(3..=8);
        let c = rng.gen_range(1..=3.min(n));
        let mut forms = XorBasis::new();
        let mut xis = Vec::new();
        while xis.len() < c {
            let xi = rng.gen_range(1..1u64 << n);
            if forms.insert(xi) {
                xis.push(xi);
            }
        }
        let b = PolynomialFactor::new(
            n,
            xis.iter()
                .map(|&x| NonclassicalPoly::linear(n, x))
                .collect(),
        )
        .unwrap();
        let eps = factor_uniformity(&b, &budget()).unwrap();
        let scan = equidistribution_scan(&b, &l, 0.5, &budget()).unwrap();
        if scan.max_deviation > eps + TOL {
            failures += 1;
        }
        // Each linear row takes values (a, b, a + b) on the triangle.
        let half = |v: u64| DyadicTorus::new(v, 1);
        let rows: Vec<Vec<DyadicTorus>> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| vec![half(a), half(b), half(a ^ b)])
            .collect();
        for code in 0..4usize.pow(c as u32) {
            let beta: Vec<Vec<DyadicTorus>> = (0..c)
                .map(|i| rows[code / 4usize.pow(i as u32) % 4].clone())
                .collect();
            let dev = equidistribution_report(&b, &l, &beta, &budget()).unwrap();
            reports += 1;
            if dev > eps + TOL {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("12 factors, {reports} assignments, {failures} deviations above uniformity"),
    )
}

fn consistency_sanity() -> Outcome {
    let l = linear_forms_of(&pg(2));
    let g = consistency_group(&l, 1, 0, 3, &budget()).unwrap();
    let doubled = l.glue_double().unwrap();
    let gg = consistency_group(&doubled, 1, 0, doubled.vars() + 1, &budget()).unwrap();
    let perp: BTreeSet<Vec<u64>> = g.dependency_set.iter().cloned().collect();
    let want: BTreeSet<Vec<u64>> = [vec![0, 0, 0], vec![1, 1, 1]].into_iter().collect();
    let pass =
        g.size == 4 && perp == want && gg.dependency_set.len() == g.dependency_set.len().pow(2);
    outcome(
        pass,
        format!(
            "|Φ| = {}, |Φ⊥| = {}, doubled |Φ⊥| = {}",
            g.size,
            g.dependency_set.len(),
            gg.dependency_set.len()
        ),
    )
}

/// Element-by-element check of a threshold report against `M`.
fn revalidate(m: &Matroid, rep: &matcount::extremal::ThresholdReport) -> bool {
    let n = make_geometry(Geometry::Extended {
        ell: rep.ell,
        c: 2,
        k: 1,
    })
    .unwrap();
    if let Some(images) = &rep.copy {
        return independent(images) && n.points().iter().all(|&x| m.contains(apply_map(images, x)));
    }
    if let Some(cert) = &rep.certificate {
        let span: Vec<u64> = (0..1u64 << cert.basis.len())
            .map(|x| apply_map(&cert.basis, x))
            .collect();
        return independent(&cert.basis)
            && span.iter().all(|&x| !m.contains(x))
            && m.rank() - cert.basis.len() == cert.codim
            && cert.codim <= cert.complexity;
    }
    false
}

fn threshold_demo() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let full = pg(12);
    let rep = threshold_demo_n21(&full, 0.2, 3, &budget()).unwrap();
    let ok = revalidate(&full, &rep);
    pass &= ok;
    parts.push(format!(
        "PG(11,2): {}",
        if rep.copy.is_some() {
            "copy"
        } else {
            "certificate"
        }
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let m = random_matroid(12, 0.3, &mut rng).unwrap();
    let delta = m.density() - 0.25;
    let delta = delta.min(0.04);
    match threshold_demo_n21(&m, delta, 3, &budget()) {
        Ok(rep) => {
            let ok = revalidate(&m, &rep);
            pass &= ok;
            parts.push(format!(
                "random (density {:.3}, δ {delta:.3}): {:?}, {}",
                m.density(),
                rep.case,
                match &rep.certificate {
                    Some(c) => format!(
                        "certificate codim {} <= complexity {}",
                        c.codim, c.complexity
                    ),
                    None => "copy".to_string(),
                }
            ));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("random: {e}"));
        }
    }
    // The default η' splits F_2^12 into points; a coarser one keeps the
    // factor small enough for a meaningful answer.
    match threshold_demo_n21_with(&m, delta, 3, 0.05, &budget()) {
        Ok(rep) => {
            pass &= revalidate(&m, &rep);
            parts.push(format!(
                "η' = 0.05: {:?}, complexity {}, {}",
                rep.case,
                rep.complexity,
                if rep.copy.is_some() {
                    "copy"
                } else {
                    "certificate"
                }
            ));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("η' = 0.05: {e}"));
        }
    }
    outcome(pass, parts.join("; "))
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "Bose-Burton exact reproduction", 60.0, bose_burton_exact),
        (2, "greedy extBB soundness", 30.0, extbb_soundness),
        (
            3,
            "Bose-Burton witness via extBB",
            60.0,
            bose_burton_witnesses,
        ),
        (4, "Gowers norm correctness", 120.0, gowers_correctness),
        (
            5,
            "product expectation bound suite",
            120.0,
            gowers_count_suite,
        ),
        (6, "counting pipeline end-to-end", 10.0, counting_pipeline),
        (7, "removal bookkeeping", 60.0, removal_bookkeeping),
        (8, "near-equidistribution", 60.0, equidistribution),
        (9, "consistency group sanity", 30.0, consistency_sanity),
        (10, "N(3,2,1) threshold demo", 300.0, threshold_demo),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.pass && secs < limit;
        failed += usize::from(!pass);
        println!(
            "criterion {id:>2} [{}] {name}: {} ({secs:.2} s, limit {limit} s)",
            if pass { "PASS" } else { "FAIL" },
            out.summary
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
