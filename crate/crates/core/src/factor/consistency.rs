use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::budget::Budget;
use crate::counting::LinearFormSystem;
use crate::error::{Error, Result};
use crate::polynomial::DyadicTorus;

/// The subgroup `Φ_{d,k}(N) ≤ U_{k+1}^m` of value tuples
/// `(P(L_1(X)), …, P(L_m(X)))` over homogeneous `P` with degree at most `d`
/// and depth at most `k`, together with its annihilator `Φ⊥`.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyGroup {
    pub d: usize,
    pub k: u32,
    pub m: usize,
    pub n0: usize,
    /// Distinct nonzero tuples produced by single monomials.
    pub generators: Vec<Vec<DyadicTorus>>,
    pub size: u64,
    /// Size of the subgroup generated by monomials of degree exactly `d`.
    pub exact_degree_size: u64,
    /// Integer vectors `λ ∈ [0, 2^{k+1})^m` with `Σ λ_j β_j = 0` on `Φ`.
    pub dependency_set: Vec<Vec<u64>>,
    /// Whether every pairwise sum of elements was found in the set.
    pub closure_verified: bool,
    /// Whether the group is unchanged when computed over `F_2^{n0+1}`.
    pub stable: bool,
    #[serde(skip)]
    elements: HashSet<u64>,
}

impl ConsistencyGroup {
    /// Membership of a tuple of `m` values.
    pub fn contains(&self, beta: &[DyadicTorus]) -> bool {
        beta.len() == self.m
            && beta.iter().all(|b| b.in_group(self.k + 1))
            && self.elements.contains(&pack(
                beta.iter().map(|b| b.numerator_at(self.k + 1)),
                self.k + 1,
            ))
    }
}

fn pack(vals: impl Iterator<Item = u64>, k1: u32) -> u64 {
    vals.enumerate()
        .fold(0, |acc, (j, v)| acc | v << (j as u32 * k1))
}

fn unpack(x: u64, m: usize, k1: u32) -> Vec<u64> {
    (0..m)
        .map(|j| (x >> (j as u32 * k1)) & ((1 << k1) - 1))
        .collect()
}

fn add_packed(a: u64, b: u64, m: usize, k1: u32) -> u64 {
    let mask = (1u64 << k1) - 1;
    (0..m).fold(0, |acc, j| {
        let s = j as u32 * k1;
        acc | ((((a >> s) & mask) + ((b >> s) & mask)) & mask) << s
    })
}

/// Generators from monomials `(S, k')` with `|S| + k' <= d`, `k' <= k`,
/// evaluated at every `X ∈ (F_2^{dim})^ℓ`. `monomials` lists `(S, k')`.
fn generators_for(
    l: &LinearFormSystem,
    k1: u32,
    dim: usize,
    monomials: &[(u64, u32)],
) -> BTreeSet<u64> {
    let ell = l.vars();
    let m = l.len();
    let mut gens = BTreeSet::new();
    let mut xs = vec![0u64; ell];
    let size_mask = (1u64 << dim) - 1;
    for code in 0u64..1 << (dim * ell) {
        for (i, x) in xs.iter_mut().enumerate() {
            *x = (code >> (i * dim)) & size_mask;
        }
        let ys: Vec<u64> = (0..m).map(|j| l.eval(j, &xs)).collect();
        for &(s, kk) in monomials {
            let unit = 1u64 << (k1 - 1 - kk);
            let g = pack(ys.iter().map(|&y| if y & s == s { unit } else { 0 }), k1);
            if g != 0 {
                gens.insert(g);
            }
        }
    }
    gens
}

fn closure(gens: &BTreeSet<u64>, m: usize, k1: u32) -> HashSet<u64> {
    let mut set = HashSet::from([0u64]);
    let mut queue = VecDeque::from([0u64]);
    while let Some(e) = queue.pop_front() {
        for &g in gens {
            let s = add_packed(e, g, m, k1);
            if set.insert(s) {
                queue.push_back(s);
            }
        }
    }
    set
}

fn monomials(dim: usize, d: usize, k: u32, reduced: bool, exact: bool) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for kk in 0..=k {
        if reduced {
            // By symmetry under coordinate permutations, S = {1, …, s} suffices.
            for s in 1..=dim {
                let deg = s + kk as usize;
                if deg <= d && (!exact || deg == d) {
                    out.push(((1u64 << s) - 1, kk));
                }
            }
        } else {
            for s in 1u64..1 << dim {
                let deg = s.count_ones() as usize + kk as usize;
                if deg <= d && (!exact || deg == d) {
                    out.push((s, kk));
                }
            }
        }
    }
    out
}

fn build(
    l: &LinearFormSystem,
    d: usize,
    k: u32,
    n0: usize,
    reduced: bool,
    budget: &Budget,
) -> Result<ConsistencyGroup> {
    let m = l.len();
    let k1 = k + 1;
    if m as u32 * k1 > 60 {
        return Err(Error::parameter(format!(
            "{m} forms at depth {k} do not fit the packed encoding"
        )));
    }
    if d == 0 {
        return Err(Error::parameter("consistency needs degree at least 1"));
    }
    let ell = l.vars();
    let group_for = |dim: usize, exact: bool| -> Result<HashSet<u64>> {
        let mut gens = BTreeSet::new();
        if reduced {
            for mono in monomials(dim.min(d), d, k, true, exact) {
                let s = mono.0.count_ones() as usize;
                budget.check_log2("consistency_group", (s * ell) as f64)?;
                gens.extend(generators_for(l, k1, s, &[mono]));
            }
        } else {
            budget.check_log2(
                "consistency_group",
                (dim * ell) as f64 + (dim as f64).max(1.0).log2() * d as f64,
            )?;
            gens = generators_for(l, k1, dim, &monomials(dim, d, k, false, exact));
        }
        Ok(closure(&gens, m, k1))
    };

    let elements = group_for(n0, false)?;
    let exact = group_for(n0, true)?;
    let stable = group_for(n0 + 1, false)? == elements;

    let mut gens = BTreeSet::new();
    let dim = if reduced { n0.min(d) } else { n0 };
    for mono in monomials(dim, d, k, reduced, false) {
        let s = if reduced {
            mono.0.count_ones() as usize
        } else {
            n0
        };
        gens.extend(generators_for(l, k1, s, &[mono]));
    }

    let closure_verified = if elements.len() <= 1 << 12 {
        elements.iter().all(|&a| {
            elements
                .iter()
                .all(|&b| elements.contains(&add_packed(a, b, m, k1)))
        })
    } else {
        false
    };

    budget.check_log2("dependency search", (m as u32 * k1) as f64)?;
    let modulus = 1u64 << k1;
    let gen_vals: Vec<Vec<u64>> = gens.iter().map(|&g| unpack(g, m, k1)).collect();
    let mut dependency_set = Vec::new();
    for code in 0u64..1 << (m as u32 * k1) {
        let lambda = unpack(code, m, k1);
        let annihilates = gen_vals.iter().all(|beta| {
            lambda
                .iter()
                .zip(beta)
                .fold(0u64, |acc, (&a, &b)| acc.wrapping_add(a.wrapping_mul(b)))
                % modulus
                == 0
        });
        if annihilates {
            dependency_set.push(lambda);
        }
    }

    Ok(ConsistencyGroup {
        d,
        k,
        m,
        n0,
        generators: gen_vals
            .iter()
            .map(|g| g.iter().map(|&v| DyadicTorus::new(v, k1)).collect())
            .collect(),
        size: elements.len() as u64,
        exact_degree_size: exact.len() as u64,
        dependency_set,
        closure_verified,
        stable,
        elements,
    })
}

/// `Φ_{d,k}(N)` over `X ∈ (F_2^{n0})^ℓ`. Only monomials on the first few
/// coordinates are enumerated; every other monomial is a coordinate
/// permutation of one of these and yields the same tuples.
pub fn consistency_group(
    l: &LinearFormSystem,
    d: usize,
    k: u32,
    n0: usize,
    budget: &Budget,
) -> Result<ConsistencyGroup> {
    build(l, d, k, n0, true, budget)
}

/// Same group, enumerating every monomial on `n0` variables and every
/// `X ∈ (F_2^{n0})^ℓ`. Exponentially slower; kept as a reference.
pub fn consistency_group_literal(
    l: &LinearFormSystem,
    d: usize,
    k: u32,
    n0: usize,
    budget: &Budget,
) -> Result<ConsistencyGroup> {
    build(l, d, k, n0, false, budget)
}
