//! Backtracking search over linear maps `F_2^ℓ -> F_2^r` that send a fixed
//! point set into a target set.
//!
//! Basis images are chosen in coordinate order. Once `e_t` has an image,
//! every source element whose highest coordinate is `t` is fully determined
//! and checked immediately.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply_map, Matroid};
use crate::gf2::{high_bit, PointSet, XorBasis};

/// What to search for.
#[derive(Debug, Clone)]
pub struct MapQuery<'a> {
    pub target: &'a PointSet,
    pub source_rank: usize,
    pub source: Vec<u64>,
    pub injective: bool,
    /// Images must stay independent of these vectors (injective maps only).
    pub avoid_span: Vec<u64>,
}

impl<'a> MapQuery<'a> {
    pub fn injective(target: &'a PointSet, n: &Matroid) -> Self {
        MapQuery {
            target,
            source_rank: n.rank(),
            source: n.points(),
            injective: true,
            avoid_span: Vec::new(),
        }
    }

    pub fn homomorphism(target: &'a PointSet, n: &Matroid) -> Self {
        MapQuery {
            injective: false,
            ..Self::injective(target, n)
        }
    }

    pub fn avoiding(mut self, span: impl IntoIterator<Item = u64>) -> Self {
        self.avoid_span.extend(span);
        self
    }
}

struct Plan {
    /// Source elements grouped by highest coordinate, stored without it.
    by_top: Vec<Vec<u64>>,
    target_dim: usize,
}

impl Plan {
    fn new(q: &MapQuery) -> Self {
        let mut by_top = vec![Vec::new(); q.source_rank];
        for &x in &q.source {
            if let Some(t) = high_bit(x) {
                by_top[t as usize].push(x ^ (1 << t));
            }
        }
        Plan {
            by_top,
            target_dim: q.target.dim(),
        }
    }
}

#[derive(Clone)]
struct State {
    images: Vec<u64>,
    basis: XorBasis,
}

impl State {
    fn new(q: &MapQuery) -> Self {
        let mut basis = XorBasis::new();
        for &v in &q.avoid_span {
            basis.insert(v);
        }
        State {
            images: Vec::with_capacity(q.source_rank),
            basis,
        }
    }
}

/// Admissible images for the next basis vector, given the current state.
fn candidates(q: &MapQuery, plan: &Plan, st: &State) -> Vec<u64> {
    let t = st.images.len();
    let offsets: Vec<u64> = plan.by_top[t]
        .iter()
        .map(|&low| apply_map(&st.images, low))
        .collect();
    let ok = |v: u64| {
        (!q.injective || !st.basis.contains(v)) && offsets.iter().all(|&o| q.target.contains(v ^ o))
    };
    match offsets.first() {
        Some(&o0) => q.target.iter().map(|y| y ^ o0).filter(|&v| ok(v)).collect(),
        None => (0..1u64 << plan.target_dim).filter(|&v| ok(v)).collect(),
    }
}

fn push(q: &MapQuery, st: &mut State, v: u64) {
    st.images.push(v);
    if q.injective {
        st.basis.insert(v);
    }
}

fn pop(q: &MapQuery, st: &mut State) {
    st.images.pop();
    if q.injective {
        st.basis.pop();
    }
}

fn find_rec(q: &MapQuery, plan: &Plan, st: &mut State) -> bool {
    if st.images.len() == q.source_rank {
        return true;
    }
    for v in candidates(q, plan, st) {
        push(q, st, v);
        if find_rec(q, plan, st) {
            return true;
        }
        pop(q, st);
    }
    false
}

fn count_rec(q: &MapQuery, plan: &Plan, st: &mut State) -> u128 {
    if st.images.len() == q.source_rank {
        return 1;
    }
    let mut total = 0;
    for v in candidates(q, plan, st) {
        push(q, st, v);
        total += count_rec(q, plan, st);
        pop(q, st);
    }
    total
}

/// First map found, as basis images. Deterministic.
pub fn find_map(q: &MapQuery) -> Option<Vec<u64>> {
    let plan = Plan::new(q);
    let mut st = State::new(q);
    find_rec(q, &plan, &mut st).then_some(st.images)
}

/// Exact number of maps. Subtrees below the first basis image run in
/// parallel; the result does not depend on the thread count.
pub fn count_maps(q: &MapQuery) -> u128 {
    if q.source_rank == 0 {
        return 1;
    }
    let plan = Plan::new(q);
    let root = State::new(q);
    candidates(q, &plan, &root)
        .into_par_iter()
        .map(|v| {
            let mut st = root.clone();
            push(q, &mut st, v);
            count_rec(q, &plan, &mut st)
        })
        .sum()
}

/// Monte Carlo estimate of the number of maps.
#[derive(Debug, Clone, Serialize)]
pub struct SampledCount {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Samples uniformly random basis images and rescales the hit rate by the
/// size of the sample space. The interval is a 95% normal approximation.
pub fn sample_injections<R: Rng>(q: &MapQuery, samples: u64, rng: &mut R) -> SampledCount {
    let r = q.target.dim();
    let mask = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
    let mut hits = 0u64;
    let mut images = vec![0u64; q.source_rank];
    for _ in 0..samples {
        for im in images.iter_mut() {
            *im = rng.gen::<u64>() & mask;
        }
        if q.injective {
            let mut b = XorBasis::new();
            for &v in &q.avoid_span {
                b.insert(v);
            }
            if !images.iter().all(|&v| b.insert(v)) {
                continue;
            }
        }
        if q.source
            .iter()
            .all(|&x| q.target.contains(apply_map(&images, x)))
        {
            hits += 1;
        }
    }
    let space = 2f64.powi((r * q.source_rank) as i32);
    let s = samples.max(1) as f64;
    let p = hits as f64 / s;
    let half = 1.96 * (p * (1.0 - p) / s).sqrt();
    SampledCount {
        estimate: p * space,
        ci_low: (p - half).max(0.0) * space,
        ci_high: (p + half).min(1.0) * space,
        samples,
        hits,
    }
}
