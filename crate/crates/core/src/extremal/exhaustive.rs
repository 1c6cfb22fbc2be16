use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{rank_of_bits, PointSet};
use crate::matroid::{find_map, MapQuery, Matroid};

/// Largest rank searched exhaustively.
pub const EXACT_MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalMode {
    Exact,
    /// Randomized greedy constructions, `trials` of them.
    Random {
        trials: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalResult {
    pub n: usize,
    /// `ex(N, n)` in exact mode, the best size found otherwise.
    pub value: usize,
    pub exact: bool,
    /// A largest full-rank `N`-free set found, if any exists.
    #[serde(skip)]
    pub witness: Option<Matroid>,
    /// Candidate sets examined after symmetry reduction.
    pub examined: u64,
}

fn contains_n(set: &PointSet, n: &Matroid) -> bool {
    find_map(&MapQuery::injective(set, n)).is_some()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Point maps `p ↦ σ(p)` for every coordinate permutation `σ`, indexed by
/// `p - 1`.
fn point_maps(n: usize) -> Vec<Vec<u32>> {
    permutations(n)
        .into_iter()
        .map(|sigma| {
            (1u64..1 << n)
                .map(|p| {
                    let q = (0..n)
                        .filter(|&i| p >> i & 1 == 1)
                        .fold(0u64, |acc, i| acc | 1 << sigma[i]);
                    (q - 1) as u32
                })
                .collect()
        })
        .collect()
}

/// Whether `mask` (bit `p-1` for point `p`) is the smallest in its orbit.
fn is_canonical(mask: u32, maps: &[Vec<u32>]) -> bool {
    maps.iter().all(|map| {
        let image = map
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .fold(0u32, |acc, (_, &j)| acc | 1 << j);
        image >= mask
    })
}

fn mask_points(mask: u32) -> impl Iterator<Item = u64> {
    (0..32u64)
        .filter(move |&i| mask >> i & 1 == 1)
        .map(|i| i + 1)
}

/// `ex(N, n) = max{|M| : r(M) = n, N ⊄ M}`, with `0` and no witness when
/// every full-rank set contains `N`.
pub fn exhaustive_extremal(
    n: usize,
    target: &Matroid,
    mode: ExtremalMode,
    budget: &Budget,
) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::parameter("rank must be positive"));
    }
    match mode {
        ExtremalMode::Exact => exact(n, target, budget),
        ExtremalMode::Random { trials, seed } => random(n, target, trials, seed, budget),
    }
}

fn exact(n: usize, target: &Matroid, budget: &Budget) -> Result<ExtremalResult> {
    if n > EXACT_MAX_RANK {
        return Err(Error::Budget {
            what: "exhaustive_extremal",
            log2_required: ((1u64 << n) - 1) as f64,
            log2_limit: ((1u64 << EXACT_MAX_RANK) - 1) as f64,
        });
    }
    let points = (1u32 << n) - 1;
    budget.check_log2("exhaustive_extremal", points as f64)?;
    let maps = point_maps(n);
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); points as usize + 1];
    for mask in 0..1u32 << points {
        by_size[mask.count_ones() as usize].push(mask);
    }
    let mut examined = 0u64;
    for size in (1..=points as usize).rev() {
        let candidates: Vec<u32> = by_size[size]
            .par_iter()
            .copied()
            .filter(|&mask| is_canonical(mask, &maps) && rank_of_bits(mask_points(mask)) == n)
            .collect();
        examined += candidates.len() as u64;
        let found = candidates
            .par_iter()
            .copied()
            .filter(|&mask| {
                !contains_n(
                    &PointSet::from_points(n, mask_points(mask)).unwrap(),
                    target,
                )
            })
            .min();
        if let Some(mask) = found {
            return Ok(ExtremalResult {
                n,
                value: size,
                exact: true,
                witness: Some(Matroid::from_points(n, mask_points(mask))?),
                examined,
            });
        }
    }
    Ok(ExtremalResult {
        n,
        value: 0,
        exact: true,
        witness: None,
        examined,
    })
}

fn random(
    n: usize,
    target: &Matroid,
    trials: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ExtremalResult> {
    budget.check_log2(
        "exhaustive_extremal",
        n as f64 + (trials.max(1) as f64).log2() + (n * target.rank()) as f64,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u64> = (1..1u64 << n).collect();
    let mut best: Option<PointSet> = None;
    for _ in 0..trials {
        order.shuffle(&mut rng);
        let mut set = PointSet::empty(n);
        for &p in &order {
            set.insert(p);
            if contains_n(&set, target) {
                set.remove(p);
            }
        }
        let full_rank = rank_of_bits(set.iter()) == n;
        if full_rank && best.as_ref().is_none_or(|b| set.len() > b.len()) {
            best = Some(set);
        }
    }
    Ok(ExtremalResult {
        n,
        value: best.as_ref().map_or(0, |b| b.len()),
        exact: false,
        witness: best.map(|b| Matroid::new(n, b)).transpose()?,
        examined: trials as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{make_geometry, Geometry};

    fn pg(r: usize) -> Matroid {
        make_geometry(Geometry::Projective { rank: r }).unwrap()
    }

    #[test]
    fn permutation_count() {
        assert_eq!(point_maps(3).len(), 6);
        assert!(is_canonical(0b1, &point_maps(3)));
        assert!(!is_canonical(0b10, &point_maps(3)));
    }

    #[test]
    fn triangle_free_rank_four() {
        let r = exhaustive_extremal(4, &pg(2), ExtremalMode::Exact, &Budget::default()).unwrap();
        assert_eq!(r.value, 8);
        let w = r.witness.unwrap();
        assert!(crate::matroid::contains_copy(&w, &pg(2)).is_none());
    }

    #[test]
    fn fano_free_rank_three() {
        let r = exhaustive_extremal(3, &pg(3), ExtremalMode::Exact, &Budget::default()).unwrap();
        assert_eq!(r.value, 6);
    }

    #[test]
    fn affine_plane_free_rank_three() {
        let ag = make_geometry(Geometry::Affine { rank: 3 }).unwrap();
        let r = exhaustive_extremal(3, &ag, ExtremalMode::Exact, &Budget::default()).unwrap();
        assert!(r.value <= 5);
        assert_eq!(r.value, 4);
    }

    #[test]
    fn single_point_forces_zero() {
        let r = exhaustive_extremal(2, &pg(1), ExtremalMode::Exact, &Budget::default()).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.witness.is_none());
    }

    #[test]
    fn exact_mode_guard() {
        let err =
            exhaustive_extremal(5, &pg(2), ExtremalMode::Exact, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn random_mode_stays_below_exact() {
        let mode = ExtremalMode::Random {
            trials: 20,
            seed: 3,
        };
        let r = exhaustive_extremal(4, &pg(2), mode, &Budget::default()).unwrap();
        assert!(!r.exact);
        assert!(r.value <= 8 && r.value >= 5);
    }
}
