use rand::Rng;

use super::table::PolyTable;
use super::TorusFunction;
use crate::budget::Budget;
use crate::error::Result;

/// How [`verify_degree`] checks the vanishing of `(d+1)`-fold differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeCheck {
    Exhaustive,
    /// This many random `(x, h_1, …, h_{d+1})` tuples.
    Sampled(u64),
}

/// `P(x+h) - P(x)` as a table.
fn plain_difference(t: &PolyTable, h: u64) -> PolyTable {
    t.shift(h).sub(t).expect("same dimension")
}

fn vanishes_to_order(t: &PolyTable, d: isize) -> bool {
    if d < 0 {
        return t.is_zero();
    }
    // The directions h with deg(P(x+h) - P(x)) <= d-1 form a subgroup, so
    // checking the coordinate directions is enough.
    (0..t.dim()).all(|i| vanishes_to_order(&plain_difference(t, 1 << i), d - 1))
}

/// Alternating sum `Σ_{ω ∈ {0,1}^{m}} (-1)^{|ω|} P(x + ω·h)`.
fn alternating_sum<F: TorusFunction + ?Sized>(p: &F, x: u64, hs: &[u64]) -> super::DyadicTorus {
    let mut acc = super::DyadicTorus::ZERO;
    for w in 0u64..1 << hs.len() {
        let pt = hs
            .iter()
            .enumerate()
            .filter(|(i, _)| w >> i & 1 == 1)
            .fold(x, |a, (_, &h)| a ^ h);
        let v = p.value(pt);
        acc = if w.count_ones() % 2 == 0 {
            acc + v
        } else {
            acc - v
        };
    }
    acc
}

/// True iff every `(d+1)`-fold alternating difference of `p` vanishes,
/// i.e. `deg p <= d`.
///
/// The exhaustive mode differentiates along coordinate directions only,
/// at cost about `n^{d+1} 2^n`; this is equivalent to scanning all
/// `(x, h_1, …, h_{d+1})`. The sampled mode can only return false
/// positives.
pub fn verify_degree<F: TorusFunction + ?Sized, R: Rng>(
    p: &F,
    d: usize,
    mode: DegreeCheck,
    budget: &Budget,
    rng: &mut R,
) -> Result<bool> {
    let n = p.dim();
    match mode {
        DegreeCheck::Exhaustive => {
            let log2 = (d as f64 + 1.0) * (n.max(1) as f64).log2() + n as f64;
            budget.check_log2("verify_degree", log2)?;
            Ok(vanishes_to_order(&p.to_table(), d as isize))
        }
        DegreeCheck::Sampled(t) => {
            budget.check("verify_degree", t as f64 * (1u64 << (d + 1).min(62)) as f64)?;
            let m = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut hs = vec![0u64; d + 1];
            for _ in 0..t {
                let x = rng.gen::<u64>() & m;
                hs.iter_mut().for_each(|h| *h = rng.gen::<u64>() & m);
                if !alternating_sum(p, x, &hs).is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Smallest `d` accepted by exhaustive [`verify_degree`].
pub fn degree_by_descent<F: TorusFunction + ?Sized>(p: &F) -> usize {
    let t = p.to_table();
    (0..).find(|&d| vanishes_to_order(&t, d as isize)).unwrap()
}

/// `Δ_h P(x) = P(x+h) - P(x) - P(h)`, with measured degree and depth
/// recorded as the declared ones.
pub fn derivative<F: TorusFunction + ?Sized>(p: &F, h: u64) -> PolyTable {
    let t = p.to_table();
    let ph = t.get(h);
    let c = PolyTable::from_fn(t.dim(), |_| ph);
    let d = plain_difference(&t, h).sub(&c).expect("same dimension");
    let (deg, depth) = (d.measured_degree(), d.measured_depth());
    d.with_declared(Some(deg), Some(depth))
}
