use super::degree::derivative;
use super::TorusFunction;
use crate::error::{Error, Result};
use crate::gf2::{max_subspace_avoiding, Gf2Subspace, PointSet};

/// True iff `Δ_h P` takes every value of its own value group `U_e`.
pub fn derivative_is_onto<F: TorusFunction + ?Sized>(p: &F, h: u64) -> bool {
    let d = derivative(p, h);
    let e = d.value_exponent();
    let shift = d.prec() - e;
    let mut seen = vec![false; 1 << e];
    for &v in d.numerators() {
        seen[(v >> shift) as usize] = true;
    }
    seen.iter().all(|&s| s)
}

/// Largest `W' ≤ W` on which `P(h)` lies in the value group of `Δ_h P`
/// for every `h`. Requires each `Δ_h P` (for `h` in `W`) to attain its
/// whole value group, and checks afterwards that `codim_W W' <= k+1`
/// where `k` is the depth of `P`.
pub fn shift_subgroup_refine<F: TorusFunction + ?Sized>(
    p: &F,
    w: &Gf2Subspace,
) -> Result<Gf2Subspace> {
    let n = p.dim();
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ambient_dim(),
        });
    }
    let table = p.to_table();
    let mut good = PointSet::empty(n);
    for h in w.elements() {
        if !derivative_is_onto(&table, h) {
            return Err(Error::contract(format!(
                "derivative in direction {h:#b} does not attain its whole value group"
            )));
        }
        let e = derivative(&table, h).value_exponent();
        let ph = table.get(h);
        if ph.in_group(e) {
            good.insert(h);
        }
    }
    let mut bad = good.complement();
    bad.remove(0);
    let refined = max_subspace_avoiding(&bad);
    let k = table.measured_depth() as usize;
    if w.dim() - refined.dim() > k + 1 {
        return Err(Error::contract(format!(
            "refined subspace has codimension {} in W, more than depth+1 = {}",
            w.dim() - refined.dim(),
            k + 1
        )));
    }
    debug_assert!(refined.is_subspace_of(w));
    Ok(refined)
}
