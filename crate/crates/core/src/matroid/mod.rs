//! Simple binary matroids: full-rank subsets of `F_2^r \ {0}`.

pub(crate) mod format;
mod search;

use serde::Serialize;

pub use format::{parse_matroid, write_matroid};
pub use search::{count_maps, find_map, sample_injections, MapQuery, SampledCount};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{max_subspace_avoiding, rank_of_bits, Gf2Vector, PointSet};
use crate::RealTable;

/// A simple binary matroid of rank `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    rank: usize,
    elements: PointSet,
}

impl Matroid {
    /// Wraps a point set, checking that it avoids zero and spans `F_2^rank`.
    pub fn new(rank: usize, elements: PointSet) -> Result<Self> {
        if elements.dim() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: elements.dim(),
            });
        }
        if elements.contains(0) {
            return Err(Error::contract(
                "a simple matroid cannot contain the zero vector",
            ));
        }
        let r = rank_of_bits(elements.iter());
        if r != rank {
            return Err(Error::contract(format!(
                "elements span a rank-{r} space, expected full rank {rank}"
            )));
        }
        Ok(Matroid { rank, elements })
    }

    pub fn from_points(rank: usize, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(rank, PointSet::from_points(rank, points)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.elements.contains(p)
    }

    pub fn elements(&self) -> &PointSet {
        &self.elements
    }

    /// Elements in increasing bitmask order.
    pub fn points(&self) -> Vec<u64> {
        self.elements.iter().collect()
    }

    pub fn indicator(&self) -> RealTable {
        RealTable::from_fn(self.rank, |x| if self.contains(x) { 1.0 } else { 0.0 })
    }

    /// `|M| / 2^r`.
    pub fn density(&self) -> f64 {
        self.len() as f64 / (1u64 << self.rank) as f64
    }
}

/// Standard geometries, each parameterized by its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Geometry {
    /// `PG(r-1, 2)`: every nonzero vector of `F_2^r`.
    Projective { rank: usize },
    /// `AG(r-1, 2)`: vectors with the top coordinate set.
    Affine { rank: usize },
    /// `BB(r, c)`: vectors with a nonzero bit among the top `c` coordinates.
    BoseBurton { rank: usize, c: usize },
    /// `N(ℓ, c, k)`: `BB(ℓ, c-1)` together with `e_1, …, e_k` from the
    /// complementary subspace.
    Extended { ell: usize, c: usize, k: usize },
}

pub fn make_geometry(kind: Geometry) -> Result<Matroid> {
    match kind {
        Geometry::Projective { rank } => make_geometry(Geometry::BoseBurton { rank, c: rank }),
        Geometry::Affine { rank } => make_geometry(Geometry::BoseBurton { rank, c: 1 }),
        Geometry::BoseBurton { rank, c } => {
            if rank == 0 || rank > 26 {
                return Err(Error::parameter(format!("rank {rank} must be in 1..=26")));
            }
            if c == 0 || c > rank {
                return Err(Error::parameter(format!(
                    "BB(r,c) needs 1 <= c <= r, got c={c}, r={rank}"
                )));
            }
            let shift = rank - c;
            Matroid::new(rank, PointSet::from_fn(rank, |x| x >> shift != 0))
        }
        Geometry::Extended { ell, c, k } => {
            if c <= 1 {
                return Err(Error::parameter(format!("N(ℓ,c,k) needs c > 1, got {c}")));
            }
            if ell + 1 < c + k {
                return Err(Error::parameter(format!(
                    "N(ℓ,c,k) needs ℓ >= c+k-1, got ℓ={ell}, c={c}, k={k}"
                )));
            }
            let base = make_geometry(Geometry::BoseBurton {
                rank: ell,
                c: c - 1,
            })?;
            let mut pts = base.elements.clone();
            for i in 0..k {
                pts.insert(1 << i);
            }
            Matroid::new(ell, pts)
        }
    }
}

/// Each nonzero point kept independently with probability `density`;
/// redrawn until the result has full rank.
pub fn random_matroid<R: rand::Rng>(rank: usize, density: f64, rng: &mut R) -> Result<Matroid> {
    if rank == 0 || rank > crate::gf2::MAX_DENSE_DIM {
        return Err(Error::parameter(format!("rank {rank} out of range")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::parameter(format!(
            "density {density} must lie in (0, 1]"
        )));
    }
    for _ in 0..1000 {
        let pts = PointSet::from_fn(rank, |x| x != 0 && rng.gen_bool(density));
        if rank_of_bits(pts.iter()) == rank {
            return Matroid::new(rank, pts);
        }
    }
    Err(Error::contract(format!(
        "no full-rank sample at density {density} after 1000 draws"
    )))
}

/// `χ(M) = r - dim` of a largest subspace avoiding `M`.
pub fn critical_number(m: &Matroid) -> usize {
    m.rank - max_subspace_avoiding(&m.elements).dim()
}

/// A linear map `F_2^{r(N)} -> F_2^{r(M)}` given by the images of the
/// standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearInjection {
    images: Vec<u64>,
    target_dim: usize,
}

impl LinearInjection {
    pub fn new(images: Vec<u64>, target_dim: usize) -> Result<Self> {
        if images.iter().any(|&v| v >> target_dim != 0) {
            return Err(Error::parameter("image outside the target space"));
        }
        if rank_of_bits(images.iter().copied()) != images.len() {
            return Err(Error::contract("basis images are linearly dependent"));
        }
        Ok(LinearInjection { images, target_dim })
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn image_vectors(&self) -> Vec<Gf2Vector> {
        self.images
            .iter()
            .map(|&b| Gf2Vector::new(b, self.target_dim).unwrap())
            .collect()
    }

    pub fn source_dim(&self) -> usize {
        self.images.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn apply(&self, x: u64) -> u64 {
        apply_map(&self.images, x)
    }

    /// Image of every element of `n`, in the order of `n.points()`.
    pub fn image_of(&self, n: &Matroid) -> Vec<u64> {
        n.elements.iter().map(|x| self.apply(x)).collect()
    }

    /// True iff the map sends every element of `n` into `target`.
    pub fn maps_into(&self, n: &Matroid, target: &PointSet) -> bool {
        n.rank == self.images.len() && n.elements.iter().all(|x| target.contains(self.apply(x)))
    }
}

/// `Σ x_i images[i]`, the image of `x` under the map with the given basis
/// images.
#[inline]
pub fn apply_map(images: &[u64], mut x: u64) -> u64 {
    let mut out = 0;
    while x != 0 {
        let i = x.trailing_zeros() as usize;
        out ^= images[i];
        x &= x - 1;
    }
    out
}

/// A copy of `n` inside `m`, if one exists.
pub fn contains_copy(m: &Matroid, n: &Matroid) -> Option<LinearInjection> {
    if n.rank > m.rank {
        return None;
    }
    find_map(&MapQuery::injective(&m.elements, n)).map(|images| LinearInjection {
        images,
        target_dim: m.rank,
    })
}

/// Number of injective linear maps `ι` with `ι(N) ⊆ M`.
pub fn count_injections(m: &Matroid, n: &Matroid, budget: &Budget) -> Result<u128> {
    if n.rank > m.rank {
        return Ok(0);
    }
    budget.check_log2("count_injections", (m.rank * n.rank) as f64)?;
    Ok(count_maps(&MapQuery::injective(&m.elements, n)))
}

/// `|Aut(N)|`, the number of injections of `N` into itself.
pub fn automorphism_count(n: &Matroid, budget: &Budget) -> Result<u128> {
    count_injections(n, n, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CopyCount {
    pub injections: u128,
    pub aut: u128,
    pub copies: u128,
}

/// Injection count, automorphism count and their (exact) quotient.
pub fn count_copies(m: &Matroid, n: &Matroid, budget: &Budget) -> Result<CopyCount> {
    let injections = count_injections(m, n, budget)?;
    let aut = automorphism_count(n, budget)?;
    if injections % aut != 0 {
        return Err(Error::contract(format!(
            "injection count {injections} is not divisible by |Aut(N)| = {aut}"
        )));
    }
    Ok(CopyCount {
        injections,
        aut,
        copies: injections / aut,
    })
}

/// `M_h = {w ∈ M : w + h ∈ M}`, returned as a raw point set.
pub fn shifted_intersection(m: &Matroid, h: Gf2Vector) -> Result<PointSet> {
    if h.dim() != m.rank {
        return Err(Error::DimensionMismatch {
            expected: m.rank,
            found: h.dim(),
        });
    }
    Ok(m.elements.intersection(&m.elements.translate(h.bits())))
}

/// The double `2N = N ∪ (N + v)` with `v` a new direction. The new
/// coordinate is inserted as the lowest one, which makes `2·BB(n,c)` equal
/// to `BB(n+1,c)` as sets.
pub fn double(n: &Matroid) -> Matroid {
    let rank = n.rank + 1;
    let mut pts = PointSet::empty(rank);
    for x in n.elements.iter() {
        pts.insert(x << 1);
        pts.insert((x << 1) | 1);
    }
    Matroid::new(rank, pts).expect("doubling preserves simplicity and full rank")
}

/// `2^k N`.
pub fn double_times(n: &Matroid, k: usize) -> Matroid {
    (0..k).fold(n.clone(), |acc, _| double(&acc))
}
