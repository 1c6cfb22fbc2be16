//! Gowers uniformity norms and linear Fourier bias.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{fwht_in_place, walsh_hadamard, Table, MAX_DENSE_DIM};
use crate::polynomial::TorusFunction;
use crate::Scalar;

/// Dense complex function on `F_2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CTable<T> {
    n: usize,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> CTable<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() || len.trailing_zeros() as usize > MAX_DENSE_DIM {
            return Err(Error::MalformedTable { len });
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::contract("complex table has a non-finite entry"));
        }
        Ok(CTable {
            n: len.trailing_zeros() as usize,
            values,
        })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u64) -> Complex<T>) -> Self {
        assert!(n <= MAX_DENSE_DIM);
        CTable {
            n,
            values: (0..1u64 << n).map(f).collect(),
        }
    }

    /// Promotion with zero imaginary part.
    pub fn from_real(f: &Table<T>) -> Self {
        CTable {
            n: f.dim(),
            values: f
                .values()
                .iter()
                .map(|&r| Complex::new(r, T::zero()))
                .collect(),
        }
    }

    /// `x ↦ e(P(x)) = exp(2πi P(x))`.
    pub fn exp_of<F: TorusFunction + ?Sized>(p: &F) -> Self {
        let t = p.to_table();
        let denom = T::from_u64(1u64 << t.prec()).unwrap();
        let tau = T::from_f64(std::f64::consts::TAU).unwrap();
        CTable {
            n: t.dim(),
            values: t
                .numerators()
                .iter()
                .map(|&v| Complex::from_polar(T::one(), tau * T::from_u64(v).unwrap() / denom))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn get(&self, x: u64) -> Complex<T> {
        self.values[x as usize]
    }

    pub fn conj(&self) -> Self {
        CTable {
            n: self.n,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &CTable<T>) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(CTable {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Multiplicative derivative `x ↦ f(x+h) · conj(f(x))`.
    pub fn derivative(&self, h: u64) -> Self {
        let values = (0..self.values.len())
            .map(|x| self.values[x ^ h as usize] * self.values[x].conj())
            .collect();
        CTable { n: self.n, values }
    }
}

/// How [`gowers_norm`] evaluates `‖f‖_{U^d}^{2^d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GowersStrategy {
    /// Literal average over `(x, h_1, …, h_d)` of the `2^d`-fold product.
    Direct,
    /// `E_h ‖Δ_h f‖_{U^{d-1}}^{2^{d-1}}` down to `|E f|^2`.
    Recursive,
    /// Peels `d-2` derivative layers, then uses `‖g‖_{U^2}^4 = Σ |ĝ|^4`.
    #[default]
    WhtBase,
}

impl GowersStrategy {
    /// Cheapest strategy valid for order `d`.
    pub fn fastest_for(d: usize) -> Self {
        if d >= 2 {
            GowersStrategy::WhtBase
        } else {
            GowersStrategy::Recursive
        }
    }

    /// `log2` of the number of inner terms.
    pub fn log2_cost(self, n: usize, d: usize) -> f64 {
        let (n, d) = (n as f64, d as f64);
        match self {
            GowersStrategy::Direct => n * (d + 1.0) + d,
            GowersStrategy::Recursive => n * (d + 1.0),
            GowersStrategy::WhtBase => n * (d - 2.0) + n + n.max(1.0).log2(),
        }
    }
}

fn mean_par<T: Scalar>(n: usize, f: impl Fn(u64) -> T + Sync + Send) -> T {
    let parts: Vec<T> = (0..1u64 << n).into_par_iter().map(f).collect();
    parts.into_iter().sum::<T>() / T::from_u64(1u64 << n).unwrap()
}

fn mean_seq<T: Scalar>(n: usize, f: impl Fn(u64) -> T) -> T {
    (0..1u64 << n).map(f).sum::<T>() / T::from_u64(1u64 << n).unwrap()
}

fn direct_power<T: Scalar>(f: &CTable<T>, d: usize) -> T {
    let n = f.n;
    let size = 1u64 << n;
    // Enumerate (h_2, …, h_d) in parallel over h_1.
    let per_h1 = |h1: u64| -> T {
        let mut hs = vec![0u64; d];
        hs[0] = h1;
        let rest = d - 1;
        let mut acc = T::zero();
        for code in 0..1u64 << (n * rest) {
            for (i, h) in hs.iter_mut().skip(1).enumerate() {
                *h = (code >> (n * i)) & (size - 1);
            }
            for x in 0..size {
                let mut prod = Complex::<T>::one();
                for w in 0u64..1 << d {
                    let mut pt = x;
                    for (i, &h) in hs.iter().enumerate() {
                        if w >> i & 1 == 1 {
                            pt ^= h;
                        }
                    }
                    let v = f.values[pt as usize];
                    prod *= if w.count_ones() % 2 == 1 { v.conj() } else { v };
                }
                acc += prod.re;
            }
        }
        acc
    };
    let parts: Vec<T> = (0..size).into_par_iter().map(per_h1).collect();
    let total: T = parts.into_iter().sum();
    total / T::from_f64(2f64.powi((n * (d + 1)) as i32)).unwrap()
}

fn recursive_power<T: Scalar>(f: &CTable<T>, d: usize, top: bool) -> T {
    if d == 1 {
        let s: Complex<T> = f.values.iter().copied().fold(Complex::zero(), |a, b| a + b);
        let m = s / T::from_usize(f.values.len()).unwrap();
        return m.norm_sqr();
    }
    let g = |h: u64| recursive_power(&f.derivative(h), d - 1, false);
    if top {
        mean_par(f.n, g)
    } else {
        mean_seq(f.n, g)
    }
}

fn u2_power<T: Scalar>(f: &CTable<T>) -> T {
    let mut v = f.values.clone();
    fwht_in_place(&mut v);
    let scale = T::from_usize(v.len()).unwrap();
    v.iter()
        .map(|z| {
            let a = z.norm_sqr() / (scale * scale);
            a * a
        })
        .sum()
}

fn wht_power<T: Scalar>(f: &CTable<T>, d: usize, top: bool) -> T {
    if d == 2 {
        return u2_power(f);
    }
    let g = |h: u64| wht_power(&f.derivative(h), d - 1, false);
    if top {
        mean_par(f.n, g)
    } else {
        mean_seq(f.n, g)
    }
}

/// `‖f‖_{U^d}`, with all strategies agreeing up to rounding.
pub fn gowers_norm<T: Scalar>(
    f: &CTable<T>,
    d: usize,
    strategy: GowersStrategy,
    budget: &Budget,
) -> Result<T> {
    if d == 0 {
        return Err(Error::parameter("Gowers norm order must be at least 1"));
    }
    if strategy == GowersStrategy::WhtBase && d < 2 {
        return Err(Error::Strategy(format!(
            "the transform-based strategy needs d >= 2, got {d}"
        )));
    }
    budget.check_log2("gowers_norm", strategy.log2_cost(f.n, d))?;
    let power = match strategy {
        GowersStrategy::Direct => direct_power(f, d),
        GowersStrategy::Recursive => recursive_power(f, d, true),
        GowersStrategy::WhtBase => wht_power(f, d, true),
    };
    let root = T::from_f64(2f64.powi(-(d as i32))).unwrap();
    Ok(power.max(T::zero()).powf(root))
}

/// Real tables are promoted to complex ones.
pub fn gowers_norm_real<T: Scalar>(
    f: &Table<T>,
    d: usize,
    strategy: GowersStrategy,
    budget: &Budget,
) -> Result<T> {
    gowers_norm(&CTable::from_real(f), d, strategy, budget)
}

/// `max_{ξ ≠ 0} |f̂(ξ)|`.
pub fn fourier_bias<T: Scalar>(f: &Table<T>) -> T {
    walsh_hadamard(f)
        .values()
        .iter()
        .skip(1)
        .map(|v| v.abs())
        .fold(T::zero(), T::max)
}

/// `|‖f·e(P)‖_{U^{d+1}} - ‖f‖_{U^{d+1}}|`, which vanishes when `deg P <= d`.
pub fn modulation_invariance_check<F: TorusFunction + ?Sized>(
    f: &CTable<f64>,
    p: &F,
    d: usize,
    budget: &Budget,
) -> Result<f64> {
    let s = GowersStrategy::fastest_for(d + 1);
    let twisted = f.mul(&CTable::exp_of(p))?;
    Ok((gowers_norm(&twisted, d + 1, s, budget)? - gowers_norm(f, d + 1, s, budget)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::NonclassicalPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL: [GowersStrategy; 3] = [
        GowersStrategy::Direct,
        GowersStrategy::Recursive,
        GowersStrategy::WhtBase,
    ];

    fn random_table(n: usize, rng: &mut ChaCha8Rng) -> CTable<f64> {
        CTable::from_fn(n, |_| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn constant_one_has_norm_one() {
        let b = Budget::default();
        let f = CTable::<f64>::from_fn(3, |_| Complex::new(1.0, 0.0));
        for d in 1..=3 {
            for s in ALL {
                if s == GowersStrategy::WhtBase && d == 1 {
                    continue;
                }
                assert!((gowers_norm(&f, d, s, &b).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadratic_phase() {
        let b = Budget::default();
        let p = NonclassicalPoly::new(2, [(0b11, 0)]).unwrap();
        let f = CTable::<f64>::exp_of(&p);
        for s in ALL {
            assert!((gowers_norm(&f, 3, s, &b).unwrap() - 1.0).abs() < 1e-12);
            let u2 = gowers_norm(&f, 2, s, &b).unwrap();
            assert!((u2 - 0.5f64.sqrt()).abs() < 1e-12, "{s:?} {u2}");
        }
    }

    #[test]
    fn strategies_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = Budget::default();
        for n in 1..=3 {
            for d in 2..=3 {
                let f = random_table(n, &mut rng);
                let vals: Vec<f64> = ALL
                    .iter()
                    .map(|&s| gowers_norm(&f, d, s, &b).unwrap())
                    .collect();
                assert!(
                    (vals[0] - vals[1]).abs() < 1e-9 && (vals[0] - vals[2]).abs() < 1e-9,
                    "{vals:?}"
                );
            }
        }
    }

    #[test]
    fn u1_is_abs_mean_and_wht_rejects_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_table(3, &mut rng);
        let mean: Complex<f64> = f.values().iter().sum::<Complex<f64>>() / 8.0;
        let b = Budget::default();
        let u1 = gowers_norm(&f, 1, GowersStrategy::Recursive, &b).unwrap();
        assert!((u1 - mean.norm()).abs() < 1e-12);
        assert!(matches!(
            gowers_norm(&f, 1, GowersStrategy::WhtBase, &b),
            Err(Error::Strategy(_))
        ));
    }

    #[test]
    fn budget_guard() {
        let f = CTable::<f64>::from_fn(10, |_| Complex::new(1.0, 0.0));
        let b = Budget::from_log2(20.0);
        assert!(matches!(
            gowers_norm(&f, 3, GowersStrategy::Direct, &b),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn bias_examples() {
        assert_eq!(fourier_bias(&Table::<f64>::constant(4, 0.3)), 0.0);
        let hyper = Table::<f64>::from_fn(4, |x| {
            if (x & 0b0110).count_ones() % 2 == 0 {
                1.0
            } else {
                0.0
            }
        });
        assert!((fourier_bias(&hyper) - 0.5).abs() < 1e-15);
        let chi = Table::<f64>::from_fn(4, |x| {
            if (x & 0b1011).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        assert!((fourier_bias(&chi) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn modulation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = Budget::default();
        let f = random_table(3, &mut rng);
        let lin = NonclassicalPoly::linear(3, 0b101);
        assert!(modulation_invariance_check(&f, &lin, 1, &b).unwrap() < 1e-9);
        let quad = NonclassicalPoly::new(3, [(0b011, 0)]).unwrap();
        assert!(modulation_invariance_check(&f, &quad, 2, &b).unwrap() < 1e-9);
    }

    #[test]
    fn f32_tables() {
        let f = Table::<f32>::from_fn(3, |x| (x as f32) / 7.0);
        let b = Budget::default();
        let a = gowers_norm_real(&f, 2, GowersStrategy::WhtBase, &b).unwrap();
        let c = gowers_norm_real(&f.converted::<f64>(), 2, GowersStrategy::Direct, &b).unwrap();
        assert!((a as f64 - c).abs() < 1e-5);
    }
}
