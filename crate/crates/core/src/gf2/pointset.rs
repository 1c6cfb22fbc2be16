use crate::error::{Error, Result};

use super::MAX_DENSE_DIM;

/// A subset of `F_2^n` stored as a bitset over all `2^n` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        assert!(
            n <= MAX_DENSE_DIM,
            "dimension {n} too large for a dense point set"
        );
        let bits = 1usize << n;
        PointSet {
            n,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    /// Every point of `F_2^n`, zero included.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for p in 0..(1u64 << n) {
            s.insert(p);
        }
        s
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty(n);
        for p in points {
            if p >> n != 0 {
                return Err(Error::parameter(format!("point {p} outside F_2^{n}")));
            }
            s.insert(p);
        }
        Ok(s)
    }

    pub fn from_fn(n: usize, mut pred: impl FnMut(u64) -> bool) -> Self {
        let mut s = Self::empty(n);
        for p in 0..(1u64 << n) {
            if pred(p) {
                s.insert(p);
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of points in the ambient space, `2^n`.
    pub fn universe(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn contains(&self, p: u64) -> bool {
        let p = p as usize;
        self.words[p >> 6] >> (p & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, p: u64) {
        let p = p as usize;
        self.words[p >> 6] |= 1 << (p & 63);
    }

    #[inline]
    pub fn remove(&mut self, p: u64) {
        let p = p as usize;
        self.words[p >> 6] &= !(1 << (p & 63));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Points in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as u64;
                    w &= w - 1;
                    Some(((i as u64) << 6) | b)
                }
            })
        })
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn intersection(&self, other: &PointSet) -> Self {
        assert_eq!(self.n, other.n);
        PointSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &PointSet) -> Self {
        assert_eq!(self.n, other.n);
        PointSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &PointSet) -> Self {
        assert_eq!(self.n, other.n);
        PointSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// `{x : x + v ∈ self}`.
    pub fn translate(&self, v: u64) -> Self {
        let mut out = PointSet {
            n: self.n,
            words: vec![0; self.words.len()],
        };
        xor_permute(&self.words, v, self.n, &mut out.words);
        out
    }

    /// Indicator as a vector of 0/1 values.
    pub fn indicator<T: num_traits::Zero + num_traits::One + Clone>(&self) -> Vec<T> {
        (0..self.universe() as u64)
            .map(|p| {
                if self.contains(p) {
                    T::one()
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        let mut s = PointSet { n, words };
        s.trim();
        s
    }

    /// Number of points strictly above `threshold`.
    pub(crate) fn count_above(&self, threshold: u64) -> usize {
        let start = threshold as usize + 1;
        if start >= self.universe() {
            return 0;
        }
        let (wi, bi) = (start >> 6, start & 63);
        let head = (self.words[wi] >> bi).count_ones() as usize;
        head + self.words[wi + 1..]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
    }

    fn trim(&mut self) {
        let bits = 1usize << self.n;
        if bits < 64 {
            self.words[0] &= (1u64 << bits) - 1;
        }
    }
}

/// Writes `out[x] = src[x ^ v]` for bitsets over `2^n` points.
pub(crate) fn xor_permute(src: &[u64], v: u64, n: usize, out: &mut [u64]) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    if n < 6 {
        // Single partial word: permute bit by bit.
        let w = src[0];
        let mut r = 0u64;
        for x in 0..(1u64 << n) {
            if w >> (x ^ v) & 1 == 1 {
                r |= 1 << x;
            }
        }
        out[0] = r;
        return;
    }
    let low = (v & 63) as u32;
    let high = (v >> 6) as usize;
    for (i, o) in out.iter_mut().enumerate() {
        let mut w = src[i ^ high];
        for (j, &m) in MASKS.iter().enumerate() {
            if low >> j & 1 == 1 {
                let s = 1u32 << j;
                w = ((w & m) << s) | ((w >> s) & m);
            }
        }
        *o = w;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translate_matches_pointwise_definition() {
        for n in [3usize, 6, 8] {
            let s = PointSet::from_fn(n, |p| (p * 7 + 3) % 5 < 2);
            for v in [0u64, 1, 5, (1 << n) - 1] {
                let t = s.translate(v);
                for x in 0..(1u64 << n) {
                    assert_eq!(t.contains(x), s.contains(x ^ v));
                }
            }
        }
    }

    #[test]
    fn complement_and_count_above() {
        let s = PointSet::from_points(3, [1, 2, 7]).unwrap();
        let c = s.complement();
        assert_eq!(c.len(), 5);
        assert!(c.contains(0) && !c.contains(7));
        assert_eq!(s.count_above(1), 2);
        assert_eq!(s.count_above(7), 0);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 2, 7]);
    }
}
