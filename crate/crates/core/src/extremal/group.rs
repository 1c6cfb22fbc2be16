use serde::Serialize;

use crate::error::{Error, Result};

/// Largest group order accepted, so element indices stay small.
pub const MAX_GROUP_ORDER: u64 = 1 << 30;

/// Mixed-radix indexing of tuples, first coordinate least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Radix {
    radices: Vec<u64>,
    order: u64,
}

impl Radix {
    fn new(radices: Vec<u64>) -> Self {
        let order = radices.iter().product();
        Radix { radices, order }
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    pub(crate) fn decode(&self, mut idx: u64) -> Vec<u64> {
        self.radices
            .iter()
            .map(|&r| {
                let v = idx % r;
                idx /= r;
                v
            })
            .collect()
    }

    /// Componentwise reduction modulo the radices.
    pub(crate) fn encode(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&v, &r)| acc * r + v % r)
    }

    pub(crate) fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for &r in &self.radices {
            out += ((a % r + b % r) % r) * place;
            a /= r;
            b /= r;
            place *= r;
        }
        out
    }
}

/// `G = ⊕_i Z/(m_i)` with every `m_i` a power of two, i.e. a direct sum of
/// cyclic subgroups `(1/m_i)Z/Z` of the torus. Elements are tuples of
/// integers `0 <= x_i < m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicGroup {
    moduli: Vec<u64>,
    #[serde(skip)]
    radix: Radix,
}

impl DyadicGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::parameter("a group needs at least one coordinate"));
        }
        if let Some(m) = moduli.iter().find(|&&m| m < 2 || !m.is_power_of_two()) {
            return Err(Error::parameter(format!(
                "modulus {m} is not a power of two >= 2"
            )));
        }
        let log2: u32 = moduli.iter().map(|m| m.trailing_zeros()).sum();
        if 1u64.checked_shl(log2).is_none_or(|o| o > MAX_GROUP_ORDER) {
            return Err(Error::parameter(format!(
                "group order 2^{log2} is too large"
            )));
        }
        Ok(DyadicGroup {
            radix: Radix::new(moduli.clone()),
            moduli,
        })
    }

    /// Moduli `2^{k_i+1}` from depths `k_i`.
    pub fn from_depths(depths: &[u32]) -> Result<Self> {
        let moduli = depths
            .iter()
            .map(|&k| {
                1u64.checked_shl(k + 1)
                    .ok_or_else(|| Error::parameter("depth too large"))
            })
            .collect::<Result<_>>()?;
        Self::new(moduli)
    }

    /// `F_2^n`; element indices coincide with the usual bit encoding.
    pub fn boolean(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.radix.order()
    }

    pub fn index_of(&self, x: &[u64]) -> Result<u64> {
        if x.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: self.moduli.len(),
                found: x.len(),
            });
        }
        if let Some((v, m)) = x.iter().zip(&self.moduli).find(|(v, m)| v >= m) {
            return Err(Error::parameter(format!(
                "component {v} out of range for modulus {m}"
            )));
        }
        Ok(self.radix.encode(x))
    }

    pub fn element(&self, idx: u64) -> Vec<u64> {
        self.radix.decode(idx)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.radix.add(a, b)
    }
}

/// `H = ⊕_i H_i` with `H_i` the cyclic subgroup of order `o_i` in the
/// `i`-th summand, i.e. the multiples of `m_i / o_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateSubgroup {
    orders: Vec<u64>,
    #[serde(skip)]
    quotient: Radix,
}

impl CoordinateSubgroup {
    pub fn new(g: &DyadicGroup, orders: Vec<u64>) -> Result<Self> {
        if orders.len() != g.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: g.moduli.len(),
                found: orders.len(),
            });
        }
        for (&o, &m) in orders.iter().zip(&g.moduli) {
            if o == 0 || !o.is_power_of_two() || m % o != 0 {
                return Err(Error::parameter(format!(
                    "subgroup order {o} does not divide modulus {m}"
                )));
            }
        }
        let quotient = Radix::new(orders.iter().zip(&g.moduli).map(|(o, m)| m / o).collect());
        Ok(CoordinateSubgroup { orders, quotient })
    }

    pub fn trivial(g: &DyadicGroup) -> Self {
        Self::new(g, vec![1; g.moduli.len()]).expect("order 1 always divides")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Number of cosets `|G/H|`.
    pub fn index(&self) -> u64 {
        self.quotient.order()
    }

    /// Coset of a group element, as an index into `G/H`.
    pub fn coset_of(&self, g: &DyadicGroup, idx: u64) -> u64 {
        self.quotient.encode(&g.element(idx))
    }

    /// Canonical representative of a coset: each component reduced modulo
    /// `m_i / o_i`.
    pub fn representative(&self, coset: u64) -> Vec<u64> {
        self.quotient.decode(coset)
    }

    pub(crate) fn quotient(&self) -> &Radix {
        &self.quotient
    }

    pub fn contains(&self, g: &DyadicGroup, idx: u64) -> bool {
        self.coset_of(g, idx) == 0
    }
}
