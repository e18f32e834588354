use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A finite abelian group `Z_{n_1} × … × Z_{n_r}`.
///
/// Elements are coordinate vectors; each element also has an integer id
/// given by mixed-radix encoding with the first coordinate varying fastest.
/// The identity always has id 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Build `Π Z_{n_i}`. Factors of order 1 are kept so that coordinate
    /// vectors line up with the caller's input; an empty list is the
    /// trivial group.
    pub fn decompose(orders: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(orders.len());
        for &n in orders {
            if n <= 0 {
                return invalid(format!("cyclic factor of order {n}"));
            }
            out.push(n as u64);
        }
        Ok(FiniteAbelianGroup { orders: out })
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n > 0);
        FiniteAbelianGroup { orders: vec![n] }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: vec![] }
    }

    pub fn from_orders(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&n| n > 0));
        FiniteAbelianGroup { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n))
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<u64> {
        assert_eq!(v.len(), self.orders.len());
        v.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
            .collect()
    }

    pub fn encode(&self, e: &[u64]) -> usize {
        assert_eq!(e.len(), self.orders.len());
        let mut id = 0usize;
        for (x, n) in e.iter().zip(&self.orders).rev() {
            id = id * (*n as usize) + (*x % *n) as usize;
        }
        id
    }

    pub fn decode(&self, mut id: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.orders.len());
        for &n in &self.orders {
            out.push((id % n as usize) as u64);
            id /= n as usize;
        }
        out
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut id = 0usize;
        let mut stride = 1usize;
        for &n in &self.orders {
            let n = n as usize;
            id += ((a % n + b % n) % n) * stride;
            a /= n;
            b /= n;
            stride *= n;
        }
        id
    }

    pub fn neg(&self, a: usize) -> usize {
        self.scale(a, -1)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, a: usize, k: i64) -> usize {
        let v: Vec<i64> = self
            .decode(a)
            .iter()
            .map(|&x| (x as i64).wrapping_mul(k.rem_euclid(self.exponent().max(1) as i64)))
            .collect();
        self.encode(&self.reduce(&v))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&x, &n)| num_integer::lcm(acc, n / num_integer::gcd(x, n)))
    }

    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Direct product, coordinates of `self` first.
    pub fn product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteAbelianGroup { orders }
    }

    /// Id in `self × other` of the pair `(a, b)`.
    pub fn pair(&self, other: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
        debug_assert!(b < other.order());
        a + self.order() * b
    }
}
