//! The fiber group `A` and the character groups `Hom(K, A)`.
//!
//! `A` is a finite abelian group `C_{d_1} × ... × C_{d_r}`. An element is a
//! residue tuple, stored as its mixed-radix index with the first factor most
//! significant, so index order is lexicographic tuple order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("invalid fiber factor {0:?}: expected a positive integer")]
    InvalidFactor(String),
    #[error("fiber order {0} is too large")]
    TooLarge(u128),
    #[error("character domains differ")]
    DomainMismatch,
    #[error("value table is not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("character has {got} values for a subgroup of order {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("character does not live on a subgroup of the restriction target")]
    NotASubgroup,
}

/// Fibers larger than this are rejected.
pub const MAX_FIBER_ORDER: u64 = 1 << 24;

/// A finite abelian group given by its cyclic factor orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianFiber {
    factors: Vec<u64>,
    order: u64,
}

impl AbelianFiber {
    pub fn new(factors: &[u64]) -> Result<Self, FiberError> {
        if let Some(&bad) = factors.iter().find(|&&d| d == 0) {
            return Err(FiberError::InvalidFactor(bad.to_string()));
        }
        let order: u128 = factors.iter().map(|&d| d as u128).product();
        if order > MAX_FIBER_ORDER as u128 {
            return Err(FiberError::TooLarge(order));
        }
        let factors = if factors.is_empty() { vec![1] } else { factors.to_vec() };
        Ok(AbelianFiber { factors, order: order as u64 })
    }

    pub fn cyclic(d: u64) -> Self {
        Self::new(&[d]).expect("cyclic fiber order must be positive")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn decode(&self, mut a: u32) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (i, &d) in self.factors.iter().enumerate().rev() {
            out[i] = a as u64 % d;
            a = (a as u64 / d) as u32;
        }
        out
    }

    pub fn encode(&self, residues: &[u64]) -> u32 {
        residues.iter().zip(&self.factors).fold(0u64, |acc, (&v, &d)| acc * d + v % d) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.factors.len() == 1 {
            return ((a as u64 + b as u64) % self.order) as u32;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let x = self.decode(a);
        let neg: Vec<u64> = x.iter().zip(&self.factors).map(|(&v, &d)| (d - v) % d).collect();
        self.encode(&neg)
    }

    /// `k·a`.
    pub fn scale(&self, a: u32, k: u64) -> u32 {
        let x = self.decode(a);
        let out: Vec<u64> =
            x.iter().zip(&self.factors).map(|(&v, &d)| ((v as u128 * k as u128) % d as u128) as u64).collect();
        self.encode(&out)
    }

    /// All `a` with `n·a = 0`, in lexicographic order.
    pub fn torsion_elements(&self, n: u64) -> Vec<u32> {
        (0..self.order as u32).filter(|&a| self.scale(a, n) == 0).collect()
    }

    pub fn has_trivial_torsion(&self, n: u64) -> bool {
        self.torsion_elements(n).len() == 1
    }
}

impl FromStr for AbelianFiber {
    type Err = FiberError;

    /// Comma list of cyclic orders, e.g. `"5"` or `"2,4"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let factors = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u64>().ok().filter(|&d| d > 0).ok_or_else(|| FiberError::InvalidFactor(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        AbelianFiber::new(&factors)
    }
}

impl fmt::Display for AbelianFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// A homomorphism `K → A`, stored as its full value table aligned with the
/// sorted members of `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Character {
    domain: Subgroup,
    values: Vec<u32>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(|K|={}, {:?})", self.domain.order(), self.values)
    }
}

impl Character {
    /// Checks the homomorphism property on all pairs.
    pub fn new(g: &FiniteGroup, fiber: &AbelianFiber, domain: Subgroup, values: Vec<u32>) -> Result<Self, FiberError> {
        if values.len() != domain.order() {
            return Err(FiberError::WrongLength { expected: domain.order(), got: values.len() });
        }
        let chi = Character { domain, values };
        for (i, x) in chi.domain.members().enumerate() {
            for (j, y) in chi.domain.members().enumerate() {
                if chi.value(g.mul(x, y)) != fiber.add(chi.values[i], chi.values[j]) {
                    return Err(FiberError::NotAHomomorphism(x, y));
                }
            }
        }
        Ok(chi)
    }

    pub(crate) fn from_values_unchecked(domain: Subgroup, values: Vec<u32>) -> Self {
        debug_assert_eq!(domain.order(), values.len());
        Character { domain, values }
    }

    pub fn trivial(domain: Subgroup) -> Self {
        let values = vec![0; domain.order()];
        Character { domain, values }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Value table aligned with the sorted members of the domain.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: usize) -> u32 {
        self.values[self.domain.position(x).expect("element outside the character's domain")]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Pointwise sum `φψ`.
    pub fn mul(&self, other: &Character, fiber: &AbelianFiber) -> Result<Character, FiberError> {
        if self.domain != other.domain {
            return Err(FiberError::DomainMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| fiber.add(a, b)).collect();
        Ok(Character { domain: self.domain.clone(), values })
    }

    pub fn inverse(&self, fiber: &AbelianFiber) -> Character {
        Character { domain: self.domain.clone(), values: self.values.iter().map(|&a| fiber.neg(a)).collect() }
    }

    /// `φ|_{K'}` for `K' ≤ K`.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Character, FiberError> {
        if !sub.is_subgroup_of(&self.domain) {
            return Err(FiberError::NotASubgroup);
        }
        let values = sub.members().map(|x| self.value(x)).collect();
        Ok(Character { domain: sub.clone(), values })
    }

    /// `^gφ` on `gKg⁻¹`, with `^gφ(x) = φ(g⁻¹xg)`.
    pub fn conjugate(&self, g: &FiniteGroup, elem: usize) -> Character {
        let domain = g.conjugate_subgroup(elem, &self.domain);
        let g_inv = g.inv(elem);
        let values = domain.members().map(|x| self.value(g.conj(g_inv, x))).collect();
        Character { domain, values }
    }
}

/// `Hom(K, A)` with its group structure.
///
/// Characters are listed in lexicographic order of their images of the
/// invariant-factor generators of `K^ab`; index 0 is the trivial character.
#[derive(Debug, Clone)]
pub struct HomGroup {
    subgroup: Subgroup,
    fiber: AbelianFiber,
    chars: Vec<Character>,
    /// images of the invariant-factor generators, per character
    images: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
    by_values: HashMap<Vec<u32>, usize>,
}

impl HomGroup {
    pub fn new(g: &FiniteGroup, k: &Subgroup, fiber: &AbelianFiber) -> Self {
        let ab = g.abelianization(k);
        let choices: Vec<Vec<u32>> = ab.factors().iter().map(|&e| fiber.torsion_elements(e)).collect();
        let total: usize = choices.iter().map(Vec::len).product();
        let mut chars = Vec::with_capacity(total);
        let mut images = Vec::with_capacity(total);
        let mut counter = vec![0usize; choices.len()];
        for _ in 0..total {
            let imgs: Vec<u32> = counter.iter().zip(&choices).map(|(&c, ch)| ch[c]).collect();
            let values = k
                .members()
                .map(|x| {
                    ab.project(x).iter().zip(&imgs).fold(0u32, |acc, (&coef, &t)| fiber.add(acc, fiber.scale(t, coef)))
                })
                .collect();
            chars.push(Character::from_values_unchecked(k.clone(), values));
            images.push(imgs);
            // odometer, last position fastest
            for i in (0..counter.len()).rev() {
                counter[i] += 1;
                if counter[i] < choices[i].len() {
                    break;
                }
                counter[i] = 0;
            }
        }
        let lookup = images.iter().enumerate().map(|(i, im)| (im.clone(), i)).collect();
        let by_values = chars.iter().enumerate().map(|(i, c)| (c.values.clone(), i)).collect();
        HomGroup { subgroup: k.clone(), fiber: fiber.clone(), chars, images, lookup, by_values }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn get(&self, i: usize) -> &Character {
        &self.chars[i]
    }

    /// Index of a character with this domain.
    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        if chi.domain() != &self.subgroup {
            return None;
        }
        self.by_values.get(chi.values()).copied()
    }

    pub fn index_of_values(&self, values: &[u32]) -> Option<usize> {
        self.by_values.get(values).copied()
    }

    /// Index of `φ_i · φ_j`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let sum: Vec<u32> = self.images[i].iter().zip(&self.images[j]).map(|(&a, &b)| self.fiber.add(a, b)).collect();
        self.lookup[&sum]
    }

    /// `Hom(K, A)` as a group table with the trivial character as element 0.
    pub fn as_group(&self) -> FiniteGroup {
        let n = self.len();
        let table = (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect();
        FiniteGroup::from_cayley(table).expect("character group is a group")
    }
}
