//! Finite groups as dense Cayley tables.
//!
//! Elements are the indices `0..n`, element `0` is always the identity.
//! Everything downstream (subgroups, cosets, marks, characters) works on these
//! indices directly.

mod abelianize;
mod classes;
mod iso;
mod subgroup;

use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;

pub use abelianize::{smith_normal_form, Abelianization};
pub use classes::{ClassTableExport, SubgroupClassTable};
pub use iso::{all_isomorphisms, are_isomorphic, is_isomorphism};
pub use subgroup::Subgroup;

/// Orders up to this bound get a full `n³` associativity check by default.
pub const DEFAULT_FULL_ASSOC_BOUND: usize = 1000;

/// Triples drawn by [`AssocCheck::Sampled`] when no count is given.
pub const DEFAULT_ASSOC_SAMPLES: usize = 1 << 20;

/// The first axiom a candidate table was found to break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotSquare { row: usize, len: usize },
    Empty,
    OutOfRange { row: usize, col: usize, value: usize },
    RowNotPermutation(usize),
    ColumnNotPermutation(usize),
    NoIdentity,
    NoInverse(usize),
    NotAssociative(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { row, len } => write!(f, "row {row} has length {len}"),
            Violation::Empty => write!(f, "empty table"),
            Violation::OutOfRange { row, col, value } => {
                write!(f, "entry {value} at ({row},{col}) is out of range")
            }
            Violation::RowNotPermutation(r) => write!(f, "row {r} is not a permutation"),
            Violation::ColumnNotPermutation(c) => write!(f, "column {c} is not a permutation"),
            Violation::NoIdentity => write!(f, "no identity element"),
            Violation::NoInverse(g) => write!(f, "element {g} has no two-sided inverse"),
            Violation::NotAssociative(a, b, c) => {
                write!(f, "({a}*{b})*{c} != {a}*({b}*{c})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(Violation),
    #[error("action of quotient element {q} is not an automorphism of the normal factor")]
    NotAnAutomorphism { q: usize },
    #[error("action is not a homomorphism: act({q1}*{q2}) != act({q1})∘act({q2})")]
    NotAnAction { q1: usize, q2: usize },
    #[error("action table has {got} entries, expected {expected}")]
    ActionShape { expected: usize, got: usize },
    #[error("invalid constructor argument: {0}")]
    InvalidArgument(String),
}

/// How much of the associativity law to check on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocCheck {
    /// Full check up to [`DEFAULT_FULL_ASSOC_BOUND`], sampled above.
    Auto,
    Full,
    Sampled {
        samples: usize,
        seed: u64,
    },
    /// Only for tables produced by constructions that are already verified.
    Skip,
}

/// A finite group with an exact multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish_non_exhaustive()
    }
}

/// JSON form of a Cayley table: `{"order": n, "mul": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates a Cayley table. If the identity is not element 0, the
    /// identity and element 0 swap labels.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        Self::from_cayley_with(table, AssocCheck::Auto)
    }

    pub fn from_cayley_with(table: Vec<Vec<usize>>, check: AssocCheck) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup(Violation::Empty));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(Violation::NotSquare { row: r, len: row.len() }));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::NotAGroup(Violation::OutOfRange { row: r, col: c, value: v }));
                }
                flat.push(v as u32);
            }
        }
        check_latin(n, &flat)?;
        let e = find_identity(n, &flat)?;
        if e != 0 {
            flat = relabel_swap(n, &flat, 0, e);
        }
        Self::from_flat(n, flat, check)
    }

    pub fn from_cayley_json(json: &CayleyTable) -> Result<Self, GroupError> {
        if json.mul.len() != json.order {
            return Err(GroupError::InvalidArgument(format!(
                "declared order {} but table has {} rows",
                json.order,
                json.mul.len()
            )));
        }
        Self::from_cayley(json.mul.clone())
    }

    /// Builds from a row-major table whose identity is already element 0.
    pub(crate) fn from_flat(n: usize, flat: Vec<u32>, check: AssocCheck) -> Result<Self, GroupError> {
        debug_assert_eq!(flat.len(), n * n);
        check_latin(n, &flat)?;
        for g in 0..n {
            if flat[g] as usize != g || flat[g * n] as usize != g {
                return Err(GroupError::NotAGroup(Violation::NoIdentity));
            }
        }
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let h = (0..n).find(|&h| flat[g * n + h] == 0).expect("latin row contains 0");
            if flat[h * n + g] != 0 {
                return Err(GroupError::NotAGroup(Violation::NoInverse(g)));
            }
            inv[g] = h as u32;
        }
        let group = FiniteGroup { order: n, table: flat, inv };
        let check = match check {
            AssocCheck::Auto if n <= DEFAULT_FULL_ASSOC_BOUND => AssocCheck::Full,
            AssocCheck::Auto => AssocCheck::Sampled { samples: DEFAULT_ASSOC_SAMPLES, seed: 0 },
            other => other,
        };
        if let Some((a, b, c)) = group.associativity_witness(check) {
            return Err(GroupError::NotAGroup(Violation::NotAssociative(a, b, c)));
        }
        Ok(group)
    }

    fn associativity_witness(&self, check: AssocCheck) -> Option<(usize, usize, usize)> {
        let n = self.order;
        match check {
            AssocCheck::Skip | AssocCheck::Auto => None,
            AssocCheck::Full => par::find_map_first(n, |a| {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
                None
            }),
            AssocCheck::Sampled { samples, seed } => {
                let mut rng = StdRng::seed_from_u64(seed);
                (0..samples).find_map(|_| {
                    let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    (self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))).then_some((a, b, c))
                })
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut base = x;
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subgroup {
        let members: Vec<usize> =
            (0..self.order).filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z))).collect();
        self.closure(&members)
    }

    pub fn whole(&self) -> Subgroup {
        self.closure(&(1..self.order).collect::<Vec<_>>())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.closure(&[])
    }

    /// Conjugacy classes of elements, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn cayley_table(&self) -> CayleyTable {
        let n = self.order;
        CayleyTable { order: n, mul: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect() }
    }

    // --- constructors ---

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        Self::abelian(&[n])
    }

    /// `C_{d1} × C_{d2} × ...`, elements in mixed radix with the first factor
    /// most significant.
    pub fn abelian(factors: &[usize]) -> Self {
        assert!(factors.iter().all(|&d| d >= 1), "cyclic factors must be >= 1");
        let n: usize = factors.iter().product();
        let decode = |mut x: usize| {
            let mut digits = vec![0; factors.len()];
            for (i, &d) in factors.iter().enumerate().rev() {
                digits[i] = x % d;
                x /= d;
            }
            digits
        };
        let encode = |digits: &[usize]| digits.iter().zip(factors).fold(0, |acc, (&v, &d)| acc * d + v);
        let digits: Vec<Vec<usize>> = (0..n).map(decode).collect();
        let mut flat = Vec::with_capacity(n * n);
        let mut buf = vec![0; factors.len()];
        for a in &digits {
            for b in &digits {
                for (i, &d) in factors.iter().enumerate() {
                    buf[i] = (a[i] + b[i]) % d;
                }
                flat.push(encode(&buf) as u32);
            }
        }
        Self::from_flat(n, flat, AssocCheck::Skip).expect("abelian construction is a group")
    }

    /// Dihedral group of order `2n`: `r^i s^j` has index `2i + j`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::InvalidArgument("dihedral needs n >= 1".into()));
        }
        let idx = |i: usize, j: usize| 2 * (i % n) + j;
        let mut flat = Vec::with_capacity(4 * n * n);
        for a in 0..2 * n {
            let (i1, j1) = (a / 2, a % 2);
            for b in 0..2 * n {
                let (i2, j2) = (b / 2, b % 2);
                // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
                let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 };
                flat.push(idx(i, (j1 + j2) % 2) as u32);
            }
        }
        Self::from_flat(2 * n, flat, AssocCheck::Auto)
    }

    /// Symmetric group on `n ≤ 6` points, permutations in lexicographic order
    /// (identity first). Product is composition `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if !(1..=6).contains(&n) {
            return Err(GroupError::InvalidArgument(format!("symmetric:{n} unsupported (1..=6)")));
        }
        let perms = permutations(n);
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let m = perms.len();
        let mut flat = Vec::with_capacity(m * m);
        for s in &perms {
            for t in &perms {
                let st: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
                flat.push(index[&st] as u32);
            }
        }
        Self::from_flat(m, flat, AssocCheck::Auto)
    }

    /// `G × H`, index of `(g, h)` is `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.order, h.order);
        let mut flat = Vec::with_capacity(n * m * n * m);
        for a in 0..n * m {
            for b in 0..n * m {
                flat.push((g.mul(a / m, b / m) * m + h.mul(a % m, b % m)) as u32);
            }
        }
        Self::from_flat(n * m, flat, AssocCheck::Skip).expect("direct product is a group")
    }

    /// `N ⋊ Q` with `(n₁,q₁)(n₂,q₂) = (n₁·^{q₁}n₂, q₁q₂)`.
    ///
    /// `action[q]` is the permutation of `N`'s elements by which `q` acts. Each
    /// one is checked to be an automorphism and `q ↦ action[q]` to be a
    /// homomorphism. Element `(n, q)` has index `n·|Q| + q`.
    pub fn semidirect_product(
        normal: &FiniteGroup,
        top: &FiniteGroup,
        action: &[Vec<usize>],
    ) -> Result<Self, GroupError> {
        let (n, m) = (normal.order, top.order);
        if action.len() != m {
            return Err(GroupError::ActionShape { expected: m, got: action.len() });
        }
        for (q, alpha) in action.iter().enumerate() {
            if alpha.len() != n || !is_automorphism(normal, alpha) {
                return Err(GroupError::NotAnAutomorphism { q });
            }
        }
        for q1 in 0..m {
            for q2 in 0..m {
                let lhs = &action[top.mul(q1, q2)];
                let ok = (0..n).all(|x| lhs[x] == action[q1][action[q2][x]]);
                if !ok {
                    return Err(GroupError::NotAnAction { q1, q2 });
                }
            }
        }
        let mut flat = Vec::with_capacity(n * m * n * m);
        for a in 0..n * m {
            let (n1, q1) = (a / m, a % m);
            for b in 0..n * m {
                let (n2, q2) = (b / m, b % m);
                let nn = normal.mul(n1, action[q1][n2]);
                flat.push((nn * m + top.mul(q1, q2)) as u32);
            }
        }
        Self::from_flat(n * m, flat, AssocCheck::Auto)
    }
}

fn check_latin(n: usize, flat: &[u32]) -> Result<(), GroupError> {
    let mut seen = vec![0usize; n];
    for r in 0..n {
        let stamp = r + 1;
        for c in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == stamp {
                return Err(GroupError::NotAGroup(Violation::RowNotPermutation(r)));
            }
            seen[v] = stamp;
        }
    }
    seen.iter_mut().for_each(|s| *s = 0);
    for c in 0..n {
        let stamp = c + 1;
        for r in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == stamp {
                return Err(GroupError::NotAGroup(Violation::ColumnNotPermutation(c)));
            }
            seen[v] = stamp;
        }
    }
    Ok(())
}

fn find_identity(n: usize, flat: &[u32]) -> Result<usize, GroupError> {
    (0..n)
        .find(|&e| (0..n).all(|g| flat[e * n + g] as usize == g && flat[g * n + e] as usize == g))
        .ok_or(GroupError::NotAGroup(Violation::NoIdentity))
}

fn relabel_swap(n: usize, flat: &[u32], a: usize, b: usize) -> Vec<u32> {
    let sw = |x: usize| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let mut out = vec![0u32; n * n];
    for r in 0..n {
        for c in 0..n {
            out[sw(r) * n + sw(c)] = sw(flat[r * n + c] as usize) as u32;
        }
    }
    out
}

fn is_automorphism(g: &FiniteGroup, alpha: &[usize]) -> bool {
    let n = g.order;
    let mut hit = vec![false; n];
    for &y in alpha {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| alpha[g.mul(a, b)] == g.mul(alpha[a], alpha[b])))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
