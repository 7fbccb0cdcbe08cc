//! The groups `G(a,b) = (P_a ⊕ P_b) ⋊ Q` of order `p²q`.
//!
//! `P_a = ⟨x⟩`, `P_b = ⟨y⟩` are cyclic of order `p`, `Q = ⟨z⟩` is cyclic of
//! order `q`, and `z` acts by `x ↦ ax`, `y ↦ by` where `a ≠ b` have
//! multiplicative order `q` mod `p`. Different unordered pairs `{a,b}` can give
//! non-isomorphic groups with the same table of marks.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, Subgroup, SubgroupClassTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThevenazError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("fiber has non-trivial {p}-torsion")]
    FiberHasPTorsion { p: u64 },
    #[error("groups come from different (p, q): ({0}, {1}) vs ({2}, {3})")]
    ParameterMismatch(u64, u64, u64, u64),
    #[error("named subgroups are not a transversal of the subgroup classes: {0}")]
    NotATransversal(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Validated parameters `(p, q, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThevenazSpec {
    pub p: u64,
    pub q: u64,
    pub a: u64,
    pub b: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `a` mod `p`, `None` if `a ≡ 0`.
pub fn mult_order(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    (1..p).find(|&k| pow_mod(a, k, p) == 1)
}

fn check_pq(p: u64, q: u64) -> Result<(), ThevenazError> {
    if !is_prime(p) {
        return Err(ThevenazError::InvalidSpec(format!("p = {p} is not prime")));
    }
    if !is_prime(q) || q < 3 {
        return Err(ThevenazError::InvalidSpec(format!("q = {q} must be a prime >= 3")));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(ThevenazError::InvalidSpec(format!("q = {q} does not divide p - 1 = {}", p - 1)));
    }
    if p * p * q > u32::MAX as u64 / 4 {
        return Err(ThevenazError::InvalidSpec(format!("p²q = {} is too large", p * p * q)));
    }
    Ok(())
}

impl ThevenazSpec {
    pub fn new(p: u64, q: u64, a: u64, b: u64) -> Result<Self, ThevenazError> {
        check_pq(p, q)?;
        let (a, b) = (a % p, b % p);
        for (name, v) in [("a", a), ("b", b)] {
            if mult_order(v, p) != Some(q) {
                return Err(ThevenazError::InvalidSpec(format!("{name} = {v} does not have order {q} mod {p}")));
            }
        }
        if a == b {
            return Err(ThevenazError::InvalidSpec(format!("a = b = {a}")));
        }
        Ok(ThevenazSpec { p, q, a, b })
    }
}

impl FromStr for ThevenazSpec {
    type Err = ThevenazError;

    /// `p=11,q=5,a=3,b=9` or positional `11,5,3,9`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| ThevenazError::InvalidSpec(msg);
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad(format!("expected four parameters p,q,a,b in {s:?}")));
        }
        let mut vals = [None; 4];
        for (pos, part) in parts.iter().enumerate() {
            let (slot, num) = match part.split_once('=') {
                Some((key, v)) => {
                    let slot = match key.trim() {
                        "p" => 0,
                        "q" => 1,
                        "a" => 2,
                        "b" => 3,
                        other => return Err(bad(format!("unknown key {other:?}"))),
                    };
                    (slot, v.trim())
                }
                None => (pos, *part),
            };
            let v = num.parse::<u64>().map_err(|_| bad(format!("not an integer: {num:?}")))?;
            if vals[slot].replace(v).is_some() {
                return Err(bad(format!("parameter given twice in {s:?}")));
            }
        }
        let [p, q, a, b] = vals.map(|v| v.expect("four distinct slots filled"));
        ThevenazSpec::new(p, q, a, b)
    }
}

impl fmt::Display for ThevenazSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},q={},a={},b={}", self.p, self.q, self.a, self.b)
    }
}

/// A built `G(a,b)` with its labelled generators.
#[derive(Debug, Clone)]
pub struct ThevenazGroup {
    spec: ThevenazSpec,
    group: FiniteGroup,
}

/// Names of the canonical class representatives, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSubgroup {
    Trivial,
    Pa,
    Pb,
    /// `P(j) = ⟨x + jy⟩`
    Pj(u64),
    Pab,
    Q,
    PaQ,
    PbQ,
    Whole,
}

impl NamedSubgroup {
    /// Whether the subgroup has order a power of `p`.
    pub fn is_p_subgroup(self) -> bool {
        matches!(self, Self::Trivial | Self::Pa | Self::Pb | Self::Pj(_) | Self::Pab)
    }
}

impl fmt::Display for NamedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trivial => write!(f, "1"),
            Self::Pa => write!(f, "P_a"),
            Self::Pb => write!(f, "P_b"),
            Self::Pj(j) => write!(f, "P({j})"),
            Self::Pab => write!(f, "P_a+P_b"),
            Self::Q => write!(f, "Q"),
            Self::PaQ => write!(f, "P_a:Q"),
            Self::PbQ => write!(f, "P_b:Q"),
            Self::Whole => write!(f, "G"),
        }
    }
}

impl ThevenazGroup {
    pub fn build(spec: ThevenazSpec) -> Result<Self, ThevenazError> {
        let ThevenazSpec { p, q, a, b } = spec;
        let (pu, qu) = (p as usize, q as usize);
        let normal = FiniteGroup::abelian(&[pu, pu]);
        let top = FiniteGroup::cyclic(qu);
        let action: Vec<Vec<usize>> = (0..q)
            .map(|k| {
                let (ak, bk) = (pow_mod(a, k, p), pow_mod(b, k, p));
                (0..pu * pu)
                    .map(|n| {
                        let (i, j) = ((n / pu) as u64, (n % pu) as u64);
                        ((ak * i % p) * p + bk * j % p) as usize
                    })
                    .collect()
            })
            .collect();
        let group = FiniteGroup::semidirect_product(&normal, &top, &action)?;
        Ok(ThevenazGroup { spec, group })
    }

    pub fn spec(&self) -> ThevenazSpec {
        self.spec
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn into_group(self) -> FiniteGroup {
        self.group
    }

    /// `(ix + jy) z^k`.
    pub fn element(&self, i: u64, j: u64, k: u64) -> usize {
        let (p, q) = (self.spec.p, self.spec.q);
        (((i % p) * p + j % p) * q + k % q) as usize
    }

    pub fn x(&self) -> usize {
        self.element(1, 0, 0)
    }

    pub fn y(&self) -> usize {
        self.element(0, 1, 0)
    }

    pub fn z(&self) -> usize {
        self.element(0, 0, 1)
    }

    /// Least representatives of `(ℤ/p)^× / ⟨a⟩`, ascending.
    pub fn pj_indices(&self) -> Vec<u64> {
        let ThevenazSpec { p, q, a, .. } = self.spec;
        let mut covered = vec![false; p as usize];
        let mut reps = Vec::new();
        for j in 1..p {
            if covered[j as usize] {
                continue;
            }
            reps.push(j);
            for k in 0..q {
                covered[(j * pow_mod(a, k, p) % p) as usize] = true;
            }
        }
        reps
    }

    pub fn named(&self, which: NamedSubgroup) -> Subgroup {
        let g = &self.group;
        let (x, y, z) = (self.x(), self.y(), self.z());
        match which {
            NamedSubgroup::Trivial => g.trivial_subgroup(),
            NamedSubgroup::Pa => g.closure(&[x]),
            NamedSubgroup::Pb => g.closure(&[y]),
            NamedSubgroup::Pj(j) => g.closure(&[self.element(1, j, 0)]),
            NamedSubgroup::Pab => g.closure(&[x, y]),
            NamedSubgroup::Q => g.closure(&[z]),
            NamedSubgroup::PaQ => g.closure(&[x, z]),
            NamedSubgroup::PbQ => g.closure(&[y, z]),
            NamedSubgroup::Whole => g.whole(),
        }
    }

    /// `1, P_a, P_b, P(j)..., P_a⊕P_b, Q, P_a⋊Q, P_b⋊Q, G`.
    pub fn canonical_names(&self) -> Vec<NamedSubgroup> {
        let mut names = vec![NamedSubgroup::Trivial, NamedSubgroup::Pa, NamedSubgroup::Pb];
        names.extend(self.pj_indices().into_iter().map(NamedSubgroup::Pj));
        names.extend([
            NamedSubgroup::Pab,
            NamedSubgroup::Q,
            NamedSubgroup::PaQ,
            NamedSubgroup::PbQ,
            NamedSubgroup::Whole,
        ]);
        names
    }

    pub fn canonical_class_reps(&self) -> Vec<Subgroup> {
        self.canonical_names().into_iter().map(|n| self.named(n)).collect()
    }

    /// Class index of each canonical representative; fails unless they hit
    /// every class exactly once.
    pub fn canonical_class_map(&self, table: &SubgroupClassTable) -> Result<Vec<usize>, ThevenazError> {
        let reps = self.canonical_class_reps();
        let mut map = Vec::with_capacity(reps.len());
        let mut hit = vec![false; table.num_classes()];
        for (name, s) in self.canonical_names().iter().zip(&reps) {
            let c = table.class_of(s).ok_or_else(|| ThevenazError::NotATransversal(format!("{name} not found")))?;
            if std::mem::replace(&mut hit[c], true) {
                return Err(ThevenazError::NotATransversal(format!("{name} repeats class {c}")));
            }
            map.push(c);
        }
        if let Some(c) = hit.iter().position(|&h| !h) {
            return Err(ThevenazError::NotATransversal(format!("class {c} missed")));
        }
        Ok(map)
    }

    /// Marks matrix with rows and columns in canonical order.
    pub fn canonical_marks(&self, table: &SubgroupClassTable) -> Result<Vec<Vec<u64>>, ThevenazError> {
        let map = self.canonical_class_map(table)?;
        Ok(map.iter().map(|&i| map.iter().map(|&j| table.marks()[i][j]).collect()).collect())
    }
}

/// Elements of order `q` in `(ℤ/p)^×`, ascending.
pub fn order_q_elements(p: u64, q: u64) -> Vec<u64> {
    (1..p).filter(|&a| mult_order(a, p) == Some(q)).collect()
}

/// All unordered pairs `{a, b}` (as `a < b`) of distinct order-`q` elements.
pub fn valid_pairs(p: u64, q: u64) -> Vec<(u64, u64)> {
    let elems = order_q_elements(p, q);
    let mut out = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// `G(a,b) ≅ G(c,d)` iff `{c,d} = {aⁿ, bⁿ}` for some `1 ≤ n < q`.
pub fn family_isomorphic(s1: &ThevenazSpec, s2: &ThevenazSpec) -> bool {
    if (s1.p, s1.q) != (s2.p, s2.q) {
        return false;
    }
    let p = s1.p;
    (1..s1.q).any(|n| {
        let (an, bn) = (pow_mod(s1.a, n, p), pow_mod(s1.b, n, p));
        (an, bn) == (s2.a, s2.b) || (an, bn) == (s2.b, s2.a)
    })
}

/// Number of isomorphism classes in the family for fixed `(p, q)`.
pub fn class_count(q: u64) -> u64 {
    (q - 1) / 2
}

/// Valid unordered pairs grouped into isomorphism classes by
/// [`family_isomorphic`], classes ordered by their least pair.
pub fn partition(p: u64, q: u64) -> Result<Vec<Vec<(u64, u64)>>, ThevenazError> {
    check_pq(p, q)?;
    let pairs = valid_pairs(p, q);
    let specs: Vec<ThevenazSpec> =
        pairs.iter().map(|&(a, b)| ThevenazSpec::new(p, q, a, b)).collect::<Result<_, _>>()?;
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut classes: Vec<Vec<(u64, u64)>> = Vec::new();
    for i in 0..pairs.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = Vec::new();
        for j in i..pairs.len() {
            if class_of[j] == usize::MAX && family_isomorphic(&specs[i], &specs[j]) {
                class_of[j] = c;
                members.push(pairs[j]);
            }
        }
        classes.push(members);
    }
    Ok(classes)
}
