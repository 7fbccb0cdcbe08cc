use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::FiniteGroup;
use crate::par;

/// A subgroup, stored as its sorted member list plus a generating set.
///
/// Equality, ordering and hashing look at the members only. The ordering is
/// by order first, then lexicographic on the member list.
#[derive(Clone)]
pub struct Subgroup {
    members: Arc<[u32]>,
    gens: Arc<[u32]>,
    mask: Arc<[u64]>,
}

impl Subgroup {
    fn from_parts(n: usize, mut members: Vec<u32>, gens: Vec<u32>) -> Self {
        members.sort_unstable();
        let mut mask = vec![0u64; n.div_ceil(64)];
        for &m in &members {
            mask[m as usize / 64] |= 1 << (m % 64);
        }
        Subgroup { members: members.into(), gens: gens.into(), mask: mask.into() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x / 64).is_some_and(|w| w >> (x % 64) & 1 == 1)
    }

    pub fn members(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.members.iter().map(|&m| m as usize)
    }

    pub fn member_list(&self) -> Vec<usize> {
        self.members().collect()
    }

    /// Position of `x` in the sorted member list.
    #[inline]
    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&(x as u32)).ok()
    }

    pub fn generators(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.gens.iter().map(|&g| g as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.generators().all(|g| other.contains(g))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() <= 16 {
            write!(f, "Subgroup{:?}", &self.members[..])
        } else {
            write!(f, "Subgroup(order {}, gens {:?})", self.order(), &self.gens[..])
        }
    }
}

impl FiniteGroup {
    /// The subgroup generated by `gens`. Only generators that enlarge the
    /// group generated so far are kept, so at most `log₂ n` are stored.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let n = self.order();
        let mut in_set = vec![false; n];
        in_set[0] = true;
        let mut members = vec![0u32];
        let mut kept: Vec<u32> = Vec::new();
        for &g in gens {
            assert!(g < n, "element {g} out of range");
            if in_set[g] {
                continue;
            }
            kept.push(g as u32);
            // re-close from scratch over the existing members with all kept generators
            let mut head = 0;
            while head < members.len() {
                let x = members[head] as usize;
                head += 1;
                for &k in &kept {
                    let y = self.mul(x, k as usize);
                    if !in_set[y] {
                        in_set[y] = true;
                        members.push(y as u32);
                    }
                }
            }
        }
        Subgroup::from_parts(n, members, kept)
    }

    /// `⟨S, g⟩` keeping the generators of `S`.
    pub fn join_element(&self, s: &Subgroup, g: usize) -> Subgroup {
        let mut gens = s.generators().collect::<Vec<_>>();
        gens.push(g);
        self.closure(&gens)
    }

    /// Builds a subgroup from a member list, verifying closure.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Option<Subgroup> {
        let h = self.closure(members);
        (h.order() == {
            let mut m = members.to_vec();
            m.sort_unstable();
            m.dedup();
            m.len()
        })
        .then_some(h)
    }

    /// `g K g⁻¹`.
    pub fn conjugate_subgroup(&self, g: usize, k: &Subgroup) -> Subgroup {
        let members = k.members().map(|x| self.conj(g, x) as u32).collect();
        let gens = k.generators().map(|x| self.conj(g, x) as u32).collect();
        Subgroup::from_parts(self.order(), members, gens)
    }

    pub fn intersection(&self, k: &Subgroup, l: &Subgroup) -> Subgroup {
        let members: Vec<usize> = k.members().filter(|&x| l.contains(x)).collect();
        self.closure(&members)
    }

    /// `K ∩ sLs⁻¹`.
    pub fn intersection_with_conjugate(&self, k: &Subgroup, s: usize, l: &Subgroup) -> Subgroup {
        let s_inv = self.inv(s);
        let members: Vec<usize> = k.members().filter(|&x| l.contains(self.conj(s_inv, x))).collect();
        let out = self.closure(&members);
        debug_assert_eq!(out.order(), members.len());
        out
    }

    /// Whether `K ≤ sLs⁻¹`, tested on the generators of `K`.
    #[inline]
    pub fn is_in_conjugate(&self, k: &Subgroup, s: usize, l: &Subgroup) -> bool {
        let s_inv = self.inv(s);
        k.generators().all(|x| l.contains(self.conj(s_inv, x)))
    }

    pub fn is_normal(&self, k: &Subgroup) -> bool {
        (0..self.order()).all(|g| self.is_in_conjugate(k, g, k))
    }

    pub fn normalizer(&self, k: &Subgroup) -> Subgroup {
        let members: Vec<usize> = (0..self.order()).filter(|&g| self.is_in_conjugate(k, g, k)).collect();
        self.closure(&members)
    }

    /// One representative per left coset `sL`, the least element of each.
    pub fn left_transversal(&self, l: &Subgroup) -> Vec<usize> {
        let n = self.order();
        let mut covered = vec![false; n];
        let mut reps = Vec::with_capacity(n / l.order());
        for s in 0..n {
            if covered[s] {
                continue;
            }
            reps.push(s);
            for y in l.members() {
                covered[self.mul(s, y)] = true;
            }
        }
        reps
    }

    /// One representative per double coset `KsL`, the least element of each.
    pub fn double_coset_reps(&self, k: &Subgroup, l: &Subgroup) -> Vec<usize> {
        self.double_cosets(k, l).into_iter().map(|(s, _)| s).collect()
    }

    /// Double coset representatives together with the double coset sizes.
    pub fn double_cosets(&self, k: &Subgroup, l: &Subgroup) -> Vec<(usize, usize)> {
        let n = self.order();
        let mut covered = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if covered[s] {
                continue;
            }
            let mut size = 0;
            for x in k.members() {
                let xs = self.mul(x, s);
                for y in l.members() {
                    let z = self.mul(xs, y);
                    if !covered[z] {
                        covered[z] = true;
                        size += 1;
                    }
                }
            }
            out.push((s, size));
        }
        out
    }

    /// `|(G/L)^K|`: the number of cosets `sL` with `K ≤ sLs⁻¹`.
    pub fn mark(&self, k: &Subgroup, l: &Subgroup) -> u64 {
        self.mark_with_transversal(k, l, &self.left_transversal(l))
    }

    pub(crate) fn mark_with_transversal(&self, k: &Subgroup, l: &Subgroup, transversal: &[usize]) -> u64 {
        if !l.order().is_multiple_of(k.order()) {
            return 0;
        }
        transversal.iter().filter(|&&s| self.is_in_conjugate(k, s, l)).count() as u64
    }

    /// All subgroups, each once, sorted by order then member list.
    ///
    /// Layered cyclic extension: start with the cyclic subgroups and join each
    /// new subgroup with every cyclic subgroup it does not contain, until no
    /// new subgroup appears.
    pub fn enumerate_subgroups(&self) -> Vec<Subgroup> {
        let n = self.order();
        let mut seen: HashSet<Subgroup> = HashSet::new();
        let mut cyclic: Vec<Subgroup> = Vec::new();
        for g in 0..n {
            let c = self.closure(&[g]);
            if seen.insert(c.clone()) {
                cyclic.push(c);
            }
        }
        // generator of each cyclic subgroup
        let cyclic_gens: Vec<usize> = cyclic.iter().map(|c| c.generators().next().unwrap_or(0)).collect();
        let mut layer = cyclic.clone();
        while !layer.is_empty() {
            let extended = par::map_slice(&layer, |s| {
                let mut local: Vec<Subgroup> = Vec::new();
                for &c in &cyclic_gens {
                    if s.contains(c) {
                        continue;
                    }
                    let t = self.join_element(s, c);
                    if !local.contains(&t) {
                        local.push(t);
                    }
                }
                local
            });
            let mut next = Vec::new();
            for t in extended.into_iter().flatten() {
                if !seen.contains(&t) {
                    seen.insert(t.clone());
                    next.push(t);
                }
            }
            layer = next;
        }
        let mut all: Vec<Subgroup> = seen.into_iter().collect();
        all.sort();
        all
    }
}
