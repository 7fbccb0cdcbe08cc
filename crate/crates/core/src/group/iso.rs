//! Isomorphism testing by backtracking on images of a small generating set.

use std::ops::ControlFlow;

use super::FiniteGroup;

const NONE: u32 = u32::MAX;

/// Pair searches for a 2-element generating set stop above this many closures.
const PAIR_SEARCH_LIMIT: usize = 200_000;

/// Finds an isomorphism `G → H` as an element map, or `None` if the groups are
/// not isomorphic. The returned map is checked on every product.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if !same_cheap_invariants(g, h) {
        return None;
    }
    if subgroup_census(g) != subgroup_census(h) {
        return None;
    }
    let mut found = None;
    search(g, h, true, &mut |map| {
        found = Some(map.to_vec());
        ControlFlow::Break(())
    });
    if let Some(map) = &found {
        assert!(is_isomorphism(g, h, map), "backtracking produced a non-isomorphism");
    }
    found
}

/// Every isomorphism `G → H`. Meant for small groups (character groups).
pub fn all_isomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if !same_cheap_invariants(g, h) {
        return out;
    }
    search(g, h, false, &mut |map| {
        out.push(map.to_vec());
        ControlFlow::Continue(())
    });
    out
}

pub fn is_isomorphism(g: &FiniteGroup, h: &FiniteGroup, map: &[usize]) -> bool {
    let n = g.order();
    if h.order() != n || map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in map {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])))
}

/// `(element order, conjugacy class size)` per element.
fn signatures(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let mut sig = vec![(0, 0); g.order()];
    for class in g.conjugacy_classes() {
        for &x in &class {
            sig[x] = (g.element_order(x), class.len());
        }
    }
    sig
}

fn same_cheap_invariants(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() || g.is_abelian() != h.is_abelian() {
        return false;
    }
    let (mut a, mut b) = (signatures(g), signatures(h));
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn subgroup_census(g: &FiniteGroup) -> Vec<usize> {
    let mut orders: Vec<usize> = g.enumerate_subgroups().iter().map(|s| s.order()).collect();
    orders.sort_unstable();
    orders
}

/// A short generating set: a single generator if cyclic, else a pair whose
/// first element is a class representative, else greedy.
pub(crate) fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    if let Some(x) = (0..n).find(|&x| g.element_order(x) == n) {
        return vec![x];
    }
    let class_reps: Vec<usize> = g.conjugacy_classes().iter().map(|c| c[0]).skip(1).collect();
    if class_reps.len() * n <= PAIR_SEARCH_LIMIT {
        for &a in &class_reps {
            for b in 1..n {
                if g.closure(&[a, b]).order() == n {
                    return vec![a, b];
                }
            }
        }
    }
    let mut gens = Vec::new();
    let mut current = g.trivial_subgroup();
    while current.order() < n {
        let best = (0..n)
            .filter(|&x| !current.contains(x))
            .max_by_key(|&x| (g.join_element(&current, x).order(), std::cmp::Reverse(x)))
            .expect("proper subgroup has a non-member");
        gens.push(best);
        current = g.join_element(&current, best);
    }
    gens
}

/// Backtracking over generator images. With `reduce_first`, the first
/// generator only maps to conjugacy class representatives of `H` (every
/// isomorphism is conjugate to one of those), which is complete for existence
/// but not for enumeration.
fn search<F>(g: &FiniteGroup, h: &FiniteGroup, reduce_first: bool, visit: &mut F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let gens = generating_set(g);
    let sig_g = signatures(g);
    let sig_h = signatures(h);
    let h_class_reps: Vec<usize> = h.conjugacy_classes().iter().map(|c| c[0]).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let pool: Box<dyn Iterator<Item = usize>> =
                if i == 0 && reduce_first { Box::new(h_class_reps.iter().copied()) } else { Box::new(0..h.order()) };
            pool.filter(|&y| sig_h[y] == sig_g[x]).collect()
        })
        .collect();
    let mut state = SearchState {
        g,
        h,
        gens: &gens,
        images: Vec::with_capacity(gens.len()),
        map: vec![NONE; g.order()],
        used: vec![false; h.order()],
    };
    let _ = state.descend(&candidates, visit);
}

struct SearchState<'a> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    gens: &'a [usize],
    images: Vec<usize>,
    map: Vec<u32>,
    used: Vec<bool>,
}

impl SearchState<'_> {
    fn descend<F>(&mut self, candidates: &[Vec<usize>], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let level = self.images.len();
        if level == self.gens.len() {
            if self.consistent() {
                let map: Vec<usize> = self.map.iter().map(|&y| y as usize).collect();
                return visit(&map);
            }
            return ControlFlow::Continue(());
        }
        for &y in &candidates[level] {
            self.images.push(y);
            if self.consistent() {
                self.descend(candidates, visit)?;
            }
            self.images.pop();
        }
        ControlFlow::Continue(())
    }

    /// Extends the partial map over `⟨gens[..k]⟩` by breadth-first search and
    /// checks that it is a well-defined injective homomorphism there.
    fn consistent(&mut self) -> bool {
        let k = self.images.len();
        self.map.iter_mut().for_each(|m| *m = NONE);
        self.used.iter_mut().for_each(|u| *u = false);
        self.map[0] = 0;
        self.used[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let fx = self.map[x] as usize;
            for j in 0..k {
                let y = self.g.mul(x, self.gens[j]);
                let fy = self.h.mul(fx, self.images[j]);
                if self.map[y] == NONE {
                    if self.used[fy] {
                        return false;
                    }
                    self.map[y] = fy as u32;
                    self.used[fy] = true;
                    queue.push(y);
                } else if self.map[y] as usize != fy {
                    return false;
                }
            }
        }
        k < self.gens.len() || queue.len() == self.g.order()
    }
}
