//! Species isomorphisms `B^A(G) → B^A(H)`.
//!
//! A witness is a bijection `θ` between subgroup classes together with, for
//! every class `K`, a bijection `Hom(K,A) → Hom(θK,A)`. When every character
//! bijection is a group isomorphism and all γ coefficients are preserved, the
//! induced map on the orbit basis is a ring isomorphism. [`verify_species`]
//! checks both the γ condition and, independently, every structure constant.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::all_isomorphisms;
use crate::monomial::BurnsideRing;
use crate::par;
use crate::thevenaz::{ThevenazError, ThevenazGroup};

/// Printed with every exhausted search: what exhaustion does and does not
/// rule out.
pub const SEARCH_SCOPE_NOTE: &str = "the search only considers witnesses whose per-class character maps are \
group isomorphisms; exhaustion rules those out and says nothing about species isomorphisms built from other \
character bijections";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpeciesError {
    #[error("witness is not a bijection: {0}")]
    NotABijection(String),
    #[error("character map for class {class} is not a group isomorphism")]
    NotAGroupIso { class: usize },
    #[error("the two rings use different fibers")]
    FiberMismatch,
    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded { budget: u64 },
    #[error(transparent)]
    Thevenaz(#[from] ThevenazError),
}

/// `θ` on subgroup classes and characters, indexed by the class tables of the
/// two rings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesWitness {
    /// `subgroup_map[c]` is the `H`-class of `θ` of the `c`-th `G`-class.
    pub subgroup_map: Vec<usize>,
    /// `char_maps[c][i]` is the index in `Hom(θK, A)` of the image of the
    /// `i`-th character of `K`.
    pub char_maps: Vec<Vec<usize>>,
    /// Per-class claim that the character map is a group isomorphism; empty
    /// means "all".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub is_group_iso: Vec<bool>,
}

impl SpeciesWitness {
    /// Identity witness of a ring onto itself.
    pub fn identity(ring: &BurnsideRing) -> Self {
        let n = ring.classes().num_classes();
        SpeciesWitness {
            subgroup_map: (0..n).collect(),
            char_maps: (0..n).map(|c| (0..ring.hom(c).len()).collect()).collect(),
            is_group_iso: vec![true; n],
        }
    }

    /// `θ⁻¹`, assuming `self` is a bijection.
    pub fn inverse(&self) -> Self {
        let n = self.subgroup_map.len();
        let mut subgroup_map = vec![0; n];
        let mut char_maps = vec![Vec::new(); n];
        let mut is_group_iso = vec![true; n];
        for (c, &d) in self.subgroup_map.iter().enumerate() {
            subgroup_map[d] = c;
            let mut inv = vec![0; self.char_maps[c].len()];
            for (i, &j) in self.char_maps[c].iter().enumerate() {
                inv[j] = i;
            }
            char_maps[d] = inv;
            is_group_iso[d] = self.is_group_iso.get(c).copied().unwrap_or(true);
        }
        SpeciesWitness { subgroup_map, char_maps, is_group_iso }
    }
}

/// `(class, character index)` on class representatives.
pub type PairLabel = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `basis_bijection[i]` is the `H`-basis index of the image of `[i]`.
    Valid { basis_bijection: Vec<usize> },
    /// `γ^G(lower, upper) ≠ γ^H(θ lower, θ upper)`.
    Counterexample { lower: PairLabel, upper: PairLabel, gamma_g: u64, gamma_h: u64 },
    /// γ matched but the basis map is not a bijection or does not carry
    /// `[i]·[j]` to `[θi]·[θj]`.
    StructureMismatch { i: usize, j: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

fn check_permutation(map: &[usize], n: usize, what: &str) -> Result<(), SpeciesError> {
    if map.len() != n {
        return Err(SpeciesError::NotABijection(format!("{what} has length {}, expected {n}", map.len())));
    }
    let mut hit = vec![false; n];
    for &j in map {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            return Err(SpeciesError::NotABijection(format!("{what} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

fn check_shape(g: &BurnsideRing, h: &BurnsideRing, w: &SpeciesWitness) -> Result<(), SpeciesError> {
    if g.fiber() != h.fiber() {
        return Err(SpeciesError::FiberMismatch);
    }
    let n = g.classes().num_classes();
    if h.classes().num_classes() != n {
        return Err(SpeciesError::NotABijection(format!("{n} subgroup classes vs {}", h.classes().num_classes())));
    }
    check_permutation(&w.subgroup_map, n, "subgroup map")?;
    if w.char_maps.len() != n {
        return Err(SpeciesError::NotABijection(format!("{} character maps for {n} classes", w.char_maps.len())));
    }
    if !w.is_group_iso.is_empty() && w.is_group_iso.len() != n {
        return Err(SpeciesError::NotABijection(format!("{} group-iso flags for {n} classes", w.is_group_iso.len())));
    }
    for (c, &d) in w.subgroup_map.iter().enumerate() {
        let (hg, hh) = (g.hom(c), h.hom(d));
        if hg.len() != hh.len() {
            return Err(SpeciesError::NotABijection(format!(
                "class {c} has {} characters, its image {d} has {}",
                hg.len(),
                hh.len()
            )));
        }
        check_permutation(&w.char_maps[c], hg.len(), &format!("character map of class {c}"))?;
        let flagged = w.is_group_iso.get(c).copied().unwrap_or(true);
        let m = &w.char_maps[c];
        if !flagged || !(0..hg.len()).all(|i| (0..hg.len()).all(|j| m[hg.mul(i, j)] == hh.mul(m[i], m[j]))) {
            return Err(SpeciesError::NotAGroupIso { class: c });
        }
    }
    Ok(())
}

/// Checks a witness: γ on every pair of `(class, character)` pairs, then the
/// induced basis map against every structure constant.
pub fn verify_species(g: &BurnsideRing, h: &BurnsideRing, w: &SpeciesWitness) -> Result<Verdict, SpeciesError> {
    check_shape(g, h, w)?;
    let theta = |(c, i): PairLabel| (w.subgroup_map[c], w.char_maps[c][i]);
    let (gg, gh) = (g.pair_gamma_matrix(), h.pair_gamma_matrix());
    let n = g.rep_pair_count();
    let bad = par::find_map_first(n, |r| {
        let lower = g.pair_label(r);
        let (tc, ti) = theta(lower);
        let tr = h.pair_index(tc, ti);
        (0..n).find_map(|s| {
            let upper = g.pair_label(s);
            let (uc, ui) = theta(upper);
            let (a, b) = (gg[r][s], gh[tr][h.pair_index(uc, ui)]);
            (a != b).then_some(Verdict::Counterexample { lower, upper, gamma_g: a, gamma_h: b })
        })
    });
    if let Some(v) = bad {
        return Ok(v);
    }

    let bij: Vec<usize> = (0..g.basis_len())
        .map(|i| {
            let (c, k) = theta(g.basis_label(i));
            h.orbit_index(c, k)
        })
        .collect();
    if check_permutation(&bij, h.basis_len(), "basis map").is_err() {
        return Ok(Verdict::StructureMismatch { i: 0, j: 0 });
    }
    let (sg, sh) = (g.structure_constants(), h.structure_constants());
    let nb = g.basis_len();
    let mismatch = par::find_map_first(nb, |i| {
        (0..nb).find_map(|j| {
            let mut moved: Vec<(usize, u64)> = sg[i][j].iter().map(|&(k, c)| (bij[k], c)).collect();
            moved.sort_unstable();
            (moved != sh[bij[i]][bij[j]]).then_some(Verdict::StructureMismatch { i, j })
        })
    });
    Ok(mismatch.unwrap_or(Verdict::Valid { basis_bijection: bij }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        witness: SpeciesWitness,
        nodes: u64,
    },
    /// No witness with group-isomorphism character maps; see
    /// [`SEARCH_SCOPE_NOTE`].
    Exhausted {
        nodes: u64,
    },
}

/// Per-class invariant that any `θ` must preserve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ClassInvariant {
    order: usize,
    homs: usize,
    class_size: usize,
    row: Vec<u64>,
    col: Vec<u64>,
}

fn invariants(ring: &BurnsideRing) -> Vec<ClassInvariant> {
    let t = ring.classes();
    let marks = t.marks();
    (0..t.num_classes())
        .map(|c| {
            let mut row = marks[c].clone();
            let mut col: Vec<u64> = marks.iter().map(|r| r[c]).collect();
            row.sort_unstable();
            col.sort_unstable();
            ClassInvariant { order: t.rep(c).order(), homs: ring.hom(c).len(), class_size: t.class_size(c), row, col }
        })
        .collect()
}

struct Search<'a> {
    g: &'a BurnsideRing,
    h: &'a BurnsideRing,
    budget: u64,
    nodes: u64,
    inv_g: Vec<ClassInvariant>,
    inv_h: Vec<ClassInvariant>,
    isos: HashMap<(usize, usize), Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), SpeciesError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SpeciesError::SearchBudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn classes(&mut self, theta: &mut Vec<usize>, used: &mut [bool]) -> Result<Option<SpeciesWitness>, SpeciesError> {
        let n = self.inv_g.len();
        let c = theta.len();
        if c == n {
            let mut maps = Vec::with_capacity(n);
            return self.characters(theta, &mut maps);
        }
        let (mg, mh) = (self.g.classes().marks(), self.h.classes().marks());
        for d in 0..n {
            if used[d] || self.inv_g[c] != self.inv_h[d] {
                continue;
            }
            self.tick()?;
            let consistent = mg[c][c] == mh[d][d]
                && theta.iter().enumerate().all(|(c2, &d2)| mg[c][c2] == mh[d][d2] && mg[c2][c] == mh[d2][d]);
            if !consistent {
                continue;
            }
            theta.push(d);
            used[d] = true;
            let found = self.classes(theta, used)?;
            theta.pop();
            used[d] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn isos_for(&mut self, c: usize, d: usize) -> Vec<Vec<usize>> {
        let (g, h) = (self.g, self.h);
        self.isos
            .entry((c, d))
            .or_insert_with(|| {
                let mut all = all_isomorphisms(&g.hom(c).as_group(), &h.hom(d).as_group());
                all.sort();
                all
            })
            .clone()
    }

    fn characters(
        &mut self,
        theta: &[usize],
        maps: &mut Vec<Vec<usize>>,
    ) -> Result<Option<SpeciesWitness>, SpeciesError> {
        let c = maps.len();
        if c == theta.len() {
            return Ok(Some(SpeciesWitness {
                subgroup_map: theta.to_vec(),
                char_maps: maps.clone(),
                is_group_iso: vec![true; theta.len()],
            }));
        }
        let d = theta[c];
        for m in self.isos_for(c, d) {
            self.tick()?;
            maps.push(m);
            if self.gamma_consistent(theta, maps) {
                if let Some(w) = self.characters(theta, maps)? {
                    return Ok(Some(w));
                }
            }
            maps.pop();
        }
        Ok(None)
    }

    /// γ agrees between the newest class and every class with a character map.
    fn gamma_consistent(&self, theta: &[usize], maps: &[Vec<usize>]) -> bool {
        let (g, h) = (self.g, self.h);
        let (gg, gh) = (g.pair_gamma_matrix(), h.pair_gamma_matrix());
        let c = maps.len() - 1;
        (0..=c).all(|c2| {
            (0..maps[c].len()).all(|i| {
                (0..maps[c2].len()).all(|j| {
                    let (a, b) = (g.pair_index(c, i), g.pair_index(c2, j));
                    let (ta, tb) = (h.pair_index(theta[c], maps[c][i]), h.pair_index(theta[c2], maps[c2][j]));
                    gg[a][b] == gh[ta][tb] && gg[b][a] == gh[tb][ta]
                })
            })
        })
    }
}

/// Depth-first search for a witness in canonical order: classes of `G` in
/// order, candidate `H`-classes ascending, character isomorphisms in
/// lexicographic order. Every candidate assignment counts as one node.
pub fn search_species(g: &BurnsideRing, h: &BurnsideRing, budget: u64) -> Result<SearchOutcome, SpeciesError> {
    if g.fiber() != h.fiber() {
        return Err(SpeciesError::FiberMismatch);
    }
    let (inv_g, inv_h) = (invariants(g), invariants(h));
    let mut sorted_g = inv_g.clone();
    let mut sorted_h = inv_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return Ok(SearchOutcome::Exhausted { nodes: 0 });
    }
    let n = inv_g.len();
    let mut search = Search { g, h, budget, nodes: 0, inv_g, inv_h, isos: HashMap::new() };
    let found = search.classes(&mut Vec::with_capacity(n), &mut vec![false; n])?;
    Ok(match found {
        Some(witness) => SearchOutcome::Found { witness, nodes: search.nodes },
        None => SearchOutcome::Exhausted { nodes: search.nodes },
    })
}

/// The explicit witness between two groups of the family: named classes map to
/// named classes, characters of `p`-subgroups are trivial, and on the other
/// classes a character is sent to the one with the same value at `z`.
pub fn thevenaz_witness(
    tg: &ThevenazGroup,
    ring_g: &BurnsideRing,
    th: &ThevenazGroup,
    ring_h: &BurnsideRing,
) -> Result<SpeciesWitness, SpeciesError> {
    let (sg, sh) = (tg.spec(), th.spec());
    if (sg.p, sg.q) != (sh.p, sh.q) {
        return Err(ThevenazError::ParameterMismatch(sg.p, sg.q, sh.p, sh.q).into());
    }
    if ring_g.fiber() != ring_h.fiber() {
        return Err(SpeciesError::FiberMismatch);
    }
    if !ring_g.fiber().has_trivial_torsion(sg.p) {
        return Err(ThevenazError::FiberHasPTorsion { p: sg.p }.into());
    }
    let map_g = tg.canonical_class_map(ring_g.classes())?;
    let map_h = th.canonical_class_map(ring_h.classes())?;
    let names = tg.canonical_names();
    if names != th.canonical_names() {
        return Err(ThevenazError::NotATransversal("the two groups name different class lists".into()).into());
    }
    let n = map_g.len();
    let mut subgroup_map = vec![0; n];
    let mut char_maps = vec![Vec::new(); n];
    for (t, name) in names.iter().enumerate() {
        let (c, d) = (map_g[t], map_h[t]);
        subgroup_map[c] = d;
        let (hg, hh) = (ring_g.hom(c), ring_h.hom(d));
        if name.is_p_subgroup() {
            char_maps[c] = vec![0; hg.len()];
            continue;
        }
        // where z lands once the named subgroup is moved onto the class rep
        let z_in_rep = |tgrp: &ThevenazGroup, ring: &BurnsideRing| {
            let named = tgrp.named(*name);
            let (_, conj) = ring.classes().locate(&named).expect("named subgroup is a subgroup");
            ring.group().conj(conj, tgrp.z())
        };
        let (zg, zh) = (z_in_rep(tg, ring_g), z_in_rep(th, ring_h));
        let mut by_z: HashMap<u32, Vec<usize>> = HashMap::new();
        for j in 0..hh.len() {
            by_z.entry(hh.get(j).value(zh)).or_default().push(j);
        }
        char_maps[c] = (0..hg.len())
            .map(|i| match by_z.get(&hg.get(i).value(zg)).map(Vec::as_slice) {
                Some([j]) => Ok(*j),
                _ => Err(SpeciesError::NotABijection(format!("class {name}: value at z does not fix a character"))),
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(SpeciesWitness { subgroup_map, char_maps, is_group_iso: vec![true; n] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::AbelianFiber;
    use crate::group::FiniteGroup;

    fn ring(g: FiniteGroup, a: u64) -> BurnsideRing {
        BurnsideRing::new(g, AbelianFiber::cyclic(a))
    }

    #[test]
    fn identity_witness_is_valid() {
        let r = ring(FiniteGroup::symmetric(3).unwrap(), 6);
        let v = verify_species(&r, &r, &SpeciesWitness::identity(&r)).unwrap();
        assert_eq!(v, Verdict::Valid { basis_bijection: (0..r.basis_len()).collect() });
    }

    #[test]
    fn swapping_c2_and_c3_fails_gamma() {
        let r = ring(FiniteGroup::cyclic(6), 1);
        // classes of C6 by order: 1, C2, C3, C6
        let w = SpeciesWitness { subgroup_map: vec![0, 2, 1, 3], char_maps: vec![vec![0]; 4], is_group_iso: vec![] };
        assert!(matches!(verify_species(&r, &r, &w).unwrap(), Verdict::Counterexample { .. }));
    }

    #[test]
    fn c4_vs_klein_is_not_a_bijection() {
        let g = ring(FiniteGroup::cyclic(4), 2);
        let h = ring(FiniteGroup::abelian(&[2, 2]), 2);
        let w = SpeciesWitness::identity(&g);
        assert!(matches!(verify_species(&g, &h, &w), Err(SpeciesError::NotABijection(_))));
        assert!(matches!(search_species(&g, &h, 1000).unwrap(), SearchOutcome::Exhausted { .. }));
    }

    #[test]
    fn non_homomorphic_char_map_is_rejected() {
        let r = ring(FiniteGroup::cyclic(3), 3);
        let mut w = SpeciesWitness::identity(&r);
        // Hom(C3, C3) ≅ C3; swapping the identity with a generator is no isomorphism
        let top = r.classes().num_classes() - 1;
        w.char_maps[top] = vec![1, 0, 2];
        assert_eq!(verify_species(&r, &r, &w), Err(SpeciesError::NotAGroupIso { class: top }));
        w.char_maps[top] = vec![0, 2, 1];
        w.is_group_iso = vec![true, false];
        assert_eq!(verify_species(&r, &r, &w), Err(SpeciesError::NotAGroupIso { class: 1 }));
    }

    #[test]
    fn search_finds_self_witness_and_respects_budget() {
        let r = ring(FiniteGroup::dihedral(4).unwrap(), 2);
        let SearchOutcome::Found { witness, .. } = search_species(&r, &r, 100_000).unwrap() else {
            panic!("self search must succeed");
        };
        assert!(verify_species(&r, &r, &witness).unwrap().is_valid());
        assert_eq!(search_species(&r, &r, 1), Err(SpeciesError::SearchBudgetExceeded { budget: 1 }));
    }

    #[test]
    fn different_class_counts_exhaust_immediately() {
        let g = ring(FiniteGroup::symmetric(3).unwrap(), 6);
        let h = ring(FiniteGroup::cyclic(6), 6);
        assert_eq!(search_species(&g, &h, 10).unwrap(), SearchOutcome::Exhausted { nodes: 0 });
    }

    #[test]
    fn inverse_witness_round_trips() {
        let r = ring(FiniteGroup::cyclic(6), 6);
        let SearchOutcome::Found { witness, .. } = search_species(&r, &r, 100_000).unwrap() else {
            panic!("self search must succeed");
        };
        assert_eq!(witness.inverse().inverse(), witness);
        let json = serde_json::to_string(&witness).unwrap();
        assert_eq!(serde_json::from_str::<SpeciesWitness>(&json).unwrap(), witness);
    }
}
