//! The A-fibered Burnside ring `B^A(G)`.
//!
//! `B^A(G)` is free abelian on the `G`-orbits of monomial pairs `(K, φ)`,
//! `K ≤ G`, `φ ∈ Hom(K, A)`, with `^g(K,φ) = (gKg⁻¹, ^gφ)`. The product of two
//! basis elements is
//!
//! ```text
//! [K,φ]·[L,ψ] = Σ_{KsL ∈ K\G/L} [K ∩ sLs⁻¹, φ|·(^sψ)|]
//! ```
//!
//! with identity `[G,1]`. The mark morphism sends `[L,ψ]` to the family
//! `(Σ_φ γ_{(K,φ),(L,ψ)} φ)_K` over subgroup class representatives.
//!
//! Basis order: subgroup classes in [`SubgroupClassTable`] order, then orbit
//! representatives by character index. The representative of an orbit is the
//! pair on the class representative subgroup whose value table is
//! lexicographically least.

mod gamma;
mod ghost;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fiber::{AbelianFiber, Character, HomGroup};
use crate::group::{FiniteGroup, Subgroup, SubgroupClassTable};
use crate::par;

pub use gamma::{gamma, is_subconjugate, GammaTable};
pub use ghost::GhostElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("ghost elements have different component shapes")]
    ComponentMismatch,
    #[error("expected a coefficient vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// `(K, φ)` with `φ: K → A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialPair {
    character: Character,
}

impl MonomialPair {
    pub fn new(character: Character) -> Self {
        MonomialPair { character }
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.character.domain()
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn conjugate(&self, g: &FiniteGroup, elem: usize) -> MonomialPair {
        MonomialPair { character: self.character.conjugate(g, elem) }
    }

    /// `(K,φ) ≤ (L,ψ)`: `K ≤ L` and `ψ|_K = φ`.
    pub fn is_subpair_of(&self, other: &MonomialPair) -> bool {
        self.subgroup().is_subgroup_of(other.subgroup())
            && self.subgroup().generators().all(|x| other.character.value(x) == self.character.value(x))
    }
}

/// Integer combination of basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnsideElement {
    pub coeffs: Vec<i64>,
}

impl BurnsideElement {
    pub fn zero(len: usize) -> Self {
        BurnsideElement { coeffs: vec![0; len] }
    }

    pub fn basis(len: usize, i: usize) -> Self {
        let mut e = Self::zero(len);
        e.coeffs[i] = 1;
        e
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, BurnsideError> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(BurnsideError::LengthMismatch { expected: self.coeffs.len(), got: other.coeffs.len() });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(BurnsideError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(BurnsideElement { coeffs })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, BurnsideError> {
        let coeffs =
            self.coeffs.iter().map(|a| a.checked_mul(k).ok_or(BurnsideError::Overflow)).collect::<Result<_, _>>()?;
        Ok(BurnsideElement { coeffs })
    }
}

/// Sparse basis product: `(basis index, coefficient)` sorted by index.
pub type SparseProduct = Vec<(usize, u64)>;

/// One basis element in JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairExport {
    pub class: usize,
    pub subgroup: Vec<usize>,
    /// Character values as residue tuples, aligned with `subgroup`.
    pub character: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstantsExport {
    /// `structure_constants[i][j]` lists `[k, c]` for `[i]·[j] = Σ c·[k]`.
    pub structure_constants: Vec<Vec<Vec<(usize, u64)>>>,
}

/// `B^A(G)` with its orbit basis and cached tables.
#[derive(Debug)]
pub struct BurnsideRing {
    group: FiniteGroup,
    fiber: AbelianFiber,
    classes: SubgroupClassTable,
    homs: Vec<HomGroup>,
    basis: Vec<MonomialPair>,
    basis_class: Vec<usize>,
    basis_char: Vec<usize>,
    stabilizers: Vec<Subgroup>,
    /// per class, character index → basis index
    orbit_of: Vec<Vec<usize>>,
    pair_offsets: Vec<usize>,
    full_gamma: OnceLock<Vec<Vec<u64>>>,
    structure: OnceLock<Vec<Vec<SparseProduct>>>,
}

impl BurnsideRing {
    pub fn new(group: FiniteGroup, fiber: AbelianFiber) -> Self {
        let classes = SubgroupClassTable::new(&group);
        Self::with_classes(group, fiber, classes)
    }

    pub fn with_classes(group: FiniteGroup, fiber: AbelianFiber, classes: SubgroupClassTable) -> Self {
        let homs: Vec<HomGroup> = par::map_slice(classes.reps(), |k| HomGroup::new(&group, k, &fiber));
        let mut basis = Vec::new();
        let mut basis_class = Vec::new();
        let mut basis_char = Vec::new();
        let mut stabilizers = Vec::new();
        let mut orbit_of = Vec::with_capacity(homs.len());
        for (c, hom) in homs.iter().enumerate() {
            let normalizer = classes.normalizer(c);
            let norm_gens: Vec<usize> = normalizer.generators().collect();
            let mut assigned = vec![usize::MAX; hom.len()];
            let mut reps: Vec<(usize, Vec<usize>)> = Vec::new();
            for start in 0..hom.len() {
                if assigned[start] != usize::MAX {
                    continue;
                }
                let orbit = orbit_under(&group, hom, &norm_gens, start);
                let rep = *orbit
                    .iter()
                    .min_by(|&&a, &&b| hom.get(a).values().cmp(hom.get(b).values()))
                    .expect("orbit is non-empty");
                for &i in &orbit {
                    assigned[i] = reps.len();
                }
                reps.push((rep, orbit));
            }
            reps.sort_by_key(|(rep, _)| *rep);
            let mut map = vec![0; hom.len()];
            for (rep, orbit) in reps {
                let idx = basis.len();
                for i in orbit {
                    map[i] = idx;
                }
                let phi = hom.get(rep);
                let stab: Vec<usize> = normalizer
                    .members()
                    .filter(|&n| {
                        let n_inv = group.inv(n);
                        classes.rep(c).generators().all(|x| phi.value(group.conj(n_inv, x)) == phi.value(x))
                    })
                    .collect();
                stabilizers.push(group.closure(&stab));
                basis.push(MonomialPair::new(phi.clone()));
                basis_class.push(c);
                basis_char.push(rep);
            }
            orbit_of.push(map);
        }
        let mut pair_offsets = Vec::with_capacity(homs.len() + 1);
        let mut acc = 0;
        for h in &homs {
            pair_offsets.push(acc);
            acc += h.len();
        }
        pair_offsets.push(acc);
        BurnsideRing {
            group,
            fiber,
            classes,
            homs,
            basis,
            basis_class,
            basis_char,
            stabilizers,
            orbit_of,
            pair_offsets,
            full_gamma: OnceLock::new(),
            structure: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fiber(&self) -> &AbelianFiber {
        &self.fiber
    }

    pub fn classes(&self) -> &SubgroupClassTable {
        &self.classes
    }

    /// `Hom(K, A)` for the `c`-th class representative `K`.
    pub fn hom(&self, class: usize) -> &HomGroup {
        &self.homs[class]
    }

    pub fn homs(&self) -> &[HomGroup] {
        &self.homs
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MonomialPair] {
        &self.basis
    }

    pub fn pair(&self, i: usize) -> &MonomialPair {
        &self.basis[i]
    }

    /// `(class, character index)` of the `i`-th basis representative.
    pub fn basis_label(&self, i: usize) -> (usize, usize) {
        (self.basis_class[i], self.basis_char[i])
    }

    /// `N_G(K, φ)` for the `i`-th representative.
    pub fn stabilizer(&self, i: usize) -> &Subgroup {
        &self.stabilizers[i]
    }

    /// Basis index of the orbit containing `(rep of class, character)`.
    pub fn orbit_index(&self, class: usize, character: usize) -> usize {
        self.orbit_of[class][character]
    }

    /// Characters of the class representative in the same `N_G(K)`-orbit.
    pub fn char_orbit(&self, class: usize, character: usize) -> Vec<usize> {
        let target = self.orbit_of[class][character];
        (0..self.homs[class].len()).filter(|&i| self.orbit_of[class][i] == target).collect()
    }

    /// `|M^A_G|`, the number of all monomial pairs.
    pub fn pair_count(&self) -> usize {
        (0..self.classes.num_classes()).map(|c| self.classes.class_size(c) * self.homs[c].len()).sum()
    }

    /// Number of `(class, character)` pairs on class representatives.
    pub fn rep_pair_count(&self) -> usize {
        *self.pair_offsets.last().unwrap()
    }

    /// Flat index of `(class, character)` among all pairs on representatives.
    pub fn pair_index(&self, class: usize, character: usize) -> usize {
        self.pair_offsets[class] + character
    }

    /// Inverse of [`Self::pair_index`].
    pub fn pair_label(&self, index: usize) -> (usize, usize) {
        let c = self.pair_offsets.partition_point(|&o| o <= index) - 1;
        (c, index - self.pair_offsets[c])
    }

    pub fn rep_pair(&self, class: usize, character: usize) -> MonomialPair {
        MonomialPair::new(self.homs[class].get(character).clone())
    }

    /// Basis index of the orbit of an arbitrary pair.
    pub fn canonical_index(&self, pair: &MonomialPair) -> usize {
        let (c, h) = self.classes.locate(pair.subgroup()).expect("subgroup of G");
        let moved = pair.character().conjugate(&self.group, h);
        let idx = self.homs[c].index_of(&moved).expect("conjugated character lies in Hom(K, A)");
        self.orbit_of[c][idx]
    }

    pub fn identity(&self) -> BurnsideElement {
        let top = self.classes.num_classes() - 1;
        BurnsideElement::basis(self.basis_len(), self.orbit_of[top][0])
    }

    pub fn basis_element(&self, i: usize) -> BurnsideElement {
        BurnsideElement::basis(self.basis_len(), i)
    }

    /// γ between two pairs on class representatives.
    pub fn gamma_rep(&self, k: (usize, usize), l: (usize, usize)) -> u64 {
        let lower = MonomialPair::new(self.homs[k.0].get(k.1).clone());
        let upper = MonomialPair::new(self.homs[l.0].get(l.1).clone());
        gamma::gamma_with_transversal(&self.group, &lower, &upper, self.classes.transversal(l.0))
    }

    /// γ over the basis representatives.
    pub fn gamma_table(&self) -> GammaTable {
        let labels: Vec<(usize, usize)> = (0..self.basis_len()).map(|i| self.basis_label(i)).collect();
        let full = self.pair_gamma_matrix();
        let gamma = labels
            .iter()
            .map(|&(c, i)| labels.iter().map(|&(d, j)| full[self.pair_index(c, i)][self.pair_index(d, j)]).collect())
            .collect();
        GammaTable { gamma }
    }

    /// γ for every `(class, character)` pair against every other; rows and
    /// columns indexed by [`Self::pair_index`].
    pub fn pair_gamma_matrix(&self) -> &[Vec<u64>] {
        self.full_gamma.get_or_init(|| {
            let n = self.rep_pair_count();
            par::map_range(n, |r| {
                let k = self.pair_label(r);
                (0..n).map(|s| self.gamma_rep(k, self.pair_label(s))).collect()
            })
        })
    }

    /// Rows: every pair on class representatives; columns: basis.
    pub(crate) fn pair_by_basis_gamma(&self) -> Vec<Vec<u64>> {
        let full = self.pair_gamma_matrix();
        let cols: Vec<usize> =
            (0..self.basis_len()).map(|j| self.pair_index(self.basis_class[j], self.basis_char[j])).collect();
        full.iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect()
    }

    /// `[i]·[j]` by the double coset formula.
    pub fn basis_product(&self, i: usize, j: usize) -> SparseProduct {
        let g = &self.group;
        let (lower, upper) = (&self.basis[i], &self.basis[j]);
        let (k, l) = (lower.subgroup(), upper.subgroup());
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for s in g.double_coset_reps(k, l) {
            let meet = g.intersection_with_conjugate(k, s, l);
            let s_inv = g.inv(s);
            let values = meet
                .members()
                .map(|x| self.fiber.add(lower.character().value(x), upper.character().value(g.conj(s_inv, x))))
                .collect();
            let pair = MonomialPair::new(Character::from_values_unchecked(meet, values));
            *acc.entry(self.canonical_index(&pair)).or_default() += 1;
        }
        acc.into_iter().collect()
    }

    /// All basis products, `[i][j]` sparse.
    pub fn structure_constants(&self) -> &[Vec<SparseProduct>] {
        self.structure.get_or_init(|| {
            let n = self.basis_len();
            par::map_range(n, |i| (0..n).map(|j| self.basis_product(i, j)).collect())
        })
    }

    pub fn multiply(&self, x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement, BurnsideError> {
        let n = self.basis_len();
        for v in [x, y] {
            if v.coeffs.len() != n {
                return Err(BurnsideError::LengthMismatch { expected: n, got: v.coeffs.len() });
            }
        }
        let table = self.structure_constants();
        let mut out = vec![0i64; n];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a.checked_mul(b).ok_or(BurnsideError::Overflow)?;
                for &(k, c) in &table[i][j] {
                    let c = i64::try_from(c).map_err(|_| BurnsideError::Overflow)?;
                    let term = ab.checked_mul(c).ok_or(BurnsideError::Overflow)?;
                    out[k] = out[k].checked_add(term).ok_or(BurnsideError::Overflow)?;
                }
            }
        }
        Ok(BurnsideElement { coeffs: out })
    }

    pub fn export_basis(&self) -> Vec<PairExport> {
        self.basis
            .iter()
            .zip(&self.basis_class)
            .map(|(p, &class)| PairExport {
                class,
                subgroup: p.subgroup().member_list(),
                character: p.character().values().iter().map(|&v| self.fiber.decode(v)).collect(),
            })
            .collect()
    }

    pub fn export_structure_constants(&self) -> StructureConstantsExport {
        StructureConstantsExport { structure_constants: self.structure_constants().to_vec() }
    }
}

/// Orbit of a character of `K` under conjugation by `⟨gens⟩ ≤ N_G(K)`.
fn orbit_under(g: &FiniteGroup, hom: &HomGroup, gens: &[usize], start: usize) -> Vec<usize> {
    let mut orbit = vec![start];
    let mut head = 0;
    while head < orbit.len() {
        let chi = hom.get(orbit[head]);
        head += 1;
        for &n in gens {
            let moved = chi.conjugate(g, n);
            let idx = hom.index_of(&moved).expect("normalizer preserves Hom(K, A)");
            if !orbit.contains(&idx) {
                orbit.push(idx);
            }
        }
    }
    orbit.sort_unstable();
    orbit
}
