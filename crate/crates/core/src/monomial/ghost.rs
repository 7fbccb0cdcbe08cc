use serde::{Deserialize, Serialize};

use super::{BurnsideElement, BurnsideError, BurnsideRing};

/// Element of the reduced ghost ring `∏_{K ∈ [S_G]} (ℤHom(K,A))^{N_G(K)}`.
///
/// `components[c][i]` is the coefficient of the `i`-th character of the
/// `c`-th subgroup class representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostElement {
    pub components: Vec<Vec<i64>>,
}

impl GhostElement {
    pub fn checked_add(&self, other: &GhostElement) -> Result<GhostElement, BurnsideError> {
        if !self.same_shape(other) {
            return Err(BurnsideError::ComponentMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or(BurnsideError::Overflow)).collect())
            .collect::<Result<_, _>>()?;
        Ok(GhostElement { components })
    }

    fn same_shape(&self, other: &GhostElement) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.len() == b.len())
    }
}

impl BurnsideRing {
    fn ghost_shape_matches(&self, x: &GhostElement) -> bool {
        x.components.len() == self.homs.len() && x.components.iter().zip(&self.homs).all(|(c, h)| c.len() == h.len())
    }

    pub fn ghost_zero(&self) -> GhostElement {
        GhostElement { components: self.homs.iter().map(|h| vec![0; h.len()]).collect() }
    }

    /// Trivial character with coefficient 1 in every component.
    pub fn ghost_identity(&self) -> GhostElement {
        let mut e = self.ghost_zero();
        e.components.iter_mut().for_each(|c| c[0] = 1);
        e
    }

    /// `b̄_{(K,φ)}`: the `N_G(K)`-orbit sum of `φ` in the `K`-component.
    pub fn ghost_basis_element(&self, class: usize, character: usize) -> GhostElement {
        let mut e = self.ghost_zero();
        for i in self.char_orbit(class, character) {
            e.components[class][i] = 1;
        }
        e
    }

    /// Φ̄: the `K`-component of `Φ([L,ψ])` is `Σ_φ γ_{(K,φ),(L,ψ)} φ`,
    /// extended linearly.
    pub fn mark_morphism(&self, x: &BurnsideElement) -> Result<GhostElement, BurnsideError> {
        if x.coeffs.len() != self.basis_len() {
            return Err(BurnsideError::LengthMismatch { expected: self.basis_len(), got: x.coeffs.len() });
        }
        let full = self.pair_by_basis_gamma();
        let mut out = self.ghost_zero();
        for (c, comp) in out.components.iter_mut().enumerate() {
            for (phi, slot) in comp.iter_mut().enumerate() {
                let row = &full[self.pair_index(c, phi)];
                let mut acc: i64 = 0;
                for (j, &coef) in x.coeffs.iter().enumerate() {
                    if coef == 0 || row[j] == 0 {
                        continue;
                    }
                    let term = coef.checked_mul(row[j] as i64).ok_or(BurnsideError::Overflow)?;
                    acc = acc.checked_add(term).ok_or(BurnsideError::Overflow)?;
                }
                *slot = acc;
            }
        }
        Ok(out)
    }

    /// Componentwise group-ring product.
    pub fn ghost_multiply(&self, a: &GhostElement, b: &GhostElement) -> Result<GhostElement, BurnsideError> {
        if !self.ghost_shape_matches(a) || !self.ghost_shape_matches(b) {
            return Err(BurnsideError::ComponentMismatch);
        }
        let mut out = self.ghost_zero();
        for (c, hom) in self.homs.iter().enumerate() {
            let (x, y) = (&a.components[c], &b.components[c]);
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for (j, &yj) in y.iter().enumerate() {
                    if yj == 0 {
                        continue;
                    }
                    let k = hom.mul(i, j);
                    let term = xi.checked_mul(yj).ok_or(BurnsideError::Overflow)?;
                    let slot = &mut out.components[c][k];
                    *slot = slot.checked_add(term).ok_or(BurnsideError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Whether every component is constant on `N_G(K)`-orbits of characters.
    pub fn is_ghost_fixed(&self, x: &GhostElement) -> bool {
        self.ghost_shape_matches(x)
            && (0..self.homs.len()).all(|c| {
                (0..self.homs[c].len())
                    .all(|i| self.char_orbit(c, i).into_iter().all(|j| x.components[c][j] == x.components[c][i]))
            })
    }
}
