//! Exact computations in A-fibered Burnside rings of finite groups.
//!
//! Groups are dense Cayley tables ([`FiniteGroup`]); the fiber `A` is a finite
//! abelian group given by cyclic orders ([`AbelianFiber`]). On top of that the
//! crate builds the orbit basis of `B^A(G)`, its multiplication, the
//! γ-coefficients and the mark morphism into the reduced ghost ring, and it
//! checks or searches species isomorphisms between two such rings.
//!
//! The [`thevenaz`] module constructs the groups `(C_p × C_p) ⋊ C_q` that give
//! non-isomorphic groups with isomorphic fibered Burnside rings.
//!
//! With the default `parallel` feature the data-parallel kernels (marks,
//! γ tables, structure constants, verification sweeps) run on rayon; without it
//! the same code runs sequentially.

pub mod fiber;
pub mod group;
pub mod monomial;
mod par;
pub mod reproduce;
pub mod species;
pub mod thevenaz;

pub use fiber::{AbelianFiber, Character, FiberError, HomGroup};
pub use group::{
    AssocCheck, CayleyTable, ClassTableExport, FiniteGroup, GroupError, Subgroup, SubgroupClassTable, Violation,
};
pub use monomial::{BurnsideElement, BurnsideError, BurnsideRing, GammaTable, GhostElement, MonomialPair};
pub use reproduce::{reproduce, ReproduceError, ReproduceParams, ReproduceReport};
pub use species::{SearchOutcome, SpeciesError, SpeciesWitness, Verdict};
pub use thevenaz::{ThevenazError, ThevenazGroup, ThevenazSpec};
