//! Vertex- and edge-group arithmetic: finite p-groups and finitely
//! generated free groups.

pub mod automaton;
pub mod finite;
pub mod free;

pub use automaton::{cyclic_subgroup_conjugator, malnormality, Malnormality, SubgroupAutomaton};
pub use finite::{subgroup_as_group, Elt, FiniteGroup, GroupHom, GroupRef, Subgroup};
pub use free::{
    exponent_vector_mod_p, is_cyclic_free_factor, BasisWitness, FreeGroupContext, FreeRef,
    NielsenMove, Word,
};
