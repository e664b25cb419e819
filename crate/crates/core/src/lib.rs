//! Finite semigroups given by Cayley tables, inclusion identities of the form
//! `xyx ∈ T`, semilattice decompositions, Rees matrix semigroups,
//! constructions of the semigroups in each identity class, and exhaustive
//! verification over all small semigroups.

pub mod builders;
pub mod enumverify;
pub mod identities;
pub mod rees;
pub mod semigroup;
pub mod structure;
mod union_find;

pub use identities::{
    is_member, member_of_class, parse_inclusion_class, predefined, InclusionClassExpr,
};
pub use semigroup::{canonical_form, are_isomorphic, Bijection, FiniteSemigroup, TableError};
pub use structure::{decompose, ComponentKind, SemilatticeDecomposition};
