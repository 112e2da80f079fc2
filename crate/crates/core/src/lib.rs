//! Boundary strata of moduli of stable curves, their specialisation posets,
//! and finite category calculus for Charney–Lee and twisted arrow categories.

pub mod canon;
pub mod category;
pub mod charney_lee;
pub mod clutching;
pub mod enumerate;
pub mod formats;
pub mod graph;
pub mod homology;
pub mod instances;
pub mod perm;
pub mod poset;
pub mod twisted;

pub use canon::{automorphism_group, automorphisms, canonical_form, is_isomorphic, Automorphisms, CanonicalForm};
pub use graph::{DualGraph, EdgeSet};
pub use perm::{FiniteGroup, Perm, PermGroup};
