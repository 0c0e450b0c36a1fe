//! Computation engine for finite Grothendieck sites.
//!
//! Finite categories are validated composition tables; sieves and sets of
//! morphisms are bitsets over morphism indices. On top of that the crate
//! enumerates topologies, decides density of subcategories, sheafifies
//! finite presheaves, and classifies sites and the objects of their sheaf
//! categories.

pub mod bits;
pub mod catalog;
pub mod category;
pub mod classify;
pub mod density;
pub mod io;
pub mod lattice;
pub mod objects;
pub mod sheaf;
pub mod sieve;
pub mod topology;

pub use bits::{MorphSet, ObjSet};
pub use category::{validate_category, FiniteCategory, RawCategory, Subcategory};
pub use lattice::{enumerate_topologies, TopologyLattice};
pub use sheaf::{NatTransformation, Presheaf};
pub use sieve::Sieve;
pub use topology::{GrothendieckTopology, TopologyError};
