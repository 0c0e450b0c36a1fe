//! Finite-set-valued presheaves, the sheaf condition and sheafification.

mod hom;
mod limits;
mod matching;
mod presheaf;
mod sheafify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::FiniteCategory;
use crate::lattice::TopologyLattice;
use crate::topology::{GrothendieckTopology, TopologyError};

pub use hom::{classify_map, find_isomorphism, hom_count, nat_transformations, MapKind};
pub(crate) use limits::subpresheaf;
pub use limits::{
    coproduct, equalizer, initial, kernel_pair, product, pullback, terminal, Cocone, Cone,
    KernelPair,
};
pub use matching::{amalgamations, is_sheaf, matching_families, SheafViolation};
pub use presheaf::{yoneda, NatTransformation, Presheaf};
pub use sheafify::{plus, sheafify, Sheafification};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("malformed presheaf: {0}")]
    Shape(String),
    #[error("not a functor: {0}")]
    Functoriality(String),
    #[error("naturality fails along `{0}`")]
    Naturality(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("not a sheaf: matching family on object #{} has {} amalgamations", .0.object, .0.amalgamations)]
    NotASheaf(SheafViolation),
    #[error("operation requires the trivial topology")]
    WrongTopology,
    #[error("{0} elements exceed the 64-element bound for subobject enumeration")]
    TooLarge(usize),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// `l(c)`: the sheafified representable.
pub fn representable_sheaf(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<Sheafification, SheafError> {
    Ok(sheafify(cat, j, &yoneda(cat, c)?))
}

/// A representable presheaf that is not a sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcanonicalWitness {
    pub representable: usize,
    pub violation: SheafViolation,
}

pub fn is_subcanonical(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
) -> Result<(), SubcanonicalWitness> {
    for c in 0..cat.n_objects() {
        let y = yoneda(cat, c).expect("object in range");
        if let Err(violation) = is_sheaf(cat, j, &y) {
            return Err(SubcanonicalWitness {
                representable: c,
                violation,
            });
        }
    }
    Ok(())
}

/// Index of the largest subcanonical topology in the lattice.
///
/// Computed as the join of every subcanonical element and then checked to be
/// subcanonical itself.
pub fn canonical_topology(cat: &FiniteCategory, lattice: &TopologyLattice) -> usize {
    let join = (0..lattice.len())
        .filter(|&i| is_subcanonical(cat, lattice.get(i)).is_ok())
        .fold(lattice.bottom(), |acc, i| lattice.join(acc, i));
    debug_assert!(is_subcanonical(cat, lattice.get(join)).is_ok());
    join
}
