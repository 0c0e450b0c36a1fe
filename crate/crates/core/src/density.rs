//! Dense subcategories and the topologies for which a subcategory is dense.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::MorphSet;
use crate::category::{FiniteCategory, Subcategory};
use crate::lattice::TopologyLattice;
use crate::sieve::generated;
use crate::topology::{GrothendieckTopology, TopologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum DensityFailure {
    /// No covering sieve on the object is generated by arrows out of the subcategory.
    #[serde(rename = "i")]
    Covering { object: usize },
    /// No covering sieve on the domain is generated by arrows whose composite
    /// with the morphism lies in the subcategory.
    #[serde(rename = "ii")]
    Factorization { morphism: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub dense: bool,
    pub failures: Vec<DensityFailure>,
}

/// Does some covering sieve on `c` arise as the sieve generated by its members
/// lying in `allowed`?
fn some_cover_generated_within(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
    allowed: MorphSet,
) -> bool {
    j.covering(c)
        .iter()
        .any(|&r| generated(cat, r.intersection(allowed)) == r)
}

pub fn is_dense(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    sub: &Subcategory,
) -> DensityVerdict {
    let mut failures = Vec::new();
    let from_sub: MorphSet = (0..cat.n_morphisms())
        .filter(|&f| sub.contains_object(cat.dom(f)))
        .collect();
    for c in 0..cat.n_objects() {
        if !some_cover_generated_within(cat, j, c, from_sub.intersection(cat.arrows_into(c))) {
            failures.push(DensityFailure::Covering { object: c });
        }
    }
    for f in 0..cat.n_morphisms() {
        if !sub.contains_object(cat.cod(f)) {
            continue;
        }
        let c = cat.dom(f);
        let allowed: MorphSet = cat
            .arrows_into(c)
            .iter()
            .filter(|&g| sub.contains_morphism(cat.comp(f, g)))
            .collect();
        if !some_cover_generated_within(cat, j, c, allowed) {
            failures.push(DensityFailure::Factorization { morphism: f });
        }
    }
    DensityVerdict {
        dense: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("no topology makes the subcategory dense")]
    EmptyFamily,
}

/// The topologies (as lattice indices) making a subcategory dense.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseFamily {
    pub members: Vec<usize>,
    /// Meet of all members.
    pub minimum: usize,
    pub up_closed: bool,
    pub meet_closed: bool,
}

pub fn topologies_with_dense(
    cat: &FiniteCategory,
    lattice: &TopologyLattice,
    sub: &Subcategory,
) -> Result<DenseFamily, DensityError> {
    let members: Vec<usize> = (0..lattice.len())
        .filter(|&i| is_dense(cat, lattice.get(i), sub).dense)
        .collect();
    let (&first, _) = members.split_first().ok_or(DensityError::EmptyFamily)?;
    let minimum = members.iter().fold(first, |acc, &i| lattice.meet(acc, i));
    let member = |i: usize| members.binary_search(&i).is_ok();
    let up_closed = members
        .iter()
        .all(|&i| (0..lattice.len()).all(|k| !lattice.le(i, k) || member(k)));
    let meet_closed = members
        .iter()
        .all(|&a| members.iter().all(|&b| member(lattice.meet(a, b))));
    Ok(DenseFamily {
        members,
        minimum,
        up_closed,
        meet_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::{enumerate_topologies, DEFAULT_MAX_ASSIGNMENTS};
    use crate::topology::{generated_topology, maximal_topology, trivial_topology};

    fn j2(c: &FiniteCategory) -> GrothendieckTopology {
        let f = c.morphism_index("f").unwrap();
        generated_topology(c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap()
    }

    #[test]
    fn arrow_j2_makes_a_dense() {
        let c = catalog::arrow();
        let a = Subcategory::from_names(&c, &["a"], &[]).unwrap();
        assert!(is_dense(&c, &j2(&c), &a).dense);
        let v = is_dense(&c, &trivial_topology(&c), &a);
        assert!(!v.dense);
        assert_eq!(v.failures[0], DensityFailure::Covering { object: 1 });
    }

    #[test]
    fn whole_category_always_dense() {
        for (name, c) in catalog::named() {
            let l = enumerate_topologies(&c, DEFAULT_MAX_ASSIGNMENTS).unwrap();
            for j in l.elements() {
                assert!(is_dense(&c, j, &Subcategory::whole(&c)).dense, "{name}");
            }
        }
    }

    #[test]
    fn dense_families() {
        let c = catalog::arrow();
        let l = enumerate_topologies(&c, DEFAULT_MAX_ASSIGNMENTS).unwrap();
        let a = Subcategory::from_names(&c, &["a"], &[]).unwrap();
        let fam = topologies_with_dense(&c, &l, &a).unwrap();
        let j2 = l.index_of(&j2(&c)).unwrap();
        assert_eq!(fam.members, vec![j2, l.top()]);
        assert_eq!(fam.minimum, j2);
        assert!(fam.up_closed && fam.meet_closed);

        let whole = topologies_with_dense(&c, &l, &Subcategory::whole(&c)).unwrap();
        assert_eq!(whole.members.len(), l.len());

        let t = catalog::term();
        let lt = enumerate_topologies(&t, DEFAULT_MAX_ASSIGNMENTS).unwrap();
        let fam = topologies_with_dense(&t, &lt, &Subcategory::empty(&t)).unwrap();
        assert_eq!(fam.members, vec![lt.top()]);
        assert_eq!(lt.get(fam.minimum), &maximal_topology(&t));
    }
}
