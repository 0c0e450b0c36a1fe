//! Whole-site predicates and the conclusions they license about the sheaf topos.

mod comparison;
mod report;

use serde::{Deserialize, Serialize};

use crate::bits::MorphSet;
use crate::category::{has_right_ore, is_cartesian, FiniteCategory};
use crate::objects::{is_atom, is_indecomposable, rep_is_supercompact};
use crate::sheaf::{representable_sheaf, terminal, SheafError};
use crate::sieve::{generated, is_sieve_connected, single_generator, Sieve};
use crate::topology::{atomic_topology, GrothendieckTopology};

pub use comparison::{comparison_functors, Comparison, ComparisonError, Extension, RoundTrip};
pub use report::{
    classify_report, presheaf_type_test, CrossCheck, DerivedProperty, ObjectReport,
    PresheafTypeVerdict, SiteReport, Verdict,
};

/// Some covering sieve that is not connected, if any.
pub fn is_locally_connected_site(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
) -> Result<(), Sieve> {
    for c in 0..cat.n_objects() {
        if let Some(s) = j.covering_sieves(c).find(|s| !is_sieve_connected(cat, s)) {
            return Err(s);
        }
    }
    Ok(())
}

/// Right Ore condition holds and `j` is the atomic topology.
pub fn is_atomic_site(cat: &FiniteCategory, j: &GrothendieckTopology) -> bool {
    atomic_topology(cat).is_ok_and(|atomic| atomic == *j)
}

/// Objects whose only covering sieve is the maximal one.
pub fn j_irreducible_objects(cat: &FiniteCategory, j: &GrothendieckTopology) -> Vec<usize> {
    (0..cat.n_objects())
        .filter(|&c| j.covering(c) == [cat.arrows_into(c)])
        .collect()
}

/// Objects not covered by the arrows out of irreducible objects.
pub fn is_rigid(cat: &FiniteCategory, j: &GrothendieckTopology) -> Result<(), usize> {
    let irreducible = j_irreducible_objects(cat, j);
    for c in 0..cat.n_objects() {
        let from_irreducibles: MorphSet = cat
            .arrows_into(c)
            .iter()
            .filter(|&f| irreducible.contains(&cat.dom(f)))
            .collect();
        if !j.covers(c, generated(cat, from_irreducibles)) {
            return Err(c);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherentVerdict {
    pub coherent: bool,
    pub cartesian: bool,
    /// Every sieve on a finite category is finitely generated.
    pub finite_type_degenerate: bool,
}

pub fn is_coherent_site(cat: &FiniteCategory, j: &GrothendieckTopology) -> CoherentVerdict {
    let cartesian = is_cartesian(cat).cartesian;
    let finite_type =
        (0..cat.n_objects()).all(|c| j.covering(c).iter().all(|&s| generated(cat, s) == s));
    CoherentVerdict {
        coherent: cartesian && finite_type,
        cartesian,
        finite_type_degenerate: true,
    }
}

/// Both readings of "regular": covering sieves generated by a single arrow,
/// or covering sieves containing a single arrow that generates a covering sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularVerdict {
    pub cartesian: bool,
    pub single_generated: bool,
    pub contains_covering_generator: bool,
    pub readings_disagree: bool,
}

impl RegularVerdict {
    /// The strict reading.
    pub fn regular(&self) -> bool {
        self.cartesian && self.single_generated
    }
}

pub fn is_regular_site(cat: &FiniteCategory, j: &GrothendieckTopology) -> RegularVerdict {
    let cartesian = is_cartesian(cat).cartesian;
    let single_generated = (0..cat.n_objects()).all(|c| {
        j.covering_sieves(c)
            .all(|s| single_generator(cat, &s).is_some())
    });
    let contains_covering_generator =
        (0..cat.n_objects()).all(|c| rep_is_supercompact(cat, j, c).expect("object in range"));
    RegularVerdict {
        cartesian,
        single_generated,
        contains_covering_generator,
        readings_disagree: single_generated != contains_covering_generator,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatingPredicate {
    Indecomposable,
    Atom,
}

/// Does every `l(c)` satisfy the predicate? Returns the first object that fails.
pub fn separating_set_check(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    predicate: SeparatingPredicate,
) -> Result<Option<usize>, SheafError> {
    for c in 0..cat.n_objects() {
        let l = representable_sheaf(cat, j, c)?.sheaf;
        let ok = match predicate {
            SeparatingPredicate::Indecomposable => is_indecomposable(cat, j, &l)?,
            SeparatingPredicate::Atom => is_atom(cat, j, &l)?,
        };
        if !ok {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn terminal_is_indecomposable(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
) -> Result<bool, SheafError> {
    is_indecomposable(cat, j, &terminal(cat))
}

/// Whether the site satisfies the right Ore condition, as a plain flag.
pub fn right_ore(cat: &FiniteCategory) -> bool {
    has_right_ore(cat).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::topology::{generated_topology, maximal_topology, trivial_topology};

    fn j2(c: &FiniteCategory) -> GrothendieckTopology {
        let f = c.morphism_index("f").unwrap();
        generated_topology(c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap()
    }

    #[test]
    fn locally_connected() {
        for (name, c) in catalog::named() {
            assert!(
                is_locally_connected_site(&c, &trivial_topology(&c)).is_ok(),
                "{name}"
            );
            if c.n_objects() > 0 {
                let w = is_locally_connected_site(&c, &maximal_topology(&c)).unwrap_err();
                assert!(w.is_empty(), "{name}");
            }
        }
        let a = catalog::arrow();
        assert!(is_locally_connected_site(&a, &j2(&a)).is_ok());
    }

    #[test]
    fn atomic() {
        let z2 = catalog::z2();
        assert!(is_atomic_site(&z2, &trivial_topology(&z2)));
        // nonempty sieves on the arrow are exactly the ones generated from {f}
        let a = catalog::arrow();
        assert!(is_atomic_site(&a, &j2(&a)));
        assert!(!is_atomic_site(&a, &trivial_topology(&a)));
        let p = catalog::pair();
        assert!(!is_atomic_site(&p, &trivial_topology(&p)));
        assert!(!is_atomic_site(&p, &maximal_topology(&p)));
    }

    #[test]
    fn irreducibles_and_rigidity() {
        for (name, c) in catalog::named() {
            let j = trivial_topology(&c);
            assert_eq!(j_irreducible_objects(&c, &j).len(), c.n_objects(), "{name}");
            assert!(is_rigid(&c, &j).is_ok(), "{name}");
            let m = maximal_topology(&c);
            assert!(j_irreducible_objects(&c, &m).is_empty(), "{name}");
            assert!(is_rigid(&c, &m).is_ok(), "{name}");
        }
        let a = catalog::arrow();
        assert_eq!(j_irreducible_objects(&a, &j2(&a)), vec![0]);
        assert!(is_rigid(&a, &j2(&a)).is_ok());

        let v = catalog::v_poset();
        let (u, w) = (
            v.morphism_index("u").unwrap(),
            v.morphism_index("v").unwrap(),
        );
        let j =
            generated_topology(&v, &[vec![], vec![], vec![MorphSet::from_iter([u, w])]]).unwrap();
        assert_eq!(j_irreducible_objects(&v, &j), vec![0, 1]);
        assert!(is_rigid(&v, &j).is_ok());
    }

    #[test]
    fn idempotent_with_its_fixed_sieve_is_not_rigid() {
        let c = catalog::idem();
        let e = c.morphism_index("e").unwrap();
        let j = generated_topology(&c, &[vec![MorphSet::singleton(e)]]).unwrap();
        assert!(j_irreducible_objects(&c, &j).is_empty());
        assert_eq!(is_rigid(&c, &j), Err(0));
    }

    #[test]
    fn regular_sites() {
        let a = catalog::arrow();
        assert!(is_regular_site(&a, &trivial_topology(&a)).regular());
        let v = is_regular_site(&a, &j2(&a));
        assert!(v.regular() && !v.readings_disagree);
        let p = catalog::pair();
        assert!(!is_regular_site(&p, &trivial_topology(&p)).regular());
        assert!(is_coherent_site(&a, &j2(&a)).coherent);
    }

    #[test]
    fn separating_sets() {
        let z2 = catalog::z2();
        let j = trivial_topology(&z2);
        assert_eq!(
            separating_set_check(&z2, &j, SeparatingPredicate::Atom).unwrap(),
            None
        );
        let a = catalog::arrow();
        let ja = trivial_topology(&a);
        assert_eq!(
            separating_set_check(&a, &ja, SeparatingPredicate::Indecomposable).unwrap(),
            None
        );
        let d = catalog::discrete2();
        let jd = trivial_topology(&d);
        assert_eq!(
            separating_set_check(&d, &jd, SeparatingPredicate::Indecomposable).unwrap(),
            None
        );
        assert!(!terminal_is_indecomposable(&d, &jd).unwrap());
        assert!(terminal_is_indecomposable(&a, &ja).unwrap());
    }
}
