//! Restriction to a dense subcategory and its inverse, right Kan extension
//! followed by sheafification.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{FiniteCategory, Subcategory};
use crate::density::{is_dense, DensityFailure};
use crate::sheaf::{
    find_isomorphism, is_sheaf, nat_transformations, sheafify, NatTransformation, Presheaf,
    SheafError,
};
use crate::topology::{induced_topology, GrothendieckTopology, InducedSite, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComparisonError {
    #[error("subcategory is not dense ({} failing conditions)", .0.len())]
    NotDense(Vec<DensityFailure>),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
}

/// A dense subcategory with its induced site.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub sub: Subcategory,
    pub site: InducedSite,
}

/// The extension of a sheaf on the subcategory, before and after sheafifying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// Right Kan extension; at `c`, the natural families `Hom(i(-), c) → F`.
    pub kan: Presheaf,
    pub sheaf: Presheaf,
    /// Sheafification unit `kan → sheaf`.
    pub unit: NatTransformation,
    /// For each object of the base, the families in `kan`, as component tables.
    families: Vec<Vec<NatTransformation>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub unit_iso: bool,
    pub counit_iso: bool,
}

pub fn comparison_functors(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    sub: &Subcategory,
) -> Result<Comparison, ComparisonError> {
    let verdict = is_dense(cat, j, sub);
    if !verdict.dense {
        return Err(ComparisonError::NotDense(verdict.failures));
    }
    let site = induced_topology(cat, j, sub)?;
    Ok(Comparison { sub: *sub, site })
}

impl Comparison {
    pub fn subcategory(&self) -> &FiniteCategory {
        &self.site.view.category
    }

    pub fn topology(&self) -> &GrothendieckTopology {
        &self.site.topology
    }

    /// Precomposition with the inclusion.
    pub fn restrict(&self, f: &Presheaf) -> Presheaf {
        let view = &self.site.view;
        let sizes = view.objects.iter().map(|&c| f.size(c)).collect();
        let actions = view
            .morphisms
            .iter()
            .map(|&g| f.action(g).to_vec())
            .collect();
        Presheaf::new_unchecked(sizes, actions)
    }

    /// `Hom(i(-), c)` as a presheaf on the subcategory.
    fn hom_into(&self, cat: &FiniteCategory, c: usize) -> (Presheaf, Vec<Vec<usize>>) {
        let view = &self.site.view;
        let homs: Vec<Vec<usize>> = view
            .objects
            .iter()
            .map(|&d| cat.hom(d, c).iter().collect())
            .collect();
        let actions = view
            .morphisms
            .iter()
            .map(|&h| {
                let (a, b) = (cat.dom(h), cat.cod(h));
                let (la, lb) = (view.local_object(a).unwrap(), view.local_object(b).unwrap());
                homs[lb]
                    .iter()
                    .map(|&g| {
                        homs[la]
                            .binary_search(&cat.comp(g, h))
                            .expect("g∘h ∈ Hom(a, c)")
                    })
                    .collect()
            })
            .collect();
        (
            Presheaf::new_unchecked(homs.iter().map(Vec::len).collect(), actions),
            homs,
        )
    }

    /// Right Kan extension along the inclusion, then sheafification.
    pub fn extend(
        &self,
        cat: &FiniteCategory,
        j: &GrothendieckTopology,
        f: &Presheaf,
    ) -> Extension {
        let d = self.subcategory();
        let hom_into: Vec<(Presheaf, Vec<Vec<usize>>)> = (0..cat.n_objects())
            .map(|c| self.hom_into(cat, c))
            .collect();
        let families: Vec<Vec<NatTransformation>> = hom_into
            .iter()
            .map(|(h, _)| nat_transformations(d, h, f))
            .collect();
        let lookup: Vec<HashMap<&NatTransformation, usize>> = families
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let actions = (0..cat.n_morphisms())
            .map(|k| {
                let (a, b) = (cat.dom(k), cat.cod(k));
                let homs_a = &hom_into[a].1;
                let homs_b = &hom_into[b].1;
                families[b]
                    .iter()
                    .map(|x| {
                        // (x·k)_g = x_{k∘g}
                        let y = NatTransformation {
                            components: homs_a
                                .iter()
                                .enumerate()
                                .map(|(ld, gs)| {
                                    gs.iter()
                                        .map(|&g| {
                                            let kg = cat.comp(k, g);
                                            x.apply(
                                                ld,
                                                homs_b[ld]
                                                    .binary_search(&kg)
                                                    .expect("k∘g ∈ Hom(d, b)"),
                                            )
                                        })
                                        .collect()
                                })
                                .collect(),
                        };
                        lookup[a][&y]
                    })
                    .collect()
            })
            .collect();
        let kan = Presheaf::new_unchecked(families.iter().map(Vec::len).collect(), actions);
        let a = sheafify(cat, j, &kan);
        Extension {
            kan,
            sheaf: a.sheaf,
            unit: a.unit,
            families,
        }
    }

    /// `G → extend(restrict(G))`, sending `x ∈ G(c)` to the family `g ↦ G(g)(x)`.
    pub fn unit(
        &self,
        cat: &FiniteCategory,
        j: &GrothendieckTopology,
        g: &Presheaf,
    ) -> (Extension, NatTransformation) {
        let ext = self.extend(cat, j, &self.restrict(g));
        let into_kan = NatTransformation {
            components: (0..cat.n_objects())
                .map(|c| {
                    let homs = &self.hom_into(cat, c).1;
                    (0..g.size(c))
                        .map(|x| {
                            let family = NatTransformation {
                                components: homs
                                    .iter()
                                    .map(|gs| gs.iter().map(|&h| g.act(h, x)).collect())
                                    .collect(),
                            };
                            ext.families[c]
                                .binary_search(&family)
                                .expect("restrictions form a natural family")
                        })
                        .collect()
                })
                .collect(),
        };
        let unit = into_kan.then(&ext.unit);
        (ext, unit)
    }

    /// `restrict(extend(F)) → F`, evaluating a family at identities; defined
    /// when the extension was already a sheaf.
    pub fn counit(
        &self,
        cat: &FiniteCategory,
        j: &GrothendieckTopology,
        f: &Presheaf,
    ) -> Option<NatTransformation> {
        let ext = self.extend(cat, j, f);
        if !ext.unit.is_bijective(&ext.sheaf) {
            return None;
        }
        let back = ext.unit.inverse();
        let view = &self.site.view;
        Some(NatTransformation {
            components: view
                .objects
                .iter()
                .enumerate()
                .map(|(ld, &c)| {
                    let homs = &self.hom_into(cat, c).1;
                    let id_slot = homs[ld]
                        .binary_search(&cat.identity(c))
                        .expect("identity is an arrow");
                    back.components[c]
                        .iter()
                        .map(|&k| ext.families[c][k].apply(ld, id_slot))
                        .collect()
                })
                .collect(),
        })
    }

    /// Checks that the unit at `g` (a sheaf on the base) and the counit at
    /// `f` (a sheaf on the subcategory) are isomorphisms.
    pub fn round_trip(
        &self,
        cat: &FiniteCategory,
        j: &GrothendieckTopology,
        g: &Presheaf,
        f: &Presheaf,
    ) -> Result<RoundTrip, ComparisonError> {
        is_sheaf(cat, j, g).map_err(SheafError::NotASheaf)?;
        is_sheaf(self.subcategory(), self.topology(), f).map_err(SheafError::NotASheaf)?;
        let (ext, unit) = self.unit(cat, j, g);
        let unit_iso = unit.is_bijective(&ext.sheaf);
        let counit_iso = self.counit(cat, j, f).is_some_and(|t| t.is_bijective(f));
        Ok(RoundTrip {
            unit_iso,
            counit_iso,
        })
    }

    /// Exhaustive search for any natural isomorphism `restrict(extend(F)) ≅ F`.
    pub fn restrict_extend_isomorphic(
        &self,
        cat: &FiniteCategory,
        j: &GrothendieckTopology,
        f: &Presheaf,
    ) -> bool {
        let back = self.restrict(&self.extend(cat, j, f).sheaf);
        find_isomorphism(self.subcategory(), &back, f).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::MorphSet;
    use crate::catalog;
    use crate::sheaf::yoneda;
    use crate::topology::{generated_topology, trivial_topology};

    #[test]
    fn arrow_j2_sheaves_are_sets() {
        let c = catalog::arrow();
        let f = c.morphism_index("f").unwrap();
        let j2 = generated_topology(&c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap();
        let a = Subcategory::from_names(&c, &["a"], &[]).unwrap();
        let cmp = comparison_functors(&c, &j2, &a).unwrap();
        assert_eq!(cmp.subcategory().n_objects(), 1);
        for n in 0..=3 {
            let set = Presheaf::constant(cmp.subcategory(), n);
            let ext = cmp.extend(&c, &j2, &set);
            assert_eq!(ext.sheaf.sizes(), &[n, n]);
            assert_eq!(ext.kan, ext.sheaf);
            let g = Presheaf::constant(&c, n);
            assert_eq!(cmp.restrict(&g).sizes(), &[n]);
            assert_eq!(
                cmp.round_trip(&c, &j2, &g, &set).unwrap(),
                RoundTrip {
                    unit_iso: true,
                    counit_iso: true
                }
            );
            assert!(cmp.restrict_extend_isomorphic(&c, &j2, &set));
        }
        assert!(matches!(
            comparison_functors(&c, &trivial_topology(&c), &a),
            Err(ComparisonError::NotDense(_))
        ));
    }

    #[test]
    fn whole_category_round_trips() {
        for (name, c) in catalog::named() {
            let j = trivial_topology(&c);
            let cmp = comparison_functors(&c, &j, &Subcategory::whole(&c)).unwrap();
            for x in 0..c.n_objects() {
                let y = yoneda(&c, x).unwrap();
                let local = cmp.restrict(&y);
                let rt = cmp.round_trip(&c, &j, &y, &local).unwrap();
                assert!(rt.unit_iso && rt.counit_iso, "{name}");
            }
        }
    }

    #[test]
    fn v_poset_over_its_feet() {
        let v = catalog::v_poset();
        let (u, w) = (
            v.morphism_index("u").unwrap(),
            v.morphism_index("v").unwrap(),
        );
        let j =
            generated_topology(&v, &[vec![], vec![], vec![MorphSet::from_iter([u, w])]]).unwrap();
        let feet = Subcategory::from_names(&v, &["x", "y"], &[]).unwrap();
        let cmp = comparison_functors(&v, &j, &feet).unwrap();
        assert_eq!(cmp.topology(), &trivial_topology(cmp.subcategory()));
        let f = Presheaf::new(
            cmp.subcategory(),
            vec![2, 3],
            vec![vec![0, 1], vec![0, 1, 2]],
        )
        .unwrap();
        let ext = cmp.extend(&v, &j, &f);
        assert_eq!(ext.sheaf.sizes(), &[2, 3, 6]);
        assert!(cmp.counit(&v, &j, &f).unwrap().is_bijective(&f));
    }
}
